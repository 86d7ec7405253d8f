#include "mves/cli.hpp"
#include "mves/csv.hpp"
#include "mves/random.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace mves;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mves");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mves_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("figure5 writes one row per trial plus summaries", "[cli]") {
  const fs::path dir = scratch("figure5");
  const std::vector<std::string> base = {"figure5", "--n", "3", "--grid", "0.6,0.75", "--trials", "3",
                                         "--pixels", "200", "--bands", "10"};
  auto args = base;
  args.insert(args.end(), {"--out", (dir / "a.csv").string(), "--svg", (dir / "a.svg").string()});
  const Outcome first = run_cli(args);
  REQUIRE(first.code == 0);
  const auto rows = lines_of(slurp(dir / "a.csv"));
  REQUIRE(rows.size() == 1 + 6 + 2);
  CHECK(rows[0].rfind("kind,n_endmembers,r,trial", 0) == 0);
  int trials = 0, summaries = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    trials += rows[i].rfind("data,", 0) == 0 ? 1 : 0;
    summaries += rows[i].rfind("summary,", 0) == 0 ? 1 : 0;
  }
  CHECK(trials == 6);
  CHECK(summaries == 2);
  CHECK(slurp(dir / "a.svg").find("<svg") != std::string::npos);

  args = base;
  args.insert(args.end(), {"--out", (dir / "b.csv").string()});
  REQUIRE(run_cli(args).code == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

  args = base;
  args.insert(args.end(), {"--out", (dir / "c.csv").string(), "--threads", "2"});
  REQUIRE(run_cli(args).code == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "c.csv"));
}

TEST_CASE("figure5 rejects bad configuration", "[cli]") {
  const fs::path dir = scratch("figure5_bad");
  std::ofstream(dir / "bad.json") << "{\"n_endmembers\": 3, \"unknown_key\": 1}";
  CHECK(run_cli({"figure5", "--config", (dir / "bad.json").string()}).code == 2);
  std::ofstream(dir / "broken.json") << "{not json";
  CHECK(run_cli({"figure5", "--config", (dir / "broken.json").string()}).code == 2);
  CHECK(run_cli({"figure5", "--grid", "0.5", "--n", "4", "--out", (dir / "x.csv").string()}).code == 2);
  CHECK(run_cli({"no_such_command"}).code == 2);
}

TEST_CASE("unmix recovers endmembers from pure pixels", "[cli]") {
  const fs::path dir = scratch("unmix");
  Rng rng(101);
  const int n = 3;
  Matrix a(12, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.uniform(0.1, 1.0);
  Matrix s(n, 200 + n);
  for (Eigen::Index k = 0; k < 200; ++k) s.col(k) = rng.dirichlet(Vector::Ones(n));
  s.rightCols(n) = Matrix::Identity(n, n);
  csv::write_matrix(dir / "pixels.csv", a * s);
  csv::write_matrix(dir / "truth.csv", a);
  const Outcome o = run_cli({"unmix", "--input", (dir / "pixels.csv").string(), "--n", "3",
                             "--truth", (dir / "truth.csv").string(), "--out",
                             (dir / "est.csv").string()});
  REQUIRE(o.code == 0);
  const auto report = nlohmann::json::parse(o.out);
  CHECK(report["phi_degrees"].get<double>() < 1e-4);
  CHECK(report["all_points_enclosed"].get<bool>());
  CHECK(csv::read_matrix(dir / "est.csv").cols() == n);

  std::ofstream(dir / "ragged.csv") << "1,2,3\n4,5\n";
  CHECK(run_cli({"unmix", "--input", (dir / "ragged.csv").string(), "--n", "3"}).code == 2);
  CHECK(run_cli({"unmix", "--input", (dir / "pixels.csv").string(), "--n", "20", "--out",
                 (dir / "x.csv").string()}).code == 3);
  CHECK(run_cli({"unmix", "--input", (dir / "missing.csv").string(), "--n", "3"}).code == 2);
}

TEST_CASE("purity subcommand", "[cli]") {
  const fs::path dir = scratch("purity");
  csv::write_matrix(dir / "identity.csv", Matrix::Identity(3, 3));
  const Outcome o = run_cli({"purity", "--input", (dir / "identity.csv").string(), "--samples", "500"});
  REQUIRE(o.code == 0);
  const auto doc = nlohmann::json::parse(o.out);
  CHECK(doc["best_purity"].get<double>() == 1.0);
  CHECK(doc["sufficient_ok"].get<bool>());
  CHECK(doc["necessary_ok"].get<bool>());

  csv::write_matrix(dir / "centroid.csv", Matrix::Constant(3, 4, 1.0 / 3));
  CHECK(run_cli({"purity", "--input", (dir / "centroid.csv").string()}).code == 3);
  Matrix off = Matrix::Identity(3, 3);
  off(0, 0) = 1.2;
  csv::write_matrix(dir / "off.csv", off);
  CHECK(run_cli({"purity", "--input", (dir / "off.csv").string()}).code == 3);
}

TEST_CASE("check subcommand", "[cli]") {
  const Outcome none = run_cli({"check", "--filter", "no_such_check"});
  CHECK(none.code == 0);
  CHECK(none.err.find("warning") != std::string::npos);
  const Outcome some = run_cli({"check", "--filter", "regular_simplex_ball_bound"});
  CHECK(some.code == 0);
  CHECK(some.out.find("PASS regular_simplex_ball_bound") != std::string::npos);
}

TEST_CASE("generate writes a consistent scene", "[cli]") {
  const fs::path dir = scratch("generate");
  REQUIRE(run_cli({"generate", "--n", "3", "--bands", "8", "--pixels", "40", "--purity-cap", "0.9",
                   "--out", dir.string()}).code == 0);
  const Matrix x = csv::read_matrix(dir / "pixels.csv");
  const Matrix a = csv::read_matrix(dir / "endmembers.csv");
  const Matrix s = csv::read_matrix(dir / "abundances.csv");
  CHECK((x - a * s).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(run_cli({"generate", "--n", "4", "--purity-cap", "0.5", "--out", dir.string()}).code == 2);
}
