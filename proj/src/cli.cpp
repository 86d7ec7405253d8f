#include "mves/cli.hpp"

#include "mves/csv.hpp"
#include "mves/datagen.hpp"
#include "mves/errors.hpp"
#include "mves/metrics.hpp"
#include "mves/purity.hpp"
#include "mves/solver.hpp"
#include "mves/sweep.hpp"
#include "mves/theorems.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace mves::cli {

namespace {

using nlohmann::json;

struct SolverFlags {
  std::optional<int> max_cycles;
  std::optional<double> rel_tol;
  std::optional<double> containment_tol;
  std::optional<std::string> init;
  std::optional<int> restarts;

  void attach(CLI::App& app) {
    app.add_option("--max-cycles", max_cycles, "Cycle cap of the alternating solver (0 = 50 N)");
    app.add_option("--rel-tol", rel_tol, "Relative per-cycle volume change that stops the solver");
    app.add_option("--containment-tol", containment_tol, "Tolerance of the enclosure check");
    app.add_option("--init", init, "Initialization: greedy or regular");
    app.add_option("--restarts", restarts, "Independent starts; the smallest volume wins");
  }

  void apply(MvesConfig& cfg) const {
    if (max_cycles) cfg.max_cycles = *max_cycles;
    if (rel_tol) cfg.rel_tol = *rel_tol;
    if (containment_tol) cfg.containment_tol = *containment_tol;
    if (init) cfg.init_strategy = parse_init_strategy(*init);
    if (restarts) cfg.restarts = *restarts;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path);
  out << text;
}

void emit_json(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    write_text(path, doc.dump(2) + "\n");
  }
}

int report_error(const std::exception& e, int code, std::ostream& err) {
  err << "error (" << error_kind(e) << "): " << e.what() << '\n';
  return code;
}

// --- figure5 ---------------------------------------------------------------

struct Figure5Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  std::optional<int> trials;
  std::vector<double> grid;
  std::optional<int> n;
  std::optional<int> bands;
  std::optional<int> pixels;
  std::optional<int> threads;
  bool full_scale = false;
  SolverFlags solver;
};

int run_figure5(const Figure5Options& o, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    if (!o.config.empty()) cfg = load_experiment_config(o.config);
    if (o.full_scale) {
      cfg.n_pixels = 1000;
      cfg.trials_per_point = 50;
    }
    if (o.seed) cfg.base_seed = *o.seed;
    if (o.out) cfg.output_csv_path = *o.out;
    if (o.svg) cfg.output_svg_path = *o.svg;
    if (o.trials) cfg.trials_per_point = *o.trials;
    if (!o.grid.empty()) cfg.purity_grid = o.grid;
    if (o.n) cfg.n_endmembers = *o.n;
    if (o.bands) cfg.n_bands = *o.bands;
    if (o.pixels) cfg.n_pixels = *o.pixels;
    if (o.threads) cfg.threads = *o.threads;
    o.solver.apply(cfg.solver);
    cfg.validate();
  } catch (const Error& e) {
    return report_error(e, kUsageError, err);
  }

  const SweepResult result = run_sweep(cfg);
  {
    std::ofstream csv_out(cfg.output_csv_path, std::ios::binary);
    if (!csv_out) {
      err << "error: cannot write " << cfg.output_csv_path << '\n';
      return kUsageError;
    }
    write_sweep_csv(csv_out, cfg, result);
  }
  if (cfg.output_svg_path) write_text(*cfg.output_svg_path, render_sweep_svg(cfg, result));

  int successes = 0;
  for (const auto& t : result.trials) {
    if (t.status == "ok") {
      ++successes;
    } else {
      err << "r=" << t.r << " trial " << t.trial << ": " << t.status << ": " << t.message << '\n';
    }
  }
  for (const auto& s : result.summary) {
    out << "r=" << csv::format_real(s.r) << " mean_phi=" << s.mean_phi_degrees
        << " std_phi=" << s.std_phi_degrees << " trials=" << s.successful_trials << '\n';
  }
  out << "wrote " << cfg.output_csv_path << '\n';
  return successes > 0 ? kSuccess : kFailure;
}

// --- generate ----------------------------------------------------------------

struct GenerateOptions {
  int n = 3;
  int bands = 50;
  int pixels = 500;
  double cap = 1.0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int run_generate(const GenerateOptions& o, std::ostream& out, std::ostream& err) {
  SceneConfig cfg;
  cfg.n_endmembers = o.n;
  cfg.n_bands = o.bands;
  cfg.n_pixels = o.pixels;
  cfg.purity_cap = o.cap;
  cfg.seed = o.seed;
  Scene scene;
  try {
    scene = generate_scene(cfg);
  } catch (const ValidationError& e) {
    return report_error(e, kUsageError, err);
  } catch (const PurityCapError& e) {
    return report_error(e, kUsageError, err);
  }
  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  csv::write_matrix(dir / "pixels.csv", scene.pixels);
  csv::write_matrix(dir / "abundances.csv", scene.abundances);
  csv::write_matrix(dir / "endmembers.csv", scene.endmembers);
  out << "wrote pixels.csv, abundances.csv, endmembers.csv to " << dir.string() << '\n';
  return kSuccess;
}

// --- unmix -----------------------------------------------------------------

struct UnmixOptions {
  std::string input;
  int n = 0;
  bool header = false;
  std::string out = "endmembers.csv";
  std::string report;
  std::string truth;
  std::string config;
  std::optional<std::uint64_t> seed;
  SolverFlags solver;
};

int run_unmix(const UnmixOptions& o, std::ostream& out, std::ostream& err) {
  MvesConfig cfg;
  Matrix pixels;
  std::optional<Matrix> truth;
  try {
    if (!o.config.empty()) {
      const ExperimentConfig exp = load_experiment_config(o.config);
      cfg = exp.solver;
      cfg.seed = exp.base_seed;
    }
    if (o.seed) cfg.seed = *o.seed;
    o.solver.apply(cfg);
    cfg.validate();
    pixels = csv::read_matrix(std::filesystem::path(o.input), o.header);
    if (!o.truth.empty()) truth = csv::read_matrix(std::filesystem::path(o.truth), o.header);
  } catch (const Error& e) {
    return report_error(e, kUsageError, err);
  }

  std::optional<MvesResult> solved;
  try {
    solved = solve_mves(pixels, o.n, cfg);
  } catch (const AffineDimensionError& e) {
    err << "the pixels do not span an affine set of dimension N - 1 = " << o.n - 1
        << "; lower the number of endmembers\n";
    return report_error(e, kDataRejected, err);
  } catch (const RankError& e) {
    return report_error(e, kDataRejected, err);
  } catch (const DimensionError& e) {
    return report_error(e, kDataRejected, err);
  }
  const MvesResult& result = *solved;

  csv::write_matrix(std::filesystem::path(o.out), result.estimated_endmembers.vertices());
  json report = {{"volume", result.volume},
                 {"cycles_used", result.cycles_used},
                 {"converged", result.converged},
                 {"all_points_enclosed", result.all_points_enclosed},
                 {"n_endmembers", o.n},
                 {"endmembers_path", o.out}};
  if (truth) {
    try {
      report["phi_degrees"] =
          rms_angle_error(*truth, result.estimated_endmembers.vertices()).phi_degrees;
    } catch (const Error& e) {
      return report_error(e, kUsageError, err);
    }
  }
  emit_json(report, o.report, out);
  return kSuccess;
}

// --- purity ----------------------------------------------------------------

struct PurityOptions {
  std::string input;
  bool header = false;
  int samples = 20000;
  double tol = 1e-3;
  double sum_tol = 1e-6;
  std::uint64_t seed = 0;
  std::string out;
};

int run_purity(const PurityOptions& o, std::ostream& out, std::ostream& err) {
  Matrix abundances;
  try {
    abundances = csv::read_matrix(std::filesystem::path(o.input), o.header);
  } catch (const Error& e) {
    return report_error(e, kUsageError, err);
  }
  try {
    require_on_unit_simplex(abundances, o.sum_tol);
  } catch (const ValidationError& e) {
    return report_error(e, kDataRejected, err);
  } catch (const Error& e) {
    return report_error(e, kUsageError, err);
  }
  // Columns accepted at the user tolerance are projected exactly onto the
  // simplex so downstream checks see clean data.
  abundances = abundances.cwiseMax(0.0);
  for (Eigen::Index j = 0; j < abundances.cols(); ++j) {
    abundances.col(j) /= abundances.col(j).sum();
  }

  UniformPurityOptions opts;
  opts.n_samples = o.samples;
  opts.tol = o.tol;
  opts.seed = o.seed;
  PurityReport report;
  try {
    report = purity_report(abundances, opts);
  } catch (const AffineDimensionError& e) {
    return report_error(e, kDataRejected, err);
  } catch (const Error& e) {
    return report_error(e, kUsageError, err);
  }
  const json doc = {{"best_purity", report.best_purity},
                    {"uniform_purity_lower", report.uniform_purity_lower},
                    {"threshold", report.threshold},
                    {"necessary_ok", report.necessary_ok},
                    {"sufficient_ok", report.sufficient_ok},
                    {"samples_used", report.samples_used}};
  emit_json(doc, o.out, out);
  return kSuccess;
}

// --- check -----------------------------------------------------------------

struct CheckOptions {
  std::string filter;
  std::uint64_t seed = 20240601;
  std::string out;
};

int run_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
  const auto outcomes = run_check_suite(o.filter, o.seed);
  if (outcomes.empty()) {
    err << "warning: no check matches filter '" << o.filter << "'\n";
  }
  bool ok = true;
  json list = json::array();
  for (const auto& c : outcomes) {
    const char* tag = !c.asserted ? "INFO" : (c.passed ? "PASS" : "FAIL");
    if (c.asserted && !c.passed) ok = false;
    out << tag << ' ' << c.name << ": " << c.details << '\n';
    list.push_back({{"name", c.name},
                    {"statement", c.statement},
                    {"passed", c.passed},
                    {"asserted", c.asserted},
                    {"observed", c.observed},
                    {"expected", c.expected},
                    {"tolerance", c.tolerance},
                    {"details", c.details}});
  }
  const json doc = {{"seed", o.seed}, {"all_passed", ok}, {"checks", list}};
  if (o.out.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    write_text(o.out, doc.dump(2) + "\n");
  }
  return ok ? kSuccess : kFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum-volume enclosing simplex unmixing and identifiability experiments"};
  app.require_subcommand(1);

  Figure5Options fig;
  auto* figure5 = app.add_subcommand("figure5", "Purity sweep: RMS angle error versus purity cap");
  figure5->add_option("--config", fig.config, "JSON experiment config");
  figure5->add_option("--seed", fig.seed, "Base seed of the sweep");
  figure5->add_option("--out", fig.out, "Output CSV path");
  figure5->add_option("--svg", fig.svg, "Optional SVG plot path");
  figure5->add_option("--trials", fig.trials, "Trials per purity value");
  figure5->add_option("--grid", fig.grid, "Comma-separated purity caps in (1/sqrt(N), 1]")
      ->delimiter(',');
  figure5->add_option("--n", fig.n, "Number of endmembers");
  figure5->add_option("--bands", fig.bands, "Number of spectral bands");
  figure5->add_option("--pixels", fig.pixels, "Pixels per scene");
  figure5->add_option("--threads", fig.threads, "Worker threads");
  figure5->add_flag("--full-scale", fig.full_scale, "1000 pixels and 50 trials per point");
  fig.solver.attach(*figure5);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic scene as CSV files");
  generate->add_option("--n", gen.n, "Number of endmembers");
  generate->add_option("--bands", gen.bands, "Number of spectral bands");
  generate->add_option("--pixels", gen.pixels, "Number of pixels");
  generate->add_option("--purity-cap", gen.cap, "Largest allowed abundance norm");
  generate->add_option("--seed", gen.seed, "Seed");
  generate->add_option("--out", gen.out_dir, "Output directory");

  UnmixOptions unm;
  auto* unmix = app.add_subcommand("unmix", "Estimate endmembers from a pixel CSV");
  unmix->add_option("--input", unm.input, "Pixel CSV: one column per pixel")->required();
  unmix->add_option("--n", unm.n, "Number of endmembers")->required();
  unmix->add_flag("--header", unm.header, "Skip a header line in the CSV inputs");
  unmix->add_option("--out", unm.out, "Endmember CSV output path");
  unmix->add_option("--report", unm.report, "JSON report path (default: stdout)");
  unmix->add_option("--truth", unm.truth, "True endmember CSV for the angle error");
  unmix->add_option("--config", unm.config, "JSON config with solver keys");
  unmix->add_option("--seed", unm.seed, "Solver seed");
  unm.solver.attach(*unmix);

  PurityOptions pur;
  auto* purity = app.add_subcommand("purity", "Purity report of an abundance CSV");
  purity->add_option("--input", pur.input, "Abundance CSV: one column per pixel")->required();
  purity->add_flag("--header", pur.header, "Skip a header line");
  purity->add_option("--samples", pur.samples, "Sphere directions of the uniform purity test");
  purity->add_option("--tol", pur.tol, "Bisection tolerance of the uniform purity estimate");
  purity->add_option("--sum-tol", pur.sum_tol, "Accepted deviation of column sums from one");
  purity->add_option("--seed", pur.seed, "Seed");
  purity->add_option("--out", pur.out, "JSON output path (default: stdout)");

  CheckOptions chk;
  auto* check = app.add_subcommand("check", "Run the identifiability check suite");
  check->add_option("--filter", chk.filter, "Run only checks whose name contains this text");
  check->add_option("--seed", chk.seed, "Seed");
  check->add_option("--out", chk.out, "JSON report path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*figure5) return run_figure5(fig, out, err);
    if (*generate) return run_generate(gen, out, err);
    if (*unmix) return run_unmix(unm, out, err);
    if (*purity) return run_purity(pur, out, err);
    if (*check) return run_check(chk, out, err);
  } catch (const ArgumentError& e) {
    return report_error(e, kUsageError, err);
  } catch (const Error& e) {
    return report_error(e, kFailure, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace mves::cli
