// Acceptance harness: `mves_acceptance <criterion>` prints one PASS/FAIL
// line per criterion and exits nonzero on FAIL. Seeds and tolerances are
// fixed here; nothing is tuned per run.

#include "mves/datagen.hpp"
#include "mves/errors.hpp"
#include "mves/geometry.hpp"
#include "mves/lp.hpp"
#include "mves/metrics.hpp"
#include "mves/purity.hpp"
#include "mves/random.hpp"
#include "mves/solver.hpp"
#include "mves/sweep.hpp"
#include "mves/theorems.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace mves;

namespace {

struct Verdict {
  bool passed = false;
  std::string details;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// Mean phi per grid value; points whose trials all fail report NaN.
std::map<double, PointSummary> sweep_means(ExperimentConfig cfg) {
  const SweepResult result = run_sweep(cfg);
  std::map<double, PointSummary> out;
  for (const auto& s : result.summary) out[s.r] = s;
  return out;
}

Verdict criterion_1() {
  ExperimentConfig cfg;
  cfg.n_endmembers = 3;
  cfg.n_bands = 50;
  cfg.n_pixels = 500;
  cfg.trials_per_point = 10;
  cfg.base_seed = 0;
  cfg.purity_grid = {0.60, 0.62, 0.65, 0.75, 0.80, 0.90};
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto means = sweep_means(cfg);
  const double elapsed = seconds_since(start);
  bool ok = elapsed < 600.0;
  std::ostringstream os;
  for (double r : cfg.purity_grid) {
    const PointSummary& s = means.at(r);
    const bool above = r > 0.7;
    const bool point_ok = s.successful_trials == cfg.trials_per_point &&
                          (above ? s.mean_phi_degrees < 0.5 : s.mean_phi_degrees > 1.0);
    ok = ok && point_ok;
    os << "r=" << r << " mean_phi=" << fmt(s.mean_phi_degrees) << (point_ok ? "" : "(!)") << ' ';
  }
  os << "runtime=" << fmt(elapsed) << "s";
  return {ok, os.str()};
}

Verdict criterion_2() {
  ExperimentConfig cfg;
  cfg.n_endmembers = 4;
  cfg.n_bands = 50;
  cfg.n_pixels = 1000;
  cfg.trials_per_point = 10;
  cfg.base_seed = 0;
  cfg.purity_grid = {0.65};
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const PointSummary high = sweep_means(cfg).at(0.65);
  const bool high_ok =
      high.successful_trials == cfg.trials_per_point && high.mean_phi_degrees < 0.5;

  // r = 0.50 equals 1/sqrt(4), the smallest norm on the simplex. Run the
  // trials directly (the sweep config rejects this grid value) and report
  // what the generator does with it.
  int low_ok_trials = 0;
  double low_sum = 0.0;
  std::string low_status;
  for (int t = 0; t < cfg.trials_per_point; ++t) {
    const TrialRecord rec = run_trial(cfg, 1, 0.50, t);
    if (rec.status == "ok") {
      ++low_ok_trials;
      low_sum += rec.phi_degrees;
    } else {
      low_status = rec.status;
    }
  }
  const double elapsed = seconds_since(start);
  const bool low_ok = low_ok_trials == cfg.trials_per_point && low_sum / low_ok_trials > 1.0;

  std::ostringstream os;
  os << "r=0.65 mean_phi=" << fmt(high.mean_phi_degrees) << (high_ok ? "" : "(!)") << ' ';
  if (low_ok_trials > 0) {
    os << "r=0.50 mean_phi=" << fmt(low_sum / low_ok_trials) << " over " << low_ok_trials << " trials";
  } else {
    os << "r=0.50 unattainable: every trial raised " << low_status;
  }
  if (!low_ok) os << "(!)";
  os << " runtime=" << fmt(elapsed) << "s";

  // Not part of the verdict: the same r = 0.65 trials with eight starts,
  // separating local-search failures from the identifiability question.
  ExperimentConfig multi = cfg;
  multi.solver.restarts = 8;
  os << " [info, not a criterion: restarts=8 gives r=0.65 mean_phi="
     << fmt(sweep_means(multi).at(0.65).mean_phi_degrees) << "]";
  return {high_ok && low_ok && elapsed < 1200.0, os.str()};
}

Verdict criterion_3() {
  const CheckOutcome c = check_unique_mves(3, 0.8, 5000, 5, 0);
  return {c.passed, c.details};
}

Verdict criterion_4() {
  bool ok = true;
  std::ostringstream os;
  for (int n = 2; n <= 6; ++n) {
    const CheckOutcome c = check_regular_simplex_volume(n, 1.0);
    ok = ok && c.passed;
    os << "n=" << n << ": " << c.details << "; ";
  }
  return {ok, os.str()};
}

Verdict criterion_5() {
  bool ok = true;
  std::ostringstream os;
  for (int n = 3; n <= 5; ++n) {
    const double floor = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> grid;
    for (int k = 1; k <= 10; ++k) grid.push_back(floor + (1.0 - floor) * k / 10.0);
    const CheckOutcome c = check_max_abundance_closed_form(n, grid, 20000, 0);
    ok = ok && c.passed;
    os << "n=" << n << ": " << c.details << "; ";
  }
  return {ok, os.str()};
}

Verdict criterion_6() {
  bool ok = true;
  int failures = 0;
  double worst_margin = 1e300;
  for (int n : {3, 4}) {
    for (int k = 0; k <= 9; ++k) {
      const double alpha = 0.55 + 0.05 * k;
      const CheckOutcome c = check_edge_pixel_purity_bound(n, alpha, 5000, 0);
      if (!c.passed) ++failures;
      if (!c.observed.empty() && !c.expected.empty()) {
        worst_margin = std::min(worst_margin, c.observed[0] - c.expected[0]);
      }
    }
  }
  ok = failures == 0;

  UniformPurityOptions opts;
  opts.n_samples = 5000;
  double gamma_at_one = 1e300;
  for (int n : {3, 4}) {
    const Matrix pure_edges = edge_pixels(EdgePixelSpec::uniform(n, 1.0));
    gamma_at_one = std::min(gamma_at_one, uniform_purity_lower_bound(pure_edges, opts).value);
  }
  const double corner = edge_pixel_purity_bound(3, 2.0 / 3.0);
  const bool endpoints = gamma_at_one >= 1.0 - 1e-9 && std::abs(corner - 1.0 / std::sqrt(2.0)) < 1e-9;
  std::ostringstream os;
  os << "20 (N, alpha) points, failures " << failures << ", worst estimate minus bound "
     << fmt(worst_margin) << "; gamma at alpha=1 " << gamma_at_one << "; bound(3, 2/3) - 1/sqrt(2) = "
     << corner - 1.0 / std::sqrt(2.0);
  return {ok && endpoints, os.str()};
}

Verdict criterion_7() {
  const CheckOutcome c = check_two_endmember_interval(20, 100, 0);
  return {c.passed, c.details};
}

Verdict criterion_8() {
  bool ok = true;
  std::ostringstream os;
  for (int n : {3, 4}) {
    const CheckOutcome c = check_rotated_mves(n, 1.0 / std::sqrt(n - 1.0), 20, 0);
    ok = ok && c.passed;
    os << "N=" << n << ": " << c.details << "; ";
  }
  return {ok, os.str()};
}

Verdict criterion_9() {
  Rng rng(0);
  auto normal_matrix = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
  };

  double worst_volume = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 5;
    const Simplex s(normal_matrix(n - 1 + k % 3, n));
    const double expected = oracle::cayley_menger_volume(s.vertices());
    worst_volume = std::max(worst_volume, std::abs(simplex_volume(s) - expected) / expected);
  }

  double worst_lp = 0.0;
  int lp_status_mismatch = 0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = 1 + k % 6;
    Eigen::Index m = 40;
    while (m > 1 && oracle::binomial(static_cast<int>(m + 2 * n), static_cast<int>(n)) > 2e5) --m;
    Matrix a(m, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.uniform(-1.0, 1.0);
    Vector x0(n);
    for (Eigen::Index i = 0; i < n; ++i) x0[i] = rng.uniform(-0.5, 0.5);
    Vector b = a * x0;
    for (Eigen::Index i = 0; i < m; ++i) b[i] += rng.uniform(0.0, 1.0);
    Vector c(n);
    for (Eigen::Index i = 0; i < n; ++i) c[i] = rng.uniform(-1.0, 1.0);
    const LinearProgram p(c, a, b, Vector::Constant(n, -2.0), Vector::Constant(n, 2.0));
    Matrix full(m + 2 * n, n);
    Vector rhs(m + 2 * n);
    full << a, Matrix::Identity(n, n), -Matrix::Identity(n, n);
    rhs << b, Vector::Constant(n, 2.0), Vector::Constant(n, 2.0);
    const auto expected = oracle::vertex_enumeration_max(c, full, rhs);
    const LpSolution sol = solve_lp(p);
    if (!expected || sol.status != LpStatus::optimal) {
      ++lp_status_mismatch;
      continue;
    }
    worst_lp = std::max(worst_lp, std::abs(sol.objective_value - *expected));
  }

  int disagreements = 0;
  int inside = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 5;
    const Simplex s(normal_matrix(n - 1, n));
    const PolyhedralSimplex p = to_polyhedral(s);
    for (int j = 0; j < 100; ++j) {
      const Vector point = 1.5 * normal_matrix(n - 1, 1);
      const bool by_halfspaces = p.contains(point, 1e-9);
      const bool by_vertices = contains(s, point, 1e-9);
      if (by_halfspaces != by_vertices) ++disagreements;
      inside += by_vertices ? 1 : 0;
    }
  }

  const bool ok = worst_volume < 1e-8 && worst_lp < 1e-7 && lp_status_mismatch == 0 &&
                  disagreements == 0;
  std::ostringstream os;
  os << "volume vs Cayley-Menger worst rel " << worst_volume << "; LP vs vertex enumeration worst abs "
     << worst_lp << " (status mismatches " << lp_status_mismatch << "); membership disagreements "
     << disagreements << " of 10000 (" << inside << " inside)";
  return {ok, os.str()};
}

Verdict criterion_10() {
  const int n = 3;
  double worst = 0.0;
  int cases = 0;
  for (int bands : {4, 50}) {
    for (int k = 0; k < 20; ++k) {
      const std::uint64_t seed = derive_seed(0, static_cast<std::uint64_t>(bands),
                                             static_cast<std::uint64_t>(k));
      SceneConfig scfg;
      scfg.n_endmembers = n;
      scfg.n_bands = bands;
      scfg.n_pixels = 500;
      scfg.seed = seed;
      const Scene scene = generate_scene(scfg);
      const MvesResult direct = solve_mves(scene.abundances, n);
      const MvesResult mixed = solve_mves(scene.pixels, n);
      const Matrix mapped = scene.endmembers * direct.estimated_endmembers.vertices();
      const Matrix& est = mixed.estimated_endmembers.vertices();
      Matrix cost(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) cost(i, j) = (mapped.col(i) - est.col(j)).squaredNorm();
      }
      const auto match = min_cost_assignment(cost);
      double err = 0.0;
      for (int i = 0; i < n; ++i) {
        err = std::max(err, (mapped.col(i) - est.col(match[static_cast<std::size_t>(i)])).cwiseAbs().maxCoeff());
      }
      worst = std::max(worst, err / std::max(1.0, mapped.cwiseAbs().maxCoeff()));
      ++cases;
    }
  }
  std::ostringstream os;
  os << cases << " mixing matrices (M in {4, 50}): worst |a_hat - A s_hat| " << worst;
  return {worst < 1e-6, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Verdict()>> criteria = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},
      {5, criterion_5}, {6, criterion_6}, {7, criterion_7}, {8, criterion_8},
      {9, criterion_9}, {10, criterion_10}};
  std::vector<int> selected;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  } else {
    for (const auto& [k, _] : criteria) selected.push_back(k);
  }
  bool all_ok = true;
  for (int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::cerr << "unknown criterion " << k << '\n';
      return 2;
    }
    Verdict v;
    try {
      v = it->second();
    } catch (const std::exception& e) {
      v = {false, std::string("raised ") + error_kind(e) + ": " + e.what()};
    }
    std::cout << (v.passed ? "PASS" : "FAIL") << " criterion " << k << ": " << v.details << std::endl;
    all_ok = all_ok && v.passed;
  }
  return all_ok ? 0 : 1;
}
