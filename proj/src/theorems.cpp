#include "mves/theorems.hpp"

#include "mves/errors.hpp"
#include "mves/geometry.hpp"
#include "mves/metrics.hpp"
#include "mves/purity.hpp"
#include "mves/random.hpp"
#include "mves/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace mves {

namespace {

std::string label(std::string_view base, std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream os;
  os << base << '[';
  bool first = true;
  for (const auto& [k, v] : params) {
    os << (first ? "" : ",") << k << '=' << v;
    first = false;
  }
  os << ']';
  return os.str();
}

double relative_error(double observed, double expected) {
  return std::abs(observed - expected) / std::abs(expected);
}

double unit_simplex_volume(int n) {
  return std::sqrt(static_cast<double>(n)) / linalg::factorial(n - 1);
}

struct Recovery {
  double rms = 0.0;
  double volume_error = 0.0;
  bool ok = false;
};

Recovery recovery_of_unit_simplex(const MvesResult& result, int n, double rms_tol,
                                  double volume_tol) {
  Recovery r;
  r.rms = vertex_rms_to_unit_simplex(result.estimated_endmembers.vertices());
  r.volume_error = relative_error(result.volume, unit_simplex_volume(n));
  r.ok = r.rms < rms_tol && r.volume_error < volume_tol;
  return r;
}

}  // namespace

double vertex_rms_to_unit_simplex(const Matrix& vertices) {
  const Eigen::Index n = vertices.cols();
  if (vertices.rows() != n) {
    throw DimensionError("vertex_rms_to_unit_simplex: expected N x N vertices");
  }
  Matrix cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      cost(i, j) = (vertices.col(j) - Vector::Unit(n, i)).squaredNorm();
    }
  }
  const auto assignment = min_cost_assignment(cost);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) total += cost(i, assignment[static_cast<std::size_t>(i)]);
  return std::sqrt(total / static_cast<double>(n));
}

CheckOutcome check_regular_simplex_volume(int n, double radius) {
  CheckOutcome out;
  out.name = label("regular_simplex_ball_bound", {{"n", n}, {"radius", radius}});
  out.statement = "the regular simplex is the smallest simplex around a ball";
  out.tolerance = 1e-9;
  const Simplex s = circumscribed_regular_simplex(n, radius, Vector::Zero(n - 1));
  const double volume = simplex_volume(s);
  const double bound = std::pow(n, 0.5 * n) * std::pow(n - 1, 0.5 * (n - 1)) *
                       std::pow(radius, n - 1) / linalg::factorial(n - 1);
  const PolyhedralSimplex p = to_polyhedral(s);
  double tangency = 0.0;
  for (Eigen::Index i = 0; i < p.dimension(); ++i) {
    tangency = std::max(tangency, std::abs(-radius * p.h().col(i).norm() + p.g()[i]));
  }
  tangency = std::max(tangency, std::abs(-radius * p.h().rowwise().sum().norm() +
                                         (1.0 - p.g().sum())));
  const double vertex_distance = s.vertices().colwise().norm().maxCoeff();
  out.observed = {volume, tangency, vertex_distance};
  out.expected = {bound, 0.0, (n - 1) * radius};
  out.passed = relative_error(volume, bound) <= 1e-9 && tangency < 1e-10;
  std::ostringstream os;
  os << "volume " << volume << " vs bound " << bound << ", max tangency residual " << tangency;
  out.details = os.str();
  return out;
}

CheckOutcome check_chart_ball_equivalence(int n, double r, int samples, std::uint64_t seed) {
  CheckOutcome out;
  out.name = label("purity_region_chart_ball", {{"n", n}, {"r", r}});
  const double critical = 1.0 / std::sqrt(static_cast<double>(n - 1));
  const bool inside_expected = r <= critical + 1e-12;
  out.statement = inside_expected
                      ? "at purity r <= 1/sqrt(N-1) the chart sphere lies inside the unit simplex"
                      : "at purity r > 1/sqrt(N-1) the chart sphere leaves the unit simplex";
  const PurityRegionSampler sampler(n);
  Rng rng(seed);
  double lowest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    lowest = std::min(lowest, sampler.sphere_point(r, rng.unit_direction(n - 1)).minCoeff());
  }
  out.observed = {lowest};
  if (inside_expected) {
    out.tolerance = 1e-10;
    out.expected = {0.0};
    out.passed = lowest >= -1e-10;
  } else {
    out.tolerance = 1e-6;
    out.expected = {-1e-6};
    out.passed = lowest < -1e-6;
  }
  std::ostringstream os;
  os << samples << " sphere samples, smallest coordinate " << lowest;
  out.details = os.str();
  return out;
}

CheckOutcome check_unique_mves(int n, double r, int cloud_size, int restarts, std::uint64_t seed) {
  CheckOutcome out;
  out.name = label("unique_mves_above_threshold", {{"n", n}, {"r", r}});
  out.statement = "above purity 1/sqrt(N-1) the unit simplex is the only MVES of R(r)";
  out.tolerance = 1e-3;
  const PurityRegionSampler sampler(n);
  Rng rng(seed);
  const Matrix cloud = sampler.dense_cloud(r, cloud_size, rng);

  bool all_ok = true;
  double worst_rms = 0.0;
  double worst_volume = 0.0;
  int escalated = 0;
  for (int k = 0; k < restarts; ++k) {
    MvesConfig cfg;
    cfg.seed = derive_seed(seed, 17);
    cfg.start_index = k;
    cfg.init_strategy = (k % 2 == 0) ? InitStrategy::greedy_volume_max
                                     : InitStrategy::regular_inflated;
    Recovery rec = recovery_of_unit_simplex(solve_mves(cloud, n, cfg), n, 1e-3, 1e-6);
    if (!rec.ok) {
      // Separate a stuck local search from a genuine second optimum.
      ++escalated;
      cfg.restarts = 4;
      cfg.start_index = restarts + 4 * k;
      rec = recovery_of_unit_simplex(solve_mves(cloud, n, cfg), n, 1e-3, 1e-6);
    }
    all_ok = all_ok && rec.ok;
    worst_rms = std::max(worst_rms, rec.rms);
    worst_volume = std::max(worst_volume, rec.volume_error);
  }
  out.observed = {worst_rms, worst_volume};
  out.expected = {0.0, 0.0};
  out.passed = all_ok;
  std::ostringstream os;
  os << restarts << " starts on " << cloud_size << " points: worst vertex RMS " << worst_rms
     << ", worst volume error " << worst_volume << ", escalated " << escalated;
  out.details = os.str();
  return out;
}

CheckOutcome check_rotated_mves(int n, double r, int rotations, std::uint64_t seed) {
  CheckOutcome out;
  out.name = label("nonunique_mves_at_or_below_threshold", {{"n", n}, {"r", r}});
  out.statement = "at purity r <= 1/sqrt(N-1) every rotation of the ball-MVES is again an MVES";
  out.tolerance = 1e-9;
  const double radius = std::sqrt(r * r - 1.0 / n);
  const Simplex base = circumscribed_regular_simplex(n, radius, Vector::Zero(n - 1));
  const double base_volume = simplex_volume(base);

  Rng rng(seed);
  const int probe_count = 2000;
  Matrix probes(n - 1, probe_count);
  for (int k = 0; k < probe_count; ++k) {
    const double scale = (k % 2 == 0) ? radius : radius * std::pow(rng.uniform(), 1.0 / (n - 1));
    probes.col(k) = scale * rng.unit_direction(n - 1);
  }

  bool ok = true;
  double worst_volume = 0.0;
  double worst_slack = std::numeric_limits<double>::infinity();
  double largest_move = 0.0;
  for (int k = 0; k < rotations; ++k) {
    const Simplex rotated = rotate_in_chart(base, rng.orthogonal(n - 1));
    worst_volume = std::max(worst_volume, relative_error(simplex_volume(rotated), base_volume));
    const PolyhedralSimplex p = to_polyhedral(rotated);
    worst_slack = std::min(worst_slack, p.slacks_points(probes).minCoeff());
    double ball_slack = -radius * p.h().rowwise().sum().norm() + (1.0 - p.g().sum());
    for (Eigen::Index i = 0; i < p.dimension(); ++i) {
      ball_slack = std::min(ball_slack, -radius * p.h().col(i).norm() + p.g()[i]);
    }
    worst_slack = std::min(worst_slack, ball_slack);
    largest_move = std::max(largest_move, (rotated.vertices() - base.vertices()).norm());
  }
  ok = worst_volume <= 1e-9 && worst_slack >= -1e-12;
  out.observed = {worst_volume, worst_slack, base_volume};
  out.expected = {0.0, 0.0, base_volume};
  const double critical = 1.0 / std::sqrt(static_cast<double>(n - 1));
  if (std::abs(r - critical) < 1e-12) {
    // At the threshold the ball-MVES has the volume of the unit simplex.
    const double ref = unit_simplex_volume(n);
    ok = ok && relative_error(base_volume, ref) <= 1e-9;
    out.expected[2] = ref;
  }
  out.passed = ok;
  std::ostringstream os;
  os << rotations << " rotations: worst volume change " << worst_volume << ", smallest slack "
     << worst_slack << ", largest vertex displacement " << largest_move;
  out.details = os.str();
  return out;
}

CheckOutcome check_two_endmember_interval(const Vector& alphas) {
  CheckOutcome out;
  out.name = "two_endmember_interval";
  out.statement = "for N = 2 the MVES is [min alpha, max alpha]; it is T_e iff pure pixels exist";
  out.tolerance = 1e-12;
  Matrix s(2, alphas.size());
  s.row(0) = alphas.transpose();
  s.row(1) = (1.0 - alphas.array()).matrix().transpose();
  const MvesResult result = solve_mves(s, 2);
  const double lo = alphas.minCoeff();
  const double hi = alphas.maxCoeff();
  Matrix expected(2, 2);
  expected << hi, lo, 1.0 - hi, 1.0 - lo;
  const Matrix& v = result.estimated_endmembers.vertices();
  const double direct = (v - expected).cwiseAbs().maxCoeff();
  const double swapped = (v.rowwise().reverse() - expected).cwiseAbs().maxCoeff();
  const double err = std::min(direct, swapped);
  const bool pure = lo == 0.0 && hi == 1.0;
  const double to_unit = vertex_rms_to_unit_simplex(v);
  const bool recovered = to_unit <= 1e-12;
  out.observed = {err, to_unit};
  out.expected = {0.0, pure ? 0.0 : to_unit};
  out.passed = err <= 1e-12 && recovered == pure;
  std::ostringstream os;
  os << "interval error " << err << ", pure pixels " << (pure ? "present" : "absent")
     << ", distance to T_e " << to_unit;
  out.details = os.str();
  return out;
}

CheckOutcome check_two_endmember_interval(int abundance_count, int instances, std::uint64_t seed) {
  CheckOutcome out;
  out.name = label("two_endmember_interval", {{"count", abundance_count}, {"instances", instances}});
  out.statement = "for N = 2 the MVES is [min alpha, max alpha]; it is T_e iff pure pixels exist";
  out.tolerance = 1e-12;
  Rng rng(seed);
  double worst = 0.0;
  int failures = 0;
  for (int k = 0; k < instances; ++k) {
    Vector alphas(abundance_count);
    for (Eigen::Index i = 0; i < alphas.size(); ++i) alphas[i] = rng.uniform();
    // Every third instance carries both pure pixels.
    if (k % 3 == 0 && abundance_count >= 2) {
      alphas[0] = 0.0;
      alphas[1] = 1.0;
    }
    const CheckOutcome one = check_two_endmember_interval(alphas);
    worst = std::max(worst, one.observed[0]);
    if (!one.passed) ++failures;
  }
  out.observed = {worst, static_cast<double>(failures)};
  out.expected = {0.0, 0.0};
  out.passed = failures == 0;
  std::ostringstream os;
  os << instances << " instances, worst endpoint error " << worst << ", failures " << failures;
  out.details = os.str();
  return out;
}

CheckOutcome check_edge_pixel_recovery(int n, double alpha, int filler_points, std::uint64_t seed) {
  CheckOutcome out;
  out.name = label("edge_pixel_recovery", {{"n", n}, {"alpha", alpha}});
  const bool assert_recovery = n >= 4 || (n == 3 && alpha > 2.0 / 3.0 + 0.02);
  const bool expect_failure = n == 3 && alpha < 2.0 / 3.0 - 0.02;
  out.asserted = assert_recovery;
  out.statement = assert_recovery
                      ? "edge pixels above the purity threshold identify the unit simplex"
                      : "edge pixels below the purity threshold (observation only)";
  out.tolerance = 1e-3;
  const Matrix edges = edge_pixels(EdgePixelSpec::uniform(n, alpha));
  Rng rng(seed);
  Matrix data(n, edges.cols() + filler_points);
  data.leftCols(edges.cols()) = edges;
  const Vector flat = Vector::Ones(n);
  for (int k = 0; k < filler_points;) {
    const Vector s = rng.dirichlet(flat);
    if (s.maxCoeff() <= alpha) data.col(edges.cols() + k++) = s;
  }
  MvesConfig cfg;
  cfg.seed = derive_seed(seed, 5);
  const MvesResult first = solve_mves(data, n, cfg);
  Recovery rec = recovery_of_unit_simplex(first, n, 1e-3, 1e-6);
  double volume = first.volume;
  if (!rec.ok && assert_recovery) {
    cfg.restarts = 4;
    cfg.start_index = 1;
    const MvesResult retry = solve_mves(data, n, cfg);
    rec = recovery_of_unit_simplex(retry, n, 1e-3, 1e-6);
    volume = retry.volume;
  }
  out.observed = {rec.rms, volume};
  out.expected = {0.0, unit_simplex_volume(n)};
  out.passed = assert_recovery ? rec.ok : true;
  std::ostringstream os;
  os << "vertex RMS " << rec.rms << ", volume " << volume << " vs " << unit_simplex_volume(n);
  if (expect_failure) {
    os << (rec.ok ? "; recovered despite low purity" : "; not recovered (smaller simplex found)");
  }
  out.details = os.str();
  return out;
}

CheckOutcome check_max_abundance_closed_form(int n, const std::vector<double>& r_grid, int samples,
                                             std::uint64_t seed) {
  CheckOutcome out;
  out.name = label("max_abundance_closed_form", {{"n", n}});
  out.statement = "the largest abundance in R(r) has the stated closed form";
  out.tolerance = 1e-3;
  const PurityRegionSampler sampler(n);
  Rng rng(seed);
  bool ok = true;
  std::ostringstream os;
  for (double r : r_grid) {
    const double closed = max_abundance_at_purity(n, r);
    double random_sup = 0.0;
    for (int k = 0; k < samples; ++k) {
      const auto p = sampler.boundary_point(r, rng.unit_direction(n - 1));
      if (p && in_region_r(*p, r)) random_sup = std::max(random_sup, p->maxCoeff());
    }
    // The maximizer family [a, (1-a)/(n-1) 1] swept over a.
    double family_sup = 0.0;
    const int steps = 2000;
    for (int k = 0; k <= steps + 1; ++k) {
      const double a = k <= steps ? 1.0 / n + (1.0 - 1.0 / n) * k / steps : closed;
      Vector s = Vector::Constant(n, (1.0 - a) / (n - 1));
      s[static_cast<Eigen::Index>(k % n)] = a;
      if (in_region_r(s, r)) family_sup = std::max(family_sup, s.maxCoeff());
    }
    const double sup = std::max(random_sup, family_sup);
    const bool here = sup <= closed + 1e-9 && sup >= closed - 1e-3;
    ok = ok && here;
    out.observed.push_back(sup);
    out.expected.push_back(closed);
    os << "r=" << r << ": sampled " << sup << " (random only " << random_sup << ") vs " << closed
       << (here ? "" : " FAIL") << "; ";
  }
  out.passed = ok;
  out.details = os.str();
  return out;
}

CheckOutcome check_edge_pixel_purity_bound(int n, double alpha, int samples, std::uint64_t seed) {
  CheckOutcome out;
  out.name = label("edge_pixel_purity_bound", {{"n", n}, {"alpha", alpha}});
  out.statement = "uniform purity of edge pixels is at least the closed-form bound";
  out.tolerance = 0.01;
  const Matrix edges = edge_pixels(EdgePixelSpec::uniform(n, alpha));
  UniformPurityOptions opts;
  opts.n_samples = samples;
  opts.seed = seed;
  const double estimate = uniform_purity_lower_bound(edges, opts).value;
  const double bound = edge_pixel_purity_bound(n, alpha);
  out.observed = {estimate};
  out.expected = {bound};
  out.passed = estimate >= bound - 0.01;
  std::ostringstream os;
  os << "estimate " << estimate << " vs bound " << bound;
  out.details = os.str();
  return out;
}

std::vector<CheckOutcome> run_check_suite(std::string_view filter, std::uint64_t seed) {
  struct Entry {
    std::string name;
    std::function<CheckOutcome()> run;
  };
  std::vector<Entry> entries;
  auto add = [&](std::string name, std::function<CheckOutcome()> fn) {
    entries.push_back({std::move(name), std::move(fn)});
  };
  std::uint64_t stream = 0;
  auto next_seed = [&] { return derive_seed(seed, ++stream); };

  const std::vector<std::pair<int, double>> balls = {
      {2, 0.5}, {3, 1.0 / std::sqrt(6.0)}, {4, 0.3}, {5, 1.0}, {6, 1.0}};
  for (const auto& [n, radius] : balls) {
    add(label("regular_simplex_ball_bound", {{"n", n}, {"radius", radius}}),
        [n = n, radius = radius] { return check_regular_simplex_volume(n, radius); });
  }
  const std::vector<std::pair<int, double>> spheres = {{3, 1.0 / std::sqrt(2.0)},
                                                       {3, 0.76},
                                                       {4, 1.0 / std::sqrt(3.0)},
                                                       {4, 1.0 / std::sqrt(3.0) + 0.05}};
  for (const auto& [n, r] : spheres) {
    add(label("purity_region_chart_ball", {{"n", n}, {"r", r}}),
        [n = n, r = r, s = next_seed()] { return check_chart_ball_equivalence(n, r, 100000, s); });
  }
  for (int n : {3, 4, 5}) {
    std::vector<double> grid;
    const double lo = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < 10; ++k) grid.push_back(lo + (1.0 - lo) * k / 9.0);
    add(label("max_abundance_closed_form", {{"n", n}}),
        [n, grid, s = next_seed()] { return check_max_abundance_closed_form(n, grid, 100000, s); });
  }
  for (int n : {3, 4}) {
    for (double a : {0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0}) {
      add(label("edge_pixel_purity_bound", {{"n", n}, {"alpha", a}}),
          [n, a, s = next_seed()] { return check_edge_pixel_purity_bound(n, a, 20000, s); });
    }
  }
  for (int n : {3, 4}) {
    const double r = 1.0 / std::sqrt(static_cast<double>(n - 1));
    add(label("nonunique_mves_at_or_below_threshold", {{"n", n}, {"r", r}}),
        [n, r, s = next_seed()] { return check_rotated_mves(n, r, 20, s); });
  }
  add(label("two_endmember_interval", {{"count", 50}, {"instances", 100}}),
      [s = next_seed()] { return check_two_endmember_interval(50, 100, s); });
  const std::vector<std::tuple<int, double, int, int>> clouds = {
      {3, 0.8, 5000, 5}, {3, 0.95, 5000, 2}, {4, 0.65, 20000, 2}};
  for (const auto& [n, r, size, starts] : clouds) {
    add(label("unique_mves_above_threshold", {{"n", n}, {"r", r}}),
        [n = n, r = r, size = size, starts = starts, s = next_seed()] {
          return check_unique_mves(n, r, size, starts, s);
        });
  }
  const std::vector<std::pair<int, double>> edges = {{3, 0.75}, {3, 1.0}, {4, 0.55}, {4, 0.7}, {3, 0.6}};
  for (const auto& [n, a] : edges) {
    add(label("edge_pixel_recovery", {{"n", n}, {"alpha", a}}),
        [n = n, a = a, s = next_seed()] { return check_edge_pixel_recovery(n, a, 200, s); });
  }

  std::vector<CheckOutcome> out;
  for (const auto& e : entries) {
    if (!filter.empty() && e.name.find(filter) == std::string::npos) continue;
    out.push_back(e.run());
  }
  return out;
}

}  // namespace mves
