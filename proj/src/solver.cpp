#include "mves/solver.hpp"

#include "mves/errors.hpp"
#include "mves/lp.hpp"
#include "mves/random.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mves {

namespace {

// Signed cofactors of row i of f, computed from explicit minors.
Vector row_cofactors(const Matrix& f, Eigen::Index i) {
  const Eigen::Index d = f.rows();
  Vector c(d);
  if (d == 1) {
    c[0] = 1.0;
    return c;
  }
  Matrix minor(d - 1, d - 1);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index r = 0, mr = 0; r < d; ++r) {
      if (r == i) continue;
      for (Eigen::Index col = 0, mc = 0; col < d; ++col) {
        if (col == k) continue;
        minor(mr, mc++) = f(r, col);
      }
      ++mr;
    }
    const double sign = ((i + k) % 2 == 0) ? 1.0 : -1.0;
    c[k] = sign * linalg::determinant(minor);
  }
  return c;
}

// Facet normals as rows (F = H^T) and offsets.
struct HalfSpaces {
  Matrix f;
  Vector g;
};

HalfSpaces to_half_spaces(const PolyhedralSimplex& p) { return {p.h().transpose(), p.g()}; }

// One facet update. Returns true when |det F| increased.
bool update_facet(HalfSpaces& hs, const Matrix& thetas, Eigen::Index i) {
  const Eigen::Index d = hs.f.rows();
  const Eigen::Index count = thetas.cols();
  const Matrix values = (hs.f * thetas).colwise() + hs.g;  // d x L
  const Eigen::RowVectorXd others = values.colwise().sum() - values.row(i);

  Matrix a(2 * count, d + 1);
  Vector b(2 * count);
  a.block(0, 0, count, d) = -thetas.transpose();
  a.block(0, d, count, 1).setConstant(-1.0);
  b.head(count).setZero();
  a.block(count, 0, count, d) = thetas.transpose();
  a.block(count, d, count, 1).setOnes();
  b.tail(count) = (Eigen::RowVectorXd::Ones(count) - others).transpose();
  // The incumbent is feasible; clip rounding so the LP stays feasible too.
  b.tail(count) = b.tail(count).cwiseMax(0.0);

  const Vector cof = row_cofactors(hs.f, i);
  Vector c = Vector::Zero(d + 1);
  c.head(d) = cof;

  const double current = std::abs(linalg::determinant(hs.f));
  double best = current;
  Vector best_row;
  for (double direction : {1.0, -1.0}) {
    const auto sol = solve_lp(LinearProgram(direction * c, a, b));
    if (sol.status != LpStatus::optimal) {
      throw InternalError(std::string("solve_mves: facet LP returned ") +
                          std::string(to_string(sol.status)) +
                          " from a feasible incumbent");
    }
    Matrix trial = hs.f;
    trial.row(i) = sol.x.head(d).transpose();
    const double value = std::abs(linalg::determinant(trial));
    if (value > best) {
      best = value;
      best_row = sol.x;
    }
  }
  if (best_row.size() == 0) return false;
  hs.f.row(i) = best_row.head(d).transpose();
  hs.g[i] = best_row[d];
  return true;
}

// Translates the simplex (H fixed, g free) to maximize the smallest slack.
void recenter(HalfSpaces& hs, const Matrix& thetas) {
  const Eigen::Index d = hs.f.rows();
  const Eigen::Index count = thetas.cols();
  const Matrix ft = hs.f * thetas;  // d x L
  const Matrix values = ft.colwise() + hs.g;
  const double current =
      std::min(values.minCoeff(), (1.0 - values.colwise().sum().array()).minCoeff());

  // Variables (g, s): maximize s  s.t.  -(F theta_n)_i - g_i + s <= 0,
  //                                      1^T F theta_n + 1^T g + s <= 1.
  Matrix a = Matrix::Zero((d + 1) * count, d + 1);
  Vector b = Vector::Zero((d + 1) * count);
  Eigen::Index r = 0;
  for (Eigen::Index n = 0; n < count; ++n) {
    for (Eigen::Index i = 0; i < d; ++i, ++r) {
      a(r, i) = -1.0;
      a(r, d) = 1.0;
      b[r] = ft(i, n);
    }
    a.row(r).head(d).setOnes();
    a(r, d) = 1.0;
    b[r++] = 1.0 - ft.col(n).sum();
  }
  Vector c = Vector::Zero(d + 1);
  c[d] = 1.0;
  const auto sol = solve_lp(LinearProgram(c, std::move(a), std::move(b)));
  if (sol.status == LpStatus::optimal && sol.x[d] > current) {
    hs.g = sol.x.head(d);
  }
}

struct RunOutcome {
  HalfSpaces hs;
  int cycles = 0;
  bool converged = false;
  std::vector<double> history;
};

// Trust-region step on all of (F, g) at once: maximizes the linearization
// of log|det F| over the enclosing constraints with |dF_jk| <= radius.
// Coordinate updates stall where the constraints couple several rows; this
// step moves them together. Returns the accepted log-det gain, 0 for a
// rejected step (radius shrunk) and a negative value at a stationary point.
double joint_step(HalfSpaces& hs, const Matrix& thetas, double& radius) {
  const Eigen::Index d = hs.f.rows();
  const Eigen::Index count = thetas.cols();
  const Eigen::Index vars = d * d + d;
  const Matrix gradient = linalg::inverse(hs.f).transpose();

  // Variable layout: F row-major, then g.
  Matrix a = Matrix::Zero((d + 1) * count, vars);
  Vector b = Vector::Zero((d + 1) * count);
  for (Eigen::Index n = 0; n < count; ++n) {
    const Eigen::Index sum_row = (d + 1) * n + d;
    for (Eigen::Index i = 0; i < d; ++i) {
      const Eigen::Index row = (d + 1) * n + i;
      a.block(row, i * d, 1, d) = -thetas.col(n).transpose();
      a(row, d * d + i) = -1.0;
      a.block(sum_row, i * d, 1, d) = thetas.col(n).transpose();
      a(sum_row, d * d + i) = 1.0;
    }
    b[sum_row] = 1.0;
  }
  Vector c = Vector::Zero(vars);
  Vector lo = Vector::Constant(vars, -std::numeric_limits<double>::infinity());
  Vector hi = Vector::Constant(vars, std::numeric_limits<double>::infinity());
  const double scale = hs.f.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      c[i * d + j] = gradient(i, j);
      lo[i * d + j] = hs.f(i, j) - radius * scale;
      hi[i * d + j] = hs.f(i, j) + radius * scale;
    }
  }
  const auto sol = solve_lp(LinearProgram(c, std::move(a), std::move(b), lo, hi));
  if (sol.status != LpStatus::optimal) return -1.0;

  Matrix f(d, d);
  for (Eigen::Index i = 0; i < d; ++i) f.row(i) = sol.x.segment(i * d, d).transpose();
  const double predicted = (gradient.array() * (f - hs.f).array()).sum();
  if (!(predicted > 1e-14)) return -1.0;
  const double before = std::log(std::abs(linalg::determinant(hs.f)));
  const double after_det = std::abs(linalg::determinant(f));
  const double gain = after_det > 0.0 ? std::log(after_det) - before : -1.0;
  const double ratio = gain / predicted;
  if (ratio < 0.1) {
    radius *= 0.25;
    return 0.0;
  }
  if (ratio > 0.75) radius = std::min(2.0 * radius, 1.0);
  hs.f = f;
  hs.g = sol.x.tail(d);
  return gain;
}

// Same simplex with the vertex order shifted by one, so that a different
// facet becomes the dependent one in the half-space form.
HalfSpaces rotate_reference(const HalfSpaces& hs) {
  const Simplex v = to_vertices(PolyhedralSimplex(hs.f.transpose(), hs.g));
  const Eigen::Index n = v.vertex_count();
  Matrix shifted(v.vertices().rows(), n);
  shifted.leftCols(n - 1) = v.vertices().rightCols(n - 1);
  shifted.col(n - 1) = v.vertices().col(0);
  return to_half_spaces(to_polyhedral(Simplex(shifted)));
}

RunOutcome alternate(HalfSpaces hs, const Matrix& thetas, const MvesConfig& cfg, int max_cycles) {
  RunOutcome out;
  double det = std::abs(linalg::determinant(hs.f));
  out.history.push_back(det);
  const Eigen::Index n = hs.f.rows() + 1;
  double radius = 0.1;
  // A cycle is one sweep of facet updates followed by joint steps until
  // they stall. Stop once every vertex served as reference without progress.
  Eigen::Index quiet = 0;
  for (int cycle = 1; cycle <= max_cycles; ++cycle) {
    const double before = det;
    for (Eigen::Index i = 0; i < hs.f.rows(); ++i) update_facet(hs, thetas, i);
    if (n > 2) {
      radius = std::max(radius, 1e-4);
      for (int attempt = 0; attempt < 50 && radius > 1e-10; ++attempt) {
        const double step = joint_step(hs, thetas, radius);
        if (step < 0.0 || (step > 0.0 && step < 0.1 * cfg.rel_tol)) break;
      }
    }
    det = std::abs(linalg::determinant(hs.f));
    out.history.push_back(det);
    out.cycles = cycle;
    quiet = (det - before) / before < cfg.rel_tol ? quiet + 1 : 0;
    if (quiet >= std::max<Eigen::Index>(n - 1, 1)) {
      out.converged = true;
      break;
    }
    if (n > 2) {
      hs = rotate_reference(hs);
      det = std::abs(linalg::determinant(hs.f));
    }
  }
  recenter(hs, thetas);
  out.hs = std::move(hs);
  return out;
}

void require_spanning(const Matrix& thetas) {
  const Eigen::Index d = thetas.rows();
  if (thetas.cols() < d + 1) {
    throw AffineDimensionError("initialize_simplex: fewer points than vertices",
                               static_cast<std::size_t>(std::max<Eigen::Index>(thetas.cols() - 1, 0)));
  }
  const Matrix centered = thetas.colwise() - thetas.rowwise().mean();
  const auto rank = linalg::numerical_rank(linalg::thin_svd(centered).singular_values, 1e-9);
  if (rank < static_cast<std::size_t>(d)) {
    throw AffineDimensionError("initialize_simplex: points span dimension " +
                                   std::to_string(rank) + ", need " + std::to_string(d),
                               rank);
  }
}

bool encloses(const PolyhedralSimplex& p, const Matrix& thetas) {
  return p.slacks_points(thetas).minCoeff() >= 0.0;
}

PolyhedralSimplex greedy_start(const Matrix& thetas, Rng& rng, int restart_index) {
  const Eigen::Index d = thetas.rows();
  const Eigen::Index count = thetas.cols();
  const Vector center = thetas.rowwise().mean();
  std::vector<Eigen::Index> chosen;
  if (restart_index == 0) {
    Eigen::Index first = 0;
    (thetas.colwise() - center).colwise().squaredNorm().maxCoeff(&first);
    chosen.push_back(first);
  } else {
    chosen.push_back(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(count))));
  }
  const double scale = (thetas.colwise() - center).cwiseAbs().maxCoeff();
  while (static_cast<Eigen::Index>(chosen.size()) < d + 1) {
    const Vector origin = thetas.col(chosen.front());
    Matrix residual = thetas.colwise() - origin;
    if (chosen.size() > 1) {
      Matrix span(d, static_cast<Eigen::Index>(chosen.size()) - 1);
      for (std::size_t k = 1; k < chosen.size(); ++k) {
        span.col(static_cast<Eigen::Index>(k) - 1) = thetas.col(chosen[k]) - origin;
      }
      const Matrix q = linalg::thin_qr(span).q;
      residual -= q * (q.transpose() * residual);
    }
    Eigen::Index next = 0;
    const double dist = residual.colwise().norm().maxCoeff(&next);
    if (!(dist > 1e-12 * std::max(scale, 1e-300))) {
      throw AffineDimensionError("initialize_simplex: data is affinely degenerate",
                                 chosen.size() - 1);
    }
    chosen.push_back(next);
  }
  Matrix v(d, d + 1);
  for (Eigen::Index k = 0; k <= d; ++k) v.col(k) = thetas.col(chosen[static_cast<std::size_t>(k)]);
  // Swap passes: replacing vertex k by point p scales the volume by the
  // barycentric coordinate |lambda_k(p)|, so each swap takes the largest.
  Matrix lifted = Matrix::Ones(d + 1, count);
  lifted.topRows(d) = thetas;
  for (int pass = 0; pass < 10 * static_cast<int>(d + 1); ++pass) {
    Matrix vl = Matrix::Ones(d + 1, d + 1);
    vl.topRows(d) = v;
    const Matrix lambda = Eigen::PartialPivLU<Matrix>(vl).solve(lifted);
    Eigen::Index k = 0, j = 0;
    const double gain = lambda.cwiseAbs().maxCoeff(&k, &j);
    if (!(gain > 1.0 + 1e-9)) break;
    v.col(k) = thetas.col(j);
  }
  const Vector centroid = v.rowwise().mean();
  for (int step = 0; step < 10000; ++step) {
    v = ((v.colwise() - centroid) * 1.05).colwise() + centroid;
    PolyhedralSimplex p = to_polyhedral(Simplex(v));
    if (encloses(p, thetas)) return p;
  }
  throw InternalError("initialize_simplex: dilation failed to enclose the data");
}

PolyhedralSimplex regular_start(const Matrix& thetas, Rng& rng, int restart_index) {
  const Eigen::Index d = thetas.rows();
  const Vector center = thetas.rowwise().mean();
  const double radius = (thetas.colwise() - center).colwise().norm().maxCoeff();
  Simplex s = circumscribed_regular_simplex(static_cast<int>(d + 1), 1.05 * radius, center);
  if (restart_index > 0) {
    const Matrix q = rng.orthogonal(d);
    s = Simplex((q * (s.vertices().colwise() - center)).colwise() + center);
  }
  PolyhedralSimplex p = to_polyhedral(s);
  if (!encloses(p, thetas)) {
    throw InternalError("initialize_simplex: inflated regular simplex misses data");
  }
  return p;
}

}  // namespace

std::string_view to_string(InitStrategy s) {
  return s == InitStrategy::greedy_volume_max ? "greedy_volume_max" : "regular_inflated";
}

InitStrategy parse_init_strategy(std::string_view name) {
  if (name == "greedy_volume_max" || name == "greedy") return InitStrategy::greedy_volume_max;
  if (name == "regular_inflated" || name == "regular") return InitStrategy::regular_inflated;
  throw ValidationError("unknown init strategy '" + std::string(name) + "'");
}

void MvesConfig::validate() const {
  if (max_cycles < 0) throw ValidationError("MvesConfig: max_cycles must be >= 1 (or 0 for auto)");
  if (!(rel_tol > 0.0)) throw ValidationError("MvesConfig: rel_tol must be > 0");
  if (!(containment_tol >= 0.0)) throw ValidationError("MvesConfig: containment_tol must be >= 0");
  if (restarts < 1) throw ValidationError("MvesConfig: restarts must be >= 1");
  if (start_index < 0) throw ValidationError("MvesConfig: start_index must be >= 0");
}

PolyhedralSimplex initialize_simplex(const Matrix& thetas, int n, InitStrategy strategy,
                                     std::uint64_t seed, int restart_index) {
  if (n < 2 || thetas.rows() != n - 1) {
    throw DimensionError("initialize_simplex: thetas must have n - 1 rows");
  }
  linalg::require_finite(thetas, "initialize_simplex");
  require_spanning(thetas);
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(restart_index)));
  return strategy == InitStrategy::greedy_volume_max ? greedy_start(thetas, rng, restart_index)
                                                     : regular_start(thetas, rng, restart_index);
}

MvesResult solve_mves(const Matrix& pixels, int n_endmembers, const MvesConfig& cfg) {
  cfg.validate();
  if (n_endmembers < 2) throw DimensionError("solve_mves: need at least 2 endmembers");
  if (pixels.rows() < n_endmembers - 1) {
    throw AffineDimensionError("solve_mves: " + std::to_string(pixels.rows()) +
                                   " bands cannot hold " + std::to_string(n_endmembers) +
                                   " affinely independent endmembers",
                               static_cast<std::size_t>(pixels.rows()));
  }
  AffineChart chart = fit_data_chart(pixels, n_endmembers);
  const Matrix thetas = chart.to_chart_points(pixels);
  const int max_cycles = cfg.max_cycles > 0 ? cfg.max_cycles : 50 * n_endmembers;

  RunOutcome best;
  double best_det = -1.0;
  for (int restart = cfg.start_index; restart < cfg.start_index + cfg.restarts; ++restart) {
    const PolyhedralSimplex start =
        initialize_simplex(thetas, n_endmembers, cfg.init_strategy, cfg.seed, restart);
    RunOutcome run = alternate(to_half_spaces(start), thetas, cfg, max_cycles);
    const double det = std::abs(linalg::determinant(run.hs.f));
    if (det > best_det) {
      best_det = det;
      best = std::move(run);
    }
  }

  PolyhedralSimplex chart_simplex(best.hs.f.transpose(), best.hs.g);
  const Simplex chart_vertices = to_vertices(chart_simplex);
  Simplex endmembers(chart.to_ambient_points(chart_vertices.vertices()));

  const auto bary = barycentric_coordinates(endmembers, pixels);
  const double scale = std::max(1.0, endmembers.vertices().cwiseAbs().maxCoeff());
  const bool enclosed = bary.coordinates.minCoeff() >= -cfg.containment_tol &&
                        bary.residuals.maxCoeff() <= cfg.containment_tol * scale;
  const double volume = chart_simplex.volume();
  return MvesResult{std::move(endmembers), std::move(chart_simplex), std::move(chart), volume,
                    best.cycles,           best.converged,           enclosed,
                    std::move(best.history)};
}

std::vector<Vector> tangency_points(const PolyhedralSimplex& p, double r) {
  if (!(r > 0.0)) throw DomainError("tangency_points: radius must be > 0");
  const Eigen::Index d = p.dimension();
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(d + 1));
  for (Eigen::Index i = 0; i < d; ++i) {
    const double norm = p.h().col(i).norm();
    if (!(norm > 0.0)) throw DegenerateSimplexError("tangency_points: zero facet normal");
    out.push_back(-(r / norm) * p.h().col(i));
  }
  const Vector sum = p.h().rowwise().sum();
  const double norm = sum.norm();
  if (!(norm > 0.0)) throw DegenerateSimplexError("tangency_points: zero facet normal");
  out.push_back((r / norm) * sum);
  return out;
}

}  // namespace mves
