#include "mves/purity.hpp"

#include "mves/errors.hpp"
#include "mves/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace mves {

namespace {

void require_components(int n, const char* what) {
  if (n < 2) throw DimensionError(std::string(what) + ": need at least 2 components");
}

// Drops generators inside the hull of the remaining ones, one at a time so
// that duplicated columns keep a single representative.
Matrix extreme_columns(const Matrix& g) {
  if (g.cols() <= g.rows() + 1) return g;
  std::vector<Eigen::Index> alive(static_cast<std::size_t>(g.cols()));
  std::iota(alive.begin(), alive.end(), Eigen::Index{0});
  for (Eigen::Index j = g.cols() - 1; j >= 0 && alive.size() > 1; --j) {
    Matrix others(g.rows(), static_cast<Eigen::Index>(alive.size()) - 1);
    Eigen::Index c = 0;
    for (Eigen::Index k : alive) {
      if (k != j) others.col(c++) = g.col(k);
    }
    if (convex_hull_distance(g.col(j), others) <= 1e-12) {
      alive.erase(std::find(alive.begin(), alive.end(), j));
    }
  }
  Matrix out(g.rows(), static_cast<Eigen::Index>(alive.size()));
  for (std::size_t k = 0; k < alive.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = g.col(alive[k]);
  return out;
}

}  // namespace

void require_on_unit_simplex(const Matrix& abundances, double sum_tol) {
  if (abundances.cols() == 0 || abundances.rows() == 0) {
    throw ArgumentError("abundances: empty set");
  }
  linalg::require_finite(abundances, "abundances");
  // Report the worst offender so the user can locate the bad pixel.
  Eigen::Index worst = -1;
  double worst_violation = 0.0;
  for (Eigen::Index j = 0; j < abundances.cols(); ++j) {
    const double low = abundances.col(j).minCoeff();
    const double off = std::abs(abundances.col(j).sum() - 1.0);
    const double violation = std::max(low < -1e-12 ? -low : 0.0, off > sum_tol ? off : 0.0);
    if (violation > worst_violation) {
      worst_violation = violation;
      worst = j;
    }
  }
  if (worst >= 0) {
    throw ValidationError("abundances: column " + std::to_string(worst) +
                          " is the worst off the unit simplex (min " +
                          std::to_string(abundances.col(worst).minCoeff()) + ", sum " +
                          std::to_string(abundances.col(worst).sum()) + ")");
  }
}

double best_purity(const Matrix& abundances) {
  require_on_unit_simplex(abundances);
  return abundances.colwise().norm().maxCoeff();
}

bool in_region_r(const Vector& s, double r) {
  if (s.size() == 0 || !s.allFinite()) return false;
  return s.minCoeff() >= -kSimplexTolerance && std::abs(s.sum() - 1.0) <= kSimplexTolerance &&
         s.norm() <= r + 1e-12;
}

PurityRegionSampler::PurityRegionSampler(int n)
    : n_(n), chart_(canonical_abundance_chart(std::max(n, 2))) {
  require_components(n, "PurityRegionSampler");
  if (n >= 3) face_ = std::make_shared<const PurityRegionSampler>(n - 1);
}

Vector PurityRegionSampler::sphere_point(double r, const Vector& direction) const {
  const double radius = std::sqrt(std::max(r * r - 1.0 / n_, 0.0));
  return chart_.to_ambient(radius * direction);
}

std::optional<Vector> PurityRegionSampler::boundary_point(double r, const Vector& direction) const {
  Vector s = sphere_point(r, direction);
  if (s.minCoeff() >= -1e-12) return s;
  Vector q = s.cwiseMax(0.0);
  const double total = q.sum();
  if (!(total > 0.0)) return std::nullopt;
  q /= total;
  int support = 0;
  for (Eigen::Index i = 0; i < q.size(); ++i) support += q[i] > 0.0 ? 1 : 0;
  const double face_norm2 = 1.0 / support;
  if (r * r < face_norm2) return std::nullopt;
  Vector centroid = Vector::Zero(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) centroid[i] = face_norm2;
  }
  const Vector u = q - centroid;
  const double un = u.norm();
  if (!(un > 0.0)) return std::nullopt;
  Vector p = centroid + (std::sqrt(r * r - face_norm2) / un) * u;
  if (p.minCoeff() < -1e-12) return std::nullopt;
  return p;
}

std::optional<Vector> PurityRegionSampler::interior_point(double r, Rng& rng) const {
  // Uniform on R(r) by rejection from whichever of the chart ball and the
  // simplex has the smaller volume.
  const int dim = n_ - 1;
  const double radius = std::sqrt(std::max(r * r - 1.0 / n_, 0.0));
  const double ball_volume = std::pow(M_PI, dim / 2.0) * std::pow(radius, dim) /
                             std::tgamma(dim / 2.0 + 1.0);
  const double simplex_volume = std::sqrt(static_cast<double>(n_)) / linalg::factorial(dim);
  if (ball_volume <= simplex_volume) {
    const double scale = radius * std::pow(rng.uniform(), 1.0 / dim);
    Vector s = chart_.to_ambient(scale * rng.unit_direction(dim));
    if (s.minCoeff() < 0.0) return std::nullopt;
    return s;
  }
  Vector s = rng.dirichlet(Vector::Ones(n_));
  if (s.norm() > r) return std::nullopt;
  return s;
}

std::optional<Vector> PurityRegionSampler::facet_point(double r, Rng& rng, bool on_circle) const {
  if (!face_ || r * r < 1.0 / (n_ - 1)) return std::nullopt;
  const std::optional<Vector> face = on_circle
                                         ? face_->boundary_point(r, rng.unit_direction(n_ - 2))
                                         : face_->interior_point(r, rng);
  if (!face) return std::nullopt;
  const auto zero = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n_)));
  Vector s(n_);
  for (Eigen::Index i = 0, k = 0; i < n_; ++i) s[i] = (i == zero) ? 0.0 : (*face)[k++];
  return s;
}

Matrix PurityRegionSampler::dense_cloud(double r, Eigen::Index count, Rng& rng) const {
  if (!(r >= 1.0 / std::sqrt(static_cast<double>(n_)) - 1e-12) || r > 1.0 + 1e-12) {
    throw DomainError("dense_cloud: r outside [1/sqrt(n), 1]");
  }
  Matrix out(n_, count);
  Eigen::Index filled = 0;
  const bool facets = n_ >= 3 && r * r >= 1.0 / (n_ - 1);
  const Eigen::Index max_attempts = 1000 * count + 10000;
  for (Eigen::Index attempt = 0; filled < count && attempt < max_attempts; ++attempt) {
    const int kind = static_cast<int>(filled % 20);
    std::optional<Vector> s;
    if (kind < 10) {
      s = interior_point(r, rng);
    } else if (kind < 14 || !facets) {
      s = boundary_point(r, rng.unit_direction(n_ - 1));
    } else if (kind < 17) {
      s = facet_point(r, rng, false);
    } else {
      s = facet_point(r, rng, true);
    }
    if (s) out.col(filled++) = *s;
  }
  if (filled < count) throw InternalError("dense_cloud: sampler starved");
  return out;
}

UniformPurityEstimate uniform_purity_lower_bound(const Matrix& abundances,
                                                 const UniformPurityOptions& opts) {
  require_on_unit_simplex(abundances);
  const int n = static_cast<int>(abundances.rows());
  require_components(n, "uniform_purity_lower_bound");
  if (opts.n_samples < 1 || !(opts.tol > 0.0)) {
    throw ValidationError("uniform_purity_lower_bound: need n_samples >= 1 and tol > 0");
  }
  const Matrix centered = abundances.colwise() - abundances.rowwise().mean();
  const auto rank = linalg::numerical_rank(linalg::thin_svd(centered).singular_values, 1e-9);
  if (rank < static_cast<std::size_t>(n - 1)) {
    throw AffineDimensionError("uniform_purity_lower_bound: abundances span dimension " +
                                   std::to_string(rank) + ", need " + std::to_string(n - 1),
                               rank);
  }

  const Matrix generators = extreme_columns(abundances);
  const PurityRegionSampler sampler(n);
  Rng rng(opts.seed);
  std::vector<Vector> directions;
  directions.reserve(static_cast<std::size_t>(opts.n_samples));
  for (int k = 0; k < opts.n_samples; ++k) directions.push_back(rng.unit_direction(n - 1));

  // Directions that failed before are retried first.
  std::vector<std::size_t> witnesses;
  int last_used = 0;
  auto accepted = [&](double r) {
    auto inside = [&](std::size_t k) {
      const auto p = sampler.boundary_point(r, directions[k]);
      return !p || in_convex_hull(*p, generators, opts.hull_tol);
    };
    for (std::size_t w : witnesses) {
      if (!inside(w)) return false;
    }
    int used = 0;
    for (std::size_t k = 0; k < directions.size(); ++k) {
      const auto p = sampler.boundary_point(r, directions[k]);
      if (!p) continue;
      ++used;
      if (!in_convex_hull(*p, generators, opts.hull_tol)) {
        witnesses.push_back(k);
        return false;
      }
    }
    last_used = used;
    return true;
  };

  const double floor = 1.0 / std::sqrt(static_cast<double>(n));
  const double rho = abundances.colwise().norm().maxCoeff();
  if (accepted(rho)) return {rho, last_used};
  double lo = floor;
  double hi = rho;
  int used_at_lo = 0;
  if (accepted(lo)) used_at_lo = last_used;
  while (hi - lo > opts.tol) {
    const double mid = 0.5 * (lo + hi);
    if (accepted(mid)) {
      lo = mid;
      used_at_lo = last_used;
    } else {
      hi = mid;
    }
  }
  return {lo, used_at_lo};
}

double max_abundance_at_purity(int n, double r) {
  require_components(n, "max_abundance_at_purity");
  const double floor = 1.0 / std::sqrt(static_cast<double>(n));
  if (!(r >= floor - 1e-12) || !(r <= 1.0 + 1e-12)) {
    throw DomainError("max_abundance_at_purity: r must lie in [1/sqrt(n), 1]");
  }
  // Written as 1/n + sqrt((n-1)/n) * rho with rho the chart radius, the same
  // expression the sampler uses, so both agree near r = 1/sqrt(n) where the
  // square root amplifies rounding.
  const double rho = std::sqrt(std::max(r * r - 1.0 / n, 0.0));
  return 1.0 / n + std::sqrt(static_cast<double>(n - 1) / n) * rho;
}

EdgePixelSpec::EdgePixelSpec(Matrix alpha) : alpha_(std::move(alpha)) {
  if (alpha_.rows() != alpha_.cols() || alpha_.rows() < 2) {
    throw DimensionError("EdgePixelSpec: alpha must be square with n >= 2");
  }
  for (Eigen::Index i = 0; i < alpha_.rows(); ++i) {
    for (Eigen::Index j = 0; j < alpha_.cols(); ++j) {
      if (i == j) continue;
      const double a = alpha_(i, j);
      if (!(a > 0.5 && a <= 1.0)) {
        throw ValidationError("EdgePixelSpec: alpha(" + std::to_string(i) + "," +
                              std::to_string(j) + ") = " + std::to_string(a) +
                              " outside (0.5, 1]");
      }
    }
  }
}

EdgePixelSpec EdgePixelSpec::uniform(int n, double alpha) {
  require_components(n, "EdgePixelSpec");
  return EdgePixelSpec(Matrix::Constant(n, n, alpha));
}

Matrix edge_pixels(const EdgePixelSpec& spec) {
  const int n = spec.components();
  Matrix out = Matrix::Zero(n, n * (n - 1));
  Eigen::Index col = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double a = spec.alpha()(i, j);
      out(i, col) = a;
      out(j, col) = 1.0 - a;
      ++col;
    }
  }
  return out;
}

double edge_pixel_purity_bound(int n, double alpha) {
  require_components(n, "edge_pixel_purity_bound");
  if (!(alpha > 0.5 && alpha <= 1.0)) {
    throw DomainError("edge_pixel_purity_bound: alpha must lie in (0.5, 1]");
  }
  const double t = n * alpha - 1.0;
  return std::sqrt((t * t / (n - 1) + 1.0) / n);
}

bool in_edge_pixel_hull(const Vector& s, double alpha) {
  require_on_unit_simplex(s);
  return s.maxCoeff() <= alpha + 1e-12;
}

PurityReport purity_report(const Matrix& abundances, const UniformPurityOptions& opts) {
  PurityReport report;
  report.best_purity = best_purity(abundances);
  const auto gamma = uniform_purity_lower_bound(abundances, opts);
  report.uniform_purity_lower = gamma.value;
  report.samples_used = gamma.samples_used;
  report.threshold = 1.0 / std::sqrt(static_cast<double>(abundances.rows() - 1));
  report.necessary_ok = report.best_purity > report.threshold;
  report.sufficient_ok = report.uniform_purity_lower > report.threshold;
  return report;
}

}  // namespace mves
