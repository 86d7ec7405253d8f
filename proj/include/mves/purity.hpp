#pragma once

#include "mves/geometry.hpp"
#include "mves/random.hpp"

#include <cstdint>
#include <memory>
#include <optional>

namespace mves {

/// Tolerance for "lies on the unit simplex" checks on abundance vectors.
inline constexpr double kSimplexTolerance = 1e-9;

/// Throws ValidationError naming the first column that is negative beyond
/// 1e-12 or whose sum is off by more than `sum_tol`.
void require_on_unit_simplex(const Matrix& abundances, double sum_tol = kSimplexTolerance);

/// max_n ||s_n|| over the abundance columns.
double best_purity(const Matrix& abundances);

/// s on the unit simplex and ||s|| <= r.
bool in_region_r(const Vector& s, double r);

/// Draws points of { s in T_e : ||s|| <= r } for a fixed number of
/// components n, using the canonical abundance chart.
class PurityRegionSampler {
 public:
  explicit PurityRegionSampler(int n);

  int components() const noexcept { return n_; }
  const AffineChart& chart() const noexcept { return chart_; }

  /// Point of norm r in aff{e_i} along a chart direction (unit vector in
  /// R^{n-1}); may leave the simplex.
  Vector sphere_point(double r, const Vector& direction) const;

  /// Boundary point of norm r inside T_e. Directions whose sphere point
  /// leaves T_e are moved onto the face obtained by clipping negative
  /// coordinates and pushed radially (around the face centroid) back to
  /// norm r; empty if that still fails.
  std::optional<Vector> boundary_point(double r, const Vector& direction) const;

  /// Dense sample of the region: uniform interior points, points on the
  /// sphere of norm r, and the same two kinds on random facets. Returns
  /// n x count.
  Matrix dense_cloud(double r, Eigen::Index count, Rng& rng) const;

 private:
  std::optional<Vector> interior_point(double r, Rng& rng) const;
  std::optional<Vector> facet_point(double r, Rng& rng, bool on_circle) const;

  int n_;
  AffineChart chart_;
  std::shared_ptr<const PurityRegionSampler> face_;  // (n-1)-component face, n >= 3
};

struct UniformPurityOptions {
  int n_samples = 20000;
  double tol = 1e-3;
  std::uint64_t seed = 0;
  double hull_tol = 1e-9;
};

struct UniformPurityEstimate {
  double value = 0.0;
  int samples_used = 0;
};

/// Sampled lower bound on the largest r with R(r) inside conv{abundances}:
/// bisection over [1/sqrt(N), rho], accepting r when every boundary sample
/// lies in the hull. The same directions are reused for every r.
UniformPurityEstimate uniform_purity_lower_bound(const Matrix& abundances,
                                                 const UniformPurityOptions& opts = {});

/// Largest single abundance attainable with ||s|| <= r:
/// (1 + sqrt((n-1)(n r^2 - 1))) / n.
double max_abundance_at_purity(int n, double r);

/// Off-diagonal mixing coefficients alpha_ij in (0.5, 1] of the edge pixels
/// alpha_ij e_i + (1 - alpha_ij) e_j. The diagonal is ignored.
class EdgePixelSpec {
 public:
  explicit EdgePixelSpec(Matrix alpha);
  static EdgePixelSpec uniform(int n, double alpha);

  const Matrix& alpha() const noexcept { return alpha_; }
  int components() const noexcept { return static_cast<int>(alpha_.rows()); }

 private:
  Matrix alpha_;
};

/// All N(N-1) edge pixels, ordered by (i, j) with i outer.
Matrix edge_pixels(const EdgePixelSpec& spec);

/// Lower bound on the uniform purity of edge-pixel data with a common
/// coefficient alpha: sqrt(((n alpha - 1)^2 / (n - 1) + 1) / n).
double edge_pixel_purity_bound(int n, double alpha);

/// Membership in the hull of uniform-alpha edge pixels, which is
/// { s in T_e : max_i s_i <= alpha }.
bool in_edge_pixel_hull(const Vector& s, double alpha);

struct PurityReport {
  double best_purity = 0.0;
  double uniform_purity_lower = 0.0;
  double threshold = 0.0;  // 1 / sqrt(N - 1)
  bool necessary_ok = false;
  bool sufficient_ok = false;
  int samples_used = 0;
};

PurityReport purity_report(const Matrix& abundances, const UniformPurityOptions& opts = {});

}  // namespace mves
