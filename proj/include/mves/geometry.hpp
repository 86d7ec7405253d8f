#pragma once

#include "mves/linalg.hpp"

namespace mves {

/// Singular-value ratio below which a vertex set is treated as degenerate.
inline constexpr double kDegenerateRatio = 1e-10;
/// Default absolute tolerance on barycentric coordinates.
inline constexpr double kMembershipTolerance = 1e-9;

/// An (N-1)-simplex given by N affinely independent vertices in R^M (M >= N-1).
/// Vertices are stored as the columns of an M x N matrix.
class Simplex {
 public:
  /// Throws DegenerateSimplexError when the edge matrix is rank deficient.
  explicit Simplex(Matrix vertices);

  const Matrix& vertices() const noexcept { return vertices_; }
  Vector vertex(Eigen::Index i) const { return vertices_.col(i); }
  Eigen::Index vertex_count() const noexcept { return vertices_.cols(); }
  Eigen::Index ambient_dimension() const noexcept { return vertices_.rows(); }
  Vector centroid() const { return vertices_.rowwise().mean(); }

  /// [b_1 - b_N, ..., b_{N-1} - b_N]
  Matrix edge_matrix() const;

 private:
  Matrix vertices_;
};

/// Semi-unitary affine parametrization s = C theta + d of an (N-1)-dimensional
/// affine set in R^M.
struct AffineChart {
  Matrix basis;  // C, M x (N-1), C^T C = I
  Vector offset;  // d

  Eigen::Index chart_dimension() const { return basis.cols(); }
  Vector to_chart(const Vector& s) const { return basis.transpose() * (s - offset); }
  Matrix to_chart_points(const Matrix& points) const {
    return basis.transpose() * (points.colwise() - offset);
  }
  Vector to_ambient(const Vector& theta) const { return basis * theta + offset; }
  Matrix to_ambient_points(const Matrix& thetas) const {
    return (basis * thetas).colwise() + offset;
  }
};

/// Half-space description of a simplex in R^{N-1}:
///   { theta | H^T theta + g >= 0,  -(H 1)^T theta + (1 - 1^T g) >= 0 }.
/// Column h_i of H is the inward normal of facet i; the last facet has
/// normal -H 1. The vertex form satisfies H = Wbar^{-T}, g = -H^T w_N.
class PolyhedralSimplex {
 public:
  /// Throws DegenerateSimplexError if H is singular.
  PolyhedralSimplex(Matrix h, Vector g);

  const Matrix& h() const noexcept { return h_; }
  const Vector& g() const noexcept { return g_; }
  Eigen::Index dimension() const noexcept { return h_.rows(); }

  /// The N constraint values at theta; all >= 0 iff theta is inside.
  Vector slacks(const Vector& theta) const;
  /// Slacks for many points at once, N x K.
  Matrix slacks_points(const Matrix& thetas) const;
  bool contains(const Vector& theta, double tol = kMembershipTolerance) const;
  /// 1 / ((N-1)! |det H|)
  double volume() const;

 private:
  Matrix h_;
  Vector g_;
};

/// Volume via the Gram determinant of the edge matrix.
double simplex_volume(const Simplex& s);

/// Chart of aff{e_1, ..., e_n}: d = 1/n, C from the SVD of I - 11^T/n with
/// the first nonzero entry of every column made positive.
AffineChart canonical_abundance_chart(int n);

/// Chart through the mean of `points` (columns) spanned by the leading n-1
/// left singular vectors of the centered data.
AffineChart fit_data_chart(const Matrix& points, int n);

/// Requires a simplex living in R^{N-1}.
PolyhedralSimplex to_polyhedral(const Simplex& s);
Simplex to_vertices(const PolyhedralSimplex& p);

/// Barycentric coordinates of each column of `points`, N x K, plus the
/// residual of the affine fit per point (nonzero off the affine hull).
struct Barycentric {
  Matrix coordinates;
  Vector residuals;
};
Barycentric barycentric_coordinates(const Simplex& s, const Matrix& points);

bool contains(const Simplex& s, const Vector& point, double tol = kMembershipTolerance);

/// Maps every vertex v to q v; q must be orthogonal within 1e-10.
Simplex rotate_in_chart(const Simplex& s, const Matrix& q);

/// Regular simplex in R^{n-1} whose facets are tangent to the ball of radius
/// `inradius` around `center`.
Simplex circumscribed_regular_simplex(int n, double inradius, const Vector& center);

}  // namespace mves
