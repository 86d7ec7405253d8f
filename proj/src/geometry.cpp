#include "mves/geometry.hpp"

#include "mves/errors.hpp"

#include <cmath>
#include <string>

namespace mves {

namespace {

void fix_column_signs(Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) > 1e-12) {
        if (m(i, j) < 0.0) m.col(j) = -m.col(j);
        break;
      }
    }
  }
}

}  // namespace

Simplex::Simplex(Matrix vertices) : vertices_(std::move(vertices)) {
  linalg::require_finite(vertices_, "Simplex");
  if (vertices_.cols() < 2) {
    throw DimensionError("Simplex: need at least 2 vertices");
  }
  if (vertices_.rows() < vertices_.cols() - 1) {
    throw DimensionError("Simplex: " + std::to_string(vertices_.cols()) +
                         " vertices cannot be affinely independent in R^" +
                         std::to_string(vertices_.rows()));
  }
  const Vector sv = linalg::thin_svd(edge_matrix()).singular_values;
  if (!(sv.minCoeff() > kDegenerateRatio * sv.maxCoeff())) {
    throw DegenerateSimplexError("Simplex: vertices are affinely dependent");
  }
}

Matrix Simplex::edge_matrix() const {
  const Eigen::Index n = vertices_.cols();
  return vertices_.leftCols(n - 1).colwise() - vertices_.col(n - 1);
}

PolyhedralSimplex::PolyhedralSimplex(Matrix h, Vector g) : h_(std::move(h)), g_(std::move(g)) {
  linalg::require_finite(h_, "PolyhedralSimplex");
  linalg::require_finite(g_, "PolyhedralSimplex");
  if (h_.rows() != h_.cols() || g_.size() != h_.rows()) {
    throw DimensionError("PolyhedralSimplex: H must be square and match g");
  }
  const Vector sv = linalg::thin_svd(h_).singular_values;
  if (!(sv.minCoeff() > kDegenerateRatio * sv.maxCoeff())) {
    throw DegenerateSimplexError("PolyhedralSimplex: H is singular");
  }
}

Vector PolyhedralSimplex::slacks(const Vector& theta) const {
  return slacks_points(theta).col(0);
}

Matrix PolyhedralSimplex::slacks_points(const Matrix& thetas) const {
  if (thetas.rows() != dimension()) {
    throw DimensionError("PolyhedralSimplex: point dimension mismatch");
  }
  const Eigen::Index d = dimension();
  Matrix out(d + 1, thetas.cols());
  out.topRows(d) = (h_.transpose() * thetas).colwise() + g_;
  out.row(d) = Eigen::RowVectorXd::Ones(d) * (-out.topRows(d)) +
               Eigen::RowVectorXd::Ones(thetas.cols());
  return out;
}

bool PolyhedralSimplex::contains(const Vector& theta, double tol) const {
  return slacks(theta).minCoeff() >= -tol;
}

double PolyhedralSimplex::volume() const {
  return 1.0 / (linalg::factorial(static_cast<int>(dimension())) *
                std::abs(linalg::determinant(h_)));
}

double simplex_volume(const Simplex& s) {
  const Matrix e = s.edge_matrix();
  const double gram = linalg::determinant(e.transpose() * e);
  return std::sqrt(std::max(gram, 0.0)) /
         linalg::factorial(static_cast<int>(s.vertex_count() - 1));
}

AffineChart canonical_abundance_chart(int n) {
  if (n < 2) throw DimensionError("canonical_abundance_chart: n must be >= 2");
  const Matrix centering =
      Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  Matrix c = linalg::thin_svd(centering).u.leftCols(n - 1);
  fix_column_signs(c);
  return {std::move(c), Vector::Constant(n, 1.0 / static_cast<double>(n))};
}

AffineChart fit_data_chart(const Matrix& points, int n) {
  if (n < 2) throw DimensionError("fit_data_chart: n must be >= 2");
  linalg::require_finite(points, "fit_data_chart");
  const Vector mean = points.rowwise().mean();
  const Matrix centered = points.colwise() - mean;
  const auto svd = linalg::thin_svd(centered);
  const std::size_t rank = linalg::numerical_rank(svd.singular_values, 1e-9);
  if (rank < static_cast<std::size_t>(n - 1)) {
    throw AffineDimensionError("fit_data_chart: data spans an affine set of dimension " +
                                   std::to_string(rank) + ", need " + std::to_string(n - 1),
                               rank);
  }
  Matrix c = svd.u.leftCols(n - 1);
  fix_column_signs(c);
  return {std::move(c), mean};
}

PolyhedralSimplex to_polyhedral(const Simplex& s) {
  const Eigen::Index dim = s.vertex_count() - 1;
  if (s.ambient_dimension() != dim) {
    throw DimensionError("to_polyhedral: simplex must live in R^{N-1}");
  }
  const Matrix wbar_inv = linalg::inverse(s.edge_matrix());
  Matrix h = wbar_inv.transpose();
  Vector g = -wbar_inv * s.vertex(dim);
  return PolyhedralSimplex(std::move(h), std::move(g));
}

Simplex to_vertices(const PolyhedralSimplex& p) {
  const Eigen::Index dim = p.dimension();
  const Matrix wbar = linalg::inverse(p.h()).transpose();
  const Vector last = -wbar * p.g();
  Matrix v(dim, dim + 1);
  v.leftCols(dim) = wbar.colwise() + last;
  v.col(dim) = last;
  return Simplex(std::move(v));
}

Barycentric barycentric_coordinates(const Simplex& s, const Matrix& points) {
  if (points.rows() != s.ambient_dimension()) {
    throw DimensionError("barycentric_coordinates: point dimension mismatch");
  }
  const Eigen::Index n = s.vertex_count();
  const Matrix e = s.edge_matrix();
  const Matrix rhs = points.colwise() - s.vertex(n - 1);
  const Eigen::ColPivHouseholderQR<Matrix> qr(e);
  const Matrix partial = qr.solve(rhs);
  Barycentric out;
  out.coordinates.resize(n, points.cols());
  out.coordinates.topRows(n - 1) = partial;
  out.coordinates.row(n - 1) =
      Eigen::RowVectorXd::Ones(points.cols()) - partial.colwise().sum();
  out.residuals = (e * partial - rhs).colwise().norm().transpose();
  return out;
}

bool contains(const Simplex& s, const Vector& point, double tol) {
  const auto bary = barycentric_coordinates(s, point);
  const double scale = std::max(1.0, s.vertices().cwiseAbs().maxCoeff());
  return bary.residuals[0] <= tol * scale && bary.coordinates.minCoeff() >= -tol &&
         std::abs(bary.coordinates.sum() - 1.0) <= tol;
}

Simplex rotate_in_chart(const Simplex& s, const Matrix& q) {
  if (q.rows() != q.cols() || q.rows() != s.ambient_dimension()) {
    throw DimensionError("rotate_in_chart: rotation must be square and match the chart");
  }
  const Matrix defect = q.transpose() * q - Matrix::Identity(q.rows(), q.cols());
  if (defect.cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("rotate_in_chart: matrix is not orthogonal");
  }
  return Simplex(q * s.vertices());
}

Simplex circumscribed_regular_simplex(int n, double inradius, const Vector& center) {
  if (n < 2) throw DimensionError("circumscribed_regular_simplex: n must be >= 2");
  if (!(inradius > 0.0)) throw DomainError("circumscribed_regular_simplex: radius must be > 0");
  if (center.size() != n - 1) throw DimensionError("circumscribed_regular_simplex: center size");
  // Rows of C are n unit-norm-after-scaling directions with pairwise
  // inner products -1/(n-1).
  const Matrix directions = canonical_abundance_chart(n).basis.transpose();
  const double row_norm = std::sqrt(1.0 - 1.0 / n);
  Matrix v = (directions * ((n - 1) * inradius / row_norm)).colwise() + center;
  return Simplex(std::move(v));
}

}  // namespace mves
