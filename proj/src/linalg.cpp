#include "mves/linalg.hpp"

#include "mves/errors.hpp"

#include <string>

namespace mves::linalg {

namespace {

void require_square(const Matrix& m, std::string_view what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// Returns the LU factorization after checking every pivot against the scale
// of the reduced matrix.
Eigen::PartialPivLU<Matrix> checked_lu(const Matrix& a, std::string_view what) {
  require_square(a, what);
  require_finite(a, what);
  Eigen::PartialPivLU<Matrix> lu(a);
  const Matrix& packed = lu.matrixLU();
  const Matrix upper = packed.triangularView<Eigen::Upper>();
  const double scale = upper.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < packed.rows(); ++k) {
    if (!(std::abs(packed(k, k)) > kPivotTolerance * scale)) {
      throw SingularMatrixError(std::string(what) + ": matrix is singular at pivot " +
                                    std::to_string(k),
                                static_cast<std::size_t>(k));
    }
  }
  return lu;
}

}  // namespace

void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what) {
  if (m.size() == 0) {
    throw DimensionError(std::string(what) + ": empty input");
  }
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + ": non-finite entry");
  }
}

double determinant(const Matrix& m) {
  require_square(m, "determinant");
  require_finite(m, "determinant");
  return Eigen::PartialPivLU<Matrix>(m).determinant();
}

Svd thin_svd(const Matrix& m) {
  require_finite(m, "thin_svd");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Vector solve_linear(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows()) {
    throw DimensionError("solve_linear: right-hand side length " + std::to_string(b.size()) +
                         " does not match " + std::to_string(a.rows()) + " rows");
  }
  require_finite(b, "solve_linear");
  return checked_lu(a, "solve_linear").solve(b);
}

Matrix inverse(const Matrix& a) { return checked_lu(a, "inverse").inverse(); }

Qr thin_qr(const Matrix& m) {
  require_finite(m, "thin_qr");
  const Eigen::Index k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), k);
  Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return {std::move(q), std::move(r)};
}

std::size_t numerical_rank(const Vector& singular_values, double rel_tol) {
  if (singular_values.size() == 0) return 0;
  const double largest = singular_values.maxCoeff();
  if (!(largest > 0.0)) return 0;
  std::size_t rank = 0;
  for (double s : singular_values) {
    if (s > rel_tol * largest) ++rank;
  }
  return rank;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace mves::linalg
