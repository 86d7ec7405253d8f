#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>

namespace mves {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

/// Relative pivot threshold used by every factorization in the library.
inline constexpr double kPivotTolerance = 1e-12;

/// Throws ValidationError if any entry is NaN/Inf, DimensionError if empty.
void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what);

/// det(m) from a partially pivoted LU factorization.
double determinant(const Matrix& m);

struct Svd {
  Matrix u;                // rows x k, orthonormal columns
  Vector singular_values;  // k = min(rows, cols), non-increasing
  Matrix v;                // cols x k, orthonormal columns
};

/// Thin SVD, m = U diag(s) V^T.
Svd thin_svd(const Matrix& m);

/// Solves a x = b. Throws SingularMatrixError naming the first pivot with
/// |u_kk| <= kPivotTolerance * max|U|.
Vector solve_linear(const Matrix& a, const Vector& b);

/// a^{-1}, with the same singularity rule as solve_linear.
Matrix inverse(const Matrix& a);

struct Qr {
  Matrix q;  // rows x k, orthonormal columns
  Matrix r;  // k x cols, upper triangular
};

/// Thin Householder QR.
Qr thin_qr(const Matrix& m);

/// Number of singular values above rel_tol * largest.
std::size_t numerical_rank(const Vector& singular_values, double rel_tol);

/// n! as a double (exact for n <= 20).
double factorial(int n);

}  // namespace linalg
}  // namespace mves
