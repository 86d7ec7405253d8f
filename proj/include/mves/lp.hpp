#pragma once

#include "mves/linalg.hpp"

#include <string_view>

namespace mves {

/// maximize c^T x  subject to  A x <= b,  lower <= x <= upper.
/// Bounds default to +-infinity (free variables).
struct LinearProgram {
  Vector objective;
  Matrix constraints;
  Vector rhs;
  Vector lower;
  Vector upper;

  LinearProgram(Vector c, Matrix a, Vector b);
  LinearProgram(Vector c, Matrix a, Vector b, Vector lo, Vector hi);

  Eigen::Index variable_count() const { return objective.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string_view to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vector x;                     // optimal point (status == optimal)
  double objective_value = 0.0;
  Vector ray;                   // A d <= 0, c^T d > 0 (status == unbounded)
  int iterations = 0;
};

/// Dense revised simplex. Works on the dual  min b^T y, A^T y = c, y >= 0,
/// which has one row per variable: the programs solved here have few
/// variables and many constraints. Entering columns by most negative reduced
/// cost with lowest-index tie breaks; after a run of degenerate pivots the
/// phase switches to Bland's rule for good. The basis is refactorized every
/// iteration, so the result depends only on the input.
LpSolution solve_lp(const LinearProgram& p);

/// min over convex weights lambda of ||G lambda - p||_inf, computed through
/// its LP dual  max { w^T p - t : w^T g_j <= t, ||w||_1 <= 1 }.
double convex_hull_distance(const Vector& point, const Matrix& generators);

/// True iff p is within `tol` (infinity norm) of conv{columns of generators},
/// i.e. iff { lambda >= 0, 1^T lambda = 1, |G lambda - p| <= tol } is feasible.
bool in_convex_hull(const Vector& point, const Matrix& generators, double tol = 1e-9);

}  // namespace mves
