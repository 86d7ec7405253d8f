#include "mves/metrics.hpp"

#include "mves/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace mves {

double spectral_angle(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw ValidationError("spectral_angle: zero vector");
  double c = a.dot(b) / (na * nb);
  if (std::abs(c) > 1.0 + 1e-12 || std::isnan(c)) {
    throw ValidationError("spectral_angle: cosine " + std::to_string(c) + " outside [-1, 1]");
  }
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

std::vector<int> min_cost_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw DimensionError("min_cost_assignment: cost must be square");
  const int n = static_cast<int>(cost.rows());
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials u (rows), v (columns); way[j] is the previous column
  // on the augmenting path, match[j] the row assigned to column j.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> result(n, -1);
  for (int j = 1; j <= n; ++j) result[match[j] - 1] = j - 1;
  return result;
}

AngleErrorReport rms_angle_error(const Matrix& truth, const Matrix& estimate,
                                 AssignmentMethod method) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols() || truth.size() == 0) {
    throw DimensionError("rms_angle_error: truth and estimate must have the same shape");
  }
  linalg::require_finite(truth, "rms_angle_error truth");
  linalg::require_finite(estimate, "rms_angle_error estimate");
  const int n = static_cast<int>(truth.cols());
  Matrix sq(n, n);
  Matrix angles(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      angles(i, j) = spectral_angle(truth.col(i), estimate.col(j));
      sq(i, j) = angles(i, j) * angles(i, j);
    }
  }

  if (method == AssignmentMethod::automatic) {
    method = n <= 8 ? AssignmentMethod::exhaustive : AssignmentMethod::hungarian;
  }
  std::vector<int> best(n);
  if (method == AssignmentMethod::exhaustive) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best_sum = std::numeric_limits<double>::infinity();
    do {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += sq(i, perm[i]);
      if (sum < best_sum) {
        best_sum = sum;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    best = min_cost_assignment(sq);
  }

  AngleErrorReport report;
  report.best_permutation = best;
  report.per_endmember_angles_degrees.resize(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = angles(i, best[i]);
    report.per_endmember_angles_degrees[i] = a * 180.0 / std::numbers::pi;
    sum += a * a;
  }
  report.phi_degrees = std::sqrt(sum / n) * 180.0 / std::numbers::pi;
  return report;
}

}  // namespace mves
