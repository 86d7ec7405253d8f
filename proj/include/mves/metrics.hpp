#pragma once

#include "mves/linalg.hpp"

#include <vector>

namespace mves {

struct AngleErrorReport {
  double phi_degrees = 0.0;
  /// best_permutation[i] is the estimate column matched to truth column i.
  std::vector<int> best_permutation;
  Vector per_endmember_angles_degrees;
};

enum class AssignmentMethod { automatic, exhaustive, hungarian };

/// Permutation-minimized RMS spectral angle between the columns of truth
/// and estimate, in degrees. `automatic` enumerates permutations for N <= 8
/// and uses the Hungarian method on squared angles above that.
AngleErrorReport rms_angle_error(const Matrix& truth, const Matrix& estimate,
                                 AssignmentMethod method = AssignmentMethod::automatic);

/// Spectral angle between two vectors in radians. Cosines within 1e-12 of
/// [-1, 1] are clamped; anything further out is rejected.
double spectral_angle(const Vector& a, const Vector& b);

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian
/// method with potentials). result[row] = assigned column.
std::vector<int> min_cost_assignment(const Matrix& cost);

}  // namespace mves
