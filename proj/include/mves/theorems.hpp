#pragma once

#include "mves/linalg.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mves {

/// One machine-checked statement about the identifiability of the
/// minimum-volume enclosing simplex.
struct CheckOutcome {
  std::string name;
  /// What the check establishes, in words.
  std::string statement;
  bool passed = false;
  /// False for purely observational checks whose result is reported but
  /// does not decide the suite's exit status.
  bool asserted = true;
  std::vector<double> observed;
  std::vector<double> expected;
  double tolerance = 0.0;
  std::string details;
};

/// Regular simplex circumscribing the ball of `radius` in R^{n-1}: its
/// volume equals n^{n/2} (n-1)^{(n-1)/2} radius^{n-1} / (n-1)! (1e-9
/// relative) and every facet touches the ball (residual < 1e-10).
CheckOutcome check_regular_simplex_volume(int n, double radius);

/// Sphere of purity r in the abundance chart stays in the unit simplex iff
/// r <= 1/sqrt(n-1): all samples >= -1e-10 below, some < -1e-6 above.
CheckOutcome check_chart_ball_equivalence(int n, double r, int samples, std::uint64_t seed);

/// For r > 1/sqrt(n-1) the solver recovers the unit simplex from a dense
/// cloud of R(r) from every start (vertex RMS < 1e-3, volume 1e-6 rel.).
CheckOutcome check_unique_mves(int n, double r, int cloud_size, int restarts,
                               std::uint64_t seed);

/// For r <= 1/sqrt(n-1), random rotations of the regular simplex around the
/// chart ball of C(r) keep enclosing it at equal volume (1e-9 rel.).
CheckOutcome check_rotated_mves(int n, double r, int rotations, std::uint64_t seed);

/// N = 2: the solver returns exactly [min alpha, max alpha] (1e-12) and the
/// unit simplex iff 0 and 1 are among the alphas.
CheckOutcome check_two_endmember_interval(const Vector& alphas);
CheckOutcome check_two_endmember_interval(int abundance_count, int instances, std::uint64_t seed);

/// Edge pixels with common coefficient alpha plus filler points inside
/// their hull. Recovery of the unit simplex is asserted for n >= 4 and for
/// n = 3 with alpha > 2/3 + 0.02; otherwise the outcome is only reported.
CheckOutcome check_edge_pixel_recovery(int n, double alpha, int filler_points,
                                       std::uint64_t seed);

/// Sampled supremum of max_i s_i over R(r) against the closed form, within
/// [-1e-3, +1e-9], for every r on the grid.
CheckOutcome check_max_abundance_closed_form(int n, const std::vector<double>& r_grid,
                                             int samples, std::uint64_t seed);

/// Uniform purity estimate of uniform-alpha edge pixels is at least the
/// closed-form bound minus 0.01.
CheckOutcome check_edge_pixel_purity_bound(int n, double alpha, int samples,
                                           std::uint64_t seed);

/// Permutation-matched RMS distance between the columns of `vertices` and
/// the unit vectors e_1..e_N.
double vertex_rms_to_unit_simplex(const Matrix& vertices);

/// The default suite, keeping checks whose name contains `filter`.
std::vector<CheckOutcome> run_check_suite(std::string_view filter, std::uint64_t seed);

}  // namespace mves
