#pragma once

#include "mves/geometry.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace mves {

enum class InitStrategy { greedy_volume_max, regular_inflated };

std::string_view to_string(InitStrategy s);
/// Accepts "greedy_volume_max" / "greedy" and "regular_inflated" / "regular".
InitStrategy parse_init_strategy(std::string_view name);

struct MvesConfig {
  int max_cycles = 0;  // 0 selects 50 * N
  double rel_tol = 1e-8;
  double containment_tol = 1e-7;
  InitStrategy init_strategy = InitStrategy::greedy_volume_max;
  int restarts = 1;
  std::uint64_t seed = 0;
  /// Index of the first initialization. Index 0 is the plain strategy;
  /// higher indices are seeded perturbations of it.
  int start_index = 0;

  /// Throws ValidationError on max_cycles < 0, rel_tol <= 0 or restarts < 1.
  void validate() const;
};

struct MvesResult {
  Simplex estimated_endmembers;    // ambient, one vertex per column
  PolyhedralSimplex chart_simplex;  // in the data chart
  AffineChart chart;
  double volume = 0.0;
  int cycles_used = 0;
  bool converged = false;
  bool all_points_enclosed = false;
  /// |det H| after initialization and after every full cycle of the best run.
  std::vector<double> det_history;
};

/// Minimum-volume enclosing simplex of the pixels (columns, M x L).
///
/// The pixels are reduced to an (N-1)-dimensional chart and the simplex is
/// kept in half-space form (H, g). Enclosing every chart point is linear in
/// (H, g), and the volume is 1 / ((N-1)! |det H|). det H is affine in any
/// single facet normal, so each cycle visits the facets in order and solves
/// two LPs per facet (maximize and minimize the cofactor expansion) over
/// that facet's (h_i, g_i), keeping whichever raises |det H|. A final LP
/// translates the simplex to center it in its feasible translations.
MvesResult solve_mves(const Matrix& pixels, int n_endmembers, const MvesConfig& cfg = {});

/// Starting simplex in chart coordinates (thetas: (N-1) x L). The result
/// always encloses every theta. Restarts beyond the first perturb the start
/// (random first point or random rotation) using `seed`.
PolyhedralSimplex initialize_simplex(const Matrix& thetas, int n, InitStrategy strategy,
                                     std::uint64_t seed, int restart_index = 0);

/// Candidate contact points of a centered ball of radius r with the facets
/// of p: -r h_i / ||h_i|| for i < N and r H1 / ||H1||.
std::vector<Vector> tangency_points(const PolyhedralSimplex& p, double r);

}  // namespace mves
