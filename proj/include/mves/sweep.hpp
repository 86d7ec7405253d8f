#pragma once

#include "mves/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mves {

/// Purity sweep of the phase-transition experiment: for every purity cap r
/// on the grid, several synthetic scenes are unmixed and scored.
struct ExperimentConfig {
  int n_endmembers = 3;
  int n_bands = 50;
  int n_pixels = 500;
  std::vector<double> purity_grid;  // empty selects default_purity_grid(N)
  int trials_per_point = 10;
  std::uint64_t base_seed = 0;
  MvesConfig solver;
  std::string output_csv_path = "figure5.csv";
  std::optional<std::string> output_svg_path;
  int threads = 1;

  /// Grid values must lie in (1/sqrt(N), 1]; trials >= 1.
  void validate() const;
  std::vector<double> grid() const;
};

/// Ten evenly spaced caps in (1/sqrt(N), 1].
std::vector<double> default_purity_grid(int n_endmembers);

/// Parses a flat JSON object whose keys mirror ExperimentConfig; solver
/// settings are read from `max_cycles`, `rel_tol`, `containment_tol`,
/// `init_strategy`, `restarts`. Unknown keys throw ParseError.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct TrialRecord {
  int r_index = 0;
  double r = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  /// "ok" or the name of the error that stopped the trial.
  std::string status;
  std::string message;
  double phi_degrees = 0.0;
  double volume = 0.0;
  int cycles_used = 0;
  bool converged = false;
};

struct PointSummary {
  int r_index = 0;
  double r = 0.0;
  double mean_phi_degrees = 0.0;
  /// Sample standard deviation (n - 1 denominator); 0 for a single trial.
  double std_phi_degrees = 0.0;
  int successful_trials = 0;
};

struct SweepResult {
  std::vector<TrialRecord> trials;  // sorted by (r_index, trial)
  std::vector<PointSummary> summary;
};

/// Seed of one trial, derived from (base seed, r-index, trial).
std::uint64_t trial_seed(std::uint64_t base_seed, int r_index, int trial);

TrialRecord run_trial(const ExperimentConfig& cfg, int r_index, double r, int trial);
SweepResult run_sweep(const ExperimentConfig& cfg);
std::vector<PointSummary> summarize(const std::vector<TrialRecord>& trials,
                                    const std::vector<double>& grid);

void write_sweep_csv(std::ostream& out, const ExperimentConfig& cfg, const SweepResult& result);
std::string render_sweep_svg(const ExperimentConfig& cfg, const SweepResult& result);

}  // namespace mves
