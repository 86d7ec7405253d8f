#pragma once

#include "mves/linalg.hpp"
#include "mves/random.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mves {

enum class EndmemberSource { synthetic_random, csv_library };

struct SceneConfig {
  int n_endmembers = 3;
  int n_bands = 224;
  int n_pixels = 1000;
  double purity_cap = 1.0;
  Vector dirichlet_param;  // empty selects (1/N) 1
  std::uint64_t seed = 0;
  EndmemberSource endmember_source = EndmemberSource::synthetic_random;
  std::filesystem::path library_path;
  std::vector<int> selected_indices;

  void validate() const;
};

/// X = A S with A: M x N endmembers, S: N x L abundances, X: M x L pixels.
struct Scene {
  Matrix endmembers;
  Matrix abundances;
  Matrix pixels;
};

/// Dirichlet abundances with every draw of norm above the purity cap
/// rejected, endmembers from the configured source. A and S come from
/// independent streams derived from `seed`.
///
/// Throws PurityCapError when the cap is within 1e-6 of 1/sqrt(N) or when
/// more than 99.9% of a 10^6-draw budget is rejected.
Scene generate_scene(const SceneConfig& cfg);

/// Entries uniform(0, 1), columns scaled to unit maximum, redrawn until the
/// condition number is below 1e6.
Matrix synthetic_endmembers(int bands, int count, Rng& rng);

/// Spectral library file: header `wavelength,name1,...`, then one row per
/// band holding the wavelength and one reflectance per material.
struct SpectralLibrary {
  Vector wavelengths;
  std::vector<std::string> names;
  Matrix reflectance;  // bands x materials
};

SpectralLibrary read_spectral_library(const std::filesystem::path& path);
void write_spectral_library(const std::filesystem::path& path, const SpectralLibrary& lib);

/// Selected library columns as an endmember matrix; throws RankError when
/// the selection is not of full column rank.
Matrix load_spectral_library(const std::filesystem::path& path,
                             const std::vector<int>& selected_indices);

}  // namespace mves
