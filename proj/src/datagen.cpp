#include "mves/datagen.hpp"

#include "mves/csv.hpp"
#include "mves/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

namespace mves {

namespace {

constexpr long long kDrawBudget = 1'000'000;

double condition_number(const Matrix& m) {
  const Vector sv = linalg::thin_svd(m).singular_values;
  return sv.minCoeff() > 0.0 ? sv.maxCoeff() / sv.minCoeff()
                             : std::numeric_limits<double>::infinity();
}

Matrix draw_abundances(const SceneConfig& cfg, const Vector& mu, Rng& rng) {
  const int n = cfg.n_endmembers;
  Matrix s(n, cfg.n_pixels);
  long long draws = 0;
  long long accepted_total = 0;
  Eigen::Index filled = 0;
  while (filled < cfg.n_pixels) {
    const Vector d = rng.dirichlet(mu);
    ++draws;
    if (d.norm() <= cfg.purity_cap) {
      s.col(filled++) = d;
      ++accepted_total;
    }
    if (draws % kDrawBudget == 0 && filled < cfg.n_pixels) {
      const double rejection = 1.0 - static_cast<double>(accepted_total) / draws;
      if (rejection > 0.999) {
        throw PurityCapError("generate_scene: purity cap " + std::to_string(cfg.purity_cap) +
                             " rejected " + std::to_string(rejection * 100.0) + "% of " +
                             std::to_string(draws) + " Dirichlet draws");
      }
    }
  }
  return s;
}

bool full_row_rank(const Matrix& s) {
  return linalg::numerical_rank(linalg::thin_svd(s).singular_values, 1e-10) ==
         static_cast<std::size_t>(s.rows());
}

}  // namespace

void SceneConfig::validate() const {
  if (n_endmembers < 2) throw ValidationError("SceneConfig: need at least 2 endmembers");
  if (n_pixels < n_endmembers) throw ValidationError("SceneConfig: need L >= N pixels");
  if (endmember_source == EndmemberSource::synthetic_random && n_bands < n_endmembers) {
    throw ValidationError("SceneConfig: need M >= N bands");
  }
  if (!(purity_cap <= 1.0) || !std::isfinite(purity_cap)) {
    throw ValidationError("SceneConfig: purity cap must be <= 1");
  }
  if (dirichlet_param.size() != 0) {
    if (dirichlet_param.size() != n_endmembers) {
      throw ValidationError("SceneConfig: Dirichlet parameter must have N entries");
    }
    if (!(dirichlet_param.minCoeff() > 0.0) || !dirichlet_param.allFinite()) {
      throw ValidationError("SceneConfig: Dirichlet parameter must be positive");
    }
  }
  if (endmember_source == EndmemberSource::csv_library &&
      static_cast<int>(selected_indices.size()) != n_endmembers) {
    throw ValidationError("SceneConfig: select exactly N library columns");
  }
}

Matrix synthetic_endmembers(int bands, int count, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix a(bands, count);
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = rng.uniform();
      const double peak = a.col(j).maxCoeff();
      if (peak > 0.0) a.col(j) /= peak;
    }
    if (condition_number(a) < 1e6) return a;
  }
  throw RankError("synthetic_endmembers: could not draw a well-conditioned matrix");
}

Scene generate_scene(const SceneConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_endmembers;
  const double floor = 1.0 / std::sqrt(static_cast<double>(n));
  if (cfg.purity_cap <= floor + 1e-6) {
    throw PurityCapError("generate_scene: purity cap " + std::to_string(cfg.purity_cap) +
                         " is too close to 1/sqrt(N) = " + std::to_string(floor));
  }
  const Vector mu = cfg.dirichlet_param.size() ? cfg.dirichlet_param
                                               : Vector::Constant(n, 1.0 / n);

  Scene scene;
  if (cfg.endmember_source == EndmemberSource::csv_library) {
    scene.endmembers = load_spectral_library(cfg.library_path, cfg.selected_indices);
  } else {
    Rng rng(derive_seed(cfg.seed, 1));
    scene.endmembers = synthetic_endmembers(cfg.n_bands, n, rng);
  }

  Rng rng(derive_seed(cfg.seed, 2));
  bool ok = false;
  for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
    scene.abundances = draw_abundances(cfg, mu, rng);
    ok = full_row_rank(scene.abundances);
  }
  if (!ok) throw RankError("generate_scene: abundance matrix is rank deficient after 3 attempts");
  scene.pixels = scene.endmembers * scene.abundances;
  return scene;
}

SpectralLibrary read_spectral_library(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open spectral library " + path.string(), 0);
  std::string line;
  std::size_t number = 0;
  SpectralLibrary lib;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) break;
  }
  const auto header = csv::split_record(line);
  if (header.size() < 2 || header.front() != "wavelength") {
    throw ParseError("line " + std::to_string(number) +
                         ": spectral library header must start with 'wavelength'",
                     number);
  }
  lib.names.assign(header.begin() + 1, header.end());
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = csv::split_record(line);
    if (fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(number) + ": expected " +
                           std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       number);
    }
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(csv::parse_real(f, number));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("spectral library has no data rows", number);
  const auto bands = static_cast<Eigen::Index>(rows.size());
  const auto materials = static_cast<Eigen::Index>(lib.names.size());
  lib.wavelengths.resize(bands);
  lib.reflectance.resize(bands, materials);
  for (Eigen::Index i = 0; i < bands; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    lib.wavelengths[i] = row[0];
    for (Eigen::Index j = 0; j < materials; ++j) lib.reflectance(i, j) = row[static_cast<std::size_t>(j) + 1];
  }
  return lib;
}

void write_spectral_library(const std::filesystem::path& path, const SpectralLibrary& lib) {
  if (lib.reflectance.rows() != lib.wavelengths.size() ||
      lib.reflectance.cols() != static_cast<Eigen::Index>(lib.names.size())) {
    throw DimensionError("write_spectral_library: inconsistent library shape");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "wavelength";
  for (const auto& name : lib.names) out << ',' << name;
  out << '\n';
  for (Eigen::Index i = 0; i < lib.reflectance.rows(); ++i) {
    out << csv::format_real(lib.wavelengths[i]);
    for (Eigen::Index j = 0; j < lib.reflectance.cols(); ++j) {
      out << ',' << csv::format_real(lib.reflectance(i, j));
    }
    out << '\n';
  }
}

Matrix load_spectral_library(const std::filesystem::path& path,
                             const std::vector<int>& selected_indices) {
  const SpectralLibrary lib = read_spectral_library(path);
  if (selected_indices.empty()) throw ArgumentError("load_spectral_library: empty selection");
  Matrix a(lib.reflectance.rows(), static_cast<Eigen::Index>(selected_indices.size()));
  for (std::size_t k = 0; k < selected_indices.size(); ++k) {
    const int idx = selected_indices[k];
    if (idx < 0 || idx >= lib.reflectance.cols()) {
      throw ArgumentError("load_spectral_library: column index " + std::to_string(idx) +
                          " out of range");
    }
    a.col(static_cast<Eigen::Index>(k)) = lib.reflectance.col(idx);
  }
  const auto rank = linalg::numerical_rank(linalg::thin_svd(a).singular_values, 1e-10);
  if (rank < selected_indices.size()) {
    throw RankError("load_spectral_library: selected endmembers have rank " +
                    std::to_string(rank) + " < " + std::to_string(selected_indices.size()));
  }
  return a;
}

}  // namespace mves
