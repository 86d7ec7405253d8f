#include "mves/datagen.hpp"
#include "mves/errors.hpp"
#include "mves/geometry.hpp"
#include "mves/metrics.hpp"
#include "mves/purity.hpp"
#include "mves/solver.hpp"
#include "mves/theorems.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

namespace py = pybind11;
using namespace mves;

namespace {

py::dict solve(const Matrix& pixels, int n, int max_cycles, double rel_tol, const std::string& init,
               int restarts, std::uint64_t seed) {
  MvesConfig cfg;
  cfg.max_cycles = max_cycles;
  cfg.rel_tol = rel_tol;
  cfg.init_strategy = parse_init_strategy(init);
  cfg.restarts = restarts;
  cfg.seed = seed;
  std::optional<MvesResult> solved;
  {
    py::gil_scoped_release release;
    solved = solve_mves(pixels, n, cfg);
  }
  const MvesResult& r = *solved;
  py::dict out;
  out["endmembers"] = r.estimated_endmembers.vertices();
  out["volume"] = r.volume;
  out["cycles_used"] = r.cycles_used;
  out["converged"] = r.converged;
  out["all_points_enclosed"] = r.all_points_enclosed;
  out["det_history"] = r.det_history;
  return out;
}

py::dict scene(int n, int bands, int pixels, double purity_cap, std::uint64_t seed) {
  SceneConfig cfg;
  cfg.n_endmembers = n;
  cfg.n_bands = bands;
  cfg.n_pixels = pixels;
  cfg.purity_cap = purity_cap;
  cfg.seed = seed;
  const Scene s = generate_scene(cfg);
  py::dict out;
  out["endmembers"] = s.endmembers;
  out["abundances"] = s.abundances;
  out["pixels"] = s.pixels;
  return out;
}

py::dict report(const Matrix& abundances, int samples, double tol, std::uint64_t seed) {
  UniformPurityOptions opts;
  opts.n_samples = samples;
  opts.tol = tol;
  opts.seed = seed;
  const PurityReport r = purity_report(abundances, opts);
  py::dict out;
  out["best_purity"] = r.best_purity;
  out["uniform_purity_lower"] = r.uniform_purity_lower;
  out["threshold"] = r.threshold;
  out["necessary_ok"] = r.necessary_ok;
  out["sufficient_ok"] = r.sufficient_ok;
  out["samples_used"] = r.samples_used;
  return out;
}

py::list checks(const std::string& filter, std::uint64_t seed) {
  py::list out;
  for (const auto& c : run_check_suite(filter, seed)) {
    py::dict d;
    d["name"] = c.name;
    d["statement"] = c.statement;
    d["passed"] = c.passed;
    d["asserted"] = c.asserted;
    d["observed"] = c.observed;
    d["expected"] = c.expected;
    d["details"] = c.details;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_mves, m) {
  m.doc() = "Minimum-volume enclosing simplex unmixing";

  static py::exception<Error> base(m, "MvesError", PyExc_ValueError);
  static py::exception<ValidationError> validation(m, "ValidationError", base.ptr());
  static py::exception<AffineDimensionError> affine(m, "AffineDimensionError", base.ptr());
  static py::exception<PurityCapError> purity_cap(m, "PurityCapError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation, e.what());
    } catch (const AffineDimensionError& e) {
      py::set_error(affine, e.what());
    } catch (const PurityCapError& e) {
      py::set_error(purity_cap, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def("solve_mves", &solve, py::arg("pixels"), py::arg("n_endmembers"), py::arg("max_cycles") = 0,
        py::arg("rel_tol") = 1e-8, py::arg("init") = "greedy_volume_max", py::arg("restarts") = 1,
        py::arg("seed") = 0,
        "Minimum-volume enclosing simplex of the pixel columns (bands x pixels).");
  m.def("generate_scene", &scene, py::arg("n_endmembers") = 3, py::arg("n_bands") = 224,
        py::arg("n_pixels") = 1000, py::arg("purity_cap") = 1.0, py::arg("seed") = 0,
        "Synthetic scene X = A S with Dirichlet abundances capped in norm.");
  m.def("best_purity", &best_purity, py::arg("abundances"));
  m.def("purity_report", &report, py::arg("abundances"), py::arg("samples") = 20000,
        py::arg("tol") = 1e-3, py::arg("seed") = 0);
  m.def("max_abundance_at_purity", &max_abundance_at_purity, py::arg("n"), py::arg("r"));
  m.def("edge_pixel_purity_bound", &edge_pixel_purity_bound, py::arg("n"), py::arg("alpha"));
  m.def(
      "rms_angle_error",
      [](const Matrix& truth, const Matrix& estimate) {
        return rms_angle_error(truth, estimate).phi_degrees;
      },
      py::arg("truth"), py::arg("estimate"),
      "Permutation-matched RMS spectral angle in degrees.");
  m.def(
      "simplex_volume", [](const Matrix& vertices) { return simplex_volume(Simplex(vertices)); },
      py::arg("vertices"));
  m.def("run_check_suite", &checks, py::arg("filter") = "", py::arg("seed") = 20240601);
}
