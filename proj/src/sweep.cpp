#include "mves/sweep.hpp"

#include "mves/csv.hpp"
#include "mves/datagen.hpp"
#include "mves/errors.hpp"
#include "mves/metrics.hpp"
#include "mves/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace mves {

namespace {

using nlohmann::json;

double lower_purity_limit(int n) { return 1.0 / std::sqrt(static_cast<double>(n)); }

template <typename T>
T read_key(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config key '") + key + "': " + e.what(), 0);
  }
}

}  // namespace

std::vector<double> default_purity_grid(int n_endmembers) {
  const double lo = lower_purity_limit(n_endmembers);
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(lo + (1.0 - lo) * k / 10.0);
  return grid;
}

std::vector<double> ExperimentConfig::grid() const {
  return purity_grid.empty() ? default_purity_grid(n_endmembers) : purity_grid;
}

void ExperimentConfig::validate() const {
  if (n_endmembers < 2) throw ValidationError("config: n_endmembers must be >= 2");
  if (n_bands < n_endmembers - 1) {
    throw ValidationError("config: n_bands must be >= n_endmembers - 1");
  }
  if (n_pixels < n_endmembers) throw ValidationError("config: n_pixels must be >= n_endmembers");
  if (trials_per_point < 1) throw ValidationError("config: trials_per_point must be >= 1");
  if (threads < 1) throw ValidationError("config: threads must be >= 1");
  const double lo = lower_purity_limit(n_endmembers);
  for (double r : purity_grid) {
    if (!(r > lo && r <= 1.0)) {
      throw ValidationError("config: purity grid value " + csv::format_real(r) +
                            " outside (1/sqrt(N), 1]");
    }
  }
  solver.validate();
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what(), 0);
  }
  if (!doc.is_object()) throw ParseError("config: expected a JSON object", 0);
  static const std::vector<std::string> known = {
      "n_endmembers",  "n_bands",         "n_pixels",      "purity_grid",   "trials_per_point",
      "base_seed",     "output_csv_path", "output_svg_path", "threads",     "max_cycles",
      "rel_tol",       "containment_tol", "init_strategy", "restarts"};
  for (const auto& item : doc.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ParseError("config: unknown key '" + item.key() + "'", 0);
    }
  }
  ExperimentConfig cfg;
  cfg.n_endmembers = read_key(doc, "n_endmembers", cfg.n_endmembers);
  cfg.n_bands = read_key(doc, "n_bands", cfg.n_bands);
  cfg.n_pixels = read_key(doc, "n_pixels", cfg.n_pixels);
  cfg.purity_grid = read_key(doc, "purity_grid", cfg.purity_grid);
  cfg.trials_per_point = read_key(doc, "trials_per_point", cfg.trials_per_point);
  cfg.base_seed = read_key(doc, "base_seed", cfg.base_seed);
  cfg.output_csv_path = read_key(doc, "output_csv_path", cfg.output_csv_path);
  if (doc.contains("output_svg_path") && !doc.at("output_svg_path").is_null()) {
    cfg.output_svg_path = read_key<std::string>(doc, "output_svg_path", "");
  }
  cfg.threads = read_key(doc, "threads", cfg.threads);
  cfg.solver.max_cycles = read_key(doc, "max_cycles", cfg.solver.max_cycles);
  cfg.solver.rel_tol = read_key(doc, "rel_tol", cfg.solver.rel_tol);
  cfg.solver.containment_tol = read_key(doc, "containment_tol", cfg.solver.containment_tol);
  cfg.solver.restarts = read_key(doc, "restarts", cfg.solver.restarts);
  if (doc.contains("init_strategy")) {
    try {
      cfg.solver.init_strategy =
          parse_init_strategy(read_key<std::string>(doc, "init_strategy", ""));
    } catch (const ArgumentError& e) {
      throw ParseError(std::string("config: ") + e.what(), 0);
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path, 0);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

std::uint64_t trial_seed(std::uint64_t base_seed, int r_index, int trial) {
  return derive_seed(base_seed, static_cast<std::uint64_t>(r_index),
                     static_cast<std::uint64_t>(trial));
}

TrialRecord run_trial(const ExperimentConfig& cfg, int r_index, double r, int trial) {
  TrialRecord rec;
  rec.r_index = r_index;
  rec.r = r;
  rec.trial = trial;
  rec.seed = trial_seed(cfg.base_seed, r_index, trial);
  try {
    SceneConfig scene_cfg;
    scene_cfg.n_endmembers = cfg.n_endmembers;
    scene_cfg.n_bands = cfg.n_bands;
    scene_cfg.n_pixels = cfg.n_pixels;
    scene_cfg.purity_cap = r;
    scene_cfg.seed = rec.seed;
    const Scene scene = generate_scene(scene_cfg);
    MvesConfig solver = cfg.solver;
    solver.seed = derive_seed(rec.seed, 3);
    const MvesResult result = solve_mves(scene.pixels, cfg.n_endmembers, solver);
    rec.phi_degrees =
        rms_angle_error(scene.endmembers, result.estimated_endmembers.vertices()).phi_degrees;
    rec.volume = result.volume;
    rec.cycles_used = result.cycles_used;
    rec.converged = result.converged;
    rec.status = "ok";
  } catch (const Error& e) {
    rec.status = error_kind(e);
    rec.message = e.what();
  }
  return rec;
}

std::vector<PointSummary> summarize(const std::vector<TrialRecord>& trials,
                                    const std::vector<double>& grid) {
  std::vector<PointSummary> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    PointSummary s;
    s.r_index = static_cast<int>(i);
    s.r = grid[i];
    std::vector<double> phis;
    for (const auto& t : trials) {
      if (t.r_index == s.r_index && t.status == "ok") phis.push_back(t.phi_degrees);
    }
    s.successful_trials = static_cast<int>(phis.size());
    if (!phis.empty()) {
      s.mean_phi_degrees = std::accumulate(phis.begin(), phis.end(), 0.0) / phis.size();
      if (phis.size() > 1) {
        double ss = 0.0;
        for (double p : phis) ss += (p - s.mean_phi_degrees) * (p - s.mean_phi_degrees);
        s.std_phi_degrees = std::sqrt(ss / (phis.size() - 1));
      }
    } else {
      s.mean_phi_degrees = std::nan("");
      s.std_phi_degrees = std::nan("");
    }
    out.push_back(s);
  }
  return out;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<double> grid = cfg.grid();
  const int trials = cfg.trials_per_point;
  const std::size_t total = grid.size() * static_cast<std::size_t>(trials);
  SweepResult result;
  result.trials.resize(total);

  // Each job writes only its own slot, so rows come out ordered by
  // (r-index, trial) whatever the completion order.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const int r_index = static_cast<int>(job / trials);
      const int trial = static_cast<int>(job % trials);
      result.trials[job] = run_trial(cfg, r_index, grid[r_index], trial);
    }
  };
  const int workers = std::min<int>(cfg.threads, static_cast<int>(std::max<std::size_t>(total, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < workers; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  result.summary = summarize(result.trials, grid);
  return result;
}

void write_sweep_csv(std::ostream& out, const ExperimentConfig& cfg, const SweepResult& result) {
  out << "kind,n_endmembers,r,trial,seed,status,phi_degrees,volume,cycles_used,converged,"
         "mean_phi_degrees,std_phi_degrees,successful_trials\n";
  const std::string n = std::to_string(cfg.n_endmembers);
  for (const auto& t : result.trials) {
    const bool ok = t.status == "ok";
    out << "data," << n << ',' << csv::format_real(t.r) << ',' << t.trial << ',' << t.seed << ','
        << t.status << ',' << (ok ? csv::format_real(t.phi_degrees) : "") << ','
        << (ok ? csv::format_real(t.volume) : "") << ','
        << (ok ? std::to_string(t.cycles_used) : "") << ','
        << (ok ? (t.converged ? "true" : "false") : "") << ",,,\n";
  }
  for (const auto& s : result.summary) {
    const bool any = s.successful_trials > 0;
    out << "summary," << n << ',' << csv::format_real(s.r) << ",,," << (any ? "ok" : "failed")
        << ",,,,," << (any ? csv::format_real(s.mean_phi_degrees) : "") << ','
        << (any ? csv::format_real(s.std_phi_degrees) : "") << ',' << s.successful_trials << '\n';
  }
}

std::string render_sweep_svg(const ExperimentConfig& cfg, const SweepResult& result) {
  const double width = 640.0, height = 420.0;
  const double left = 70.0, right = 20.0, top = 30.0, bottom = 60.0;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  const double x_lo = lower_purity_limit(cfg.n_endmembers), x_hi = 1.0;
  double y_hi = 1.0;
  for (const auto& s : result.summary) {
    if (s.successful_trials > 0) y_hi = std::max(y_hi, s.mean_phi_degrees + s.std_phi_degrees);
  }
  y_hi *= 1.1;
  auto px = [&](double r) { return left + plot_w * (r - x_lo) / (x_hi - x_lo); };
  auto py = [&](double phi) { return top + plot_h * (1.0 - phi / y_hi); };
  auto fmt = [](double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double r = x_lo + (x_hi - x_lo) * k / 4.0;
    const double phi = y_hi * k / 4.0;
    svg << "<text x=\"" << fmt(px(r)) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << fmt(r) << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << fmt(py(phi) + 4)
        << "\" text-anchor=\"end\">" << fmt(phi) << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">purity cap r</text>\n";
  svg << "<text x=\"18\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + plot_h / 2 << ")\">RMS angle error (degrees)</text>\n";

  const double critical = 1.0 / std::sqrt(static_cast<double>(cfg.n_endmembers - 1));
  if (critical > x_lo && critical <= x_hi) {
    svg << "<line x1=\"" << fmt(px(critical)) << "\" y1=\"" << top << "\" x2=\""
        << fmt(px(critical)) << "\" y2=\"" << top + plot_h
        << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    svg << "<text x=\"" << fmt(px(critical) + 4) << "\" y=\"" << top + 14 << "\">r = 1/sqrt("
        << cfg.n_endmembers - 1 << ")</text>\n";
  }
  std::string points;
  for (const auto& s : result.summary) {
    if (s.successful_trials == 0) continue;
    const double x = px(s.r);
    points += fmt(x) + "," + fmt(py(s.mean_phi_degrees)) + " ";
    const double lo = std::max(0.0, s.mean_phi_degrees - s.std_phi_degrees);
    const double hi = s.mean_phi_degrees + s.std_phi_degrees;
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(py(lo)) << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << fmt(py(hi)) << "\" stroke=\"steelblue\"/>\n";
    svg << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(py(s.mean_phi_degrees))
        << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  if (!points.empty()) points.pop_back();
  svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"" << points
      << "\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mves
