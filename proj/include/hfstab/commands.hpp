#pragma once

// Run configuration and the command implementations behind the CLI.
//
// Precedence: built-in defaults < config file < command-line flags.

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hfstab/collision.hpp"
#include "hfstab/hill.hpp"
#include "hfstab/io.hpp"
#include "hfstab/krein.hpp"
#include "hfstab/models.hpp"
#include "hfstab/waves.hpp"

namespace hfstab {

struct HillConfig {
  int mu_count = 500;
  int M = 64;
  bool refine = true;
  double threshold = 1e-7;
  std::string wave_file;
};

struct DepthConfig {
  double g = 1.0;
  double h_min = 0.5;
  double h_max = 100.0;
  int count = 20;
  std::optional<int> n_max;
};

struct CurvesConfig {
  int n_min = -3;
  int n_max = 3;
  int k_points = 201;
  std::optional<DepthConfig> depth;
};

struct OutputConfig {
  std::string out;
  std::string bubbles;
  std::string depth;
};

struct RunConfig {
  std::string model = "gkdv";
  std::optional<CustomModelSpec> custom;
  ModelParams params;
  int N = 1;
  int n_max = 10;
  int branch = 1;
  CollisionOptions collision;
  KreinForm form = KreinForm::hessian;
  WaveOptions wave;
  bool force = false;
  HillConfig hill;
  CurvesConfig curves;
  OutputConfig output;
  unsigned threads = 1;

  ModelSpec build_model() const {
    if (custom) return make_custom_model(*custom);
    return make_model(model, params);
  }
};

namespace detail {

inline void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  if (!obj.is_object()) throw ConfigError("config: " + path + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("config: unknown key '" + path + "/" + it.key() + "'");
}

inline double get_number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("config: " + path + "/" + key + " must be a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("config: " + path + "/" + key + " must be finite");
  return d;
}

inline int get_int(const json& obj, const std::string& key, const std::string& path, int lo) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("config: " + path + "/" + key + " must be an integer");
  long long i = v.get<long long>();
  if (i < lo || i > 1000000) throw ConfigError("config: " + path + "/" + key + " out of range");
  return static_cast<int>(i);
}

inline bool get_bool(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError("config: " + path + "/" + key + " must be a boolean");
  return v.get<bool>();
}

inline std::string get_string(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError("config: " + path + "/" + key + " must be a string");
  return v.get<std::string>();
}

inline ModelParams get_params(const json& obj, const std::string& path) {
  if (!obj.is_object()) throw ConfigError("config: " + path + " must be an object");
  ModelParams p;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!it.value().is_number()) throw ConfigError("config: " + path + "/" + it.key() + " must be a number");
    try {
      p.set(it.key(), it.value().get<double>());
    } catch (const ModelError& e) {
      throw ConfigError("config: " + path + "/" + it.key() + ": " + e.what());
    }
  }
  return p;
}

inline KreinForm parse_form(const std::string& s) {
  for (KreinForm f : {KreinForm::hessian, KreinForm::determinant, KreinForm::first_row, KreinForm::second_row,
                      KreinForm::even_first, KreinForm::even_second})
    if (s == to_string(f)) return f;
  throw ConfigError("config: unknown krein_form '" + s + "'");
}

inline PoissonKind parse_kind(const std::string& s) {
  for (PoissonKind k : {PoissonKind::scalar, PoissonKind::canonical, PoissonKind::noncanonical_bw})
    if (s == to_string(k)) return k;
  throw ConfigError("config: unknown model kind '" + s + "'");
}

} // namespace detail

/// Applies a parsed config document on top of `cfg`. Unknown keys and
/// wrongly typed values raise ConfigError naming the offending path.
inline void apply_config(RunConfig& cfg, const json& doc) {
  using namespace detail;
  check_keys(doc, {"model", "params", "N", "n_max", "branch", "collision", "wave", "hill", "curves", "output", "threads"},
             "");
  if (doc.contains("model")) {
    const json& m = doc["model"];
    if (m.is_string()) {
      cfg.model = m.get<std::string>();
      cfg.custom.reset();
    } else if (m.is_object()) {
      check_keys(m, {"kind", "omega1", "omega2", "b_symbol", "c_squared", "params", "at_zero"}, "/model");
      CustomModelSpec spec;
      spec.kind = parse_kind(m.contains("kind") ? get_string(m, "kind", "/model") : "scalar");
      if (m.contains("omega1")) spec.omega1 = get_string(m, "omega1", "/model");
      if (m.contains("omega2")) spec.omega2 = get_string(m, "omega2", "/model");
      if (m.contains("b_symbol")) spec.b_symbol = get_string(m, "b_symbol", "/model");
      if (m.contains("c_squared")) spec.c_squared = get_string(m, "c_squared", "/model");
      if (m.contains("params")) spec.params = get_params(m["params"], "/model/params");
      if (m.contains("at_zero")) spec.at_zero = get_number(m, "at_zero", "/model");
      cfg.model = "custom";
      cfg.custom = spec;
    } else {
      throw ConfigError("config: /model must be a model id or an object");
    }
  }
  if (doc.contains("params")) {
    ModelParams p = get_params(doc["params"], "/params");
    for (const auto& [k, v] : p.values()) cfg.params.set(k, v);
  }
  if (doc.contains("N")) cfg.N = get_int(doc, "N", "", 1);
  if (doc.contains("n_max")) cfg.n_max = get_int(doc, "n_max", "", 1);
  if (doc.contains("branch")) cfg.branch = get_int(doc, "branch", "", 1);
  if (doc.contains("threads")) cfg.threads = static_cast<unsigned>(get_int(doc, "threads", "", 1));
  if (doc.contains("collision")) {
    const json& c = doc["collision"];
    check_keys(c, {"grid_points", "residual_tol", "lambda_tol", "keep_mirrors", "krein_form"}, "/collision");
    if (c.contains("grid_points")) cfg.collision.grid_points = get_int(c, "grid_points", "/collision", 2);
    if (c.contains("residual_tol")) cfg.collision.residual_tol = get_number(c, "residual_tol", "/collision");
    if (c.contains("lambda_tol")) cfg.collision.lambda_tol = get_number(c, "lambda_tol", "/collision");
    if (c.contains("keep_mirrors")) cfg.collision.keep_mirrors = get_bool(c, "keep_mirrors", "/collision");
    if (c.contains("krein_form")) cfg.form = parse_form(get_string(c, "krein_form", "/collision"));
  }
  if (doc.contains("wave")) {
    const json& w = doc["wave"];
    check_keys(w, {"amplitude", "modes", "steps", "mean", "force"}, "/wave");
    if (w.contains("amplitude")) cfg.wave.amplitude = get_number(w, "amplitude", "/wave");
    if (w.contains("modes")) cfg.wave.modes = get_int(w, "modes", "/wave", 2);
    if (w.contains("steps")) cfg.wave.steps = get_int(w, "steps", "/wave", 1);
    if (w.contains("mean")) cfg.wave.mean = get_number(w, "mean", "/wave");
    if (w.contains("force")) cfg.force = get_bool(w, "force", "/wave");
  }
  if (doc.contains("hill")) {
    const json& h = doc["hill"];
    check_keys(h, {"mu_count", "M", "refine", "threshold", "wave"}, "/hill");
    if (h.contains("mu_count")) cfg.hill.mu_count = get_int(h, "mu_count", "/hill", 1);
    if (h.contains("M")) cfg.hill.M = get_int(h, "M", "/hill", 1);
    if (h.contains("refine")) cfg.hill.refine = get_bool(h, "refine", "/hill");
    if (h.contains("threshold")) cfg.hill.threshold = get_number(h, "threshold", "/hill");
    if (h.contains("wave")) cfg.hill.wave_file = get_string(h, "wave", "/hill");
  }
  if (doc.contains("curves")) {
    const json& c = doc["curves"];
    check_keys(c, {"n_min", "n_max", "k_points", "depth"}, "/curves");
    if (c.contains("n_min")) cfg.curves.n_min = get_int(c, "n_min", "/curves", -1000000);
    if (c.contains("n_max")) cfg.curves.n_max = get_int(c, "n_max", "/curves", -1000000);
    if (c.contains("k_points")) cfg.curves.k_points = get_int(c, "k_points", "/curves", 2);
    if (c.contains("depth")) {
      const json& d = c["depth"];
      check_keys(d, {"g", "h_min", "h_max", "count", "n_max"}, "/curves/depth");
      DepthConfig dc;
      if (d.contains("g")) dc.g = get_number(d, "g", "/curves/depth");
      if (d.contains("h_min")) dc.h_min = get_number(d, "h_min", "/curves/depth");
      if (d.contains("h_max")) dc.h_max = get_number(d, "h_max", "/curves/depth");
      if (d.contains("count")) dc.count = get_int(d, "count", "/curves/depth", 1);
      if (d.contains("n_max")) dc.n_max = get_int(d, "n_max", "/curves/depth", 1);
      cfg.curves.depth = dc;
    }
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    check_keys(o, {"out", "bubbles", "depth"}, "/output");
    if (o.contains("out")) cfg.output.out = get_string(o, "out", "/output");
    if (o.contains("bubbles")) cfg.output.bubbles = get_string(o, "bubbles", "/output");
    if (o.contains("depth")) cfg.output.depth = get_string(o, "depth", "/output");
  }
}

/// Parses config text; malformed JSON is reported with its byte offset.
inline json parse_config_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at offset " + std::to_string(e.byte) + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

inline CollisionOptions collision_options(const RunConfig& cfg) {
  CollisionOptions o = cfg.collision;
  o.threads = cfg.threads;
  return o;
}

// ---------------------------------------------------------------- commands ---

inline json cmd_analyze(const RunConfig& cfg) {
  ModelSpec model = cfg.build_model();
  PipelineOptions opts;
  opts.N = cfg.N;
  opts.branch = cfg.branch;
  opts.n_max = cfg.n_max;
  opts.collision = collision_options(cfg);
  opts.form = cfg.form;
  json j = to_json(run_pipeline(model, opts));
  j["params"] = params_json(model.params);
  return j;
}

inline json cmd_collide(const RunConfig& cfg) {
  ModelSpec model = cfg.build_model();
  validate_dispersive(model);
  double c = bifurcation_speed(model, cfg.branch, cfg.N);
  auto events = find_collisions(model, c, cfg.n_max, collision_options(cfg));
  classify_events(model, events, c, cfg.form);
  json j;
  j["model"] = model.id;
  j["params"] = params_json(model.params);
  j["N"] = cfg.N;
  j["branch"] = cfg.branch;
  j["n_max"] = cfg.n_max;
  j["speed"] = c;
  j["events"] = json::array();
  for (const auto& e : events) j["events"].push_back(to_json(e));
  return j;
}

inline json cmd_wave(const RunConfig& cfg) {
  ModelSpec model = cfg.build_model();
  if (model.kind == PoissonKind::canonical)
    throw UnsupportedModel("no traveling-wave solver for canonical model '" + model.id + "'");
  WaveOptions w = cfg.wave;
  if (model.kind == PoissonKind::noncanonical_bw) {
    double mean = w.mean ? *w.mean : w.amplitude;
    if (mean < 0 && !cfg.force)
      throw ConfigError("refusing negative-average Boussinesq-Whitham wave (mean " + fmt17(mean) +
                        "): the flat state is ill-posed; pass --force to override");
  }
  TravelingWave wave = solve_wave_collocation(model, w);
  json j = to_json(wave, model.params);
  j["N"] = cfg.N;
  return j;
}

struct SpectrumOutput {
  std::string csv;
  json bubbles;
};

/// Hill spectrum of the wave in `wave_doc`, bubble report linked to the
/// zero-amplitude collision predictions at the bifurcation speed.
inline SpectrumOutput cmd_spectrum(const RunConfig& cfg, const json& wave_doc) {
  ModelSpec model = cfg.build_model();
  if (model.kind == PoissonKind::canonical)
    throw UnsupportedModel("spectrum: no finite-amplitude linearization for canonical model '" + model.id + "'");
  TravelingWave wave = wave_from_json(wave_doc);
  if (wave.model != model.id)
    throw ConfigError("spectrum: wave file is for model '" + wave.model + "', config selects '" + model.id + "'");
  if (wave_doc.contains("params") && wave_doc["params"] != params_json(model.params))
    throw ConfigError("spectrum: wave file parameters differ from the configured model parameters");

  double c0 = bifurcation_speed(model, cfg.branch, cfg.N);
  auto predictions = non_origin(find_collisions(model, c0, cfg.n_max, collision_options(cfg)));
  MuGrid grid;
  grid.count = cfg.hill.mu_count;
  if (cfg.hill.refine)
    for (const auto& e : predictions) grid.refine_centers.push_back(e.mu);
  SpectrumSet set = full_spectrum(model, wave, grid, cfg.hill.M, cfg.threads);
  auto bubbles = detect_bubbles(set, cfg.hill.threshold, predictions);

  json j;
  j["model"] = model.id;
  j["params"] = params_json(model.params);
  j["M"] = cfg.hill.M;
  j["mu_values"] = static_cast<int>(set.slices.size());
  j["speed"] = wave.c;
  j["amplitude"] = wave.amplitude();
  j["threshold"] = cfg.hill.threshold;
  j["max_real"] = set.max_real() + 0.0;
  j["truncation_ok"] = wave_resolved(wave);
  j["predictions"] = json::array();
  for (const auto& e : predictions) j["predictions"].push_back(to_json(e));
  j["bubbles"] = json::array();
  int hf = 0;
  for (const auto& b : bubbles) {
    j["bubbles"].push_back(to_json(b, predictions));
    hf += !b.near_origin;
  }
  j["high_frequency_bubbles"] = hf;
  if (wave.is_zero())
    j["zero_amplitude_check"] = zero_amplitude_check(model, wave.c, grid.points(), cfg.hill.M, cfg.threads);
  else
    j["zero_amplitude_check"] = nullptr;
  if (model.kind == PoissonKind::noncanonical_bw && cfg.hill.M >= 2) {
    // Growth rate against truncation; no verdict is drawn from it.
    SpectrumSet half = full_spectrum(model, wave, grid, cfg.hill.M / 2, cfg.threads);
    j["max_real_by_M"] = json::object({{std::to_string(cfg.hill.M / 2), half.max_real()},
                                       {std::to_string(cfg.hill.M), set.max_real()}});
  }
  return {spectrum_csv(set), j};
}

struct CurvesOutput {
  std::string curves;
  std::optional<std::string> depth;
};

inline std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0 && hi >= lo)) throw ConfigError("depth grid needs 0 < h_min <= h_max");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    g[static_cast<std::size_t>(i)] = count == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1));
  if (count > 1) g.back() = hi;
  return g;
}

inline CurvesOutput cmd_curves(const RunConfig& cfg) {
  ModelSpec model = cfg.build_model();
  validate_dispersive(model);
  double c = bifurcation_speed(model, cfg.branch, cfg.N);
  const int K = cfg.curves.k_points;
  std::vector<double> k(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) k[static_cast<std::size_t>(i)] = -0.5 + static_cast<double>(i) / (K - 1);
  CurvesOutput out;
  out.curves = curves_csv(secant_curve_data(model, c, cfg.curves.n_min, cfg.curves.n_max, k));
  if (model.id == "water-waves" && cfg.curves.depth) {
    const DepthConfig& d = *cfg.curves.depth;
    auto rows = trace_first_collision_vs_depth(d.g, log_grid(d.h_min, d.h_max, d.count), d.n_max.value_or(cfg.n_max),
                                               collision_options(cfg), cfg.N);
    out.depth = depth_csv(rows);
  }
  return out;
}

} // namespace hfstab
