// Command-line front end.
//
// Exit codes: 0 success, 2 invalid input (config, parse, model, unsupported),
// 3 numerical failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hfstab/hfstab.hpp"

namespace {

struct Flags {
  std::optional<std::string> model, config, out, krein_form, wave_file, bubbles_out, depth_out;
  std::optional<double> g, h, alpha, beta, sigma;
  std::optional<int> N, n_max, branch, grid_points;
  std::optional<unsigned> threads;
  std::vector<std::string> params;
  bool keep_mirrors = false;

  std::optional<double> amplitude, mean;
  std::optional<int> modes, steps;
  bool force = false;

  std::optional<int> mu_count, M;
  std::optional<double> threshold;
  bool no_refine = false;

  std::optional<int> curve_n_min, curve_n_max, k_points, depth_count;
  std::optional<double> h_min, h_max;
};

void add_global(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON run configuration (flags override its values)");
  app.add_option("--model", f.model, "built-in model id");
  app.add_option("--g", f.g, "gravitational acceleration");
  app.add_option("--h", f.h, "mean depth");
  app.add_option("--alpha", f.alpha, "dispersion or nonlinearity coefficient alpha");
  app.add_option("--beta", f.beta, "dispersion coefficient beta");
  app.add_option("--sigma", f.sigma, "nonlinearity coefficient sigma");
  app.add_option("--param", f.params, "extra model parameter name=value (repeatable)");
  app.add_option("--N", f.N, "bifurcation mode N")->check(CLI::PositiveNumber);
  app.add_option("--n-max", f.n_max, "largest |n| in the collision search")->check(CLI::PositiveNumber);
  app.add_option("--branch", f.branch, "dispersion branch of the traveling frame")->check(CLI::Range(1, 2));
  app.add_option("--out", f.out, "output file (stdout if omitted)");
  app.add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--grid-points", f.grid_points, "mu grid for collision bracketing")->check(CLI::Range(2, 10000000));
  app.add_flag("--keep-mirrors", f.keep_mirrors, "report both members of each mirror pair");
  app.add_option("--krein-form", f.krein_form,
                 "hessian | determinant | first-row | second-row | even-first | even-second");
}

hfstab::RunConfig build_config(const Flags& f) {
  using namespace hfstab;
  RunConfig cfg;
  if (f.config) apply_config(cfg, parse_config_text(read_file(*f.config)));
  if (f.model) {
    cfg.model = *f.model;
    cfg.custom.reset();
  }
  ModelParams& p = cfg.custom ? cfg.custom->params : cfg.params;
  auto set = [&p](const char* name, const std::optional<double>& v) {
    if (v) p.set(name, *v);
  };
  set("g", f.g);
  set("h", f.h);
  set("alpha", f.alpha);
  set("beta", f.beta);
  set("sigma", f.sigma);
  for (const auto& kv : f.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects name=value, got '" + kv + "'");
    double v;
    try {
      std::size_t used = 0;
      v = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("--param value is not a number in '" + kv + "'");
    }
    p.set(kv.substr(0, eq), v);
  }
  if (f.N) cfg.N = *f.N;
  if (f.n_max) cfg.n_max = *f.n_max;
  if (f.branch) cfg.branch = *f.branch;
  if (f.threads) cfg.threads = *f.threads;
  if (f.grid_points) cfg.collision.grid_points = *f.grid_points;
  if (f.keep_mirrors) cfg.collision.keep_mirrors = true;
  if (f.krein_form) cfg.form = detail::parse_form(*f.krein_form);
  if (f.out) cfg.output.out = *f.out;
  if (f.amplitude) cfg.wave.amplitude = *f.amplitude;
  if (f.mean) cfg.wave.mean = *f.mean;
  if (f.modes) cfg.wave.modes = *f.modes;
  if (f.steps) cfg.wave.steps = *f.steps;
  if (f.force) cfg.force = true;
  if (f.mu_count) cfg.hill.mu_count = *f.mu_count;
  if (f.M) cfg.hill.M = *f.M;
  if (f.threshold) cfg.hill.threshold = *f.threshold;
  if (f.no_refine) cfg.hill.refine = false;
  if (f.wave_file) cfg.hill.wave_file = *f.wave_file;
  if (f.bubbles_out) cfg.output.bubbles = *f.bubbles_out;
  if (f.curve_n_min) cfg.curves.n_min = *f.curve_n_min;
  if (f.curve_n_max) cfg.curves.n_max = *f.curve_n_max;
  if (f.k_points) cfg.curves.k_points = *f.k_points;
  if (f.depth_out) cfg.output.depth = *f.depth_out;
  if (f.h_min || f.h_max || f.depth_count || f.depth_out) {
    DepthConfig d = cfg.curves.depth.value_or(DepthConfig{});
    if (f.g) d.g = *f.g;
    if (f.h_min) d.h_min = *f.h_min;
    if (f.h_max) d.h_max = *f.h_max;
    if (f.depth_count) d.count = *f.depth_count;
    cfg.curves.depth = d;
  }
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) std::cout << text;
  else hfstab::write_file(path, text);
}

std::string dump(const hfstab::json& j) { return j.dump(2) + "\n"; }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-frequency instability analysis of Hamiltonian PDEs"};
  app.fallthrough();
  app.set_help_flag("--help", "print this help message and exit"); // -h would clash with --h (depth)
  app.require_subcommand(1);
  Flags f;
  add_global(app, f);

  auto* analyze = app.add_subcommand("analyze", "collisions, Krein signatures and the overall verdict");
  auto* collide = app.add_subcommand("collide", "zero-amplitude eigenvalue collisions with signatures");
  auto* wave = app.add_subcommand("wave", "periodic traveling wave by Newton continuation");
  wave->add_option("--amplitude", f.amplitude, "target first-harmonic amplitude");
  wave->add_option("--mean", f.mean, "pinned mean value");
  wave->add_option("--modes", f.modes, "cosine modes M")->check(CLI::Range(2, 4096));
  wave->add_option("--steps", f.steps, "continuation steps")->check(CLI::PositiveNumber);
  wave->add_flag("--force", f.force, "allow negative-average Boussinesq-Whitham waves");
  auto* spectrum = app.add_subcommand("spectrum", "Floquet-Hill spectrum and instability bubbles");
  spectrum->add_option("--wave", f.wave_file, "wave JSON produced by the wave command");
  spectrum->add_option("--mu-count", f.mu_count, "number of Floquet exponents")->check(CLI::PositiveNumber);
  spectrum->add_option("--M", f.M, "Fourier truncation")->check(CLI::PositiveNumber);
  spectrum->add_option("--threshold", f.threshold, "bubble detection threshold on Re(lambda)");
  spectrum->add_flag("--no-refine", f.no_refine, "skip refinement windows around predicted collisions");
  spectrum->add_option("--bubbles-out", f.bubbles_out, "bubble report JSON (stdout if omitted)");
  auto* curves = app.add_subcommand("curves", "Omega(k+n) curve families and the depth trace");
  curves->add_option("--curve-n-min", f.curve_n_min, "smallest n of the curve window");
  curves->add_option("--curve-n-max", f.curve_n_max, "largest n of the curve window");
  curves->add_option("--k-points", f.k_points, "samples per curve")->check(CLI::Range(2, 1000000));
  curves->add_option("--depth-out", f.depth_out, "water waves: first-collision depth trace CSV");
  curves->add_option("--h-min", f.h_min, "depth trace: smallest depth");
  curves->add_option("--h-max", f.h_max, "depth trace: largest depth");
  curves->add_option("--depth-count", f.depth_count, "depth trace: number of depths")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    hfstab::RunConfig cfg = build_config(f);
    if (analyze->parsed()) {
      emit(cfg.output.out, dump(hfstab::cmd_analyze(cfg)));
    } else if (collide->parsed()) {
      emit(cfg.output.out, dump(hfstab::cmd_collide(cfg)));
    } else if (wave->parsed()) {
      emit(cfg.output.out, dump(hfstab::cmd_wave(cfg)));
    } else if (spectrum->parsed()) {
      if (cfg.hill.wave_file.empty()) throw hfstab::ConfigError("spectrum needs --wave FILE");
      auto doc = hfstab::parse_config_text(hfstab::read_file(cfg.hill.wave_file));
      auto res = hfstab::cmd_spectrum(cfg, doc);
      if (!cfg.output.out.empty()) hfstab::write_file(cfg.output.out, res.csv);
      emit(cfg.output.bubbles, dump(res.bubbles));
    } else if (curves->parsed()) {
      auto res = hfstab::cmd_curves(cfg);
      emit(cfg.output.out, res.curves);
      if (res.depth) {
        if (cfg.output.depth.empty()) std::cout << *res.depth;
        else hfstab::write_file(cfg.output.depth, *res.depth);
      }
    }
  } catch (const hfstab::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const hfstab::EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const hfstab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
