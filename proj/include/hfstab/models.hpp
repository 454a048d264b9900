#pragma once

// Built-in models and custom models defined through the expression language.

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hfstab/dispersion.hpp"
#include "hfstab/error.hpp"
#include "hfstab/omega_dsl.hpp"

namespace hfstab {

inline const std::vector<std::string>& builtin_model_ids() {
  static const std::vector<std::string> ids = {
      "gkdv",        "kdv",         "mkdv-focusing",    "mkdv-defocusing",    "whitham",
      "sine-gordon", "water-waves", "water-waves-deep", "boussinesq-whitham", "fifth-order-scalar"};
  return ids;
}

namespace detail {

inline void require_known_params(const std::string& id, const ModelParams& params,
                                 const std::set<std::string>& allowed) {
  for (const auto& [name, value] : params.values())
    if (!allowed.count(name))
      throw ModelError("model '" + id + "' does not take parameter '" + name + "'");
}

// g·tanh(kh)/k, continuous at k = 0 where it equals g·h.
inline double finite_depth_c2(double g, double h, double k) {
  if (k == 0.0) return g * h;
  return g * std::tanh(k * h) / k;
}

inline ModelSpec scalar_model(std::string id, ModelParams params, std::function<double(double)> speed,
                              double sigma, int power) {
  ModelSpec m;
  m.id = std::move(id);
  m.kind = PoissonKind::scalar;
  m.params = std::move(params);
  m.hamiltonian.phase_speed = speed;
  m.branches.push_back({1, [speed](double k) { return k * speed(k); }, Parity::odd});
  m.mirror_branch = {1, 1};
  m.nonlinearity = {sigma, power};
  return m;
}

inline ModelSpec canonical_model(std::string id, ModelParams params, std::function<double(double)> B,
                                 std::function<double(double)> C, std::function<double(double)> w1,
                                 Parity parity, std::array<int, 2> mirror) {
  ModelSpec m;
  m.id = std::move(id);
  m.kind = PoissonKind::canonical;
  m.params = std::move(params);
  m.hamiltonian.a_symbol = [](double) { return cplx{0.0, 0.0}; };
  m.hamiltonian.b_symbol = std::move(B);
  m.hamiltonian.c_symbol = std::move(C);
  m.branches.push_back({1, w1, parity});
  m.branches.push_back({2, [w1](double k) { return -w1(k); }, parity});
  m.even_system = true;
  m.mirror_branch = mirror;
  return m;
}

} // namespace detail

/// Builds a built-in model. Parameters a model does not use are rejected;
/// missing parameters take their defaults (g = h = 1, alpha = 1, beta = 1/4).
inline ModelSpec make_model(const std::string& id, ModelParams params = {}) {
  using detail::require_known_params;
  auto fill = [&params](const std::string& name, double value) {
    if (!params.contains(name)) params.set(name, value);
  };

  if (id == "gkdv") {
    require_known_params(id, params, {"sigma", "p"});
    fill("sigma", 1.0);
    fill("p", 1.0);
    double p = params.get("p");
    if (p < 1 || p != std::floor(p) || p > 8)
      throw ModelError("gkdv parameter p must be an integer in [1, 8]");
    return detail::scalar_model(id, params, [](double k) { return -k * k; }, params.get("sigma"),
                                static_cast<int>(p));
  }
  if (id == "kdv") {
    require_known_params(id, params, {});
    return detail::scalar_model(id, params, [](double k) { return -k * k; }, 1.0, 1);
  }
  if (id == "mkdv-focusing" || id == "mkdv-defocusing") {
    require_known_params(id, params, {});
    double sigma = id == "mkdv-focusing" ? 3.0 : -3.0;
    return detail::scalar_model(id, params, [](double k) { return -k * k; }, sigma, 2);
  }
  if (id == "whitham") {
    require_known_params(id, params, {"g", "h", "sigma"});
    fill("g", 1.0);
    fill("h", 1.0);
    fill("sigma", 1.5);
    double g = params.get("g"), h = params.get("h");
    auto speed = [g, h](double k) { return std::sqrt(detail::finite_depth_c2(g, h, k)); };
    ModelSpec m = detail::scalar_model(id, params, speed, params.get("sigma"), 1);
    m.branches[0].omega = [g, h](double k) { return sign(k) * std::sqrt(g * k * std::tanh(k * h)); };
    return m;
  }
  if (id == "fifth-order-scalar") {
    require_known_params(id, params, {"alpha", "beta", "sigma"});
    fill("alpha", 1.0);
    fill("beta", 0.25);
    fill("sigma", 1.0);
    double a = params.get("alpha"), b = params.get("beta");
    return detail::scalar_model(id, params, [a, b](double k) { return a * k * k - b * k * k * k * k; },
                                params.get("sigma"), 1);
  }
  if (id == "sine-gordon") {
    require_known_params(id, params, {});
    return detail::canonical_model(
        id, params, [](double) { return 1.0; }, [](double k) { return 1.0 + k * k; },
        [](double k) { return std::sqrt(1.0 + k * k); }, Parity::general, {2, 1});
  }
  if (id == "water-waves") {
    require_known_params(id, params, {"g", "h"});
    fill("g", 1.0);
    fill("h", 1.0);
    double g = params.get("g"), h = params.get("h");
    return detail::canonical_model(
        id, params, [h](double k) { return k * std::tanh(k * h); }, [g](double) { return g; },
        [g, h](double k) { return sign(k) * std::sqrt(g * k * std::tanh(k * h)); }, Parity::odd,
        {1, 2});
  }
  if (id == "water-waves-deep") {
    require_known_params(id, params, {"g"});
    fill("g", 1.0);
    double g = params.get("g");
    return detail::canonical_model(
        id, params, [](double k) { return std::abs(k); }, [g](double) { return g; },
        [g](double k) { return sign(k) * std::sqrt(g * std::abs(k)); }, Parity::odd, {1, 2});
  }
  if (id == "boussinesq-whitham") {
    require_known_params(id, params, {"g", "h", "alpha"});
    fill("g", 1.0);
    fill("h", 1.0);
    fill("alpha", 1.0);
    double g = params.get("g"), h = params.get("h");
    ModelSpec m;
    m.id = id;
    m.kind = PoissonKind::noncanonical_bw;
    m.params = params;
    m.hamiltonian.c_squared = [g, h](double k) { return detail::finite_depth_c2(g, h, k); };
    auto w1 = [g, h](double k) { return sign(k) * std::sqrt(g * k * std::tanh(k * h)); };
    m.branches.push_back({1, w1, Parity::odd});
    m.branches.push_back({2, [w1](double k) { return -w1(k); }, Parity::odd});
    m.even_system = true;
    m.mirror_branch = {1, 2};
    m.nonlinearity = {params.get("alpha"), 2};
    return m;
  }
  throw ModelError("unknown model '" + id + "'");
}

/// A model given by expressions rather than a built-in identifier.
struct CustomModelSpec {
  PoissonKind kind = PoissonKind::scalar;
  std::string omega1;    // scalar and canonical
  std::string omega2;    // canonical
  std::string b_symbol;  // canonical, optional; defaults to "1"
  std::string c_squared; // noncanonical-bw
  ModelParams params;
  /// Value used at k = 0 for c_squared (BW) or for the phase speed ω(k)/k
  /// (scalar); the evaluator is never asked for the limit.
  std::optional<double> at_zero;
};

/// Throws ModelError("model-not-dispersive: ...") unless every branch is real,
/// respects its mirror pairing, and (if flagged) is an even system.
inline void validate_dispersive(const ModelSpec& model) {
  DispersivityReport rep = check_dispersive(model);
  if (!rep.dispersive) throw ModelError("model-not-dispersive: " + rep.message);
}

namespace detail {

inline std::function<double(double)> dsl_function(const dsl::ExprPtr& e, const ModelParams& params,
                                                  const std::string& label) {
  for (const auto& v : dsl::free_variables(*e))
    if (v != "k" && !params.contains(v))
      throw ModelError("expression '" + label + "' uses unbound parameter '" + v + "'");
  return [e, params, label](double k) {
    try {
      return dsl::evaluate(*e, k, params);
    } catch (const EvalError& err) {
      throw ModelError("model-not-dispersive: " + label + " at k=" + std::to_string(k) + ": " +
                       err.what());
    }
  };
}

inline dsl::ExprPtr parse_field(const std::string& text, const std::string& label) {
  if (text.empty()) throw ModelError("custom model requires '" + label + "'");
  return dsl::parse(text);
}

} // namespace detail

/// Builds a model from expressions. Canonical custom models are reconstructed
/// with an odd-only A symbol: A = −i(ω₁+ω₂)/2 and C = ((ω₁−ω₂)/2)²/B.
inline ModelSpec make_custom_model(const CustomModelSpec& spec) {
  ModelSpec m;
  m.id = "custom";
  m.kind = spec.kind;
  m.params = spec.params;
  const ModelParams& P = spec.params;

  if (spec.kind == PoissonKind::scalar) {
    auto w = detail::dsl_function(detail::parse_field(spec.omega1, "omega1"), P, "omega1");
    std::optional<double> at_zero = spec.at_zero;
    m.branches.push_back({1, w, Parity::odd});
    m.mirror_branch = {1, 1};
    m.hamiltonian.phase_speed = [w, at_zero](double k) {
      if (k != 0.0) return w(k) / k;
      if (at_zero) return *at_zero;
      constexpr double d = 1e-6;
      return (w(d) - w(-d)) / (2 * d);
    };
    double p = P.get_or("p", 1.0);
    if (p < 1 || p != std::floor(p) || p > 8)
      throw ModelError("custom scalar parameter p must be an integer in [1, 8]");
    m.nonlinearity = {P.get_or("sigma", 1.0), static_cast<int>(p)};
  } else if (spec.kind == PoissonKind::canonical) {
    auto w1 = detail::dsl_function(detail::parse_field(spec.omega1, "omega1"), P, "omega1");
    auto w2 = detail::dsl_function(detail::parse_field(spec.omega2, "omega2"), P, "omega2");
    std::function<double(double)> B = [](double) { return 1.0; };
    if (!spec.b_symbol.empty())
      B = detail::dsl_function(dsl::parse(spec.b_symbol), P, "b_symbol");
    m.branches.push_back({1, w1, Parity::general});
    m.branches.push_back({2, w2, Parity::general});
    m.hamiltonian.b_symbol = B;
    m.hamiltonian.a_symbol = [w1, w2](double k) { return cplx{0.0, -(w1(k) + w2(k)) / 2}; };
    m.hamiltonian.c_symbol = [w1, w2, B](double k) {
      double b = B(k);
      if (b == 0.0) throw ModelError("custom canonical model: b_symbol vanishes at k=" + std::to_string(k));
      double half = (w1(k) - w2(k)) / 2;
      return half * half / b;
    };

    // Mirror pairing and evenness are read off a sample grid.
    auto grid = dsl::symmetric_grid(10.0, 401);
    double odd1 = 0, swap1 = 0, even = 0;
    for (double k : grid) {
      double s = std::max(1.0, std::abs(w1(k)));
      odd1 = std::max(odd1, std::abs(w1(-k) + w1(k)) / s);
      swap1 = std::max(swap1, std::abs(w1(-k) + w2(k)) / s);
      even = std::max(even, std::abs(w1(k) + w2(k)) / s);
    }
    if (odd1 <= 1e-10) m.mirror_branch = {1, 2};
    else if (swap1 <= 1e-10) m.mirror_branch = {2, 1};
    else throw ModelError("model-not-dispersive: omega1(-k) matches neither -omega1(k) nor -omega2(k)");
    m.even_system = even <= 1e-10;
    if (m.mirror_branch[0] == 1) {
      m.branches[0].parity = Parity::odd;
      m.branches[1].parity = Parity::odd;
    }
  } else {
    auto c2 = detail::dsl_function(detail::parse_field(spec.c_squared, "c_squared"), P, "c_squared");
    if (!spec.at_zero) throw ModelError("custom boussinesq-whitham model requires 'at_zero' (c_squared at k=0)");
    double c20 = *spec.at_zero;
    m.hamiltonian.c_squared = [c2, c20](double k) { return k == 0.0 ? c20 : c2(k); };
    auto csq = m.hamiltonian.c_squared;
    auto w1 = [csq](double k) {
      double v = csq(k);
      if (v < 0) throw ModelError("model-not-dispersive: c_squared negative at k=" + std::to_string(k));
      return k * std::sqrt(v);
    };
    m.branches.push_back({1, w1, Parity::odd});
    m.branches.push_back({2, [w1](double k) { return -w1(k); }, Parity::odd});
    m.even_system = true;
    m.mirror_branch = {1, 2};
    m.nonlinearity = {P.get_or("alpha", 1.0), 2};
  }
  validate_dispersive(m);
  return m;
}

} // namespace hfstab
