#pragma once

// Small-amplitude periodic traveling waves: Stokes expansion and Newton
// continuation in cosine space.
//
// Scalar models  u_t + σ uᵖ u_x + (K∗u)_x = 0 travel as
//     −cU + σ U^{p+1}/(p+1) + K∗U = B,
// Boussinesq–Whitham waves satisfy
//     V² Q = α Q² + K∗Q + A,   K with symbol c²(k).
// Both are solved for modes 1..M with û₀ (mean) and û₁ (amplitude) pinned;
// the integration constant comes from mode 0.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hfstab/dispersion.hpp"
#include "hfstab/error.hpp"
#include "hfstab/traveling_wave.hpp"

namespace hfstab {

namespace detail {

inline void require_wave_model(const ModelSpec& model) {
  if (model.kind == PoissonKind::canonical)
    throw UnsupportedModel("traveling waves are not available for canonical model '" + model.id + "'");
}

/// Diagonal symbol entering the traveling equation: s(k) for scalar models
/// (K∗cos jx = s(j) cos jx), c²(k) for BW.
inline double wave_symbol(const ModelSpec& model, double k) {
  return model.kind == PoissonKind::scalar ? model.hamiltonian.phase_speed(k) : model.hamiltonian.c_squared(k);
}

inline int wave_power(const ModelSpec& model) {
  return model.kind == PoissonKind::scalar ? model.nonlinearity.power : 1;
}

} // namespace detail

/// Flat-state speed about a constant background d: s(1) + σdᵖ (scalar) or
/// √(c²(1) + 2αd) (BW).
inline double flat_state_speed(const ModelSpec& model, double d) {
  detail::require_wave_model(model);
  if (model.kind == PoissonKind::scalar)
    return model.hamiltonian.phase_speed(1.0) + model.nonlinearity.coefficient * std::pow(d, model.nonlinearity.power);
  double W = model.hamiltonian.c_squared(1.0) + 2 * model.nonlinearity.coefficient * d;
  if (W <= 0) throw NumericalError(NumericalError::Kind::resonance, "background gives V^2 <= 0");
  return std::sqrt(W);
}

/// Stokes expansion in ε = û₁ to the given order (1, 2 or 3), zero-mean gauge.
inline TravelingWave stokes_wave(const ModelSpec& model, double epsilon, int order) {
  detail::require_wave_model(model);
  if (order < 1 || order > 3) throw ConfigError("Stokes order must be 1, 2 or 3");
  TravelingWave w;
  w.model = model.id;
  w.coefficients.assign(static_cast<std::size_t>(order + 1), 0.0);
  if (order >= 1) w.coefficients[1] = epsilon;

  auto s = [&](int j) { return detail::wave_symbol(model, j); };
  auto check = [](double denom, int j) {
    if (std::abs(denom) < 1e-10)
      throw NumericalError(NumericalError::Kind::resonance, "resonant harmonic j=" + std::to_string(j));
  };
  const double e2 = epsilon * epsilon, e3 = e2 * epsilon;

  if (model.kind == PoissonKind::scalar) {
    const double sigma = model.nonlinearity.coefficient;
    const int p = model.nonlinearity.power;
    w.c = s(1);
    for (int j = 2; j <= order; ++j) check(j * (s(j) - s(1)), j);
    if (p == 1) {
      if (order >= 2) {
        double u2 = -sigma / (4 * (s(2) - s(1)));
        w.coefficients[2] = e2 * u2;
        if (order >= 3) {
          w.coefficients[3] = e3 * (-sigma * u2 / (2 * (s(3) - s(1))));
          w.c += e2 * sigma * u2 / 2;
        }
      }
      // B = mode 0 of σU²/2.
      double m0 = 0.0;
      for (std::size_t j = 1; j < w.coefficients.size(); ++j) m0 += w.coefficients[j] * w.coefficients[j] / 2;
      w.integration_constant = sigma * m0 / 2;
    } else if (p == 2) {
      if (order >= 3) {
        w.coefficients[3] = e3 * (-sigma / (12 * (s(3) - s(1))));
        w.c += e2 * sigma / 4;
      }
    } else if (order > 1) {
      throw UnsupportedModel("Stokes expansion beyond first order needs nonlinearity power 1 or 2");
    }
  } else {
    const double alpha = model.nonlinearity.coefficient;
    double W = s(1);
    for (int j = 2; j <= order; ++j) check(s(1) - s(j), j);
    if (order >= 2) {
      double u2 = alpha / (2 * (s(1) - s(2)));
      w.coefficients[2] = e2 * u2;
      if (order >= 3) {
        w.coefficients[3] = e3 * alpha * u2 / (s(1) - s(3));
        W += e2 * alpha * u2;
      }
    }
    w.c = std::sqrt(W);
    w.integration_constant = -alpha * e2 / 2;
  }
  return w;
}

struct WaveOptions {
  double amplitude = 0.0;
  int modes = 64;
  int steps = 10;
  /// Pinned û₀. Defaults: 0 for scalar models, `amplitude` for BW.
  std::optional<double> mean;
  int max_newton = 50;
  double tol = 1e-10;
};

namespace detail {

/// Newton iteration for one (mean, amplitude) pair. The speed unknown is c
/// for scalar models and W = V² for BW; `speed` and `coef` hold the initial
/// guess on entry and the solution on exit.
inline void newton_wave(const ModelSpec& model, double mean, double amp, int M, const WaveOptions& opts,
                        double& speed, std::vector<double>& coef) {
  const bool scalar = model.kind == PoissonKind::scalar;
  const int p = wave_power(model);
  const int Ng = (p + 2) * M + 2;
  const double nl = model.nonlinearity.coefficient;

  Eigen::MatrixXd C(M + 1, Ng);
  for (int j = 0; j <= M; ++j)
    for (int i = 0; i < Ng; ++i) C(j, i) = std::cos(static_cast<double>(j) * 2 * pi * i / Ng);
  std::vector<double> sym(static_cast<std::size_t>(M + 1));
  for (int j = 0; j <= M; ++j) sym[static_cast<std::size_t>(j)] = wave_symbol(model, j);

  coef[0] = mean;
  coef[1] = amp;
  Eigen::VectorXd u(M + 1);
  for (int it = 0; it <= opts.max_newton; ++it) {
    for (int j = 0; j <= M; ++j) u(j) = coef[static_cast<std::size_t>(j)];
    Eigen::VectorXd U = C.transpose() * u; // grid values
    Eigen::VectorXd nlin(Ng), dnl(Ng);
    for (int i = 0; i < Ng; ++i) {
      double up = std::pow(U(i), p);
      nlin(i) = scalar ? nl * up * U(i) / (p + 1) : -nl * U(i) * U(i);
      dnl(i) = scalar ? nl * up : -2 * nl * U(i);
    }
    Eigen::VectorXd nhat = (C * nlin) * (2.0 / Ng);

    Eigen::VectorXd F(M);
    for (int j = 1; j <= M; ++j) {
      double lin = scalar ? (sym[static_cast<std::size_t>(j)] - speed) : (speed - sym[static_cast<std::size_t>(j)]);
      F(j - 1) = lin * u(j) + nhat(j);
    }
    double res = F.cwiseAbs().maxCoeff();
    if (!std::isfinite(res))
      throw NumericalError(NumericalError::Kind::no_convergence, "non-finite residual in wave Newton iteration");
    if (res <= opts.tol) return;
    if (it == opts.max_newton) break;

    // Columns: speed unknown, then û_2..û_M.
    Eigen::MatrixXd J(M, M);
    Eigen::MatrixXd D = (C * dnl.asDiagonal() * C.transpose()) * (2.0 / Ng);
    for (int j = 1; j <= M; ++j) {
      J(j - 1, 0) = scalar ? -u(j) : u(j);
      for (int m = 2; m <= M; ++m) {
        double diag = j == m ? (scalar ? sym[static_cast<std::size_t>(j)] - speed : speed - sym[static_cast<std::size_t>(j)]) : 0.0;
        J(j - 1, m - 1) = diag + D(j, m);
      }
    }
    Eigen::VectorXd delta = J.fullPivLu().solve(-F);
    if (!delta.allFinite())
      throw NumericalError(NumericalError::Kind::no_convergence, "singular Jacobian in wave Newton iteration");
    speed += delta(0);
    for (int m = 2; m <= M; ++m) coef[static_cast<std::size_t>(m)] += delta(m - 1);
  }
  throw NumericalError(NumericalError::Kind::no_convergence,
                       "wave Newton iteration did not converge within " + std::to_string(opts.max_newton) +
                           " steps (amplitude " + std::to_string(amp) + ")");
}

/// Mode-0 integration constant of a solved wave.
inline double integration_constant(const ModelSpec& model, const TravelingWave& w) {
  const bool scalar = model.kind == PoissonKind::scalar;
  const int M = w.modes();
  const int p = wave_power(model);
  const int Ng = (p + 2) * std::max(M, 1) + 2;
  double acc = 0.0;
  for (int i = 0; i < Ng; ++i) {
    double U = w(2 * pi * i / Ng);
    acc += scalar ? model.nonlinearity.coefficient * std::pow(U, p + 1) / (p + 1) : -model.nonlinearity.coefficient * U * U;
  }
  acc /= Ng;
  double s0 = wave_symbol(model, 0.0);
  if (scalar) return (s0 - w.c) * w.mean() + acc;
  return (w.c * w.c - s0) * w.mean() + acc;
}

} // namespace detail

/// Maximum over 4M equispaced points of the physical-space residual of the
/// traveling equation, using the stored integration constant.
inline double wave_residual(const ModelSpec& model, const TravelingWave& w) {
  detail::require_wave_model(model);
  const int M = std::max(w.modes(), 1);
  const int n = 4 * M;
  const bool scalar = model.kind == PoissonKind::scalar;
  const double nl = model.nonlinearity.coefficient;
  const int p = detail::wave_power(model);
  std::vector<double> sym(w.coefficients.size());
  for (std::size_t j = 0; j < sym.size(); ++j) sym[j] = detail::wave_symbol(model, static_cast<double>(j));
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = 2 * pi * i / n;
    double U = 0.0, KU = 0.0;
    for (std::size_t j = 0; j < w.coefficients.size(); ++j) {
      double cj = std::cos(static_cast<double>(j) * x);
      U += w.coefficients[j] * cj;
      KU += sym[j] * w.coefficients[j] * cj;
    }
    double r = scalar ? -w.c * U + nl * std::pow(U, p + 1) / (p + 1) + KU - w.integration_constant
                      : w.c * w.c * U - nl * U * U - KU - w.integration_constant;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

/// Newton continuation from the flat state to û₁ = opts.amplitude in
/// opts.steps equal increments (the mean is ramped alongside).
inline TravelingWave solve_wave_collocation(const ModelSpec& model, const WaveOptions& opts) {
  detail::require_wave_model(model);
  if (opts.modes < 2) throw ConfigError("wave needs at least 2 modes");
  if (opts.steps < 1) throw ConfigError("wave continuation needs at least 1 step");
  if (!std::isfinite(opts.amplitude)) throw ConfigError("wave amplitude must be finite");
  const bool scalar = model.kind == PoissonKind::scalar;
  const int M = opts.modes;
  const double mean = opts.mean ? *opts.mean : (scalar ? 0.0 : opts.amplitude);

  TravelingWave w;
  w.model = model.id;
  w.coefficients.assign(static_cast<std::size_t>(M + 1), 0.0);
  if (opts.amplitude == 0.0 && mean == 0.0) {
    w.c = flat_state_speed(model, 0.0);
    w.integration_constant = detail::integration_constant(model, w);
    w.residual = wave_residual(model, w);
    return w;
  }

  double speed0 = flat_state_speed(model, 0.0);
  double speed = scalar ? speed0 : speed0 * speed0;
  std::vector<double> coef(static_cast<std::size_t>(M + 1), 0.0);
  for (int step = 1; step <= opts.steps; ++step) {
    double t = static_cast<double>(step) / opts.steps;
    double a = opts.amplitude * t, d = mean * t;
    if (step == 1) {
      double c0 = flat_state_speed(model, d);
      speed = scalar ? c0 : c0 * c0;
      coef[1] = a;
      if (d == 0.0) {
        // Stokes seed where the expansion is available.
        try {
          TravelingWave seed = stokes_wave(model, a, 3);
          for (std::size_t j = 2; j < seed.coefficients.size() && j <= static_cast<std::size_t>(M); ++j)
            coef[j] = seed.coefficients[j];
          speed = scalar ? seed.c : seed.c * seed.c;
        } catch (const UnsupportedModel&) {
        }
      }
    }
    // Later steps start from the previous solution.
    detail::newton_wave(model, d, a, M, opts, speed, coef);
  }
  if (!scalar && speed <= 0)
    throw NumericalError(NumericalError::Kind::no_convergence, "converged BW wave has V^2 <= 0");
  w.c = scalar ? speed : std::sqrt(speed);
  w.coefficients = coef;
  w.integration_constant = detail::integration_constant(model, w);
  w.residual = wave_residual(model, w);
  return w;
}

/// True if the trailing coefficient has decayed below `tol`.
inline bool wave_resolved(const TravelingWave& w, double tol = 1e-12) {
  return !w.coefficients.empty() && std::abs(w.coefficients.back()) <= tol;
}

struct FlatStateReport {
  double a = 0.0;
  bool wellposed = true;
  std::optional<double> cutoff_k;
};

/// Linearization about the constant state q = a: ω² = k²(c²(k) + 2αa). For
/// a ≥ 0 both branches are real. For a < 0 they turn imaginary beyond the
/// smallest k > 0 with c²(k) + 2αa < 0, found by bisection on the monotone
/// symbol (cutoff 0 when already c²(0) + 2αa ≤ 0).
inline FlatStateReport bw_flat_state_analysis(const ModelSpec& model, double a) {
  if (model.kind != PoissonKind::noncanonical_bw)
    throw UnsupportedModel("flat-state analysis applies to the Boussinesq-Whitham model only");
  if (!std::isfinite(a)) throw ConfigError("background level must be finite");
  FlatStateReport rep;
  rep.a = a;
  if (a >= 0) return rep;
  const double alpha = model.nonlinearity.coefficient;
  auto f = [&](double k) { return model.hamiltonian.c_squared(k) + 2 * alpha * a; };
  rep.wellposed = false;
  if (f(0.0) <= 0) {
    rep.cutoff_k = 0.0;
    return rep;
  }
  double lo = 0.0, hi = 1.0;
  while (f(hi) >= 0) {
    lo = hi;
    hi *= 2;
    if (hi > 1e300) {
      rep.wellposed = true; // symbol never drops below −2αa
      return rep;
    }
  }
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) >= 0 ? lo : hi) = mid;
  }
  rep.cutoff_k = hi;
  return rep;
}

} // namespace hfstab
