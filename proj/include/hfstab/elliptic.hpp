#pragma once

// Complete elliptic integral K(κ), Jacobi elliptic functions, and the closed-form
// periodic traveling waves of KdV and mKdV. κ is the modulus; m = κ² the parameter.

#include <algorithm>
#include <cmath>
#include <vector>

#include "hfstab/dispersion.hpp"
#include "hfstab/error.hpp"
#include "hfstab/traveling_wave.hpp"

namespace hfstab {

namespace detail {

inline void check_modulus(double kappa) {
  if (!(kappa >= 0.0 && kappa < 1.0))
    throw DomainError("elliptic modulus must lie in [0, 1), got " + std::to_string(kappa));
}

} // namespace detail

inline double agm(double a, double b) {
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return 0.5 * (a + b);
}

/// K(κ) = π / (2 AGM(1, √(1−κ²))).
inline double elliptic_K(double kappa) {
  detail::check_modulus(kappa);
  return pi / (2.0 * agm(1.0, std::sqrt((1.0 - kappa) * (1.0 + kappa))));
}

struct JacobiValues {
  double sn, cn, dn;
};

/// sn, cn, dn by the descending Landen (AGM) scheme. u is first reduced modulo
/// the real period 4K so accuracy does not degrade for large arguments.
inline JacobiValues jacobi(double u, double kappa) {
  detail::check_modulus(kappa);
  const double m = kappa * kappa;
  if (kappa == 0.0) return {std::sin(u), std::cos(u), 1.0};

  const double K4 = 4.0 * elliptic_K(kappa);
  u = std::fmod(u, K4);

  constexpr int max_steps = 32;
  double a[max_steps + 1], c[max_steps + 1];
  a[0] = 1.0;
  double b = std::sqrt((1.0 - kappa) * (1.0 + kappa));
  c[0] = kappa;
  int n = 0;
  while (std::abs(c[n]) > 1e-17 && n < max_steps) {
    double an = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    a[n + 1] = an;
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int j = n; j > 0; --j) phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
  double s = std::sin(phi), cc = std::cos(phi);
  return {s, cc, std::sqrt(std::max(0.0, 1.0 - m * s * s))};
}

inline double jacobi_sn(double u, double kappa) { return jacobi(u, kappa).sn; }
inline double jacobi_cn(double u, double kappa) { return jacobi(u, kappa).cn; }
inline double jacobi_dn(double u, double kappa) { return jacobi(u, kappa).dn; }

/// KdV (σ = 1): u = (12κ²K²/π²) cn²(Kx/π, κ), c = 4K²(2κ²−1)/π².
inline double kdv_cnoidal_speed(double kappa) {
  double K = elliptic_K(kappa);
  return 4.0 * K * K * (2.0 * kappa * kappa - 1.0) / (pi * pi);
}
inline double kdv_cnoidal_height(double kappa) {
  double K = elliptic_K(kappa);
  return 12.0 * kappa * kappa * K * K / (pi * pi);
}
inline double kdv_cnoidal_value(double kappa, double x) {
  double cn = jacobi_cn(elliptic_K(kappa) * x / pi, kappa);
  return kdv_cnoidal_height(kappa) * cn * cn;
}

/// Focusing mKdV (σ = 3): u = (2√2κK/π) cn(2Kx/π, κ), with the KdV speed.
inline double mkdv_height(double kappa) { return 2.0 * std::sqrt(2.0) * kappa * elliptic_K(kappa) / pi; }
inline double mkdv_cn_speed(double kappa) { return kdv_cnoidal_speed(kappa); }
inline double mkdv_cn_value(double kappa, double x) {
  return mkdv_height(kappa) * jacobi_cn(2.0 * elliptic_K(kappa) * x / pi, kappa);
}

/// Defocusing mKdV (σ = −3): u = (2√2κK/π) sn(2K(x + π/2)/π, κ),
/// c = −4(1+κ²)K²/π². The quarter-period shift makes the profile even.
inline double mkdv_sn_speed(double kappa) {
  double K = elliptic_K(kappa);
  return -4.0 * (1.0 + kappa * kappa) * K * K / (pi * pi);
}
inline double mkdv_sn_value(double kappa, double x) {
  return mkdv_height(kappa) * jacobi_sn(2.0 * elliptic_K(kappa) * (x + pi / 2) / pi, kappa);
}

namespace detail {

template <class Profile>
TravelingWave sampled_wave(const char* model, double c, int M, Profile&& profile) {
  const int n = std::max(512, 8 * (M + 1));
  std::vector<double> samples(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) samples[static_cast<std::size_t>(i)] = profile(2 * pi * i / n);
  TravelingWave w;
  w.model = model;
  w.c = c;
  w.coefficients = cosine_transform(samples, M);
  return w;
}

} // namespace detail

/// Cnoidal KdV wave with M cosine modes. The integration constant B of
/// −cU + U²/2 + U'' = B is evaluated from the profile at x = 0, where
/// U'' = −2(K/π)²·height.
inline TravelingWave kdv_cnoidal(double kappa, int M = 64) {
  double c = kdv_cnoidal_speed(kappa);
  TravelingWave w = detail::sampled_wave("kdv", c, M, [kappa](double x) { return kdv_cnoidal_value(kappa, x); });
  double H = kdv_cnoidal_height(kappa), K = elliptic_K(kappa);
  w.integration_constant = -c * H + 0.5 * H * H - 2.0 * H * K * K / (pi * pi);
  return w;
}

/// mKdV cn and sn waves; both satisfy their integrated equation with B = 0.
inline TravelingWave mkdv_cn_wave(double kappa, int M = 64) {
  return detail::sampled_wave("mkdv-focusing", mkdv_cn_speed(kappa), M,
                              [kappa](double x) { return mkdv_cn_value(kappa, x); });
}

inline TravelingWave mkdv_sn_wave(double kappa, int M = 64) {
  return detail::sampled_wave("mkdv-defocusing", mkdv_sn_speed(kappa), M,
                              [kappa](double x) { return mkdv_sn_value(kappa, x); });
}

} // namespace hfstab
