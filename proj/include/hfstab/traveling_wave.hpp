#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hfstab/dispersion.hpp"

namespace hfstab {

/// Even, 2π-periodic traveling wave U(x) = Σ_{j=0}^{M} û_j cos(jx) moving at speed c.
struct TravelingWave {
  std::string model;
  double period = 2 * pi;
  double c = 0.0;
  std::vector<double> coefficients; // û_0 .. û_M
  /// B for scalar models (−cU + σU^{p+1}/(p+1) + K∗U = B), A for
  /// Boussinesq–Whitham (V²Q = αQ² + K∗Q + A).
  double integration_constant = 0.0;
  double residual = 0.0;

  /// Amplitude measure: the first harmonic û_1.
  double amplitude() const { return coefficients.size() > 1 ? coefficients[1] : 0.0; }
  double mean() const { return coefficients.empty() ? 0.0 : coefficients[0]; }
  int modes() const { return coefficients.empty() ? 0 : static_cast<int>(coefficients.size()) - 1; }

  double operator()(double x) const {
    double u = 0.0;
    for (std::size_t j = 0; j < coefficients.size(); ++j) u += coefficients[j] * std::cos(j * x);
    return u;
  }

  bool is_zero() const {
    for (double v : coefficients)
      if (v != 0.0) return false;
    return true;
  }
};

/// Complex exponential coefficients of a cosine series: Û_0 = û_0, Û_{±j} = û_j/2.
inline std::vector<double> exponential_coefficients(const std::vector<double>& cosine, int M) {
  std::vector<double> e(static_cast<std::size_t>(2 * M + 1), 0.0);
  for (int j = 0; j <= M && j < static_cast<int>(cosine.size()); ++j) {
    double v = j == 0 ? cosine[0] : cosine[static_cast<std::size_t>(j)] / 2;
    e[static_cast<std::size_t>(M + j)] = v;
    e[static_cast<std::size_t>(M - j)] = v;
  }
  return e;
}

/// Cosine coefficients (j = 0..M) of an even function sampled on x_i = 2πi/n,
/// i = 0..n−1, by the trapezoidal rule (spectrally accurate for smooth data).
inline std::vector<double> cosine_transform(const std::vector<double>& samples, int M) {
  const std::size_t n = samples.size();
  std::vector<double> out(static_cast<std::size_t>(M + 1), 0.0);
  for (int j = 0; j <= M; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += samples[i] * std::cos(j * 2 * pi * i / n);
    out[static_cast<std::size_t>(j)] = (j == 0 ? 1.0 : 2.0) * s / n;
  }
  return out;
}

} // namespace hfstab
