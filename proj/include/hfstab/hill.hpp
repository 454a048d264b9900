#pragma once

// Fourier–Floquet–Hill spectra of the linearization about a traveling wave.
//
// Scalar models, k_n = n + μ:
//     A_nm = i k_n [ (c − s(k_n)) δ_nm − σ (Uᵖ)^_{n−m} ].
// Boussinesq–Whitham, unknowns (q_n, p_n):
//     λq = ik(Vq + p),   λp = ik(Vp + c²(k)q + 2α (Q̂ ∗ q)).
// Canonical models are supported at zero amplitude only (2×2 blocks JŜ(k_n)).

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hfstab/collision.hpp"
#include "hfstab/dispersion.hpp"
#include "hfstab/error.hpp"
#include "hfstab/krein.hpp"
#include "hfstab/parallel.hpp"
#include "hfstab/traveling_wave.hpp"

namespace hfstab {

using MatX = Eigen::MatrixXcd;

/// Zero wave moving at speed c (V for BW).
inline TravelingWave zero_wave(const ModelSpec& model, double c, int modes = 0) {
  TravelingWave w;
  w.model = model.id;
  w.c = c;
  w.coefficients.assign(static_cast<std::size_t>(modes + 1), 0.0);
  return w;
}

namespace detail {

/// Complex Fourier coefficients F̂_j, j = −2M..2M, of f(U(x)) for the even wave U.
template <class Fn>
std::vector<cplx> convolution_coefficients(const TravelingWave& w, int M, int power, Fn&& f) {
  const int Mw = std::max(w.modes(), 0);
  const int need = 2 * M;
  const int Ng = 2 * (power * Mw + need) + 4;
  std::vector<double> samples(static_cast<std::size_t>(Ng));
  for (int i = 0; i < Ng; ++i) samples[static_cast<std::size_t>(i)] = f(w(2 * pi * i / Ng));
  std::vector<double> cosine = cosine_transform(samples, need);
  std::vector<cplx> out(static_cast<std::size_t>(2 * need + 1));
  for (int j = -need; j <= need; ++j) {
    int a = std::abs(j);
    out[static_cast<std::size_t>(j + need)] = a == 0 ? cosine[0] : cosine[static_cast<std::size_t>(a)] / 2;
  }
  return out;
}

} // namespace detail

/// Hill matrix for Floquet exponent μ and modes n = −M..M.
inline MatX assemble(const ModelSpec& model, const TravelingWave& wave, double mu, int M) {
  if (M < 1) throw ConfigError("Hill truncation M must be at least 1");
  const int D = 2 * M + 1;
  const double c = wave.c;
  if (model.kind == PoissonKind::scalar) {
    MatX A = MatX::Zero(D, D);
    const double sigma = model.nonlinearity.coefficient;
    const int p = model.nonlinearity.power;
    std::vector<cplx> up;
    if (!wave.is_zero())
      up = detail::convolution_coefficients(wave, M, p, [p](double U) { return std::pow(U, p); });
    for (int n = -M; n <= M; ++n) {
      const double k = n + mu;
      const cplx ik{0.0, k};
      A(n + M, n + M) = -cplx{0.0, eval_Omega(model, 1, k, c)};
      if (up.empty()) continue;
      for (int m = -M; m <= M; ++m) A(n + M, m + M) -= ik * sigma * up[static_cast<std::size_t>(n - m + 2 * M)];
    }
    return A;
  }
  if (model.kind == PoissonKind::noncanonical_bw) {
    MatX A = MatX::Zero(2 * D, 2 * D);
    const double alpha = model.nonlinearity.coefficient;
    std::vector<cplx> qh;
    if (!wave.is_zero()) qh = detail::convolution_coefficients(wave, M, 1, [](double U) { return U; });
    for (int n = -M; n <= M; ++n) {
      const double k = n + mu;
      const cplx ik{0.0, k};
      const int r = n + M;
      A(r, r) = ik * c;
      A(r, D + r) = ik;
      A(D + r, D + r) = ik * c;
      A(D + r, r) = ik * model.hamiltonian.c_squared(k);
      if (qh.empty()) continue;
      for (int m = -M; m <= M; ++m) A(D + r, m + M) += ik * 2.0 * alpha * qh[static_cast<std::size_t>(n - m + 2 * M)];
    }
    return A;
  }
  if (!wave.is_zero())
    throw UnsupportedModel("finite-amplitude spectra are not available for canonical model '" + model.id + "'");
  MatX A = MatX::Zero(2 * D, 2 * D);
  const Mat2 J = canonical_J();
  for (int n = -M; n <= M; ++n) {
    Mat2 B = J * hessian_symbol(model, n + mu, c);
    const int r = n + M;
    A(r, r) = B(0, 0);
    A(r, D + r) = B(0, 1);
    A(D + r, r) = B(1, 0);
    A(D + r, D + r) = B(1, 1);
  }
  return A;
}

inline bool spectral_less(const cplx& a, const cplx& b) {
  if (a.imag() != b.imag()) return a.imag() < b.imag();
  return a.real() < b.real();
}

/// Eigenvalues of an assembled matrix sorted by (Im, Re).
inline std::vector<cplx> eigenvalues_sorted(const MatX& A, double mu) {
  Eigen::ComplexEigenSolver<MatX> solver(A, false);
  if (solver.info() != Eigen::Success)
    throw NumericalError(NumericalError::Kind::eigensolver_failure,
                         "eigensolver failed at mu=" + std::to_string(mu));
  std::vector<cplx> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), spectral_less);
  return ev;
}

inline std::vector<cplx> spectrum_at(const ModelSpec& model, const TravelingWave& wave, double mu, int M) {
  return eigenvalues_sorted(assemble(model, wave, mu, M), mu);
}

/// Closed-form zero-amplitude eigenvalues −iΩ_l(n+μ), n = −M..M, every branch.
inline std::vector<cplx> closed_form_slice(const ModelSpec& model, double c, double mu, int M) {
  std::vector<cplx> out;
  for (const auto& s : spectrum_slice(model, c, mu, -M, M)) out.push_back(s.lambda);
  std::sort(out.begin(), out.end(), spectral_less);
  return out;
}

/// Hausdorff distance between two finite point sets in ℂ.
inline double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  auto directed = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : y) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

/// μ_i = −1/2 + (i + φ)/count with φ = (√5 − 1)/2, avoiding μ = 0 and ±1/2.
inline std::vector<double> mu_samples(int count) {
  if (count < 1) throw ConfigError("mu count must be positive");
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = -0.5 + (i + phi) / count;
  return out;
}

/// Max over the μ samples of the Hausdorff distance between the Hill spectrum
/// of the zero wave and the closed-form eigenvalues.
inline double zero_amplitude_check(const ModelSpec& model, double c, const std::vector<double>& mus, int M,
                                   unsigned threads = 1) {
  TravelingWave w = zero_wave(model, c);
  std::vector<double> dev(mus.size());
  parallel_for(mus.size(), threads, [&](std::size_t i) {
    dev[i] = hausdorff(spectrum_at(model, w, mus[i], M), closed_form_slice(model, c, mus[i], M));
  });
  return dev.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());
}

struct MuGrid {
  int count = 500;
  /// Predicted collision exponents; windows are placed around ±μ*.
  std::vector<double> refine_centers;
  double window = 5e-3;
  int density = 10;

  std::vector<double> points() const {
    std::vector<double> pts = mu_samples(count);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double step = 1.0 / (static_cast<double>(count) * density);
    const int per_side = static_cast<int>(std::ceil(window / step));
    for (double c0 : refine_centers)
      for (double c : {c0, -c0})
        for (int j = -per_side; j < per_side; ++j) {
          double mu = c + (j + phi) * step;
          if (mu > -0.5 && mu <= 0.5) pts.push_back(mu);
        }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }
};

struct SpectrumSlice {
  double mu;
  std::vector<cplx> eigenvalues;
};

struct SpectrumSet {
  std::string model;
  int M = 0;
  double speed = 0.0;
  std::vector<SpectrumSlice> slices; // sorted by μ

  double max_real() const {
    double r = -std::numeric_limits<double>::infinity();
    for (const auto& s : slices)
      for (const auto& l : s.eigenvalues) r = std::max(r, l.real());
    return r;
  }
};

inline SpectrumSet full_spectrum(const ModelSpec& model, const TravelingWave& wave, const MuGrid& grid, int M,
                                 unsigned threads = 1) {
  std::vector<double> mus = grid.points();
  SpectrumSet set;
  set.model = model.id;
  set.M = M;
  set.speed = wave.c;
  set.slices.resize(mus.size());
  parallel_for(mus.size(), threads, [&](std::size_t i) {
    set.slices[i] = {mus[i], spectrum_at(model, wave, mus[i], M)};
  });
  return set;
}

struct Bubble {
  cplx center;       // eigenvalue of maximal growth in the cluster
  double max_growth = 0.0; // max Re λ
  double mu_min = 0.0, mu_max = 0.0;
  double im_min = 0.0, im_max = 0.0;
  int points = 0;
  bool near_origin = false; // |Im center| < 0.1
  std::optional<std::size_t> prediction; // index into the supplied predictions
  double prediction_distance = std::numeric_limits<double>::infinity();
};

/// Single-linkage clustering of eigenvalues with Re λ > threshold: points are
/// linked when their μ indices differ by at most one and |ΔIm λ| ≤ gap. Each
/// cluster is matched to the prediction whose ±Im λ is nearest its center.
inline std::vector<Bubble> detect_bubbles(const SpectrumSet& spec, double threshold = 1e-7,
                                          const std::vector<CollisionEvent>& predictions = {},
                                          double gap = 1e-2) {
  struct Pt {
    int slice;
    cplx lambda;
  };
  std::vector<Pt> pts;
  std::vector<std::vector<int>> by_slice(spec.slices.size());
  for (std::size_t s = 0; s < spec.slices.size(); ++s)
    for (const auto& l : spec.slices[s].eigenvalues)
      if (l.real() > threshold) {
        by_slice[s].push_back(static_cast<int>(pts.size()));
        pts.push_back({static_cast<int>(s), l});
      }

  std::vector<int> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  };
  // Slices hold eigenvalues sorted by Im, so candidates form a contiguous run.
  for (std::size_t s = 0; s < by_slice.size(); ++s)
    for (std::size_t t = s; t <= s + 1 && t < by_slice.size(); ++t)
      for (int a : by_slice[s]) {
        const auto& other = by_slice[t];
        double ia = pts[static_cast<std::size_t>(a)].lambda.imag();
        auto it = std::lower_bound(other.begin(), other.end(), ia - gap, [&pts](int idx, double v) {
          return pts[static_cast<std::size_t>(idx)].lambda.imag() < v;
        });
        for (; it != other.end() && pts[static_cast<std::size_t>(*it)].lambda.imag() <= ia + gap; ++it)
          if (*it != a) unite(a, *it);
      }

  std::vector<int> root_to_bubble(pts.size(), -1);
  std::vector<Bubble> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    int r = find(static_cast<int>(i));
    const Pt& p = pts[i];
    double mu = spec.slices[static_cast<std::size_t>(p.slice)].mu;
    int& b = root_to_bubble[static_cast<std::size_t>(r)];
    if (b < 0) {
      b = static_cast<int>(out.size());
      Bubble nb;
      nb.center = p.lambda;
      nb.max_growth = p.lambda.real();
      nb.mu_min = nb.mu_max = mu;
      nb.im_min = nb.im_max = p.lambda.imag();
      out.push_back(nb);
    }
    Bubble& B = out[static_cast<std::size_t>(b)];
    ++B.points;
    if (p.lambda.real() > B.max_growth) {
      B.max_growth = p.lambda.real();
      B.center = p.lambda;
    }
    B.mu_min = std::min(B.mu_min, mu);
    B.mu_max = std::max(B.mu_max, mu);
    B.im_min = std::min(B.im_min, p.lambda.imag());
    B.im_max = std::max(B.im_max, p.lambda.imag());
  }
  for (auto& B : out) {
    B.near_origin = std::abs(B.center.imag()) < 0.1;
    for (std::size_t j = 0; j < predictions.size(); ++j) {
      double d = std::abs(std::abs(B.center.imag()) - std::abs(predictions[j].lambda.imag()));
      if (d < B.prediction_distance) {
        B.prediction_distance = d;
        B.prediction = j;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Bubble& a, const Bubble& b) {
    if (a.center.imag() != b.center.imag()) return a.center.imag() < b.center.imag();
    return a.mu_min < b.mu_min;
  });
  return out;
}

} // namespace hfstab
