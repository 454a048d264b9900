#pragma once

// Hamiltonian PDE models, their dispersion relations and the closed-form
// zero-amplitude stability spectrum.
//
// Conventions: the period is fixed to 2π, wavenumbers of Floquet modes are
// k = n + μ with μ ∈ (−1/2, 1/2], and the traveling-frame dispersion relation
// is Ω_l(k) = ω_l(k) − c k. Zero-amplitude eigenvalues are λ = −i Ω_l(n + μ).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hfstab/error.hpp"

namespace hfstab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// sign(0) = 0, so branches such as sign(k)·sqrt(g k tanh kh) vanish at k = 0.
inline double sign(double x) noexcept { return static_cast<double>((x > 0) - (x < 0)); }

class ModelParams {
public:
  ModelParams() = default;
  ModelParams(std::initializer_list<std::pair<const std::string, double>> init) {
    for (const auto& [name, value] : init) set(name, value);
  }

  void set(const std::string& name, double value) {
    if (!std::isfinite(value))
      throw ModelError("parameter '" + name + "' must be finite");
    if ((name == "h" || name == "g") && !(value > 0))
      throw ModelError("parameter '" + name + "' must be positive");
    values_[name] = value;
  }

  bool contains(const std::string& name) const { return values_.count(name) != 0; }

  double get(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw ModelError("missing model parameter '" + name + "'");
    return it->second;
  }

  double get_or(const std::string& name, double fallback) const {
    auto it = values_.find(name);
    return it == values_.end() ? fallback : it->second;
  }

  const std::map<std::string, double>& values() const noexcept { return values_; }

private:
  std::map<std::string, double> values_;
};

enum class PoissonKind { scalar, canonical, noncanonical_bw };
enum class Parity { odd, general };

inline const char* to_string(PoissonKind kind) {
  switch (kind) {
  case PoissonKind::scalar: return "scalar";
  case PoissonKind::canonical: return "canonical";
  case PoissonKind::noncanonical_bw: return "noncanonical-bw";
  }
  return "unknown";
}

struct DispersionBranch {
  int index = 1;
  std::function<double(double)> omega;
  Parity parity = Parity::odd;
};

/// Symbols of the quadratic Hamiltonian, evaluated in closed form.
struct HamiltonianData {
  /// Scalar models: phase speed ω(k)/k, continuous through k = 0. This is the
  /// symbol of the nonlocal operator in u_t + σuᵖu_x + (K∗u)_x = 0.
  std::function<double(double)> phase_speed;

  /// Canonical models: A(k) = Σ aₙ(ik)ⁿ, B(k) = Σ bₙk²ⁿ, C(k) = Σ cₙk²ⁿ.
  std::function<cplx(double)> a_symbol;
  std::function<double(double)> b_symbol;
  std::function<double(double)> c_symbol;

  /// Boussinesq–Whitham structure: c²(k), continuous through k = 0.
  std::function<double(double)> c_squared;
};

/// Scalar: σ uᵖ u_x. Boussinesq–Whitham: α q² inside ∂ₓ².
struct Nonlinearity {
  double coefficient = 0.0;
  int power = 1;
};

struct ModelSpec {
  std::string id;
  PoissonKind kind = PoissonKind::scalar;
  std::vector<DispersionBranch> branches;
  ModelParams params;
  HamiltonianData hamiltonian;
  bool even_system = false;
  /// mirror_branch[l-1] = l' such that ω_l(−k) = −ω_{l'}(k).
  std::array<int, 2> mirror_branch{1, 2};
  Nonlinearity nonlinearity;

  int branch_count() const noexcept { return static_cast<int>(branches.size()); }

  const DispersionBranch& branch(int l) const {
    if (l < 1 || l > branch_count())
      throw ModelError("model '" + id + "' has no dispersion branch " + std::to_string(l));
    return branches[static_cast<std::size_t>(l - 1)];
  }

  int mirror(int l) const {
    branch(l);
    return mirror_branch[static_cast<std::size_t>(l - 1)];
  }
};

/// A Floquet mode e^{i(n+μ)x} on dispersion branch l.
struct ModeIndex {
  int n = 0;
  double mu = 0.0;
  int l = 1;

  double wavenumber() const noexcept { return n + mu; }
  bool valid() const noexcept { return mu > -0.5 && mu <= 0.5; }
};

/// Maps μ into (−1/2, 1/2], shifting n so that n + μ is unchanged.
inline ModeIndex normalize(ModeIndex m) {
  double shift = std::floor(0.5 - m.mu);
  // floor(0.5 - mu) moves mu into (-1/2, 1/2]; shift is an integer
  m.mu += shift;
  m.n -= static_cast<int>(shift);
  if (m.mu <= -0.5) {
    m.mu += 1.0;
    m.n -= 1;
  }
  return m;
}

inline double eval_omega(const ModelSpec& model, int l, double k) {
  if (!std::isfinite(k)) throw ModelError("wavenumber must be finite");
  double w = model.branch(l).omega(k);
  if (!std::isfinite(w))
    throw ModelError("model-not-dispersive: omega_" + std::to_string(l) + "(" +
                     std::to_string(k) + ") is not finite for model '" + model.id + "'");
  return w;
}

inline double eval_Omega(const ModelSpec& model, int l, double k, double c) {
  return eval_omega(model, l, k) - c * k;
}

inline double bifurcation_speed(const ModelSpec& model, int l, int N) {
  if (N < 1) throw ModelError("bifurcation mode N must be a positive integer");
  return eval_omega(model, l, static_cast<double>(N)) / N;
}

inline cplx zero_amp_eigenvalue(const ModelSpec& model, const ModeIndex& idx, double c) {
  return {0.0, -eval_Omega(model, idx.l, idx.wavenumber(), c)};
}

struct SliceEntry {
  ModeIndex mode;
  cplx lambda;
};

/// All zero-amplitude eigenvalues for one Floquet exponent and n ∈ [n_lo, n_hi],
/// over every branch, sorted by imaginary part (ties by n, then l).
inline std::vector<SliceEntry> spectrum_slice(const ModelSpec& model, double c, double mu,
                                              int n_lo, int n_hi) {
  if (n_hi < n_lo) throw ModelError("empty mode range in spectrum_slice");
  std::vector<SliceEntry> out;
  out.reserve(static_cast<std::size_t>(n_hi - n_lo + 1) * model.branches.size());
  for (int n = n_lo; n <= n_hi; ++n)
    for (int l = 1; l <= model.branch_count(); ++l) {
      ModeIndex m{n, mu, l};
      out.push_back({m, zero_amp_eigenvalue(model, m, c)});
    }
  std::stable_sort(out.begin(), out.end(), [](const SliceEntry& a, const SliceEntry& b) {
    if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() < b.lambda.imag();
    if (a.mode.n != b.mode.n) return a.mode.n < b.mode.n;
    return a.mode.l < b.mode.l;
  });
  return out;
}

/// Result of checking that a model's branches are real and respect k → −k.
struct DispersivityReport {
  bool dispersive = true;
  double max_mirror_violation = 0.0;
  double max_even_violation = 0.0;
  std::string message;
};

/// Samples every branch on a symmetric grid. A model passes if all values are
/// finite, ω_l(−k) = −ω_{l'}(k) holds for the declared mirror pairing, and
/// even systems satisfy ω₁ + ω₂ = 0. Tolerances are relative to max(1, |ω|).
inline DispersivityReport check_dispersive(const ModelSpec& model, double k_max = 10.0,
                                           int samples = 401, double tol = 1e-10) {
  DispersivityReport rep;
  for (int i = 0; i < samples; ++i) {
    double k = -k_max + 2.0 * k_max * i / (samples - 1);
    for (int l = 1; l <= model.branch_count(); ++l) {
      double w, wm, wmirror;
      try {
        w = eval_omega(model, l, k);
        wm = eval_omega(model, l, -k);
        wmirror = eval_omega(model, model.mirror(l), k);
      } catch (const Error& e) {
        rep.dispersive = false;
        rep.message = e.what();
        return rep;
      }
      double scale = std::max(1.0, std::abs(w));
      rep.max_mirror_violation = std::max(rep.max_mirror_violation, std::abs(wm + wmirror) / scale);
      if (model.even_system && l == 1) {
        double w2 = eval_omega(model, 2, k);
        rep.max_even_violation = std::max(rep.max_even_violation, std::abs(w + w2) / scale);
      }
    }
  }
  if (rep.max_mirror_violation > tol) {
    rep.dispersive = false;
    rep.message = "dispersion branches violate omega_l(-k) = -omega_l'(k)";
  } else if (rep.max_even_violation > tol) {
    rep.dispersive = false;
    rep.message = "model is flagged even but omega_1 + omega_2 != 0";
  }
  return rep;
}

} // namespace hfstab
