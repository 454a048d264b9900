#pragma once

// Krein signatures of colliding zero-amplitude eigenvalues and the six-step
// necessary-condition pipeline.

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hfstab/collision.hpp"
#include "hfstab/dispersion.hpp"
#include "hfstab/error.hpp"
#include "hfstab/models.hpp"

namespace hfstab {

// ---------------------------------------------------------------- scalar ---

/// sign(−Ω(k)/k) with k = n+μ. Only the sign is meaningful; the positive
/// proportionality factor is not fixed.
inline int scalar_signature(const ModelSpec& model, const ModeIndex& idx, double c) {
  if (model.kind != PoissonKind::scalar) throw UnsupportedModel("scalar_signature needs a scalar model");
  double k = idx.wavenumber();
  if (k == 0.0) throw DomainError("scalar Krein signature undefined at n+mu = 0");
  return static_cast<int>(sign(-eval_Omega(model, idx.l, k, c) / k));
}

/// Signatures of a scalar collision are opposite iff (n1+μ)(n2+μ) < 0.
inline bool scalar_opposite(const CollisionEvent& e) {
  return (e.first.n + e.mu) * (e.second.n + e.mu) < 0;
}

// ------------------------------------------------------------- canonical ---

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

/// Ŝ(k) = [[C, −ick + A(−k)], [ick + A(k), B]], the symbol of the Hessian of
/// the Hamiltonian in the frame moving at speed c. Hermitian for real k.
inline Mat2 hessian_symbol(const ModelSpec& model, double k, double c) {
  if (model.kind != PoissonKind::canonical) throw UnsupportedModel("hessian_symbol needs a canonical model");
  const auto& H = model.hamiltonian;
  const cplx ick{0.0, c * k};
  Mat2 S;
  S << H.c_symbol(k), -ick + H.a_symbol(-k), ick + H.a_symbol(k), H.b_symbol(k);
  return S;
}

inline Mat2 canonical_J() {
  Mat2 J;
  J << 0.0, 1.0, -1.0, 0.0;
  return J;
}

struct EigenMode {
  ModeIndex mode;
  cplx lambda;
  double speed = 0.0;
  /// (Q, P) for two-component systems, unit norm; absent for scalar models.
  std::optional<Vec2> components;
};

/// Closed-form null vector of JŜ(k) − λI for λ = −iΩ_l(k). Uses the row whose
/// vector has the larger norm and verifies it to 1e−10 (relative).
inline EigenMode eigen_mode(const ModelSpec& model, const ModeIndex& idx, double c) {
  EigenMode em;
  em.mode = idx;
  em.speed = c;
  em.lambda = zero_amp_eigenvalue(model, idx, c);
  if (model.kind == PoissonKind::scalar) return em;

  const double k = idx.wavenumber();
  const double w = eval_omega(model, idx.l, k);
  const cplx iw{0.0, w};
  Mat2 A;
  Vec2 v;
  if (model.kind == PoissonKind::canonical) {
    const auto& H = model.hamiltonian;
    Vec2 from_first(H.b_symbol(k), -(iw + H.a_symbol(k)));
    Vec2 from_second(iw - H.a_symbol(-k), H.c_symbol(k));
    v = from_first.norm() >= from_second.norm() ? from_first : from_second;
    A = canonical_J() * hessian_symbol(model, k, c);
  } else {
    // J = [[0, ∂], [∂, 0]], ℒ_V = [[c²(k), V], [V, 1]] ⇒ JL̂ = ik·[[V, 1], [c², V]].
    double c2 = model.hamiltonian.c_squared(k);
    const cplx ik{0.0, k};
    v = Vec2(ik, em.lambda - ik * c);
    A << ik * c, ik, ik * c2, ik * c;
  }
  double nv = v.norm();
  if (nv == 0.0)
    throw NumericalError(NumericalError::Kind::eigenvector_not_found,
                         "zero eigenvector at n=" + std::to_string(idx.n) + " mu=" + std::to_string(idx.mu));
  v /= nv;
  double scale = std::max(1.0, A.norm());
  if ((A * v - em.lambda * v).norm() > 1e-10 * scale)
    throw NumericalError(NumericalError::Kind::eigenvector_not_found,
                         "no eigenvalue of the symbol matrix near lambda at n=" + std::to_string(idx.n) +
                             " mu=" + std::to_string(idx.mu));
  em.components = v;
  return em;
}

/// v†Ŝ(k)v for the unit eigenvector; its sign is the Krein signature.
inline double canonical_signature(const ModelSpec& model, const EigenMode& em) {
  if (!em.components) throw UnsupportedModel("canonical_signature needs a two-component mode");
  if (std::abs(em.lambda) == 0.0) return 0.0;
  const Vec2& v = *em.components;
  cplx q = v.dot(hessian_symbol(model, em.mode.wavenumber(), em.speed) * v);
  return q.real();
}

/// Equivalent expressions whose signs all equal the Krein signature.
enum class KreinForm {
  hessian,     // v†Ŝv with the computed eigenvector
  determinant, // λ(QP* − Q*P)
  first_row,   // 2ΩC(ω + A_o), from the null vector of the second row
  second_row,  // 2ΩB(ω + A_o), from the null vector of the first row
  even_first,  // ωC: even systems, common factor 2Ω dropped at a collision
  even_second, // ωB
};

inline const char* to_string(KreinForm f) {
  switch (f) {
  case KreinForm::hessian: return "hessian";
  case KreinForm::determinant: return "determinant";
  case KreinForm::first_row: return "first-row";
  case KreinForm::second_row: return "second-row";
  case KreinForm::even_first: return "even-first";
  case KreinForm::even_second: return "even-second";
  }
  return "unknown";
}

/// A(k) = A_e(k) + iA_o(k) splits the symbol into its real and imaginary parts.
inline double canonical_krein_quantity(const ModelSpec& model, const ModeIndex& idx, double c, KreinForm form) {
  const double k = idx.wavenumber();
  const double w = eval_omega(model, idx.l, k);
  const double Om = w - c * k;
  const auto& H = model.hamiltonian;
  switch (form) {
  case KreinForm::hessian: return canonical_signature(model, eigen_mode(model, idx, c));
  case KreinForm::determinant: {
    EigenMode em = eigen_mode(model, idx, c);
    const Vec2& v = *em.components;
    cplx d = em.lambda * (v(0) * std::conj(v(1)) - std::conj(v(0)) * v(1));
    return d.real();
  }
  case KreinForm::first_row: return 2 * Om * H.c_symbol(k) * (w + H.a_symbol(k).imag());
  case KreinForm::second_row: return 2 * Om * H.b_symbol(k) * (w + H.a_symbol(k).imag());
  case KreinForm::even_first:
  case KreinForm::even_second:
    if (!model.even_system) throw UnsupportedModel("even-system shortcut on a model without omega2 = -omega1");
    return w * (form == KreinForm::even_first ? H.c_symbol(k) : H.b_symbol(k));
  }
  return 0.0;
}

inline double canonical_signature_product(const ModelSpec& model, const CollisionEvent& e, double c,
                                          KreinForm form = KreinForm::hessian) {
  return canonical_krein_quantity(model, e.first, c, form) * canonical_krein_quantity(model, e.second, c, form);
}

/// True iff the two colliding modes have opposite signatures.
inline bool canonical_opposite(const ModelSpec& model, const CollisionEvent& e, double c,
                               KreinForm form = KreinForm::hessian) {
  return canonical_signature_product(model, e, c, form) < 0;
}

// -------------------------------------------------------- Boussinesq–Whitham ---

/// 2ω(ω − kV) with ω = ω_l(k), k = n+μ.
inline double bw_signature(const ModelSpec& model, const ModeIndex& idx, double V) {
  if (model.kind != PoissonKind::noncanonical_bw) throw UnsupportedModel("bw_signature needs the BW model");
  double k = idx.wavenumber();
  double w = eval_omega(model, idx.l, k);
  return 2 * w * (w - k * V);
}

/// v†ℒ_V v with v = (ik, λ − ikV), evaluated as a matrix product.
inline double bw_signature_direct(const ModelSpec& model, const ModeIndex& idx, double V) {
  if (model.kind != PoissonKind::noncanonical_bw) throw UnsupportedModel("bw_signature needs the BW model");
  double k = idx.wavenumber();
  cplx lambda = zero_amp_eigenvalue(model, idx, V);
  Vec2 v(cplx{0.0, k}, lambda - cplx{0.0, k * V});
  Mat2 L;
  L << model.hamiltonian.c_squared(k), V, V, 1.0;
  return v.dot(L * v).real();
}

// --------------------------------------------------------------- verdicts ---

inline constexpr double signature_zero_tol = 1e-12;

inline double signature_product(const ModelSpec& model, const CollisionEvent& e, double c,
                                KreinForm form = KreinForm::hessian) {
  switch (model.kind) {
  case PoissonKind::scalar: {
    double k1 = e.first.wavenumber(), k2 = e.second.wavenumber();
    if (k1 == 0.0 || k2 == 0.0) return 0.0;
    return (-eval_Omega(model, e.first.l, k1, c) / k1) * (-eval_Omega(model, e.second.l, k2, c) / k2);
  }
  case PoissonKind::canonical: return canonical_signature_product(model, e, c, form);
  case PoissonKind::noncanonical_bw: return bw_signature(model, e.first, c) * bw_signature(model, e.second, c);
  }
  return 0.0;
}

inline Verdict verdict_for(const CollisionEvent& e) {
  if (e.at_origin || std::abs(e.signature_product) < signature_zero_tol) return Verdict::indeterminate_origin;
  return e.signature_product < 0 ? Verdict::potential_instability : Verdict::no_instability_possible;
}

/// Fills signature_product and verdict on every event.
inline void classify_events(const ModelSpec& model, std::vector<CollisionEvent>& events, double c,
                            KreinForm form = KreinForm::hessian) {
  for (auto& e : events) {
    e.signature_product = e.at_origin ? 0.0 : signature_product(model, e, c, form);
    e.verdict = verdict_for(e);
  }
}

// --------------------------------------------------------------- pipeline ---

struct PipelineOptions {
  int N = 1;
  int branch = 1;
  int n_max = 10;
  CollisionOptions collision;
  KreinForm form = KreinForm::hessian;
};

struct AnalysisReport {
  std::string model;
  std::string kind;
  int N = 1;
  int branch = 1;
  double speed = 0.0;
  int n_max = 10;
  std::vector<CollisionEvent> events;
  bool instability_possible = false;
  std::map<std::string, int> counts;
  std::map<std::string, double> diagnostics;

  const char* overall() const {
    return instability_possible ? "HF-instability-possible" : "HF-instability-excluded";
  }
};

/// Steps 1–6: dispersion check, speed c = ω_l(N)/N, zero-amplitude spectrum,
/// collisions, signatures, verdict. The verdict is a necessary condition only.
inline AnalysisReport run_pipeline(const ModelSpec& model, const PipelineOptions& opts = {}) {
  validate_dispersive(model);
  AnalysisReport rep;
  rep.model = model.id;
  rep.kind = to_string(model.kind);
  rep.N = opts.N;
  rep.branch = opts.branch;
  rep.n_max = opts.n_max;
  rep.speed = bifurcation_speed(model, opts.branch, opts.N);

  double max_re = 0.0;
  int slice_size = 0;
  for (double mu : {0.0, 0.25, 0.5}) {
    auto slice = spectrum_slice(model, rep.speed, mu, -opts.n_max, opts.n_max);
    slice_size = static_cast<int>(slice.size());
    for (const auto& s : slice) max_re = std::max(max_re, std::abs(s.lambda.real()));
  }
  rep.diagnostics["slice_max_abs_re_lambda"] = max_re;
  rep.diagnostics["slice_size"] = slice_size;

  rep.events = find_collisions(model, rep.speed, opts.n_max, opts.collision);
  classify_events(model, rep.events, rep.speed, opts.form);

  int origin = 0, potential = 0, excluded = 0, indeterminate = 0;
  double max_residual = 0.0;
  for (const auto& e : rep.events) {
    origin += e.at_origin;
    max_residual = std::max(max_residual, e.residual);
    switch (*e.verdict) {
    case Verdict::potential_instability: ++potential; break;
    case Verdict::no_instability_possible: ++excluded; break;
    case Verdict::indeterminate_origin: ++indeterminate; break;
    }
  }
  rep.counts["events"] = static_cast<int>(rep.events.size());
  rep.counts["origin"] = origin;
  rep.counts["non_origin"] = static_cast<int>(rep.events.size()) - origin;
  rep.counts["potential_instability"] = potential;
  rep.counts["no_instability_possible"] = excluded;
  rep.counts["indeterminate_origin"] = indeterminate;
  rep.diagnostics["max_collision_residual"] = max_residual;
  rep.instability_possible = potential > 0;
  return rep;
}

} // namespace hfstab
