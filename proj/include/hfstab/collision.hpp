#pragma once

// Collisions of zero-amplitude eigenvalues within one Floquet class:
// λ_{n1,l1}(μ) = λ_{n2,l2}(μ), i.e. Ω_{l1}(n1+μ) = Ω_{l2}(n2+μ).

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "hfstab/dispersion.hpp"
#include "hfstab/error.hpp"
#include "hfstab/models.hpp"
#include "hfstab/parallel.hpp"

namespace hfstab {

enum class Verdict { no_instability_possible, potential_instability, indeterminate_origin };

inline const char* to_string(Verdict v) {
  switch (v) {
  case Verdict::no_instability_possible: return "no-instability-possible";
  case Verdict::potential_instability: return "potential-instability";
  case Verdict::indeterminate_origin: return "indeterminate-origin";
  }
  return "unknown";
}

struct CollisionEvent {
  ModeIndex first;
  ModeIndex second;
  double mu = 0.0;
  cplx lambda;
  bool at_origin = false;
  /// |Ω_{l1}(n1+μ) − Ω_{l2}(n2+μ)| at the reported μ.
  double residual = 0.0;
  double signature_product = 0.0;
  std::optional<Verdict> verdict;
};

struct CollisionOptions {
  int grid_points = 1024;
  double residual_tol = 1e-9;
  double lambda_tol = 1e-8;
  double mu_tol = 1e-13;
  /// Report both members of each λ ↔ −λ mirror pair instead of Im λ ≥ 0 only.
  bool keep_mirrors = false;
  unsigned threads = 1;
};

inline double collision_residual(const ModelSpec& model, int n1, int l1, int n2, int l2, double mu,
                                 double c) {
  if (n1 == n2 && l1 == l2) throw ConfigError("collision_residual needs two distinct modes");
  return eval_Omega(model, l1, n1 + mu, c) - eval_Omega(model, l2, n2 + mu, c);
}

namespace detail {

inline CollisionEvent make_event(const ModelSpec& model, ModeIndex a, ModeIndex b, double c,
                                 double lambda_tol) {
  CollisionEvent e;
  e.first = a;
  e.second = b;
  e.mu = a.mu;
  e.lambda = zero_amp_eigenvalue(model, a, c);
  e.residual = std::abs(collision_residual(model, a.n, a.l, b.n, b.l, a.mu, c));
  e.at_origin = std::abs(e.lambda) < lambda_tol;
  return e;
}

// Puts the pair in canonical order: n1 > n2, or n1 == n2 with l1 < l2.
inline void order_pair(CollisionEvent& e) {
  if (e.first.n < e.second.n || (e.first.n == e.second.n && e.first.l > e.second.l))
    std::swap(e.first, e.second);
}

inline bool event_less(const CollisionEvent& a, const CollisionEvent& b) {
  return std::make_tuple(a.lambda.imag(), a.mu, a.first.n, a.first.l, a.second.n, a.second.l) <
         std::make_tuple(b.lambda.imag(), b.mu, b.first.n, b.first.l, b.second.n, b.second.l);
}

inline long long round_key(double x) { return std::llround(x * 1e9); }

} // namespace detail

/// The event obtained under k → −k: modes (−n, l') at −μ with eigenvalue −λ.
inline CollisionEvent mirror_event(const ModelSpec& model, const CollisionEvent& e, double c,
                                   double lambda_tol = 1e-8) {
  ModeIndex a = normalize({-e.first.n, -e.first.mu, model.mirror(e.first.l)});
  ModeIndex b = normalize({-e.second.n, -e.second.mu, model.mirror(e.second.l)});
  CollisionEvent m = detail::make_event(model, a, b, c, lambda_tol);
  m.signature_product = e.signature_product;
  m.verdict = e.verdict;
  detail::order_pair(m);
  return m;
}

/// Scans every admissible tuple (n1, l1, n2, l2) with |n| ≤ n_max for sign
/// changes of the collision residual on a uniform μ grid over [−1/2, 1/2],
/// refines each bracket by bisection, and returns the deduplicated events
/// sorted by (Im λ, μ, n1, l1, n2, l2). Roots that touch zero without a sign
/// change are not detected.
inline std::vector<CollisionEvent> find_collisions(const ModelSpec& model, double c, int n_max,
                                                   const CollisionOptions& opts = {}) {
  if (n_max < 1) throw ConfigError("n_max must be at least 1");
  if (opts.grid_points < 2) throw ConfigError("grid_points must be at least 2");
  const int G = opts.grid_points;
  const int L = model.branch_count();
  const int span = 2 * n_max + 1;

  std::vector<double> mus(static_cast<std::size_t>(G + 1));
  for (int i = 0; i <= G; ++i) mus[static_cast<std::size_t>(i)] = -0.5 + static_cast<double>(i) / G;

  // table[(l-1)*span + (n+n_max)][i] = Ω_l(n + μ_i)
  std::vector<std::vector<double>> table(static_cast<std::size_t>(L * span));
  for (int l = 1; l <= L; ++l)
    for (int n = -n_max; n <= n_max; ++n) {
      auto& row = table[static_cast<std::size_t>((l - 1) * span + n + n_max)];
      row.resize(static_cast<std::size_t>(G + 1));
      for (int i = 0; i <= G; ++i) row[static_cast<std::size_t>(i)] = eval_Omega(model, l, n + mus[static_cast<std::size_t>(i)], c);
    }

  struct Tuple {
    int n1, l1, n2, l2;
  };
  std::vector<Tuple> tuples;
  for (int n1 = -n_max; n1 <= n_max; ++n1)
    for (int n2 = -n_max; n2 <= n1; ++n2)
      for (int l1 = 1; l1 <= L; ++l1)
        for (int l2 = 1; l2 <= L; ++l2)
          if (n1 > n2 || l1 < l2) tuples.push_back({n1, l1, n2, l2});

  std::vector<std::vector<CollisionEvent>> found(tuples.size());
  parallel_for(tuples.size(), opts.threads, [&](std::size_t t) {
    const Tuple& tp = tuples[t];
    const auto& r1 = table[static_cast<std::size_t>((tp.l1 - 1) * span + tp.n1 + n_max)];
    const auto& r2 = table[static_cast<std::size_t>((tp.l2 - 1) * span + tp.n2 + n_max)];
    auto f = [&](double mu) { return collision_residual(model, tp.n1, tp.l1, tp.n2, tp.l2, mu, c); };
    auto record = [&](double mu) {
      ModeIndex a{tp.n1, mu, tp.l1}, b{tp.n2, mu, tp.l2};
      if (mu <= -0.5) {
        a = {tp.n1 - 1, 0.5, tp.l1};
        b = {tp.n2 - 1, 0.5, tp.l2};
      }
      CollisionEvent e = detail::make_event(model, a, b, c, opts.lambda_tol);
      if (e.residual > opts.residual_tol) return;
      detail::order_pair(e);
      found[t].push_back(e);
    };
    for (int i = 0; i <= G; ++i) {
      double fi = r1[static_cast<std::size_t>(i)] - r2[static_cast<std::size_t>(i)];
      if (fi == 0.0) {
        record(mus[static_cast<std::size_t>(i)]);
        continue;
      }
      if (i == G) break;
      double fj = r1[static_cast<std::size_t>(i + 1)] - r2[static_cast<std::size_t>(i + 1)];
      if (fj == 0.0 || (fi < 0) == (fj < 0)) continue;
      double lo = mus[static_cast<std::size_t>(i)], hi = mus[static_cast<std::size_t>(i + 1)];
      double flo = fi;
      while (hi - lo > opts.mu_tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      record(0.5 * (lo + hi));
    }
  });

  std::vector<CollisionEvent> all;
  for (auto& v : found)
    for (auto& e : v)
      if (opts.keep_mirrors || e.at_origin || e.lambda.imag() >= 0) all.push_back(e);
  std::sort(all.begin(), all.end(), detail::event_less);

  std::vector<CollisionEvent> out;
  std::map<std::pair<long long, long long>, bool> seen;
  for (auto& e : all) {
    auto key = std::make_pair(detail::round_key(e.lambda.imag()), detail::round_key(e.mu));
    if (seen.emplace(key, true).second) out.push_back(e);
  }
  return out;
}

/// Non-origin events only.
inline std::vector<CollisionEvent> non_origin(const std::vector<CollisionEvent>& events) {
  std::vector<CollisionEvent> out;
  for (const auto& e : events)
    if (!e.at_origin) out.push_back(e);
  return out;
}

struct CurveSample {
  int l;
  int n;
  double k;
  double Omega;
};

/// Samples Ω_l(k + n) for every branch and n in [n_lo, n_hi] over k_grid.
/// Intersections of two curves at a common k are collisions at μ = k.
inline std::vector<CurveSample> secant_curve_data(const ModelSpec& model, double c, int n_lo, int n_hi,
                                                  const std::vector<double>& k_grid) {
  if (n_hi < n_lo) throw ConfigError("empty n window");
  std::vector<CurveSample> rows;
  rows.reserve(static_cast<std::size_t>(model.branch_count() * (n_hi - n_lo + 1)) * k_grid.size());
  for (int l = 1; l <= model.branch_count(); ++l)
    for (int n = n_lo; n <= n_hi; ++n)
      for (double k : k_grid) rows.push_back({l, n, k, eval_Omega(model, l, k + n, c)});
  return rows;
}

struct DepthTracePoint {
  double h;
  double im_lambda;
  double mu;
};

/// For each depth, the non-origin water-wave collision closest to the origin
/// (bifurcation from branch 1 at mode N).
inline std::vector<DepthTracePoint> trace_first_collision_vs_depth(double g, const std::vector<double>& h_grid,
                                                                   int n_max, const CollisionOptions& opts = {},
                                                                   int N = 1) {
  std::vector<DepthTracePoint> out;
  for (double h : h_grid) {
    if (!(h > 0)) throw ModelError("depth must be positive");
    ModelSpec model = make_model("water-waves", {{"g", g}, {"h", h}});
    double c = bifurcation_speed(model, 1, N);
    auto events = non_origin(find_collisions(model, c, n_max, opts));
    const CollisionEvent* best = nullptr;
    for (const auto& e : events)
      if (e.lambda.imag() > 0 && (!best || e.lambda.imag() < best->lambda.imag())) best = &e;
    if (!best)
      throw NumericalError(NumericalError::Kind::no_collision_found,
                           "no non-origin collision at h=" + std::to_string(h) + " with n_max=" +
                               std::to_string(n_max));
    out.push_back({h, best->lambda.imag(), best->mu});
  }
  return out;
}

} // namespace hfstab
