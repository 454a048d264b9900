#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hfstab/krein.hpp"
#include "hfstab/models.hpp"

using namespace hfstab;

namespace {

ModelSpec drifting_klein_gordon() {
  CustomModelSpec s;
  s.kind = PoissonKind::canonical;
  s.omega1 = "sqrt(1 + k^2) + v*k";
  s.omega2 = "-sqrt(1 + k^2) + v*k";
  s.params.set("v", 0.3);
  return make_custom_model(s);
}

std::vector<ModelSpec> canonical_models() {
  return {make_model("water-waves", {{"g", 1.0}, {"h", 1.0}}), make_model("water-waves", {{"g", 1.0}, {"h", 0.5}}),
          make_model("water-waves-deep"), make_model("sine-gordon"), drifting_klein_gordon()};
}

} // namespace

TEST(Scalar, SignatureSigns) {
  ModelSpec kdv = make_model("kdv");
  double c = bifurcation_speed(kdv, 1, 1);
  EXPECT_EQ(scalar_signature(kdv, {2, 0.0, 1}, c), 1);
  EXPECT_EQ(scalar_signature(kdv, {0, 0.5, 1}, c), -1);
  EXPECT_EQ(scalar_signature(kdv, {-2, 0.0, 1}, c), 1);
  EXPECT_THROW(scalar_signature(kdv, {0, 0.0, 1}, c), DomainError);
  EXPECT_THROW(scalar_signature(make_model("sine-gordon"), {1, 0.0, 1}, c), UnsupportedModel);
}

TEST(Scalar, OppositeIffWavenumbersOfOppositeSign) {
  CollisionEvent e;
  e.mu = 0.2;
  e.first = {1, 0.2, 1};
  e.second = {-1, 0.2, 1};
  EXPECT_TRUE(scalar_opposite(e));
  e.second = {0, 0.2, 1};
  EXPECT_FALSE(scalar_opposite(e));
}

TEST(Scalar, FifthOrderEventsMatchNmRule) {
  ModelSpec m = make_model("fifth-order-scalar");
  double c = bifurcation_speed(m, 1, 1);
  auto ev = non_origin(find_collisions(m, c, 8));
  classify_events(m, ev, c);
  ASSERT_FALSE(ev.empty());
  bool any = false;
  for (const auto& e : ev) {
    EXPECT_EQ(e.signature_product < 0, scalar_opposite(e));
    any = any || scalar_opposite(e);
  }
  EXPECT_TRUE(any);
}

TEST(Canonical, HessianIsHermitian) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> kd(-6.0, 6.0);
  for (const auto& m : canonical_models())
    for (int i = 0; i < 50; ++i) {
      double k = kd(rng);
      Mat2 S = hessian_symbol(m, k, 0.7);
      EXPECT_LE((S - S.adjoint()).norm(), 1e-13 * std::max(1.0, S.norm())) << m.id << " k=" << k;
    }
}

TEST(Canonical, EigenvectorSatisfiesSymbol) {
  for (const auto& m : canonical_models()) {
    double c = bifurcation_speed(m, 1, 1);
    for (int n = -4; n <= 4; ++n)
      for (int l = 1; l <= 2; ++l) {
        ModeIndex idx{n, 0.173, l};
        EigenMode em = eigen_mode(m, idx, c);
        ASSERT_TRUE(em.components);
        Vec2 v = *em.components;
        EXPECT_NEAR(v.norm(), 1.0, 1e-14);
        Mat2 A = canonical_J() * hessian_symbol(m, idx.wavenumber(), c);
        EXPECT_LE((A * v - em.lambda * v).norm(), 1e-10 * std::max(1.0, A.norm()));
      }
  }
}

TEST(Canonical, FormulaEquivalenceOnEvents) {
  for (const auto& m : canonical_models()) {
    double c = bifurcation_speed(m, 1, 1);
    CollisionOptions o;
    o.keep_mirrors = true;
    auto ev = non_origin(find_collisions(m, c, 8, o));
    ASSERT_FALSE(ev.empty()) << m.id;
    for (const auto& e : ev) {
      for (const ModeIndex* idx : {&e.first, &e.second}) {
        double ref = canonical_krein_quantity(m, *idx, c, KreinForm::hessian);
        ASSERT_NE(ref, 0.0);
        for (KreinForm f : {KreinForm::determinant, KreinForm::first_row, KreinForm::second_row})
          EXPECT_EQ(sign(canonical_krein_quantity(m, *idx, c, f)), sign(ref)) << m.id << " " << to_string(f);
      }
      // The even shortcuts drop the factor 2Ω shared by both modes, so only
      // the product keeps its sign.
      if (m.even_system) {
        double ref = canonical_signature_product(m, e, c);
        for (KreinForm f : {KreinForm::even_first, KreinForm::even_second})
          EXPECT_EQ(sign(canonical_signature_product(m, e, c, f)), sign(ref)) << m.id << " " << to_string(f);
      }
    }
  }
}

TEST(Canonical, EvenShortcutRejectedForUnevenSystem) {
  ModelSpec m = drifting_klein_gordon();
  EXPECT_FALSE(m.even_system);
  EXPECT_THROW(canonical_krein_quantity(m, {1, 0.1, 1}, 0.0, KreinForm::even_first), UnsupportedModel);
}

TEST(Canonical, SameBranchPairIsNotOpposite) {
  ModelSpec m = make_model("water-waves", {{"g", 1.0}, {"h", 1.0}});
  double c = bifurcation_speed(m, 1, 1);
  CollisionEvent e;
  e.mu = 0.1;
  e.first = {2, 0.1, 1};
  e.second = {1, 0.1, 1};
  for (KreinForm f : {KreinForm::hessian, KreinForm::determinant, KreinForm::first_row, KreinForm::second_row,
                      KreinForm::even_first, KreinForm::even_second})
    EXPECT_FALSE(canonical_opposite(m, e, c, f)) << to_string(f);
}

TEST(Canonical, WaterWaveEventsHaveOppositeSignatures) {
  for (double h : {0.5, 1.0, 2.0}) {
    ModelSpec m = make_model("water-waves", {{"g", 1.0}, {"h", h}});
    double c = bifurcation_speed(m, 1, 1);
    auto ev = non_origin(find_collisions(m, c, 10));
    ASSERT_FALSE(ev.empty());
    for (const auto& e : ev) EXPECT_LT(canonical_signature_product(m, e, c), 0.0) << h;
  }
}

TEST(BoussinesqWhitham, DirectMatchesFormula) {
  ModelSpec m = make_model("boussinesq-whitham");
  for (double V : {0.3, bifurcation_speed(m, 1, 1), -0.8})
    for (int n = -5; n <= 5; ++n)
      for (int l = 1; l <= 2; ++l) {
        ModeIndex idx{n, 0.21, l};
        double a = bw_signature(m, idx, V), b = bw_signature_direct(m, idx, V);
        EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
      }
  EXPECT_THROW(bw_signature(make_model("kdv"), {1, 0.0, 1}, 0.0), UnsupportedModel);
}

TEST(BoussinesqWhitham, EventsHaveOppositeSignatures) {
  ModelSpec m = make_model("boussinesq-whitham");
  double V = bifurcation_speed(m, 1, 1);
  auto ev = non_origin(find_collisions(m, V, 10));
  ASSERT_FALSE(ev.empty());
  for (const auto& e : ev) {
    double w1 = eval_omega(m, e.first.l, e.first.wavenumber());
    double w2 = eval_omega(m, e.second.l, e.second.wavenumber());
    EXPECT_LT(w1 * w2, 0.0);
    EXPECT_LT(bw_signature(m, e.first, V) * bw_signature(m, e.second, V), 0.0);
  }
}

TEST(Verdicts, Rules) {
  CollisionEvent e;
  e.at_origin = true;
  e.signature_product = -1;
  EXPECT_EQ(verdict_for(e), Verdict::indeterminate_origin);
  e.at_origin = false;
  EXPECT_EQ(verdict_for(e), Verdict::potential_instability);
  e.signature_product = 2;
  EXPECT_EQ(verdict_for(e), Verdict::no_instability_possible);
  e.signature_product = 1e-14;
  EXPECT_EQ(verdict_for(e), Verdict::indeterminate_origin);
  EXPECT_STREQ(to_string(Verdict::potential_instability), "potential-instability");
}

TEST(Pipeline, Verdicts) {
  struct Case {
    const char* id;
    bool possible;
  };
  for (Case cs : {Case{"whitham", false}, Case{"gkdv", false}, Case{"kdv", false}, Case{"water-waves", true},
                  Case{"water-waves-deep", true}, Case{"sine-gordon", true}, Case{"fifth-order-scalar", true},
                  Case{"boussinesq-whitham", true}}) {
    AnalysisReport r = run_pipeline(make_model(cs.id));
    EXPECT_EQ(r.instability_possible, cs.possible) << cs.id;
    EXPECT_EQ(r.counts.at("events"), static_cast<int>(r.events.size()));
    EXPECT_EQ(r.counts.at("origin") + r.counts.at("non_origin"), r.counts.at("events"));
    EXPECT_EQ(r.counts.at("potential_instability") + r.counts.at("no_instability_possible") +
                  r.counts.at("indeterminate_origin"),
              r.counts.at("events"));
    EXPECT_EQ(r.diagnostics.at("slice_max_abs_re_lambda"), 0.0) << cs.id;
    EXPECT_LE(r.diagnostics.at("max_collision_residual"), 1e-9);
  }
}

TEST(Pipeline, FormsAgreeOnVerdicts) {
  ModelSpec m = make_model("sine-gordon");
  PipelineOptions base;
  auto ref = run_pipeline(m, base);
  for (KreinForm f : {KreinForm::determinant, KreinForm::first_row, KreinForm::second_row, KreinForm::even_first,
                      KreinForm::even_second}) {
    PipelineOptions o;
    o.form = f;
    auto r = run_pipeline(m, o);
    ASSERT_EQ(r.events.size(), ref.events.size());
    for (std::size_t i = 0; i < r.events.size(); ++i) EXPECT_EQ(*r.events[i].verdict, *ref.events[i].verdict);
  }
}
