#include <gtest/gtest.h>

#include <cmath>

#include "hfstab/collision.hpp"
#include "hfstab/models.hpp"

using namespace hfstab;

namespace {

const CollisionEvent* find_event(const std::vector<CollisionEvent>& ev, double mu, double im, double tol) {
  for (const auto& e : ev)
    if (std::abs(e.mu - mu) < tol && std::abs(e.lambda.imag() - im) < tol) return &e;
  return nullptr;
}

} // namespace

TEST(Residual, SineGordonExplicitRoot) {
  ModelSpec sg = make_model("sine-gordon");
  double c = bifurcation_speed(sg, 1, 1);
  double mu = (std::sqrt(10.0) - 3) / 2;
  EXPECT_NEAR(collision_residual(sg, 3, 1, 0, 2, mu, c), 0.0, 1e-13);
  EXPECT_THROW(collision_residual(sg, 1, 1, 1, 1, 0.2, c), ConfigError);
}

TEST(FindCollisions, SineGordon) {
  ModelSpec sg = make_model("sine-gordon");
  double c = bifurcation_speed(sg, 1, 1);
  auto ev = find_collisions(sg, c, 5);
  const CollisionEvent* e = find_event(ev, (std::sqrt(10.0) - 3) / 2, std::sqrt(5.0) / 2, 1e-9);
  ASSERT_NE(e, nullptr);
  EXPECT_FALSE(e->at_origin);
  EXPECT_LE(e->residual, 1e-9);
  EXPECT_EQ(e->first.n, 3);
  EXPECT_EQ(e->second.n, 0);
}

TEST(FindCollisions, DeepWaterFirstEvent) {
  ModelSpec m = make_model("water-waves-deep");
  double c = bifurcation_speed(m, 1, 1);
  auto ev = non_origin(find_collisions(m, c, 10));
  ASSERT_FALSE(ev.empty());
  EXPECT_NEAR(ev.front().lambda.imag(), 0.75, 1e-10);
  EXPECT_NEAR(std::abs(ev.front().mu), 0.25, 1e-10);
}

TEST(FindCollisions, OnlyOriginForGkdv) {
  for (int p : {1, 2, 3}) {
    ModelSpec m = make_model("gkdv", {{"p", static_cast<double>(p)}});
    auto ev = find_collisions(m, bifurcation_speed(m, 1, 1), 10);
    EXPECT_FALSE(ev.empty());
    EXPECT_TRUE(non_origin(ev).empty()) << p;
  }
}

TEST(FindCollisions, SortedAndUpperHalf) {
  ModelSpec m = make_model("water-waves", {{"g", 1.0}, {"h", 1.0}});
  auto ev = find_collisions(m, bifurcation_speed(m, 1, 1), 8);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    EXPECT_TRUE(ev[i].at_origin || ev[i].lambda.imag() >= 0);
    EXPECT_TRUE(ev[i].first.valid());
    if (i > 0) {
      EXPECT_LE(ev[i - 1].lambda.imag(), ev[i].lambda.imag());
    }
  }
}

TEST(FindCollisions, MirrorClosure) {
  for (const char* id : {"water-waves", "sine-gordon", "fifth-order-scalar", "boussinesq-whitham"}) {
    ModelSpec m = make_model(id);
    double c = bifurcation_speed(m, 1, 1);
    CollisionOptions o;
    o.keep_mirrors = true;
    auto ev = find_collisions(m, c, 6, o);
    for (const auto& e : non_origin(ev)) {
      CollisionEvent mir = mirror_event(m, e, c);
      EXPECT_NEAR(std::abs(mir.lambda + e.lambda), 0.0, 1e-12) << id;
      EXPECT_LE(mir.residual, 1e-9) << id;
      EXPECT_NE(find_event(ev, mir.mu, mir.lambda.imag(), 1e-8), nullptr) << id << " mu=" << e.mu;
    }
  }
}

TEST(FindCollisions, StableUnderGridRefinement) {
  ModelSpec m = make_model("water-waves", {{"g", 1.0}, {"h", 2.0}});
  double c = bifurcation_speed(m, 1, 1);
  CollisionOptions coarse, fine;
  coarse.grid_points = 512;
  fine.grid_points = 4096;
  auto a = non_origin(find_collisions(m, c, 8, coarse));
  auto b = non_origin(find_collisions(m, c, 8, fine));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].mu, b[i].mu, 1e-10);
    EXPECT_NEAR(a[i].lambda.imag(), b[i].lambda.imag(), 1e-10);
  }
}

TEST(FindCollisions, ThreadCountDoesNotChangeResult) {
  ModelSpec m = make_model("sine-gordon");
  double c = bifurcation_speed(m, 1, 1);
  CollisionOptions one, four;
  four.threads = 4;
  auto a = find_collisions(m, c, 6, one);
  auto b = find_collisions(m, c, 6, four);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].mu, b[i].mu);
    EXPECT_EQ(a[i].lambda, b[i].lambda);
  }
}

TEST(FindCollisions, RejectsBadOptions) {
  ModelSpec m = make_model("kdv");
  EXPECT_THROW(find_collisions(m, -1.0, 0), ConfigError);
  CollisionOptions o;
  o.grid_points = 1;
  EXPECT_THROW(find_collisions(m, -1.0, 3, o), ConfigError);
}

TEST(SecantCurves, ValuesAndIntersections) {
  ModelSpec m = make_model("water-waves-deep");
  double c = bifurcation_speed(m, 1, 1);
  std::vector<double> k = {-0.5, -0.25, 0.0, 0.25, 0.5};
  auto rows = secant_curve_data(m, c, -2, 2, k);
  EXPECT_EQ(rows.size(), 2u * 5u * 5u);
  for (const auto& r : rows) EXPECT_DOUBLE_EQ(r.Omega, eval_Omega(m, r.l, r.k + r.n, c));
  // Every collision is a crossing of two curves at k = μ.
  for (const auto& e : non_origin(find_collisions(m, c, 2))) {
    double a = eval_Omega(m, e.first.l, e.first.n + e.mu, c);
    double b = eval_Omega(m, e.second.l, e.second.n + e.mu, c);
    EXPECT_NEAR(a, b, 1e-9);
  }
  EXPECT_THROW(secant_curve_data(m, c, 2, 1, k), ConfigError);
}

TEST(DepthTrace, ApproachesDeepWater) {
  auto rows = trace_first_collision_vs_depth(1.0, {0.5, 1.0, 4.0, 100.0}, 10);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) EXPECT_GT(r.im_lambda, 0.0);
  EXPECT_NEAR(rows.back().im_lambda, 0.75, 1e-2);
  EXPECT_THROW(trace_first_collision_vs_depth(1.0, {-1.0}, 10), ModelError);
}
