#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include <cmath>
#include <random>

#include "hfstab/elliptic.hpp"
#include "hfstab/models.hpp"
#include "hfstab/waves.hpp"

using namespace hfstab;

namespace {

double K_quadrature(double kappa) {
  auto f = [kappa](double t) { return 1.0 / std::sqrt(1.0 - kappa * kappa * std::sin(t) * std::sin(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, pi / 2, 15, 1e-15);
}

// Traveling ODE residuals from analytic derivatives of the Jacobi functions.
double kdv_ode_residual(double kappa, double x) {
  const double m = kappa * kappa, K = elliptic_K(kappa), a = K / pi;
  const double H = kdv_cnoidal_height(kappa), c = kdv_cnoidal_speed(kappa);
  auto j = jacobi(a * x, kappa);
  double U = H * j.cn * j.cn;
  double Upp = -2 * H * a * a * (-j.sn * j.sn * j.dn * j.dn + j.cn * j.cn * j.dn * j.dn - m * j.cn * j.cn * j.sn * j.sn);
  double B = -c * H + 0.5 * H * H - 2.0 * H * K * K / (pi * pi);
  return -c * U + 0.5 * U * U + Upp - B;
}

double mkdv_cn_ode_residual(double kappa, double x) {
  const double m = kappa * kappa, b = 2 * elliptic_K(kappa) / pi, A = mkdv_height(kappa);
  auto j = jacobi(b * x, kappa);
  double U = A * j.cn;
  double Upp = -A * b * b * j.cn * (j.dn * j.dn - m * j.sn * j.sn);
  return -mkdv_cn_speed(kappa) * U + U * U * U + Upp;
}

double mkdv_sn_ode_residual(double kappa, double x) {
  const double m = kappa * kappa, b = 2 * elliptic_K(kappa) / pi, A = mkdv_height(kappa);
  auto j = jacobi(b * (x + pi / 2), kappa);
  double U = A * j.sn;
  double Upp = -A * b * b * j.sn * (j.dn * j.dn + m * j.cn * j.cn);
  return -mkdv_sn_speed(kappa) * U - U * U * U + Upp;
}

} // namespace

TEST(EllipticK, MatchesQuadrature) {
  for (double kappa : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99})
    EXPECT_NEAR(elliptic_K(kappa), K_quadrature(kappa), 1e-12 * K_quadrature(kappa)) << kappa;
  EXPECT_DOUBLE_EQ(elliptic_K(0.0), pi / 2);
}

TEST(EllipticK, RejectsModulusOutsideRange) {
  EXPECT_THROW(elliptic_K(1.0), DomainError);
  EXPECT_THROW(elliptic_K(-0.1), DomainError);
  EXPECT_THROW(jacobi(0.3, 1.5), DomainError);
  EXPECT_THROW(elliptic_K(std::nan("")), DomainError);
}

TEST(Jacobi, MatchesBoost) {
  for (double kappa : {0.05, 0.3, 0.5, 0.8, 0.95})
    for (double u : {-7.3, -1.0, 0.0, 0.4, 1.7, 3.0, 12.5, 101.0}) {
      auto j = jacobi(u, kappa);
      EXPECT_NEAR(j.sn, boost::math::jacobi_sn(kappa, u), 1e-12) << kappa << " " << u;
      EXPECT_NEAR(j.cn, boost::math::jacobi_cn(kappa, u), 1e-12) << kappa << " " << u;
      EXPECT_NEAR(j.dn, boost::math::jacobi_dn(kappa, u), 1e-12) << kappa << " " << u;
    }
}

TEST(Jacobi, IdentitiesOnRandomSamples) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ku(0.0, 0.999), uu(-50.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    double kappa = ku(rng), u = uu(rng);
    auto j = jacobi(u, kappa);
    ASSERT_NEAR(j.sn * j.sn + j.cn * j.cn, 1.0, 1e-12);
    ASSERT_NEAR(j.dn * j.dn + kappa * kappa * j.sn * j.sn, 1.0, 1e-12);
  }
}

TEST(Jacobi, CircularLimit) {
  for (double u : {-2.0, 0.5, 9.0}) {
    auto j = jacobi(u, 0.0);
    EXPECT_DOUBLE_EQ(j.sn, std::sin(u));
    EXPECT_DOUBLE_EQ(j.cn, std::cos(u));
    EXPECT_EQ(j.dn, 1.0);
  }
}

TEST(Jacobi, QuarterPeriodValues) {
  for (double kappa : {0.3, 0.8}) {
    double K = elliptic_K(kappa);
    auto j = jacobi(K, kappa);
    EXPECT_NEAR(j.sn, 1.0, 1e-12);
    EXPECT_NEAR(j.cn, 0.0, 1e-12);
    EXPECT_NEAR(j.dn, std::sqrt(1 - kappa * kappa), 1e-12);
  }
}

TEST(ClosedFormWaves, OdeResiduals) {
  for (double kappa : {0.3, 0.5, 0.8})
    for (int i = 0; i < 256; ++i) {
      double x = 2 * pi * i / 256;
      EXPECT_LE(std::abs(kdv_ode_residual(kappa, x)), 1e-8);
      EXPECT_LE(std::abs(mkdv_cn_ode_residual(kappa, x)), 1e-8);
      EXPECT_LE(std::abs(mkdv_sn_ode_residual(kappa, x)), 1e-8);
    }
}

TEST(ClosedFormWaves, SpectralResiduals) {
  for (double kappa : {0.3, 0.5, 0.8}) {
    EXPECT_LE(wave_residual(make_model("kdv"), kdv_cnoidal(kappa)), 1e-8);
    EXPECT_LE(wave_residual(make_model("mkdv-focusing"), mkdv_cn_wave(kappa)), 1e-8);
    EXPECT_LE(wave_residual(make_model("mkdv-defocusing"), mkdv_sn_wave(kappa)), 1e-8);
  }
}

TEST(ClosedFormWaves, ProfilesAreEven) {
  for (double x : {0.3, 1.1, 2.9}) {
    EXPECT_NEAR(mkdv_sn_value(0.5, x), mkdv_sn_value(0.5, -x), 1e-13);
    EXPECT_NEAR(mkdv_cn_value(0.5, x), mkdv_cn_value(0.5, -x), 1e-13);
    EXPECT_NEAR(kdv_cnoidal_value(0.5, x), kdv_cnoidal_value(0.5, -x), 1e-13);
  }
}

TEST(ClosedFormWaves, SmallModulusEndpoints) {
  EXPECT_NEAR(kdv_cnoidal_speed(0.0), -1.0, 1e-10);
  EXPECT_NEAR(mkdv_cn_speed(0.0), -1.0, 1e-10);
  EXPECT_NEAR(mkdv_sn_speed(0.0), -1.0, 1e-10);
  EXPECT_NEAR(kdv_cnoidal_height(0.0), 0.0, 1e-10);
  EXPECT_NEAR(mkdv_height(0.0), 0.0, 1e-10);
  EXPECT_NEAR(kdv_cnoidal_speed(1e-6), -1.0, 1e-10);
  EXPECT_NEAR(mkdv_sn_speed(1e-6), -1.0, 1e-10);
}

TEST(ClosedFormWaves, SpeedsMatchBifurcation) {
  EXPECT_NEAR(kdv_cnoidal_speed(0.0), bifurcation_speed(make_model("kdv"), 1, 1), 1e-12);
  EXPECT_NEAR(mkdv_sn_speed(0.0), bifurcation_speed(make_model("mkdv-defocusing"), 1, 1), 1e-12);
}
