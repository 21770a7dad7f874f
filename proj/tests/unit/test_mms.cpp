#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sdc/mms.hpp"

using namespace sdc;

constexpr double pi = std::numbers::pi;

TEST(Exact, PointValues) {
  EXPECT_DOUBLE_EQ(eval_exact(Field::velocity, {0, 1}, 0).x, 1.0);
  EXPECT_DOUBLE_EQ(eval_exact(Field::head, {0, 0}, 0).x, 0.0);
  EXPECT_NEAR(eval_exact(Field::pressure, {0, 1}, 0).x, 2.0, 1e-15);
  EXPECT_THROW(eval_exact(Field::head, {0.5, 1.5}, 0), std::domain_error);
  EXPECT_THROW(eval_exact(Field::velocity, {0.5, 0.5}, 0), std::domain_error);
}

TEST(Exact, DerivativesMatchFiniteDifferences) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  const double e = 1e-6;
  for (int s = 0; s < 100; ++s) {
    const Point xf{U(rng), 1 + U(rng)}, xp{U(rng), U(rng)};
    const double t = U(rng);
    const Mat2 G = mms::velocity_gradient(xf, t);
    EXPECT_NEAR((mms::velocity({xf.x + e, xf.y}, t).x - mms::velocity({xf.x - e, xf.y}, t).x) / (2 * e), G.a, 1e-6);
    EXPECT_NEAR((mms::velocity({xf.x, xf.y + e}, t).y - mms::velocity({xf.x, xf.y - e}, t).y) / (2 * e), G.d, 1e-6);
    EXPECT_NEAR(G.a + G.d, 0.0, 1e-14);
    const Vec2 gp = mms::pressure_gradient(xf, t);
    EXPECT_NEAR((mms::pressure({xf.x + e, xf.y}, t) - mms::pressure({xf.x - e, xf.y}, t)) / (2 * e), gp.x, 1e-6);
    const Vec2 gh = mms::head_gradient(xp, t);
    EXPECT_NEAR((mms::head({xp.x, xp.y + e}, t) - mms::head({xp.x, xp.y - e}, t)) / (2 * e), gh.y, 1e-6);
    const Mat2 H = mms::head_hessian(xp, t);
    EXPECT_NEAR((mms::head_gradient({xp.x + e, xp.y}, t).x - mms::head_gradient({xp.x - e, xp.y}, t).x) / (2 * e),
                H.a, 1e-6);
    const Vec2 lap = mms::velocity_laplacian(xf, t);
    const double d = 1e-4;  // second differences need a larger step
    const double fdlap = (mms::velocity({xf.x + d, xf.y}, t).x + mms::velocity({xf.x - d, xf.y}, t).x +
                          mms::velocity({xf.x, xf.y + d}, t).x + mms::velocity({xf.x, xf.y - d}, t).x -
                          4 * mms::velocity(xf, t).x) /
                         (d * d);
    EXPECT_NEAR(fdlap, lap.x, 1e-3);
  }
}

TEST(Forcing, MomentumAtCorner) {
  PhysicalParams p;
  const HydraulicTensor K(1.0, 1e-2);
  EXPECT_NEAR(mms::eval_forcing({0, 1}, 0, p, K).f.x, -pi * pi, 1e-12);
}

TEST(Forcing, QuarterPeriodKeepsOnlyTimeDerivative) {
  PhysicalParams p;
  const HydraulicTensor K(1.0, 1e-2);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> U(0, 1);
  for (int s = 0; s < 20; ++s) {
    const Point xf{U(rng), 1 + U(rng)}, xp{U(rng), U(rng)};
    const mms::Forcing ff = mms::eval_forcing(xf, pi / 2, p, K);
    const Vec2 prof = mms::velocity_profile(xf);
    EXPECT_NEAR(ff.f.x, -prof.x, 1e-12);
    EXPECT_NEAR(ff.f.y, -prof.y, 1e-12);
    EXPECT_NEAR(mms::eval_forcing(xp, pi / 2, p, K).g0, -p.S0 * mms::head_profile(xp), 1e-12);
  }
}

TEST(InterfaceResiduals, MassBalanceHoldsForTest1) {
  PhysicalParams p;
  const HydraulicTensor K(1.0, 1e-2);
  const auto r = mms::interface_residuals(K, p, 0.3);
  EXPECT_NEAR(r.mass, 0.0, 1e-12);
  EXPECT_NEAR(mms::interface_residuals(K, p, pi / 2).bjs, 0.0, 1e-12);
}

TEST(InterfaceResiduals, MassDefectScalesWithEta) {
  PhysicalParams p;
  p.eta = 0.02;
  const HydraulicTensor K(1.0, 1e-2);
  PhysicalParams q = p;
  q.eta = 0.04;
  const Point x{0.3, 1.0};
  const double a = mms::interface_defect(x, 0.2, p, K).mass_flux;
  const double b = mms::interface_defect(x, 0.2, q, K).mass_flux;
  const double flux = -mms::velocity(x, 0.2).y;  // v . n_f
  // mass_flux = n_p.K grad phi - eta v.n_f, so the eta part doubles
  EXPECT_NEAR(b - a, -(q.eta - p.eta) * flux, 1e-12);
}
