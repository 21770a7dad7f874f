#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sdc/forms.hpp"
#include "sdc/mms.hpp"

using namespace sdc;

namespace {

struct Problem {
  Mesh mesh;
  MixedSpace space;
  PhysicalParams params;
  HydraulicTensor K;
  explicit Problem(int n, double k1 = 1.0, double k2 = 1e-2)
      : mesh(Mesh::build_structured(Geometry{}, n)), space(mesh), K(k1, k2) {}
};

std::vector<double> random_vec(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> x(n);
  for (double& v : x) v = U(rng);
  return x;
}

}  // namespace

TEST(Params, Validation) {
  PhysicalParams p;
  EXPECT_NO_THROW(p.validate());
  p.S0 = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_THROW(HydraulicTensor(0.0, 1.0), std::invalid_argument);
}

TEST(Params, TensorBoundsAndBjsWeight) {
  const HydraulicTensor K(0.01, 1.0);
  EXPECT_DOUBLE_EQ(K.k_min(), 0.01);
  EXPECT_DOUBLE_EQ(K.k_max(), 1.0);
  EXPECT_DOUBLE_EQ(1.0 / std::sqrt(K.along({1.0, 0.0})), 10.0);
  const HydraulicTensor R(1.0, 0.01, 0.4);
  EXPECT_NEAR(R.matrix().a + R.matrix().d, 1.01, 1e-15);
  EXPECT_NEAR(R.matrix().det(), 0.01, 1e-15);
}

TEST(Mass, HeadBlockScalesWithRhoGS0) {
  Problem a(2);
  PhysicalParams unit = a.params;
  unit.rho = 1.0;
  unit.g = 1.0;
  unit.S0 = 1.0;
  const CsrMatrix M1 = assemble_mass(a.space, unit);
  const CsrMatrix Ms = assemble_mass(a.space, a.params);
  const double f = a.params.rho * a.params.g * a.params.S0;
  const std::size_t h = a.space.head_offset();
  for (std::size_t i = h; i < a.space.n_w(); ++i)
    for (std::size_t j = h; j < a.space.n_w(); ++j) EXPECT_NEAR(Ms(i, j), f * M1(i, j), 1e-13);
}

TEST(Mass, PositiveDefinite) {
  Problem a(2);
  const CsrMatrix M = assemble_mass(a.space, a.params);
  for (unsigned s = 0; s < 50; ++s) EXPECT_GT(M.quadratic_form(random_vec(a.space.n_w(), s)), 0.0);
}

TEST(Stiffness, SymmetricAndCoercive) {
  Problem a(3, 1.0, 1e-2);
  const CsrMatrix B = assemble_B(a.space, a.params, a.K);
  const CsrMatrix G = assemble_nabla_gram(a.space, a.params, a.K);
  for (const Triplet& e : B.triplets()) EXPECT_LE(std::abs(e.value - B(e.col, e.row)), 1e-12 * B.max_abs());
  EXPECT_EQ(B.quadratic_form(std::vector<double>(a.space.n_w(), 0.0)), 0.0);
  for (unsigned s = 0; s < 100; ++s) {
    const auto z = random_vec(a.space.n_w(), s);
    EXPECT_GE(B.quadratic_form(z), 0.01 * G.quadratic_form(z) - 1e-10);
  }
}

TEST(Divergence, ConstantVelocityIsDivergenceFree) {
  Problem a(2);
  const CsrMatrix b = assemble_b(a.space, a.params);
  std::vector<double> w(a.space.n_w(), 0.0);
  for (std::size_t i = 0; i < a.space.n_velocity(); ++i) {
    w[a.space.vx_offset() + i] = 0.7;
    w[a.space.vy_offset() + i] = -1.3;
  }
  for (double r : spmv(b, w)) EXPECT_NEAR(r, 0.0, 1e-14);
}

TEST(Divergence, LinearFieldAgainstUnitPressure) {
  // u = (x, 0) and q = 1 over the fluid square: b = -eta * area
  Problem a(1);
  const CsrMatrix b = assemble_b(a.space, a.params);
  std::vector<double> w(a.space.n_w(), 0.0);
  for (std::size_t i = 0; i < a.space.n_velocity(); ++i) w[i] = a.space.velocity().support_point(i).x;
  const auto r = spmv(b, w);
  double total = 0;
  for (double v : r) total += v;  // Q1 basis sums to one
  EXPECT_NEAR(total, -a.params.eta, 1e-15);
  PhysicalParams twice = a.params;
  twice.eta *= 2;
  const CsrMatrix b2 = assemble_b(a.space, twice);
  for (const Triplet& e : b.triplets()) EXPECT_NEAR(b2(e.row, e.col), 2 * e.value, 1e-15);
}

TEST(Interface, SkewAndVanishing) {
  Problem a(3);
  const CsrMatrix C = assemble_bI(a.space, a.params);
  for (const Triplet& e : C.triplets()) EXPECT_EQ(e.value, -C(e.col, e.row));
  for (unsigned s = 0; s < 100; ++s) {
    const auto w = random_vec(a.space.n_w(), s);
    EXPECT_NEAR(C.quadratic_form(w), 0.0, 1e-12 * C.max_abs());
  }
}

TEST(Interface, HandIntegratedEdge) {
  // phi = 1, u = (0, u2) constant: eta rho g * length * (-u2)
  Problem a(1);
  const CsrMatrix C = assemble_bI(a.space, a.params);
  std::vector<double> u(a.space.n_w(), 0.0), phi(a.space.n_w(), 0.0);
  const double u2 = 0.3;
  for (std::size_t i = 0; i < a.space.n_velocity(); ++i) u[a.space.vy_offset() + i] = u2;
  for (std::size_t i = 0; i < a.space.n_head(); ++i) phi[a.space.head_offset() + i] = 1.0;
  EXPECT_NEAR(C.bilinear_form(u, phi), a.params.eta * a.params.rho_g() * 1.0 * (-u2), 1e-12);
}

TEST(Interface, SupportedOnInterfaceDofsOnly) {
  Problem a(2);
  const CsrMatrix C = assemble_bI(a.space, a.params);
  for (const Triplet& e : C.triplets()) {
    if (e.value == 0.0) continue;
    for (std::size_t k : {e.row, e.col}) {
      Point p = k < a.space.head_offset() ? a.space.velocity().support_point(k % a.space.n_velocity())
                                          : a.space.head().support_point(k - a.space.head_offset());
      EXPECT_NEAR(p.y, 1.0, 1e-14);
    }
  }
}

TEST(Load, ZeroDataGivesZero) {
  Problem a(2);
  LoadData d;
  d.interface = [](Point, double) { return InterfaceDefect{}; };
  for (double v : assemble_load(a.space, a.params, d, 0.3)) EXPECT_EQ(v, 0.0);
}

TEST(Load, UnitSourceOnOneCell) {
  // g0 = 1 over the porous square of side 1: total head load rho g * area
  Problem a(1);
  LoadData d;
  d.g0 = [](Point, double) { return 1.0; };
  const auto F = assemble_load(a.space, a.params, d, 0.0);
  double total = 0;
  for (std::size_t i = a.space.head_offset(); i < a.space.n_w(); ++i) total += F[i];
  EXPECT_NEAR(total, a.params.rho_g(), 1e-10);
  // Q2 corner entries carry 1/36 of the area
  for (std::size_t i = 0; i < a.space.n_head(); ++i) {
    const Point p = a.space.head().support_point(i);
    const bool corner = (p.x == 0 || p.x == 1) && (p.y == 0 || p.y == 1);
    if (corner) EXPECT_NEAR(F[a.space.head_offset() + i], a.params.rho_g() / 36.0, 1e-10);
  }
}

TEST(Load, Linearity) {
  Problem a(2);
  LoadData f1, f2, f12;
  f1.f = [](Point x, double) { return Vec2{x.x, x.y * x.y}; };
  f2.f = [](Point x, double t) { return Vec2{std::sin(x.y + t), 1.0}; };
  f12.f = [&](Point x, double t) {
    const Vec2 a = f1.f(x, t), b = f2.f(x, t);
    return Vec2{a.x + b.x, a.y + b.y};
  };
  const auto A = assemble_load(a.space, a.params, f1, 0.2);
  const auto B = assemble_load(a.space, a.params, f2, 0.2);
  const auto C = assemble_load(a.space, a.params, f12, 0.2);
  for (std::size_t i = 0; i < C.size(); ++i) EXPECT_NEAR(C[i], A[i] + B[i], 1e-13);
}

TEST(Dirichlet, ExactVelocityAtCorner) {
  Problem a(2);
  const DirichletConstraints bc(a.space);
  const auto values = bc.values([](Point x, double t) { return mms::velocity(x, t); },
                                [](Point x, double t) { return mms::head(x, t); }, 0.0);
  bool found = false;
  for (std::size_t k = 0; k < bc.dofs().size(); ++k) {
    const std::size_t d = bc.dofs()[k];
    if (d >= a.space.n_velocity()) continue;
    const Point p = a.space.velocity().support_point(d);
    if (p.x == 0.0 && p.y == 2.0) {
      EXPECT_DOUBLE_EQ(values[k], 2.0);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Dirichlet, HomogeneousAndFullConstraint) {
  const CsrMatrix K = CsrMatrix::from_triplets(3, 3, {{0, 0, 4}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}, {1, 2, 1},
                                                      {2, 1, 1}, {2, 2, 2}});
  const std::vector<double> rhs{1, 2, 3};
  const std::vector<std::size_t> dofs{0};
  auto sys = apply_dirichlet(K, rhs, dofs, std::vector<double>{0.0});
  auto x = factorize(sys.matrix).solve(sys.rhs);
  EXPECT_EQ(x[0], 0.0);
  const std::vector<std::size_t> all{0, 1, 2};
  const std::vector<double> vals{0.5, -1, 2};
  sys = apply_dirichlet(K, rhs, all, vals);
  x = factorize(sys.matrix).solve(sys.rhs);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(x[i], vals[i], 1e-15);
}
