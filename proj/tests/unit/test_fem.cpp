#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sdc/fem.hpp"

using namespace sdc;

TEST(Shape, Q1CenterIsQuarter) {
  const auto v = reference_element(ElementKind::Q1).values({0.0, 0.0});
  for (double x : v) EXPECT_DOUBLE_EQ(x, 0.25);
}

TEST(Shape, Q1CornerKronecker) {
  const auto& e = reference_element(ElementKind::Q1);
  const auto v = e.values({1.0, -1.0});
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool at = e.nodes()[i].x == 1.0 && e.nodes()[i].y == -1.0;
    EXPECT_DOUBLE_EQ(v[i], at ? 1.0 : 0.0);
  }
}

TEST(Shape, Q2NodalKronecker) {
  const auto& e = reference_element(ElementKind::Q2);
  for (std::size_t j = 0; j < e.n_nodes(); ++j) {
    const auto v = e.values(e.nodes()[j]);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], i == j ? 1.0 : 0.0, 1e-15);
  }
}

TEST(Shape, Q1GradientAtCenter) {
  const auto& e = reference_element(ElementKind::Q1);
  const auto g = e.gradients({0.0, 0.0});
  // N0 = (1 - xi)(1 - eta)/4 is the node at (-1, -1)
  ASSERT_EQ(e.nodes()[0].x, -1.0);
  ASSERT_EQ(e.nodes()[0].y, -1.0);
  EXPECT_DOUBLE_EQ(g[0].x, -0.25);
  EXPECT_DOUBLE_EQ(g[0].y, -0.25);
  double sx = 0, sy = 0;
  for (const Vec2& d : g) {
    sx += d.x;
    sy += d.y;
  }
  EXPECT_NEAR(sx, 0.0, 1e-15);
  EXPECT_NEAR(sy, 0.0, 1e-15);
}

TEST(Shape, GradientsMatchFiniteDifferences) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-0.9, 0.9);
  const double h = 1e-6;
  for (ElementKind k : {ElementKind::Q1, ElementKind::Q2}) {
    const auto& e = reference_element(k);
    for (int s = 0; s < 10; ++s) {
      const Point p{U(rng), U(rng)};
      const auto g = e.gradients(p);
      const auto xp = e.values({p.x + h, p.y}), xm = e.values({p.x - h, p.y});
      const auto yp = e.values({p.x, p.y + h}), ym = e.values({p.x, p.y - h});
      for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR((xp[i] - xm[i]) / (2 * h), g[i].x, 1e-6);
        EXPECT_NEAR((yp[i] - ym[i]) / (2 * h), g[i].y, 1e-6);
      }
    }
  }
}

TEST(Quadrature, OnePointSegment) {
  const auto r = gauss_segment(1);
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_DOUBLE_EQ(r.weights[0], 2.0);
  EXPECT_DOUBLE_EQ(r.points[0].x, 0.0);
}

TEST(Quadrature, ThreePointIntegratesQuartic) {
  const auto r = gauss_segment(3);
  double s = 0;
  for (std::size_t q = 0; q < r.points.size(); ++q) s += r.weights[q] * std::pow(r.points[q].x, 4);
  EXPECT_NEAR(s, 2.0 / 5.0, 1e-15);
}

TEST(Quadrature, TwoByTwoSquare) {
  const auto r = gauss_square(2);
  double s = 0;
  for (std::size_t q = 0; q < r.points.size(); ++q)
    s += r.weights[q] * r.points[q].x * r.points[q].x * r.points[q].y * r.points[q].y;
  EXPECT_NEAR(s, 4.0 / 9.0, 1e-15);
}

TEST(Quadrature, RejectsOutOfRange) {
  EXPECT_THROW(gauss_segment(0), std::invalid_argument);
  EXPECT_THROW(gauss_segment(7), std::invalid_argument);
  EXPECT_NO_THROW(gauss_square(6));
}

TEST(DofMap, ClosedFormCounts) {
  const Mesh m1 = Mesh::build_structured(Geometry{}, 1);
  EXPECT_EQ(build_dofmap(m1, SpaceKind::head).n_dofs(), 9u);
  const Mesh m2 = Mesh::build_structured(Geometry{}, 2);
  EXPECT_EQ(build_dofmap(m2, Subdomain::fluid, ElementKind::Q1, SpaceKind::pressure_q1).n_dofs(), 9u);
  EXPECT_EQ(build_dofmap(m2, SpaceKind::velocity_x).n_dofs(), 25u);
  for (int n = 1; n <= 6; ++n) {
    const Mesh m = Mesh::build_structured(Geometry{}, n);
    EXPECT_EQ(build_dofmap(m, Subdomain::fluid, ElementKind::Q0, SpaceKind::pressure_q0).n_dofs(),
              static_cast<std::size_t>(n * n));
    EXPECT_EQ(build_dofmap(m, SpaceKind::velocity_x).n_dofs(), static_cast<std::size_t>((2 * n + 1) * (2 * n + 1)));
  }
}

TEST(DofMap, DirichletDofsLieOnOuterBoundary) {
  const Mesh m = Mesh::build_structured(Geometry{}, 3);
  const DofMap v = build_dofmap(m, SpaceKind::velocity_x);
  for (std::size_t i = 0; i < v.n_dofs(); ++i) {
    const Point p = v.support_point(i);
    const bool outer = p.x < 1e-12 || p.x > 1 - 1e-12 || p.y > 2 - 1e-12;
    EXPECT_EQ(v.is_dirichlet(i), outer) << p.x << "," << p.y;
  }
}

TEST(DofMap, EnrichedPressurePinsOneConstant) {
  const Mesh m = Mesh::build_structured(Geometry{}, 2);
  const PressureSpace plain(m, false), rich(m, true);
  EXPECT_EQ(plain.n_dofs(), 9u);
  EXPECT_EQ(rich.n_dofs(), 9u + 4u - 1u);
}

TEST(Mapping, AxisAlignedCell) {
  const Mesh m = Mesh::build_structured(Geometry{}, 4);
  for (std::size_t c = 0; c < m.cells().size(); ++c) {
    const CellMapping map = map_to_physical(m, c, {0.0, 0.0});
    EXPECT_NEAR(map.det, 1.0 / 64.0, 1e-16);
    EXPECT_NEAR(map.jacobian.a, 1.0 / 8.0, 1e-16);
    EXPECT_NEAR(map.jacobian.b, 0.0, 1e-16);
    double cx = 0, cy = 0;
    for (std::size_t v : m.cells()[c].vertices) {
      cx += m.vertices()[v].x / 4;
      cy += m.vertices()[v].y / 4;
    }
    EXPECT_NEAR(map.x.x, cx, 1e-15);
    EXPECT_NEAR(map.x.y, cy, 1e-15);
    const auto r = gauss_square(2);
    double area = 0;
    for (std::size_t q = 0; q < r.points.size(); ++q) area += r.weights[q] * map_to_physical(m, c, r.points[q]).det;
    EXPECT_NEAR(area, 1.0 / 16.0, 1e-14);
  }
}

TEST(Mapping, Q1MassMatrixOnOneCell) {
  // porous cell of side l = 1 (n = 1) with unit weights
  const Mesh m = Mesh::build_structured(Geometry{}, 1);
  std::size_t cell = 0;
  while (m.cells()[cell].subdomain != Subdomain::porous) ++cell;
  const auto& e = reference_element(ElementKind::Q1);
  const auto r = gauss_square(3);
  double M[4][4] = {};
  for (std::size_t q = 0; q < r.points.size(); ++q) {
    const auto v = e.values(r.points[q]);
    const double jw = map_to_physical(m, cell, r.points[q]).det * r.weights[q];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) M[i][j] += v[i] * v[j] * jw;
  }
  const double ref[4][4] = {{4, 2, 1, 2}, {2, 4, 2, 1}, {1, 2, 4, 2}, {2, 1, 2, 4}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(M[i][j], ref[i][j] / 36.0, 1e-15);
}
