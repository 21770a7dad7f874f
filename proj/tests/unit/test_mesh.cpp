#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sdc/mesh.hpp"

using namespace sdc;

TEST(Mesh, SmallestConformingMesh) {
  const Mesh m = Mesh::build_structured(Geometry{}, 1);
  EXPECT_EQ(m.vertices().size(), 6u);
  EXPECT_EQ(m.cells().size(), 2u);
  EXPECT_EQ(m.edges().size(), 7u);
  EXPECT_EQ(m.count(EdgeTag::interface), 1u);
  EXPECT_EQ(m.count(EdgeTag::exterior_fluid), 3u);
  EXPECT_EQ(m.count(EdgeTag::exterior_porous), 3u);
}

TEST(Mesh, TwoByTwoCounts) {
  const Mesh m = Mesh::build_structured(Geometry{}, 2);
  EXPECT_EQ(m.cells().size(), 8u);
  EXPECT_EQ(m.vertices().size(), 15u);
  EXPECT_EQ(m.count(EdgeTag::interface), 2u);
  EXPECT_EQ(m.count(EdgeTag::exterior_fluid), 6u);
  EXPECT_EQ(m.count(EdgeTag::exterior_porous), 6u);
}

TEST(Mesh, RejectsZeroCells) { EXPECT_THROW(Mesh::build_structured(Geometry{}, 0), std::invalid_argument); }

TEST(Mesh, RejectsDisjointSubdomains) {
  Geometry g;
  g.fluid = {0.0, 1.0, 1.5, 2.5};
  EXPECT_THROW(Mesh::build_structured(g, 2), std::invalid_argument);
}

TEST(Mesh, TagsPartitionEdges) {
  for (int n = 1; n <= 8; ++n) {
    const Mesh m = Mesh::build_structured(Geometry{}, n);
    const auto tags = classify_boundary(m);
    ASSERT_EQ(tags.size(), m.edges().size());
    EXPECT_EQ(m.count(EdgeTag::interface) + m.count(EdgeTag::exterior_fluid) + m.count(EdgeTag::exterior_porous) +
                  m.count(EdgeTag::interior),
              m.edges().size());
  }
}

TEST(Mesh, InterfaceEdgesJoinDifferentSubdomains) {
  for (int n = 1; n <= 8; ++n) {
    const Mesh m = Mesh::build_structured(Geometry{}, n);
    for (const Edge& e : m.edges()) {
      if (e.tag != EdgeTag::interface) continue;
      ASSERT_NE(e.cells[0], no_cell);
      ASSERT_NE(e.cells[1], no_cell);
      EXPECT_NE(m.cells()[e.cells[0]].subdomain, m.cells()[e.cells[1]].subdomain);
      EXPECT_EQ(m.vertices()[e.vertices[0]].y, 1.0);
      EXPECT_EQ(m.vertices()[e.vertices[1]].y, 1.0);
    }
  }
}

TEST(Mesh, RefinementQuadruplesCellsAndSetsDiameter) {
  for (int n = 1; n <= 8; ++n) {
    const Mesh a = Mesh::build_structured(Geometry{}, n);
    const Mesh b = Mesh::build_structured(Geometry{}, 2 * n);
    EXPECT_EQ(b.cells().size(), 4 * a.cells().size());
    EXPECT_NEAR(a.h(), std::sqrt(2.0) / n, 1e-15);
    EXPECT_EQ(a.count(Subdomain::fluid), static_cast<std::size_t>(n * n));
    EXPECT_EQ(a.count(Subdomain::porous), static_cast<std::size_t>(n * n));
  }
}

TEST(Mesh, DumpFormat) {
  const Mesh m = Mesh::build_structured(Geometry{}, 1);
  std::ostringstream os;
  m.write(os);
  std::istringstream in(os.str());
  std::string tag;
  int v = 0, c = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("c ", 0) == 0) ++c;
  }
  EXPECT_EQ(v, 6);
  EXPECT_EQ(c, 2);
}
