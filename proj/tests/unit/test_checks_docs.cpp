#include <gtest/gtest.h>

#include <set>

#include "sdc/checks.hpp"
#include "sdc/docs.hpp"

using namespace sdc;

TEST(Checks, FreshBuildIsGreen) {
  CheckFixture f;
  f.include_stability = false;
  const auto results = run_checks(f);
  EXPECT_GE(results.size(), 12u);
  for (const auto& r : results) EXPECT_TRUE(r.pass) << r.name << ": " << r.detail;
}

TEST(Checks, NamesAreUnique) {
  const auto names = check_names();
  EXPECT_GE(names.size(), 12u);
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), names.size());
  EXPECT_THROW(run_check("no_such_property"), std::out_of_range);
}

TEST(Checks, SignFlipInInterfaceFormIsCaught) {
  CheckFixture f;
  f.mutate = [](SystemOperators& ops) {
    auto& v = ops.interface.values();
    for (double& x : v)
      if (x != 0.0) {
        x = -x;
        break;
      }
  };
  EXPECT_FALSE(run_check("C_I_skew", f).pass);
  EXPECT_FALSE(run_check("oracle_assembly", f).pass);
}

TEST(Checks, BrokenSymmetryIsCaught) {
  CheckFixture f;
  f.mutate = [](SystemOperators& ops) { ops.stiffness.values()[1] += 1e-3 * ops.stiffness.max_abs(); };
  EXPECT_FALSE(run_check("B_symmetry", f).pass);
}

TEST(Docs, IndexCoversEveryObjectOnce) {
  const std::string md = generate_index();
  const std::vector<std::string> required{
      "Stokes momentum balance", "incompressibility", "Darcy head equation", "initial conditions",
      "boundary conditions", "interface mass conservation", "interface normal force balance",
      "Beavers-Joseph-Saffman condition", "weighted L2 inner product", "gradient inner product",
      "integration by parts", "bilinear form B", "bilinear form b", "interface form b_I", "load functional F",
      "continuous variational problem", "interpolation-based time derivative", "semi-discrete system",
      "finite element spaces", "discretely divergence-free set", "discrete inf-sup condition",
      "fully discrete three-level scheme", "L2 projection", "first-step initialization",
      "continuity and coercivity of B", "energy norm", "anti-symmetry of b_I", "manufactured solution",
      "test parameter sets", "convergence orders", "convergence tables"};
  for (const auto& obj : required) {
    int count = 0;
    for (const auto& e : equation_index())
      if (e.object.rfind(obj, 0) == 0) ++count;
    EXPECT_EQ(count, 1) << obj;
  }
  EXPECT_NE(md.find("fully discrete three-level scheme"), std::string::npos);
}

TEST(Docs, ThreeErrata) {
  ASSERT_EQ(errata().size(), 3u);
  const std::string md = generate_index(MeasuredOrders{{3.1, 3.0}, {2.0, 1.9}, "taylor"});
  EXPECT_NE(md.find("Placement of sigma"), std::string::npos);
  EXPECT_NE(md.find("Zero forcing"), std::string::npos);
  EXPECT_NE(md.find("Spatial order claimed for Q2"), std::string::npos);
  EXPECT_NE(md.find("CO_w = 3.10 3.00"), std::string::npos);
}
