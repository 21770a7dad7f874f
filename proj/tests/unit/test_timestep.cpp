#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sdc/analysis.hpp"
#include "sdc/timestep.hpp"

using namespace sdc;

TEST(Bdf2, WeightsAndExactness) {
  const Bdf2Weights w = bdf2_weights();
  EXPECT_EQ(w.current, 1.5);
  EXPECT_EQ(w.previous, -2.0);
  EXPECT_EQ(w.before, 0.5);
  EXPECT_EQ(bdf2_derivative(3.0, 3.0, 3.0, 0.1), 0.0);
  const double t = 0.7, s = 0.05;
  auto sq = [](double x) { return x * x; };
  EXPECT_NEAR(bdf2_derivative(sq(t), sq(t - s), sq(t - 2 * s), s), 2 * t, 1e-13);
}

TEST(Bdf2, CubicTruncation) {
  auto cube = [](double x) { return x * x * x; };
  EXPECT_NEAR(bdf2_derivative(cube(1.0), cube(0.5), cube(0.0), 0.5), 2.5, 1e-15);
}

TEST(Bdf2, ScalarRecurrences) {
  // M = 1, B = lambda: (1 + 2 sigma lambda / 3) w2 = (4 w1 - w0) / 3
  const double sigma = 0.1, lambda = 1.0;
  EXPECT_NEAR((4.0 * 1 - 1) / 3 / (1 + 2 * sigma * lambda / 3), 0.9375, 1e-15);
  EXPECT_NEAR(1.0 / (1 + sigma * lambda), 0.9090909090909091, 1e-15);
}

TEST(TimeGrid, FromStep) {
  const TimeGrid g = TimeGrid::from_step(1.0, 1.0 / 64);
  EXPECT_EQ(g.N, 64);
  EXPECT_DOUBLE_EQ(g.t(64), 1.0);
  EXPECT_THROW(TimeGrid::from_step(1.0, 0.3), std::invalid_argument);
  EXPECT_THROW(TimeGrid::from_step(1.0, 0.0), std::invalid_argument);
}

namespace {

struct Fixture {
  Mesh mesh = Mesh::build_structured(Geometry{}, 2);
  MixedSpace space{mesh};
  PhysicalParams params;
  HydraulicTensor K{1.0, 1e-2};
};

}  // namespace

TEST(Predictor, ConstantDataIsStationary) {
  Fixture f;
  ProblemData d;
  d.velocity = [](Point, double) { return Vec2{0.4, -0.2}; };
  d.velocity_laplacian = [](Point, double) { return Vec2{}; };
  d.pressure_gradient = [](Point, double) { return Vec2{}; };
  d.head = [](Point x, double) { return 2 * x.x - x.y; };
  d.head_flux_divergence = [](Point, double) { return 0.0; };
  const Predictor p = taylor_predictor(d, f.params, 0.25);
  const Vec2 v = p.velocity({0.3, 1.4}, 0.25);
  EXPECT_EQ(v.x, 0.4);
  EXPECT_EQ(v.y, -0.2);
  EXPECT_EQ(p.head({0.3, 0.4}, 0.25), 2 * 0.3 - 0.4);
}

TEST(Predictor, MissingDerivativesThrow) {
  Fixture f;
  ProblemData d;
  d.velocity = [](Point, double) { return Vec2{}; };
  EXPECT_THROW(taylor_predictor(d, f.params, 0.1), std::invalid_argument);
}

TEST(Run, ZeroDataStaysZero) {
  Fixture f;
  RunOptions o;
  o.starter = Starter::backward_euler;
  o.grid = TimeGrid(1.0, 4);
  ProblemData d = homogeneous_problem();
  const RunResult r = run(f.space, f.params, f.K, d, o, std::vector<double>(f.space.n_w(), 0.0));
  for (double v : r.w_final) EXPECT_EQ(v, 0.0);
  for (double v : r.p_final) EXPECT_EQ(v, 0.0);
}

TEST(Run, ZeroExactSolutionHasZeroErrors) {
  Fixture f;
  ProblemData d;
  d.exact_known = true;
  d.velocity = [](Point, double) { return Vec2{}; };
  d.pressure = [](Point, double) { return 0.0; };
  d.head = [](Point, double) { return 0.0; };
  d.velocity_laplacian = d.velocity;
  d.pressure_gradient = d.velocity;
  d.head_flux_divergence = d.head;
  RunOptions o;
  o.grid = TimeGrid(1.0, 4);
  const RunResult r = run(f.space, f.params, f.K, d, o);
  EXPECT_EQ(r.max_err_w, 0.0);
  EXPECT_EQ(r.max_err_p, 0.0);
}

TEST(Run, TwoStepsRunOneThreeLevelStep) {
  Fixture f;
  RunOptions o;
  o.grid = TimeGrid(0.5, 2);
  std::ostringstream csv;
  o.csv = &csv;
  const RunResult r = run(f.space, f.params, f.K, manufactured_problem(f.params, f.K, true), o);
  EXPECT_EQ(r.steps.size(), 3u);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,t,err_w_bar0,err_p_L2,div_residual");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
  o.grid = TimeGrid(0.5, 1);
  EXPECT_THROW(run(f.space, f.params, f.K, manufactured_problem(f.params, f.K, true), o), std::invalid_argument);
}

TEST(Run, DivergenceResidualEveryStep) {
  Fixture f;
  RunOptions o;
  o.grid = TimeGrid(1.0, 16);
  const RunResult r = run(f.space, f.params, f.K, manufactured_problem(f.params, f.K, true), o);
  for (std::size_t n = 2; n < r.steps.size(); ++n) EXPECT_LE(r.steps[n].div_residual, 1e-9);
  EXPECT_LE(r.max_solve_residual, 1e-10);
  EXPECT_TRUE(std::isfinite(r.max_err_w));
}

TEST(Run, StepMatrixIsTimeInvariant) {
  Fixture f;
  const SystemOperators ops = assemble_operators(f.space, f.params, f.K);
  const CsrMatrix A = assemble_step_matrix(f.space, ops, 2.0 / 3.0 * 0.1);
  const CsrMatrix B = assemble_step_matrix(f.space, ops, 2.0 / 3.0 * 0.1);
  EXPECT_EQ(A.values(), B.values());
  EXPECT_EQ(A.column_indices(), B.column_indices());
}

TEST(Run, BackwardEulerIsFirstOrder) {
  // fine enough in space that the time error dominates
  const Mesh mesh = Mesh::build_structured(Geometry{}, 32);
  const MixedSpace space(mesh);
  PhysicalParams params;
  const HydraulicTensor K(1.0, 1e-2);
  const ProblemData d = manufactured_problem(params, K, true);
  std::vector<double> e;
  for (int N : {4, 8}) {
    RunOptions o;
    o.scheme = Scheme::backward_euler;
    o.grid = TimeGrid(1.0, N);
    e.push_back(run(space, params, K, d, o).max_err_w);
  }
  const double co = conv_order(e[0], e[1]);
  EXPECT_GT(co, 0.7);
  EXPECT_LT(co, 1.4);
}
