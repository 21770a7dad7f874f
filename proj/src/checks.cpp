#include "sdc/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <stdexcept>

#include "sdc/analysis.hpp"
#include "sdc/config.hpp"
#include "sdc/driver.hpp"
#include "sdc/oracle.hpp"
#include "sdc/timestep.hpp"

namespace sdc {

namespace {

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

struct Context {
  const CheckFixture& fx;
  Mesh mesh;
  MixedSpace space;
  HydraulicTensor tensor;
  SystemOperators ops;
  mutable std::mt19937 rng;

  explicit Context(const CheckFixture& f)
      : fx(f),
        mesh(Mesh::build_structured(Geometry{}, f.n)),
        space(mesh),
        tensor(f.k1, f.k2, f.theta),
        ops(assemble_operators(space, f.params, tensor)),
        rng(f.seed) {
    if (fx.mutate) fx.mutate(ops);
  }

  std::vector<double> random(std::size_t n) const {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = U(rng);
    return x;
  }
};

double asymmetry(const CsrMatrix& A, double sign) {
  double worst = 0.0;
  for (const Triplet& e : A.triplets()) worst = std::max(worst, std::abs(e.value - sign * A(e.col, e.row)));
  return worst;
}

CheckResult mesh_conformity(const Context&) {
  const Geometry g;
  bool ok = true;
  std::string detail = "n=1..6 counts, tags and Jacobians consistent";
  const auto rule = gauss_square(3);
  for (int n = 1; n <= 6 && ok; ++n) {
    const Mesh m = Mesh::build_structured(g, n);
    const std::size_t nv = static_cast<std::size_t>((n + 1) * (2 * n + 1));
    ok &= m.vertices().size() == nv && m.cells().size() == static_cast<std::size_t>(2 * n * n);
    ok &= m.count(EdgeTag::interface) == static_cast<std::size_t>(n);
    ok &= std::abs(m.h() - std::sqrt(2.0) / n) < 1e-15;
    const Mesh fine = Mesh::build_structured(g, 2 * n);
    ok &= fine.cells().size() == 4 * m.cells().size();
    std::size_t tagged = 0;
    for (EdgeTag t : {EdgeTag::interior, EdgeTag::exterior_fluid, EdgeTag::exterior_porous, EdgeTag::interface})
      tagged += m.count(t);
    ok &= tagged == m.edges().size();
    for (const Edge& e : m.edges()) {
      if (e.tag != EdgeTag::interface) continue;
      ok &= e.cells[0] != no_cell && e.cells[1] != no_cell &&
            m.cells()[e.cells[0]].subdomain != m.cells()[e.cells[1]].subdomain;
    }
    for (std::size_t c = 0; c < m.cells().size(); ++c)
      for (const Point& q : rule.points) ok &= map_to_physical(m, c, q).det > 0.0;
    if (!ok) detail = "violation at n=" + std::to_string(n);
  }
  return {"mesh_conformity", ok, detail};
}

CheckResult dof_counts(const Context&) {
  bool ok = true;
  for (int n = 1; n <= 5; ++n) {
    const Mesh m = Mesh::build_structured(Geometry{}, n);
    const std::size_t q1 = (n + 1) * (n + 1), q2 = (2 * n + 1) * (2 * n + 1), q0 = n * n;
    ok &= build_dofmap(m, Subdomain::fluid, ElementKind::Q1, SpaceKind::pressure_q1).n_dofs() == q1;
    ok &= build_dofmap(m, SpaceKind::velocity_x).n_dofs() == q2;
    ok &= build_dofmap(m, SpaceKind::head).n_dofs() == q2;
    ok &= build_dofmap(m, Subdomain::fluid, ElementKind::Q0, SpaceKind::pressure_q0).n_dofs() == q0;
  }
  return {"dof_counts", ok, "Q1 (n+1)^2, Q2 (2n+1)^2, Q0 n^2 for n=1..5"};
}

CheckResult dirichlet_identification(const Context& c) {
  const Geometry& g = c.mesh.geometry();
  auto on_outer = [](const Rect& r, Point p) {
    return std::abs(p.x - r.x0) < 1e-12 || std::abs(p.x - r.x1) < 1e-12 || std::abs(p.y - r.y0) < 1e-12 ||
           std::abs(p.y - r.y1) < 1e-12;
  };
  bool ok = true;
  for (const DofMap* d : {&c.space.velocity(), &c.space.head()}) {
    const Rect& r = d->subdomain() == Subdomain::fluid ? g.fluid : g.porous;
    for (std::size_t i = 0; i < d->n_dofs(); ++i) {
      const Point p = d->support_point(i);
      const bool on_interface_only = std::abs(p.y - g.interface_y) < 1e-12 && p.x > r.x0 + 1e-12 && p.x < r.x1 - 1e-12;
      ok &= d->is_dirichlet(i) == (on_outer(r, p) && !on_interface_only);
    }
  }
  return {"dirichlet_identification", ok, "Dirichlet dofs are exactly those on the outer boundary minus I"};
}

CheckResult partition_of_unity(const Context& c) {
  double worst = 0.0;
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (ElementKind k : {ElementKind::Q1, ElementKind::Q2}) {
    const auto& e = reference_element(k);
    for (int s = 0; s < 50; ++s) {
      const Point p{U(c.rng), U(c.rng)};
      double sum = 0.0;
      Vec2 g{};
      const auto v = e.values(p);
      const auto d = e.gradients(p);
      for (std::size_t i = 0; i < v.size(); ++i) {
        sum += v[i];
        g.x += d[i].x;
        g.y += d[i].y;
      }
      worst = std::max({worst, std::abs(sum - 1.0), std::abs(g.x), std::abs(g.y)});
    }
  }
  return {"partition_of_unity", worst <= 1e-13, fmt("max defect %.2e <= %.0e", worst, 1e-13)};
}

CheckResult quadrature_exactness(const Context&) {
  double worst = 0.0;
  for (int k = 1; k <= 5; ++k) {
    const auto rule = gauss_square(k);
    for (int a = 0; a <= 2 * k - 1; ++a)
      for (int b = 0; b <= 2 * k - 1; ++b) {
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q)
          sum += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
        const double ex = (a % 2 ? 0.0 : 2.0 / (a + 1)) * (b % 2 ? 0.0 : 2.0 / (b + 1));
        worst = std::max(worst, std::abs(sum - ex));
      }
  }
  return {"quadrature_exactness", worst <= 1e-13, fmt("max error %.2e <= %.0e", worst, 1e-13)};
}

CheckResult q2_interpolation(const Context& c) {
  auto f = [](Point p) { return 1.0 + 2 * p.x - p.y + 3 * p.x * p.y - p.x * p.x * p.y * p.y + 0.5 * p.y * p.y * p.x; };
  const DofMap& d = c.space.head();
  const auto& q2 = reference_element(ElementKind::Q2);
  const auto rule = gauss_square(4);
  double worst = 0.0;
  for (std::size_t cell = 0; cell < c.mesh.cells().size(); ++cell) {
    if (c.mesh.cells()[cell].subdomain != Subdomain::porous) continue;
    const auto& dofs = d.cell_dofs(cell);
    for (const Point& r : rule.points) {
      const auto v = q2.values(r);
      double s = 0.0;
      for (std::size_t i = 0; i < dofs.size(); ++i) s += v[i] * f(d.support_point(dofs[i]));
      worst = std::max(worst, std::abs(s - f(map_to_physical(c.mesh, cell, r).x)));
    }
  }
  return {"q2_interpolation_exactness", worst <= 1e-12, fmt("max error %.2e <= %.0e", worst, 1e-12)};
}

CheckResult mass_spd(const Context& c) {
  const double asym = asymmetry(c.ops.mass, 1.0) / c.ops.mass.max_abs();
  double min_ratio = 1e300;
  for (int s = 0; s < 100; ++s) {
    const auto z = c.random(c.space.n_w());
    min_ratio = std::min(min_ratio, c.ops.mass.quadratic_form(z) / dot(z, z));
  }
  return {"mass_spd", asym <= 1e-14 && min_ratio > 0.0,
          fmt("asymmetry %.2e, min z'Mz/z'z %.3e", asym, min_ratio)};
}

CheckResult b_symmetry(const Context& c) {
  const double r = asymmetry(c.ops.stiffness, 1.0) / c.ops.stiffness.max_abs();
  return {"B_symmetry", r <= 1e-12, fmt("max|B-B^T|/max|B| %.2e <= %.0e", r, 1e-12)};
}

CheckResult ci_skew(const Context& c) {
  const double r = asymmetry(c.ops.interface, -1.0);
  return {"C_I_skew", r == 0.0 && c.ops.interface.nnz() > 0, fmt("max|C_I + C_I^T| %.2e (exact zero required, nnz %.0f)", r, double(c.ops.interface.nnz()))};
}

CheckResult coercivity(const Context& c) {
  const double ratio = c.tensor.k_min() / c.tensor.k_max();
  double worst = 1e300;
  for (int s = 0; s < 100; ++s) {
    const auto z = c.random(c.space.n_w());
    const double lhs = c.ops.stiffness.quadratic_form(z);
    const double g = c.ops.nabla_gram.quadratic_form(z);
    // absolute slack 1e-10 scaled by the size of the forms
    worst = std::min(worst, (lhs - ratio * g) / std::max(1.0, g));
  }
  return {"B_coercivity", worst >= -1e-10, fmt("min (z'Bz - k_min/k_max z'Gz)/z'Gz %.3e >= %.0e", worst, -1e-10)};
}

CheckResult bi_vanishes(const Context& c) {
  double worst = 0.0;
  const double scale = c.ops.interface.max_abs();
  for (int s = 0; s < 100; ++s) {
    const auto w = c.random(c.space.n_w());
    worst = std::max(worst, std::abs(c.ops.interface.quadratic_form(w)) / (scale * dot(w, w)));
  }
  return {"b_I_vanishes_on_diagonal", worst <= 1e-14, fmt("max |w'C_I w|/(max|C_I| w'w) %.2e <= %.0e", worst, 1e-14)};
}

CheckResult leading_block_positive(const Context& c) {
  const double weight = 2.0 * 0.1 / 3.0;
  const CsrMatrix A = add(c.ops.mass, 1.0, add(c.ops.stiffness, 1.0, c.ops.interface, 1.0), weight);
  double worst_split = 0.0, min_form = 1e300;
  for (int s = 0; s < 100; ++s) {
    const auto z = c.random(c.space.n_w());
    const double lhs = A.quadratic_form(z);
    const double rhs = c.ops.mass.quadratic_form(z) + weight * c.ops.stiffness.quadratic_form(z);
    worst_split = std::max(worst_split, std::abs(lhs - rhs) / std::abs(rhs));
    min_form = std::min(min_form, lhs);
  }
  return {"leading_block_positive", worst_split <= 1e-12 && min_form > 0.0,
          fmt("split defect %.2e, min form %.3e", worst_split, min_form)};
}

CheckResult bdf2_exactness(const Context& c) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const double a = U(c.rng), b = U(c.rng), q = U(c.rng), t = U(c.rng);
    const double sigma = std::ldexp(1.0, -(s % 8));
    auto w = [&](double x) { return a + b * x + q * x * x; };
    const double got = bdf2_derivative(w(t + sigma), w(t), w(t - sigma), sigma);
    const double exact = b + 2 * q * (t + sigma);
    worst = std::max(worst, std::abs(got - exact) * sigma / (1.0 + std::abs(w(t + sigma))));
  }
  return {"bdf2_quadratic_exactness", worst <= 1e-13, fmt("max scaled error %.2e <= %.0e", worst, 1e-13)};
}

CheckResult step_divergence(const Context& c) {
  double div = 0.0, res = 0.0;
  for (Starter st : {Starter::taylor, Starter::backward_euler}) {
    const ProblemData data = manufactured_problem(c.fx.params, c.tensor, true);
    RunOptions o;
    o.starter = st;
    o.grid = TimeGrid(1.0, 8);
    const RunResult r = run(c.space, c.fx.params, c.tensor, data, o);
    div = std::max(div, r.max_div_residual);
    res = std::max(res, r.max_solve_residual);
  }
  return {"divergence_every_step", div <= 1e-9 && res <= 1e-10,
          fmt("max divergence residual %.2e <= 1e-9, max solve residual %.2e <= 1e-10", div, res)};
}

CheckResult linear_in_time(const Context& c) {
  const PhysicalParams& P = c.fx.params;
  const HydraulicTensor K = c.tensor;
  const Mat2 k = K.matrix();
  ProblemData d;
  d.exact_known = true;
  d.velocity = [](Point, double) { return Vec2{}; };
  d.pressure = [](Point, double) { return 0.0; };
  d.head = [](Point x, double t) { return (1 + t) * (x.x + x.y); };
  d.velocity_laplacian = d.velocity;
  d.pressure_gradient = d.velocity;
  d.head_flux_divergence = [](Point, double) { return 0.0; };
  d.load.g0 = [S0 = P.S0](Point x, double) { return S0 * (x.x + x.y); };
  d.load.interface = [P, k](Point x, double t) {
    InterfaceDefect r;
    r.normal_force = P.rho_g() * (1 + t) * (x.x + x.y);
    r.mass_flux = (1 + t) * (k.c + k.d);  // n_p . K grad(phi)
    return r;
  };
  double worst = 0.0;
  for (Scheme s : {Scheme::bdf2, Scheme::backward_euler}) {
    RunOptions o;
    o.scheme = s;
    o.grid = TimeGrid(1.0, 4);
    const RunResult r = run(c.space, P, K, d, o);
    worst = std::max({worst, r.max_err_w / r.max_norm_w_exact, r.max_err_p / r.max_norm_w_exact});
  }
  return {"linear_in_time_exactness", worst <= 1e-9, fmt("max relative error %.2e <= %.0e", worst, 1e-9)};
}

CheckResult oracle_assembly(const Context& c) {
  double worst = 0.0;
  for (int n : {1, 2}) {
    const Mesh m = Mesh::build_structured(Geometry{}, n);
    const MixedSpace s(m);
    SystemOperators ops = assemble_operators(s, c.fx.params, c.tensor);
    if (c.fx.mutate) c.fx.mutate(ops);
    worst = std::max(worst, oracle::compare(s, ops, c.fx.params, c.tensor).worst_relative());
  }
  return {"oracle_assembly", worst <= 1e-12, fmt("max relative deviation %.2e <= %.0e (n=1 and n=2)", worst, 1e-12)};
}

CheckResult lu_vs_dense(const Context& c) {
  const std::size_t n = 500;
  std::vector<Triplet> t;
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> J(0, n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, 4.0 + U(c.rng)});
    for (int k = 0; k < 6; ++k) t.push_back({i, J(c.rng), U(c.rng)});
  }
  double worst = 0.0;
  auto compare = [&](const CsrMatrix& A) {
    const auto b = c.random(A.rows());
    const auto x = factorize(A).solve(b);
    const auto y = dense_solve(A.to_dense(), b);
    std::vector<double> diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
    worst = std::max(worst, norm2(diff) / norm2(y));
  };
  compare(CsrMatrix::from_triplets(n, n, std::move(t)));
  // a constrained time-step matrix of the coupled problem
  const Mesh m = Mesh::build_structured(Geometry{}, 5);
  const MixedSpace s(m);
  const SystemOperators ops = assemble_operators(s, c.fx.params, c.tensor);
  const StepSystem sys(s, ops, 2.0 / 3.0 * 0.1);
  compare(sys.constraints().constrain_matrix(sys.matrix()));
  return {"lu_matches_dense", worst <= 1e-9, fmt("max relative difference %.2e <= %.0e (500 unknowns)", worst, 1e-9)};
}

CheckResult infsup(const Context& c) {
  double lo = 1e300, hi = 0.0;
  std::string values;
  for (int n : {2, 4, 8}) {
    const Mesh m = Mesh::build_structured(Geometry{}, n);
    const MixedSpace s(m);
    const SystemOperators ops = assemble_operators(s, c.fx.params, c.tensor);
    const double b = infsup_estimate(s, ops, c.fx.params);
    lo = std::min(lo, b);
    hi = std::max(hi, b);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.4f", values.empty() ? "" : ", ", b);
    values += buf;
  }
  const double variation = (hi - lo) / hi;
  return {"infsup_bounded_below", lo > 1e-3 && variation < 0.25,
          "beta_h at n=2,4,8: " + values + fmt(" (variation %.1f%% < %.0f%%)", 100 * variation, 25.0)};
}

CheckResult norm_properties(const Context& c) {
  double worst_h = 0.0;
  bool triangle = true;
  for (int s = 0; s < 20; ++s) {
    for (NormKind k : {NormKind::bar0, NormKind::nabla, NormKind::Bnorm, NormKind::L2}) {
      const std::size_t len = k == NormKind::L2 ? c.space.n_pressure() : c.space.n_w();
      const auto x = c.random(len), y = c.random(len);
      std::vector<double> cx(len), xy(len);
      for (std::size_t i = 0; i < len; ++i) {
        cx[i] = -2.5 * x[i];
        xy[i] = x[i] + y[i];
      }
      const double nx = norm(c.ops, x, k);
      worst_h = std::max(worst_h, std::abs(norm(c.ops, cx, k) - 2.5 * nx) / (2.5 * nx));
      triangle &= norm(c.ops, xy, k) <= (nx + norm(c.ops, y, k)) * (1 + 1e-14);
    }
  }
  return {"norm_homogeneity_triangle", worst_h <= 1e-13 && triangle,
          fmt("homogeneity defect %.2e <= %.0e", worst_h, 1e-13) + (triangle ? ", triangle inequality holds" : ", triangle inequality violated")};
}

CheckResult mms_identities(const Context& c) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double div = 0.0, fd = 0.0;
  const double e = 1e-6;
  for (int s = 0; s < 100; ++s) {
    const Point x{U(c.rng), 1.0 + U(c.rng)};
    const double t = U(c.rng);
    const Mat2 G = mms::velocity_gradient(x, t);
    div = std::max(div, std::abs(G.a + G.d));
    const Vec2 vx1 = mms::velocity({x.x + e, x.y}, t), vx0 = mms::velocity({x.x - e, x.y}, t);
    const Vec2 vy1 = mms::velocity({x.x, x.y + e}, t), vy0 = mms::velocity({x.x, x.y - e}, t);
    fd = std::max({fd, std::abs((vx1.x - vx0.x) / (2 * e) - G.a), std::abs((vy1.x - vy0.x) / (2 * e) - G.b),
                   std::abs((vx1.y - vx0.y) / (2 * e) - G.c), std::abs((vy1.y - vy0.y) / (2 * e) - G.d)});
    const Point y{x.x, x.y - 1.0};
    const Vec2 gp = mms::head_gradient(y, t);
    fd = std::max({fd, std::abs((mms::head({y.x + e, y.y}, t) - mms::head({y.x - e, y.y}, t)) / (2 * e) - gp.x),
                   std::abs((mms::head({y.x, y.y + e}, t) - mms::head({y.x, y.y - e}, t)) / (2 * e) - gp.y)});
  }
  return {"manufactured_derivatives", div <= 1e-14 && fd <= 1e-6,
          fmt("div v %.2e <= 1e-14, finite-difference mismatch %.2e <= 1e-6", div, fd)};
}

CheckResult stability_witness(const Context& c) {
  RunConfig cfg = preset("test1");
  cfg.params = c.fx.params;
  cfg.k1 = c.fx.k1;
  cfg.k2 = c.fx.k2;
  cfg.theta = c.fx.theta;
  bool ok = true;
  double worst = 0.0;
  const std::pair<double, int> cases[] = {{0.5, 16}, {0.25, 32}, {1.0, 8}};
  for (auto [sigma, n] : cases) {
    const StabilityResult r = stability_run(cfg, sigma, n, 10.0, c.fx.seed);
    ok &= r.bounded(2.0);
    worst = std::max(worst, r.max_norm / std::max(r.norm_w0, r.norm_w1));
  }
  return {"unconditional_stability", ok, fmt("max_n |w^n| / max(|w^0|,|w^1|) = %.4f <= %.1f", worst, 2.0)};
}

using CheckFn = CheckResult (*)(const Context&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> r{
      {"mesh_conformity", mesh_conformity},
      {"dof_counts", dof_counts},
      {"dirichlet_identification", dirichlet_identification},
      {"partition_of_unity", partition_of_unity},
      {"quadrature_exactness", quadrature_exactness},
      {"q2_interpolation_exactness", q2_interpolation},
      {"mass_spd", mass_spd},
      {"B_symmetry", b_symmetry},
      {"C_I_skew", ci_skew},
      {"B_coercivity", coercivity},
      {"b_I_vanishes_on_diagonal", bi_vanishes},
      {"leading_block_positive", leading_block_positive},
      {"bdf2_quadratic_exactness", bdf2_exactness},
      {"divergence_every_step", step_divergence},
      {"linear_in_time_exactness", linear_in_time},
      {"oracle_assembly", oracle_assembly},
      {"lu_matches_dense", lu_vs_dense},
      {"infsup_bounded_below", infsup},
      {"norm_homogeneity_triangle", norm_properties},
      {"manufactured_derivatives", mms_identities},
      {"unconditional_stability", stability_witness},
  };
  return r;
}

CheckResult guarded(const std::string& name, CheckFn fn, const Context& c) {
  try {
    return fn(c);
  } catch (const std::exception& e) {
    return {name, false, std::string("threw: ") + e.what()};
  }
}

}  // namespace

std::vector<std::string> check_names(const CheckFixture& fixture) {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry())
    if (fixture.include_stability || name != "unconditional_stability") out.push_back(name);
  return out;
}

std::vector<CheckResult> run_checks(const CheckFixture& fixture) {
  const Context c(fixture);
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : registry()) {
    if (!fixture.include_stability && name == "unconditional_stability") continue;
    out.push_back(guarded(name, fn, c));
  }
  return out;
}

CheckResult run_check(const std::string& name, const CheckFixture& fixture) {
  for (const auto& [n, fn] : registry())
    if (n == name) {
      const Context c(fixture);
      return guarded(n, fn, c);
    }
  throw std::out_of_range("unknown check '" + name + "'");
}

}  // namespace sdc
