#include "sdc/mms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sdc {
namespace mms {

namespace {

constexpr double pi = std::numbers::pi;

// S(x) = 2 - pi sin(pi x), shared by v2, p and phi.
double S(double x) { return 2.0 - pi * std::sin(pi * x); }
double S_x(double x) { return -pi * pi * std::cos(pi * x); }
double S_xx(double x) { return pi * pi * pi * std::sin(pi * x); }

// Y(y) = 1 - y - cos(pi y)
double Y(double y) { return 1.0 - y - std::cos(pi * y); }
double Y_y(double y) { return -1.0 + pi * std::sin(pi * y); }
double Y_yy(double y) { return pi * pi * std::cos(pi * y); }

Vec2 scaled(Vec2 v, double s) { return {v.x * s, v.y * s}; }

}  // namespace

double time_factor(double t, int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return std::cos(t);
    case 1: return -std::sin(t);
    case 2: return -std::cos(t);
    default: return std::sin(t);
  }
}

Vec2 velocity_profile(Point p) {
  const double x = p.x, y = p.y;
  return {x * x * (y - 1) * (y - 1) + y, (2.0 / 3.0) * x * std::pow(1 - y, 3) + S(x)};
}

Mat2 velocity_gradient_profile(Point p) {
  const double x = p.x, y = p.y;
  return {2 * x * (y - 1) * (y - 1), 2 * x * x * (y - 1) + 1,
          (2.0 / 3.0) * std::pow(1 - y, 3) + S_x(x), -2 * x * (1 - y) * (1 - y)};
}

Vec2 velocity_laplacian_profile(Point p) {
  const double x = p.x, y = p.y;
  return {2 * (y - 1) * (y - 1) + 2 * x * x, S_xx(x) + 4 * x * (1 - y)};
}

double pressure_profile(Point p) { return S(p.x) * std::sin(0.5 * pi * p.y); }

Vec2 pressure_gradient_profile(Point p) {
  return {S_x(p.x) * std::sin(0.5 * pi * p.y), S(p.x) * 0.5 * pi * std::cos(0.5 * pi * p.y)};
}

double head_profile(Point p) { return S(p.x) * Y(p.y); }

Vec2 head_gradient_profile(Point p) { return {S_x(p.x) * Y(p.y), S(p.x) * Y_y(p.y)}; }

Mat2 head_hessian_profile(Point p) {
  const double xy = S_x(p.x) * Y_y(p.y);
  return {S_xx(p.x) * Y(p.y), xy, xy, S(p.x) * Y_yy(p.y)};
}

Vec2 velocity(Point x, double t, int k) { return scaled(velocity_profile(x), time_factor(t, k)); }

Mat2 velocity_gradient(Point x, double t) {
  Mat2 g = velocity_gradient_profile(x);
  const double c = time_factor(t);
  return {g.a * c, g.b * c, g.c * c, g.d * c};
}

Vec2 velocity_laplacian(Point x, double t) { return scaled(velocity_laplacian_profile(x), time_factor(t)); }

double pressure(Point x, double t, int k) { return pressure_profile(x) * time_factor(t, k); }

Vec2 pressure_gradient(Point x, double t) { return scaled(pressure_gradient_profile(x), time_factor(t)); }

double head(Point x, double t, int k) { return head_profile(x) * time_factor(t, k); }

Vec2 head_gradient(Point x, double t) { return scaled(head_gradient_profile(x), time_factor(t)); }

Mat2 head_hessian(Point x, double t) {
  Mat2 h = head_hessian_profile(x);
  const double c = time_factor(t);
  return {h.a * c, h.b * c, h.c * c, h.d * c};
}

double head_flux_divergence(Point x, double t, const HydraulicTensor& K) {
  // K constant: div(K grad phi) = K : Hess(phi)
  const Mat2& k = K.matrix();
  const Mat2 h = head_hessian(x, t);
  return k.a * h.a + k.b * h.c + k.c * h.b + k.d * h.d;
}

bool in_subdomain(Point x, Subdomain s, double tol) {
  const Geometry g;
  return (s == Subdomain::fluid ? g.fluid : g.porous).contains(x, tol);
}

Forcing eval_forcing(Point x, double t, const PhysicalParams& params, const HydraulicTensor& K) {
  Forcing out;
  if (in_subdomain(x, Subdomain::fluid)) {
    const Vec2 vt = velocity(x, t, 1);
    const Vec2 lap = velocity_laplacian(x, t);
    const Vec2 gp = pressure_gradient(x, t);
    out.f = {vt.x - params.nu * lap.x + gp.x, vt.y - params.nu * lap.y + gp.y};
  }
  if (in_subdomain(x, Subdomain::porous))
    out.g0 = params.S0 * head(x, t, 1) - head_flux_divergence(x, t, K);
  return out;
}

InterfaceDefect interface_defect(Point x, double t, const PhysicalParams& params,
                                 const HydraulicTensor& K) {
  const Point nf = Geometry::normal_fluid();
  const Point np = Geometry::normal_porous();
  const Point tau = Geometry::tangent();
  const Vec2 n{nf.x, nf.y}, tv{tau.x, tau.y};
  const Mat2 G = velocity_gradient(x, t);
  const Vec2 Gn = G * n;
  const Vec2 v = velocity(x, t);
  const double kappa = params.alpha / std::sqrt(K.along(tv));
  const Vec2 flux = K.apply(head_gradient(x, t));

  InterfaceDefect d;
  d.normal_force = params.rho_g() * head(x, t) - pressure(x, t) + params.nu * (n.x * Gn.x + n.y * Gn.y);
  d.tangential_stress = params.nu * (tv.x * Gn.x + tv.y * Gn.y) + kappa * (v.x * tv.x + v.y * tv.y);
  d.mass_flux = np.x * flux.x + np.y * flux.y - params.eta * (v.x * n.x + v.y * n.y);
  return d;
}

InterfaceResiduals interface_residuals(const HydraulicTensor& K, const PhysicalParams& params, double t) {
  // composite 6-point Gauss on 32 panels along I
  const Geometry g;
  const QuadratureRule rule = gauss_segment(6);
  const int panels = 32;
  const double a = g.fluid.x0, b = g.fluid.x1;
  const double hp = (b - a) / panels;
  InterfaceResiduals r;
  for (int k = 0; k < panels; ++k)
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double x = a + hp * (k + 0.5 * (rule.points[q].x + 1.0));
      const double w = 0.5 * hp * rule.weights[q];
      const InterfaceDefect d = interface_defect({x, g.interface_y}, t, params, K);
      r.mass += w * d.mass_flux * d.mass_flux;
      r.force += w * d.normal_force * d.normal_force;
      r.bjs += w * d.tangential_stress * d.tangential_stress;
    }
  r.mass = std::sqrt(r.mass);
  r.force = std::sqrt(r.force);
  r.bjs = std::sqrt(r.bjs);
  return r;
}

}  // namespace mms

Vec2 eval_exact(Field field, Point x, double t) {
  const Subdomain owner = field == Field::head ? Subdomain::porous : Subdomain::fluid;
  if (!mms::in_subdomain(x, owner))
    throw std::domain_error(std::string("eval_exact: point outside the ") +
                            (owner == Subdomain::fluid ? "fluid" : "porous") + " subdomain");
  switch (field) {
    case Field::velocity: return mms::velocity(x, t);
    case Field::pressure: return {mms::pressure(x, t), 0.0};
    case Field::head: return {mms::head(x, t), 0.0};
  }
  return {};
}

ProblemData manufactured_problem(const PhysicalParams& params, const HydraulicTensor& K,
                                 bool interface_consistency) {
  ProblemData d;
  d.exact_known = true;
  d.velocity = [](Point x, double t) { return mms::velocity(x, t); };
  d.pressure = [](Point x, double t) { return mms::pressure(x, t); };
  d.head = [](Point x, double t) { return mms::head(x, t); };
  d.velocity_laplacian = [](Point x, double t) { return mms::velocity_laplacian(x, t); };
  d.pressure_gradient = [](Point x, double t) { return mms::pressure_gradient(x, t); };
  d.head_flux_divergence = [K](Point x, double t) { return mms::head_flux_divergence(x, t, K); };
  d.load.f = [params, K](Point x, double t) { return mms::eval_forcing(x, t, params, K).f; };
  d.load.g0 = [params, K](Point x, double t) { return mms::eval_forcing(x, t, params, K).g0; };
  if (interface_consistency)
    d.load.interface = [params, K](Point x, double t) { return mms::interface_defect(x, t, params, K); };
  return d;
}

ProblemData homogeneous_problem() { return {}; }

}  // namespace sdc
