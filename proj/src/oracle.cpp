#include "sdc/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace sdc::oracle {

namespace {

constexpr double tol = 1e-12;

// 5-point Gauss-Legendre on [-1, 1], exact to degree 9.
constexpr std::array<double, 5> gx{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                   0.9061798459386640};
constexpr std::array<double, 5> gw{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                   0.4786286704993665, 0.2369268850561891};

int degree(Field f) { return f == Field::pressure ? 1 : 2; }

/// Lagrange polynomial through k+1 equispaced nodes on [a, b], node i.
double lagrange(int k, int i, double a, double b, double x, double* dx) {
  double value = 1.0, deriv = 0.0;
  const double xi = a + (b - a) * i / k;
  for (int j = 0; j <= k; ++j) {
    if (j == i) continue;
    const double xj = a + (b - a) * j / k;
    const double factor = (x - xj) / (xi - xj);
    deriv = deriv * factor + value / (xi - xj);
    value *= factor;
  }
  if (dx) *dx = deriv;
  return value;
}

int node_index(int k, double a, double b, double p) {
  for (int i = 0; i <= k; ++i)
    if (std::abs(a + (b - a) * i / k - p) < tol) return i;
  return -1;
}

}  // namespace

Oracle::Oracle(const Geometry& geometry, int n, const PhysicalParams& params, const HydraulicTensor& tensor)
    : geometry_(geometry), params_(params), tensor_(tensor) {
  if (n < 1) throw std::invalid_argument("oracle: n must be at least 1");
  auto grid = [n](const Rect& r) {
    const int nx = static_cast<int>(std::lround(r.width() * n));
    const int ny = static_cast<int>(std::lround(r.height() * n));
    std::vector<Box> out;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        out.push_back({r.x0 + r.width() * i / nx, r.x0 + r.width() * (i + 1) / nx, r.y0 + r.height() * j / ny,
                       r.y0 + r.height() * (j + 1) / ny});
    return out;
  };
  fluid_ = grid(geometry.fluid);
  porous_ = grid(geometry.porous);
}

const std::vector<Oracle::Box>& Oracle::cells_of(Field f) const { return f == Field::head ? porous_ : fluid_; }

double Oracle::basis(const Unknown& u, const Box& c, double x, double y, double* dx, double* dy) const {
  if (dx) *dx = 0.0;
  if (dy) *dy = 0.0;
  const Point p = u.at;
  if (p.x < c.x0 - tol || p.x > c.x1 + tol || p.y < c.y0 - tol || p.y > c.y1 + tol) return 0.0;
  const int k = degree(u.field);
  const int ix = node_index(k, c.x0, c.x1, p.x);
  const int iy = node_index(k, c.y0, c.y1, p.y);
  if (ix < 0 || iy < 0) throw std::logic_error("oracle: unknown is not a nodal point of its cell");
  double lx_d = 0.0, ly_d = 0.0;
  const double lx = lagrange(k, ix, c.x0, c.x1, x, &lx_d);
  const double ly = lagrange(k, iy, c.y0, c.y1, y, &ly_d);
  if (dx) *dx = lx_d * ly;
  if (dy) *dy = lx * ly_d;
  return lx * ly;
}

template <typename F>
double Oracle::integrate_cells(Field f, F&& integrand) const {
  double sum = 0.0;
  for (const Box& c : cells_of(f)) {
    const double hx = 0.5 * (c.x1 - c.x0), hy = 0.5 * (c.y1 - c.y0);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const double x = c.x0 + hx * (1 + gx[i]);
        const double y = c.y0 + hy * (1 + gx[j]);
        sum += gw[i] * gw[j] * hx * hy * integrand(c, x, y);
      }
  }
  return sum;
}

template <typename F>
double Oracle::integrate_interface(F&& integrand) const {
  // Every fluid cell touching the interface contributes its bottom edge.
  double sum = 0.0;
  const double y = geometry_.interface_y;
  for (const Box& cf : fluid_) {
    if (std::abs(cf.y0 - y) > tol) continue;
    const double hx = 0.5 * (cf.x1 - cf.x0);
    for (int i = 0; i < 5; ++i) {
      const double x = cf.x0 + hx * (1 + gx[i]);
      const auto cp = std::find_if(porous_.begin(), porous_.end(), [&](const Box& b) {
        return std::abs(b.y1 - y) < tol && x > b.x0 && x < b.x1;
      });
      if (cp == porous_.end()) throw std::logic_error("oracle: interface point without porous cell");
      sum += gw[i] * hx * integrand(cf, *cp, x, y);
    }
  }
  return sum;
}

double Oracle::mass(const Unknown& a, const Unknown& b) const {
  if (a.field != b.field || a.field == Field::pressure) return 0.0;
  const double w = a.field == Field::head ? params_.rho_g() * params_.S0 : params_.eta;
  return w * integrate_cells(a.field, [&](const Box& c, double x, double y) {
           return basis(a, c, x, y, nullptr, nullptr) * basis(b, c, x, y, nullptr, nullptr);
         });
}

double Oracle::stiffness(const Unknown& a, const Unknown& b) const {
  const bool va = a.field == Field::vx || a.field == Field::vy;
  const bool vb = b.field == Field::vx || b.field == Field::vy;
  if (a.field == Field::head && b.field == Field::head) {
    const Mat2& K = tensor_.matrix();
    return params_.rho_g() * integrate_cells(Field::head, [&](const Box& c, double x, double y) {
             double ax, ay, bx, by;
             basis(a, c, x, y, &ax, &ay);
             basis(b, c, x, y, &bx, &by);
             return ax * (K.a * bx + K.b * by) + ay * (K.c * bx + K.d * by);
           });
  }
  if (!va || !vb) return 0.0;
  double value = 0.0;
  if (a.field == b.field)
    value += params_.eta * params_.nu * integrate_cells(a.field, [&](const Box& c, double x, double y) {
               double ax, ay, bx, by;
               basis(a, c, x, y, &ax, &ay);
               basis(b, c, x, y, &bx, &by);
               return ax * bx + ay * by;
             });
  const Point tau = Geometry::tangent();
  const double ta = a.field == Field::vx ? tau.x : tau.y;
  const double tb = b.field == Field::vx ? tau.x : tau.y;
  const double coeff = params_.eta * params_.alpha / std::sqrt(tensor_.along({tau.x, tau.y}));
  if (ta * tb != 0.0)
    value += coeff * ta * tb * integrate_interface([&](const Box& cf, const Box&, double x, double y) {
               return basis(a, cf, x, y, nullptr, nullptr) * basis(b, cf, x, y, nullptr, nullptr);
             });
  return value;
}

double Oracle::divergence(const Unknown& q, const Unknown& u) const {
  if (q.field != Field::pressure || (u.field != Field::vx && u.field != Field::vy)) return 0.0;
  return -params_.eta * integrate_cells(Field::pressure, [&](const Box& c, double x, double y) {
           double ux, uy;
           basis(u, c, x, y, &ux, &uy);
           return basis(q, c, x, y, nullptr, nullptr) * (u.field == Field::vx ? ux : uy);
         });
}

double Oracle::interface(const Unknown& a, const Unknown& b) const {
  const Point nf = Geometry::normal_fluid();
  auto coupling = [&](const Unknown& u, const Unknown& phi) {
    const double n = u.field == Field::vx ? nf.x : nf.y;
    if (n == 0.0) return 0.0;
    return params_.eta * params_.rho_g() * n *
           integrate_interface([&](const Box& cf, const Box& cp, double x, double y) {
             return basis(u, cf, x, y, nullptr, nullptr) * basis(phi, cp, x, y, nullptr, nullptr);
           });
  };
  const bool va = a.field == Field::vx || a.field == Field::vy;
  const bool vb = b.field == Field::vx || b.field == Field::vy;
  if (va && b.field == Field::head) return coupling(a, b);
  if (a.field == Field::head && vb) return -coupling(b, a);
  return 0.0;
}

double Oracle::nabla_gram(const Unknown& a, const Unknown& b) const {
  if (a.field != b.field || a.field == Field::pressure) return 0.0;
  const double w = a.field == Field::head ? params_.rho_g() * tensor_.k_max() : params_.eta * params_.nu;
  return w * integrate_cells(a.field, [&](const Box& c, double x, double y) {
           double ax, ay, bx, by;
           basis(a, c, x, y, &ax, &ay);
           basis(b, c, x, y, &bx, &by);
           return ax * bx + ay * by;
         });
}

double Oracle::pressure_mean(const Unknown& q) const {
  return integrate_cells(Field::pressure,
                         [&](const Box& c, double x, double y) { return basis(q, c, x, y, nullptr, nullptr); });
}

std::vector<Unknown> w_unknowns(const MixedSpace& space) {
  std::vector<Unknown> out;
  for (const Point& p : space.velocity().support_points()) out.push_back({Field::vx, p});
  for (const Point& p : space.velocity().support_points()) out.push_back({Field::vy, p});
  for (const Point& p : space.head().support_points()) out.push_back({Field::head, p});
  return out;
}

std::vector<Unknown> pressure_unknowns(const MixedSpace& space) {
  if (space.pressure().enriched()) throw std::invalid_argument("oracle: only the Q1 pressure space is covered");
  std::vector<Unknown> out;
  for (const Point& p : space.pressure().q1().support_points()) out.push_back({Field::pressure, p});
  return out;
}

double OperatorComparison::worst_relative() const {
  return std::max({mass.relative(), stiffness.relative(), divergence.relative(), interface.relative(),
                   nabla_gram.relative(), mean.relative()});
}

OperatorComparison compare(const MixedSpace& space, const SystemOperators& ops, const PhysicalParams& params,
                           const HydraulicTensor& tensor) {
  const Oracle o(space.mesh().geometry(), space.mesh().cells_per_unit(), params, tensor);
  const auto W = w_unknowns(space);
  const auto P = pressure_unknowns(space);
  auto update = [](Comparison& c, double got, double ref) {
    c.max_abs_diff = std::max(c.max_abs_diff, std::abs(got - ref));
    c.max_abs_ref = std::max(c.max_abs_ref, std::abs(ref));
  };
  OperatorComparison r;
  for (std::size_t i = 0; i < W.size(); ++i)
    for (std::size_t j = 0; j < W.size(); ++j) {
      update(r.mass, ops.mass(i, j), o.mass(W[i], W[j]));
      update(r.stiffness, ops.stiffness(i, j), o.stiffness(W[i], W[j]));
      update(r.interface, ops.interface(i, j), o.interface(W[i], W[j]));
      update(r.nabla_gram, ops.nabla_gram(i, j), o.nabla_gram(W[i], W[j]));
    }
  for (std::size_t i = 0; i < P.size(); ++i) {
    update(r.mean, ops.mean.at(i), o.pressure_mean(P[i]));
    for (std::size_t j = 0; j < W.size(); ++j) update(r.divergence, ops.divergence(i, j), o.divergence(P[i], W[j]));
  }
  return r;
}

}  // namespace sdc::oracle
