#include "sdc/forms.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sdc {

void PhysicalParams::validate() const {
  const std::array<std::pair<const char*, double>, 6> fields{
      {{"nu", nu}, {"eta", eta}, {"rho", rho}, {"g", g}, {"S0", S0}, {"alpha", alpha}}};
  for (const auto& [name, value] : fields)
    if (!(value > 0.0) || !std::isfinite(value))
      throw std::invalid_argument(std::string("params: ") + name + " must be positive and finite");
}

HydraulicTensor::HydraulicTensor(double k1, double k2, double theta)
    : k1_(k1), k2_(k2), theta_(theta) {
  if (!(k1 > 0.0) || !(k2 > 0.0))
    throw std::invalid_argument("hydraulic tensor: eigenvalues must be positive");
  const double c = std::cos(theta), s = std::sin(theta);
  // R diag(k1,k2) R^T with R = [[c,-s],[s,c]]
  K_.a = c * c * k1 + s * s * k2;
  K_.b = c * s * (k1 - k2);
  K_.c = K_.b;
  K_.d = s * s * k1 + c * c * k2;
}

double HydraulicTensor::along(Vec2 d) const {
  const Vec2 Kd = K_ * d;
  return d.x * Kd.x + d.y * Kd.y;
}

MixedSpace::MixedSpace(const Mesh& mesh, bool enrich_pressure)
    : mesh_(&mesh),
      velocity_(build_dofmap(mesh, SpaceKind::velocity_x)),
      head_(build_dofmap(mesh, SpaceKind::head)),
      pressure_(mesh, enrich_pressure) {}

std::vector<std::size_t> MixedSpace::dirichlet_dofs() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n_velocity(); ++i)
    if (velocity_.is_dirichlet(i)) out.push_back(vx_offset() + i);
  for (std::size_t i = 0; i < n_velocity(); ++i)
    if (velocity_.is_dirichlet(i)) out.push_back(vy_offset() + i);
  for (std::size_t i = 0; i < n_head(); ++i)
    if (head_.is_dirichlet(i)) out.push_back(head_offset() + i);
  return out;
}

namespace {

constexpr std::size_t kQ2 = 9;

/// Basis data at one quadrature point of a cell.
struct CellPoint {
  Point x;
  double JxW;
  std::array<double, kQ2> N;
  std::array<Vec2, kQ2> dN;  // physical gradients
};

/// Tabulates Q2 values and physical gradients at every quadrature point of a cell.
class Q2CellValues {
 public:
  Q2CellValues(const Mesh& mesh, const QuadratureRule& rule) : mesh_(mesh), rule_(rule) {
    const auto& q2 = reference_element(ElementKind::Q2);
    ref_values_.resize(rule.points.size());
    ref_grads_.resize(rule.points.size());
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      q2.values(rule.points[q], ref_values_[q]);
      q2.gradients(rule.points[q], ref_grads_[q]);
    }
    points_.resize(rule.points.size());
  }

  const std::vector<CellPoint>& reinit(std::size_t cell) {
    for (std::size_t q = 0; q < rule_.points.size(); ++q) {
      const CellMapping m = map_to_physical(mesh_, cell, rule_.points[q]);
      const Mat2 JinvT = m.jacobian.inverse().transposed();
      CellPoint& p = points_[q];
      p.x = m.x;
      p.JxW = m.det * rule_.weights[q];
      p.N = ref_values_[q];
      for (std::size_t i = 0; i < kQ2; ++i) p.dN[i] = JinvT * ref_grads_[q][i];
    }
    return points_;
  }

  const QuadratureRule& rule() const { return rule_; }

 private:
  const Mesh& mesh_;
  const QuadratureRule& rule_;
  std::vector<std::array<double, kQ2>> ref_values_;
  std::vector<std::array<Vec2, kQ2>> ref_grads_;
  std::vector<CellPoint> points_;
};

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// One quadrature point on an interface edge, with the traces of the fluid
/// velocity basis and the porous head basis.
struct InterfacePoint {
  Point x;
  double JxW;
  std::array<double, kQ2> Nf;  // fluid-cell Q2 basis
  std::array<double, kQ2> Np;  // porous-cell Q2 basis
  std::size_t fluid_cell;
  std::size_t porous_cell;
};

int local_edge_index(const Cell& c, std::size_t edge) {
  for (int e = 0; e < 4; ++e)
    if (c.edges[e] == edge) return e;
  throw std::logic_error("edge not incident to cell");
}

/// Parameter along local edge e of `cell` for the point a distance `along`
/// from the edge vertex `start`.
double local_parameter(const Mesh& mesh, const Cell& cell, int e, std::size_t start, double s) {
  // s runs from -1 at `start` to +1 at the other vertex; local edge e runs
  // from cell vertex e to vertex (e+1)%4.
  (void)mesh;
  return cell.vertices[e] == start ? s : -s;
}

template <typename Fn>
void for_each_interface_point(const Mesh& mesh, const AssemblyOptions& opts, Fn&& fn) {
  const QuadratureRule rule = gauss_segment(opts.edge_points);
  const auto& q2 = reference_element(ElementKind::Q2);
  for (std::size_t ei = 0; ei < mesh.edges().size(); ++ei) {
    const Edge& edge = mesh.edges()[ei];
    if (edge.tag != EdgeTag::interface) continue;
    if (edge.cells[0] == no_cell || edge.cells[1] == no_cell)
      throw std::logic_error("interface edge without a cell on both sides");
    std::size_t cf = static_cast<std::size_t>(edge.cells[0]);
    std::size_t cp = static_cast<std::size_t>(edge.cells[1]);
    if (mesh.cells()[cf].subdomain != Subdomain::fluid) std::swap(cf, cp);
    if (mesh.cells()[cf].subdomain != Subdomain::fluid || mesh.cells()[cp].subdomain != Subdomain::porous)
      throw std::logic_error("interface edge does not pair a fluid and a porous cell");
    const Cell& fluid = mesh.cells()[cf];
    const Cell& porous = mesh.cells()[cp];
    const int ef = local_edge_index(fluid, ei);
    const int ep = local_edge_index(porous, ei);
    const Point a = mesh.vertices()[edge.vertices[0]];
    const Point b = mesh.vertices()[edge.vertices[1]];
    const double half_length = 0.5 * std::hypot(b.x - a.x, b.y - a.y);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q].x;
      InterfacePoint p;
      p.x = {0.5 * (1 - s) * a.x + 0.5 * (1 + s) * b.x, 0.5 * (1 - s) * a.y + 0.5 * (1 + s) * b.y};
      p.JxW = half_length * rule.weights[q];
      p.fluid_cell = cf;
      p.porous_cell = cp;
      q2.values(edge_reference_point(ef, local_parameter(mesh, fluid, ef, edge.vertices[0], s)), p.Nf);
      q2.values(edge_reference_point(ep, local_parameter(mesh, porous, ep, edge.vertices[0], s)), p.Np);
      fn(p);
    }
  }
}

}  // namespace

CsrMatrix assemble_mass(const MixedSpace& space, const PhysicalParams& params,
                        const AssemblyOptions& opts) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule rule = gauss_square(opts.cell_points);
  Q2CellValues fe(mesh, rule);
  const double w_head = params.rho_g() * params.S0;
  std::vector<Triplet> t;
  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    const bool fluid = mesh.cells()[c].subdomain == Subdomain::fluid;
    const auto& dofs = fluid ? space.velocity().cell_dofs(c) : space.head().cell_dofs(c);
    std::array<std::array<double, kQ2>, kQ2> local{};
    for (const CellPoint& p : fe.reinit(c))
      for (std::size_t i = 0; i < kQ2; ++i)
        for (std::size_t j = 0; j < kQ2; ++j) local[i][j] += p.N[i] * p.N[j] * p.JxW;
    for (std::size_t i = 0; i < kQ2; ++i)
      for (std::size_t j = 0; j < kQ2; ++j) {
        if (fluid) {
          const double v = params.eta * local[i][j];
          t.push_back({space.vx_offset() + dofs[i], space.vx_offset() + dofs[j], v});
          t.push_back({space.vy_offset() + dofs[i], space.vy_offset() + dofs[j], v});
        } else {
          t.push_back({space.head_offset() + dofs[i], space.head_offset() + dofs[j], w_head * local[i][j]});
        }
      }
  }
  return CsrMatrix::from_triplets(space.n_w(), space.n_w(), std::move(t));
}

namespace {

/// Viscous part weighted by `wv`, head part with tensor K weighted by `wh`.
std::vector<Triplet> stiffness_triplets(const MixedSpace& space, double wv, double wh, const Mat2& K,
                                        const AssemblyOptions& opts) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule rule = gauss_square(opts.cell_points);
  Q2CellValues fe(mesh, rule);
  std::vector<Triplet> t;
  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    const bool fluid = mesh.cells()[c].subdomain == Subdomain::fluid;
    std::array<std::array<double, kQ2>, kQ2> local{};
    for (const CellPoint& p : fe.reinit(c))
      for (std::size_t i = 0; i < kQ2; ++i)
        for (std::size_t j = 0; j < kQ2; ++j) {
          const Vec2 gj = fluid ? p.dN[j] : K * p.dN[j];
          local[i][j] += dot(p.dN[i], gj) * p.JxW;
        }
    if (fluid) {
      const auto& dofs = space.velocity().cell_dofs(c);
      for (std::size_t i = 0; i < kQ2; ++i)
        for (std::size_t j = 0; j < kQ2; ++j) {
          const double v = wv * local[i][j];
          t.push_back({space.vx_offset() + dofs[i], space.vx_offset() + dofs[j], v});
          t.push_back({space.vy_offset() + dofs[i], space.vy_offset() + dofs[j], v});
        }
    } else {
      const auto& dofs = space.head().cell_dofs(c);
      for (std::size_t i = 0; i < kQ2; ++i)
        for (std::size_t j = 0; j < kQ2; ++j)
          t.push_back({space.head_offset() + dofs[i], space.head_offset() + dofs[j], wh * local[i][j]});
    }
  }
  return t;
}

}  // namespace

CsrMatrix assemble_B(const MixedSpace& space, const PhysicalParams& params,
                     const HydraulicTensor& tensor, const AssemblyOptions& opts) {
  auto t = stiffness_triplets(space, params.eta * params.nu, params.rho_g(), tensor.matrix(), opts);
  const Vec2 tau{Geometry::tangent().x, Geometry::tangent().y};
  const double tKt = tensor.along(tau);
  if (!(tKt > 0.0)) throw std::logic_error("assemble_B: tau^T K tau must be positive");
  const double bjs = params.eta * params.alpha / std::sqrt(tKt);
  for_each_interface_point(space.mesh(), opts, [&](const InterfacePoint& p) {
    const auto& dofs = space.velocity().cell_dofs(p.fluid_cell);
    // (u.tau)(v.tau) with tau = (tau_x, tau_y)
    for (std::size_t i = 0; i < kQ2; ++i)
      for (std::size_t j = 0; j < kQ2; ++j) {
        const double base = bjs * p.Nf[i] * p.Nf[j] * p.JxW;
        const std::array<std::size_t, 2> off{space.vx_offset(), space.vy_offset()};
        const std::array<double, 2> tc{tau.x, tau.y};
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            if (tc[a] * tc[b] != 0.0)
              t.push_back({off[a] + dofs[i], off[b] + dofs[j], base * tc[a] * tc[b]});
      }
  });
  return CsrMatrix::from_triplets(space.n_w(), space.n_w(), std::move(t));
}

CsrMatrix assemble_nabla_gram(const MixedSpace& space, const PhysicalParams& params,
                              const HydraulicTensor& tensor, const AssemblyOptions& opts) {
  const Mat2 identity{1.0, 0.0, 0.0, 1.0};
  auto t = stiffness_triplets(space, params.eta * params.nu, params.rho_g() * tensor.k_max(), identity, opts);
  return CsrMatrix::from_triplets(space.n_w(), space.n_w(), std::move(t));
}

CsrMatrix assemble_b(const MixedSpace& space, const PhysicalParams& params,
                     const AssemblyOptions& opts) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule rule = gauss_square(opts.cell_points);
  Q2CellValues fe(mesh, rule);
  const PressureSpace& ps = space.pressure();
  std::vector<double> q(ps.n_local());
  std::vector<Triplet> t;
  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    if (mesh.cells()[c].subdomain != Subdomain::fluid) continue;
    const auto& vdofs = space.velocity().cell_dofs(c);
    const auto& pdofs = ps.cell_dofs(c);
    const auto& pts = fe.reinit(c);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const CellPoint& p = pts[k];
      ps.values(rule.points[k], q);
      for (std::size_t i = 0; i < pdofs.size(); ++i) {
        if (pdofs[i] == PressureSpace::pinned) continue;
        const double s = -params.eta * q[i] * p.JxW;
        for (std::size_t j = 0; j < kQ2; ++j) {
          t.push_back({pdofs[i], space.vx_offset() + vdofs[j], s * p.dN[j].x});
          t.push_back({pdofs[i], space.vy_offset() + vdofs[j], s * p.dN[j].y});
        }
      }
    }
  }
  return CsrMatrix::from_triplets(space.n_pressure(), space.n_w(), std::move(t));
}

CsrMatrix assemble_bI(const MixedSpace& space, const PhysicalParams& params,
                      const AssemblyOptions& opts) {
  const Point nf = Geometry::normal_fluid();
  const double scale = params.eta * params.rho_g();
  // Block X: rows velocity test u (through u.n_f), columns head trial phi.
  std::vector<Triplet> block;
  for_each_interface_point(space.mesh(), opts, [&](const InterfacePoint& p) {
    const auto& vdofs = space.velocity().cell_dofs(p.fluid_cell);
    const auto& hdofs = space.head().cell_dofs(p.porous_cell);
    for (std::size_t i = 0; i < kQ2; ++i)
      for (std::size_t j = 0; j < kQ2; ++j) {
        const double base = scale * p.Nf[i] * p.Np[j] * p.JxW;
        if (nf.x != 0.0) block.push_back({space.vx_offset() + vdofs[i], space.head_offset() + hdofs[j], base * nf.x});
        if (nf.y != 0.0) block.push_back({space.vy_offset() + vdofs[i], space.head_offset() + hdofs[j], base * nf.y});
      }
  });
  const CsrMatrix X = CsrMatrix::from_triplets(space.n_w(), space.n_w(), std::move(block));
  std::vector<Triplet> t = X.triplets();
  for (const Triplet& e : X.triplets()) t.push_back({e.col, e.row, -e.value});
  return CsrMatrix::from_triplets(space.n_w(), space.n_w(), std::move(t));
}

std::vector<double> assemble_pressure_mean(const MixedSpace& space, const AssemblyOptions& opts) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule rule = gauss_square(opts.cell_points);
  const PressureSpace& ps = space.pressure();
  std::vector<double> q(ps.n_local());
  std::vector<double> mean(space.n_pressure(), 0.0);
  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    if (mesh.cells()[c].subdomain != Subdomain::fluid) continue;
    const auto& pdofs = ps.cell_dofs(c);
    for (std::size_t k = 0; k < rule.points.size(); ++k) {
      const double JxW = map_to_physical(mesh, c, rule.points[k]).det * rule.weights[k];
      ps.values(rule.points[k], q);
      for (std::size_t i = 0; i < pdofs.size(); ++i)
        if (pdofs[i] != PressureSpace::pinned) mean[pdofs[i]] += q[i] * JxW;
    }
  }
  return mean;
}

CsrMatrix assemble_pressure_mass(const MixedSpace& space, const AssemblyOptions& opts) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule rule = gauss_square(opts.cell_points);
  const PressureSpace& ps = space.pressure();
  std::vector<double> q(ps.n_local());
  std::vector<Triplet> t;
  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    if (mesh.cells()[c].subdomain != Subdomain::fluid) continue;
    const auto& pdofs = ps.cell_dofs(c);
    for (std::size_t k = 0; k < rule.points.size(); ++k) {
      const double JxW = map_to_physical(mesh, c, rule.points[k]).det * rule.weights[k];
      ps.values(rule.points[k], q);
      for (std::size_t i = 0; i < pdofs.size(); ++i)
        for (std::size_t j = 0; j < pdofs.size(); ++j)
          if (pdofs[i] != PressureSpace::pinned && pdofs[j] != PressureSpace::pinned)
            t.push_back({pdofs[i], pdofs[j], q[i] * q[j] * JxW});
    }
  }
  return CsrMatrix::from_triplets(space.n_pressure(), space.n_pressure(), std::move(t));
}

SystemOperators assemble_operators(const MixedSpace& space, const PhysicalParams& params,
                                   const HydraulicTensor& tensor, const AssemblyOptions& opts) {
  params.validate();
  SystemOperators ops;
  ops.mass = assemble_mass(space, params, opts);
  ops.stiffness = assemble_B(space, params, tensor, opts);
  ops.divergence = assemble_b(space, params, opts);
  ops.interface = assemble_bI(space, params, opts);
  ops.mean = assemble_pressure_mean(space, opts);
  ops.nabla_gram = assemble_nabla_gram(space, params, tensor, opts);
  ops.pressure_mass = assemble_pressure_mass(space, opts);
  return ops;
}

std::vector<double> assemble_load(const MixedSpace& space, const PhysicalParams& params,
                                  const LoadData& data, double t, const AssemblyOptions& opts) {
  const Mesh& mesh = space.mesh();
  std::vector<double> F(space.n_w(), 0.0);
  if (data.f || data.g0) {
    const QuadratureRule rule = gauss_square(opts.cell_points);
    Q2CellValues fe(mesh, rule);
    for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
      const bool fluid = mesh.cells()[c].subdomain == Subdomain::fluid;
      if (fluid && !data.f) continue;
      if (!fluid && !data.g0) continue;
      const auto& dofs = fluid ? space.velocity().cell_dofs(c) : space.head().cell_dofs(c);
      for (const CellPoint& p : fe.reinit(c)) {
        if (fluid) {
          const Vec2 f = data.f(p.x, t);
          for (std::size_t i = 0; i < kQ2; ++i) {
            F[space.vx_offset() + dofs[i]] += params.eta * f.x * p.N[i] * p.JxW;
            F[space.vy_offset() + dofs[i]] += params.eta * f.y * p.N[i] * p.JxW;
          }
        } else {
          const double g0 = data.g0(p.x, t);
          for (std::size_t i = 0; i < kQ2; ++i)
            F[space.head_offset() + dofs[i]] += params.rho_g() * g0 * p.N[i] * p.JxW;
        }
      }
    }
  }
  if (data.interface) {
    const Point n = Geometry::normal_fluid();
    const Point tau = Geometry::tangent();
    for_each_interface_point(mesh, opts, [&](const InterfacePoint& p) {
      const InterfaceDefect d = data.interface(p.x, t);
      const auto& vdofs = space.velocity().cell_dofs(p.fluid_cell);
      const auto& hdofs = space.head().cell_dofs(p.porous_cell);
      // eta (u.n) d_force + eta (u.tau) d_bjs
      const double wx = params.eta * (n.x * d.normal_force + tau.x * d.tangential_stress);
      const double wy = params.eta * (n.y * d.normal_force + tau.y * d.tangential_stress);
      for (std::size_t i = 0; i < kQ2; ++i) {
        F[space.vx_offset() + vdofs[i]] += wx * p.Nf[i] * p.JxW;
        F[space.vy_offset() + vdofs[i]] += wy * p.Nf[i] * p.JxW;
        F[space.head_offset() + hdofs[i]] += params.rho_g() * d.mass_flux * p.Np[i] * p.JxW;
      }
    });
  }
  return F;
}

ConstrainedSystem apply_dirichlet(const CsrMatrix& K, std::span<const double> rhs,
                                  std::span<const std::size_t> dofs, std::span<const double> values) {
  if (dofs.size() != values.size()) throw std::invalid_argument("apply_dirichlet: size mismatch");
  if (rhs.size() != K.rows()) throw std::invalid_argument("apply_dirichlet: rhs size mismatch");
  std::vector<bool> fixed(K.rows(), false);
  std::vector<double> g(K.cols(), 0.0);
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    fixed[dofs[k]] = true;
    g[dofs[k]] = values[k];
  }
  ConstrainedSystem out;
  out.rhs.assign(rhs.begin(), rhs.end());
  K.multiply_add(g, out.rhs, -1.0);
  std::vector<Triplet> t;
  t.reserve(K.nnz());
  for (const Triplet& e : K.triplets())
    if (!fixed[e.row] && !fixed[e.col]) t.push_back(e);
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    t.push_back({dofs[k], dofs[k], 1.0});
    out.rhs[dofs[k]] = values[k];
  }
  out.matrix = CsrMatrix::from_triplets(K.rows(), K.cols(), std::move(t));
  return out;
}

DirichletConstraints::DirichletConstraints(const MixedSpace& space)
    : space_(&space), dofs_(space.dirichlet_dofs()), constrained_(space.n_total(), false) {
  for (std::size_t d : dofs_) constrained_[d] = true;
}

std::vector<double> DirichletConstraints::values(const VectorField& velocity, const ScalarField& head,
                                                 double t) const {
  std::vector<double> out;
  out.reserve(dofs_.size());
  const MixedSpace& s = *space_;
  for (std::size_t d : dofs_) {
    if (d < s.vy_offset()) {
      out.push_back(velocity ? velocity(s.velocity().support_point(d - s.vx_offset()), t).x : 0.0);
    } else if (d < s.head_offset()) {
      out.push_back(velocity ? velocity(s.velocity().support_point(d - s.vy_offset()), t).y : 0.0);
    } else {
      out.push_back(head ? head(s.head().support_point(d - s.head_offset()), t) : 0.0);
    }
  }
  return out;
}

CsrMatrix DirichletConstraints::constrain_matrix(const CsrMatrix& K) const {
  std::vector<double> zero_rhs(K.rows(), 0.0);
  std::vector<double> zero_vals(dofs_.size(), 0.0);
  return apply_dirichlet(K, zero_rhs, dofs_, zero_vals).matrix;
}

void DirichletConstraints::constrain_rhs(const CsrMatrix& K, std::span<double> rhs,
                                         std::span<const double> values) const {
  std::vector<double> g(K.cols(), 0.0);
  for (std::size_t k = 0; k < dofs_.size(); ++k) g[dofs_[k]] = values[k];
  K.multiply_add(g, rhs, -1.0);
  for (std::size_t k = 0; k < dofs_.size(); ++k) rhs[dofs_[k]] = values[k];
}

void DirichletConstraints::impose(std::span<double> x, std::span<const double> values) const {
  for (std::size_t k = 0; k < dofs_.size(); ++k) x[dofs_[k]] = values[k];
}

}  // namespace sdc
