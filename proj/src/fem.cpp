#include "sdc/fem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sdc {

namespace {

// 1D Lagrange bases on the equispaced nodes of [-1,1].
double lagrange(int degree, int i, double s) {
  if (degree == 1) return i == 0 ? 0.5 * (1.0 - s) : 0.5 * (1.0 + s);
  switch (i) {
    case 0: return 0.5 * s * (s - 1.0);
    case 1: return 1.0 - s * s;
    default: return 0.5 * s * (s + 1.0);
  }
}

double lagrange_derivative(int degree, int i, double s) {
  if (degree == 1) return i == 0 ? -0.5 : 0.5;
  switch (i) {
    case 0: return s - 0.5;
    case 1: return -2.0 * s;
    default: return s + 0.5;
  }
}

int degree_of(ElementKind k) {
  switch (k) {
    case ElementKind::Q0: return 0;
    case ElementKind::Q1: return 1;
    case ElementKind::Q2: return 2;
  }
  throw std::invalid_argument("unknown element kind");
}

}  // namespace

ReferenceElement::ReferenceElement(ElementKind kind) : kind_(kind) {
  switch (kind) {
    case ElementKind::Q0:
      nodes_ = {{0.0, 0.0}};
      tensor_index_ = {{0, 0}};
      break;
    case ElementKind::Q1:
      nodes_ = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
      tensor_index_ = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
      break;
    case ElementKind::Q2:
      nodes_ = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {0, -1}, {1, 0}, {0, 1}, {-1, 0}, {0, 0}};
      tensor_index_ = {{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 0}, {2, 1}, {1, 2}, {0, 1}, {1, 1}};
      break;
  }
}

void ReferenceElement::values(Point ref, std::span<double> out) const {
  if (kind_ == ElementKind::Q0) {
    out[0] = 1.0;
    return;
  }
  const int p = degree_of(kind_);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto [a, b] = tensor_index_[i];
    out[i] = lagrange(p, a, ref.x) * lagrange(p, b, ref.y);
  }
}

void ReferenceElement::gradients(Point ref, std::span<Vec2> out) const {
  if (kind_ == ElementKind::Q0) {
    out[0] = {0.0, 0.0};
    return;
  }
  const int p = degree_of(kind_);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto [a, b] = tensor_index_[i];
    out[i] = {lagrange_derivative(p, a, ref.x) * lagrange(p, b, ref.y),
              lagrange(p, a, ref.x) * lagrange_derivative(p, b, ref.y)};
  }
}

std::vector<double> ReferenceElement::values(Point ref) const {
  std::vector<double> out(n_nodes());
  values(ref, out);
  return out;
}

std::vector<Vec2> ReferenceElement::gradients(Point ref) const {
  std::vector<Vec2> out(n_nodes());
  gradients(ref, out);
  return out;
}

std::vector<std::size_t> ReferenceElement::edge_nodes(int e) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Point q = nodes_[i];
    const bool on = (e == 0 && q.y == -1.0) || (e == 1 && q.x == 1.0) || (e == 2 && q.y == 1.0) ||
                    (e == 3 && q.x == -1.0);
    if (on) out.push_back(i);
  }
  return out;
}

const ReferenceElement& reference_element(ElementKind kind) {
  static const ReferenceElement q0(ElementKind::Q0);
  static const ReferenceElement q1(ElementKind::Q1);
  static const ReferenceElement q2(ElementKind::Q2);
  switch (kind) {
    case ElementKind::Q0: return q0;
    case ElementKind::Q1: return q1;
    case ElementKind::Q2: return q2;
  }
  throw std::invalid_argument("unknown element kind");
}

QuadratureRule gauss_segment(int points) {
  if (points < 1 || points > 6)
    throw std::invalid_argument("gauss rule: points per axis must be in [1, 6], got " +
                                std::to_string(points));
  // Legendre P_n and its derivative by the three-term recurrence.
  auto legendre = [points](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= points; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    const double dp = points == 1 ? 1.0 : points * (x * p1 - p0) / (x * x - 1.0);
    return std::array<double, 2>{p1, dp};
  };

  QuadratureRule rule;
  rule.dim = 1;
  rule.exactness = 2 * points - 1;
  for (int i = points - 1; i >= 0; --i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x)[1];
    rule.points.push_back({x, 0.0});
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

QuadratureRule gauss_square(int points_per_axis) {
  const QuadratureRule line = gauss_segment(points_per_axis);
  QuadratureRule rule;
  rule.dim = 2;
  rule.exactness = line.exactness;
  for (std::size_t j = 0; j < line.points.size(); ++j)
    for (std::size_t i = 0; i < line.points.size(); ++i) {
      rule.points.push_back({line.points[i].x, line.points[j].x});
      rule.weights.push_back(line.weights[i] * line.weights[j]);
    }
  return rule;
}

CellMapping map_to_physical(const Mesh& mesh, std::size_t cell, Point ref) {
  if (cell >= mesh.cells().size()) throw std::out_of_range("map_to_physical: cell index");
  const auto& q1 = reference_element(ElementKind::Q1);
  std::array<double, 4> n{};
  std::array<Vec2, 4> dn{};
  q1.values(ref, n);
  q1.gradients(ref, dn);
  CellMapping m;
  const Cell& c = mesh.cells()[cell];
  for (int i = 0; i < 4; ++i) {
    const Point v = mesh.vertices()[c.vertices[i]];
    m.x.x += n[i] * v.x;
    m.x.y += n[i] * v.y;
    m.jacobian.a += dn[i].x * v.x;
    m.jacobian.b += dn[i].y * v.x;
    m.jacobian.c += dn[i].x * v.y;
    m.jacobian.d += dn[i].y * v.y;
  }
  m.det = m.jacobian.det();
  if (!(m.det > 0.0))
    throw std::domain_error("map_to_physical: nonpositive Jacobian in cell " + std::to_string(cell));
  return m;
}

Point edge_reference_point(int local_edge, double s) {
  switch (local_edge) {
    case 0: return {s, -1.0};
    case 1: return {1.0, s};
    case 2: return {-s, 1.0};
    case 3: return {-1.0, -s};
  }
  throw std::invalid_argument("edge_reference_point: local edge must be 0..3");
}

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::velocity_x: return "velocity-x";
    case SpaceKind::velocity_y: return "velocity-y";
    case SpaceKind::head: return "head";
    case SpaceKind::pressure_q1: return "pressure-q1";
    case SpaceKind::pressure_q0: return "pressure-q0";
  }
  return "?";
}

std::vector<std::size_t> DofMap::dirichlet_dofs() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dirichlet_.size(); ++i)
    if (dirichlet_[i]) out.push_back(i);
  return out;
}

DofMap build_dofmap(const Mesh& mesh, SpaceKind kind) {
  switch (kind) {
    case SpaceKind::velocity_x:
    case SpaceKind::velocity_y:
      return build_dofmap(mesh, Subdomain::fluid, ElementKind::Q2, kind);
    case SpaceKind::head:
      return build_dofmap(mesh, Subdomain::porous, ElementKind::Q2, kind);
    case SpaceKind::pressure_q1:
      return build_dofmap(mesh, Subdomain::fluid, ElementKind::Q1, kind);
    case SpaceKind::pressure_q0:
      return build_dofmap(mesh, Subdomain::fluid, ElementKind::Q0, kind);
  }
  throw std::invalid_argument("build_dofmap: unknown space kind");
}

DofMap build_dofmap(const Mesh& mesh, Subdomain subdomain, ElementKind element, SpaceKind label) {
  const ReferenceElement& ref = reference_element(element);
  DofMap map;
  map.kind_ = label;
  map.element_ = element;
  map.subdomain_ = subdomain;
  map.cell_dofs_.resize(mesh.cells().size());

  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> vertex_dof(mesh.vertices().size(), unset);
  std::vector<std::size_t> edge_dof(mesh.edges().size(), unset);
  const EdgeTag exterior =
      subdomain == Subdomain::fluid ? EdgeTag::exterior_fluid : EdgeTag::exterior_porous;

  std::vector<bool> vertex_on_exterior(mesh.vertices().size(), false);
  for (const Edge& e : mesh.edges())
    if (e.tag == exterior) vertex_on_exterior[e.vertices[0]] = vertex_on_exterior[e.vertices[1]] = true;

  auto new_dof = [&](Point where, bool dirichlet) {
    map.support_.push_back(where);
    map.dirichlet_.push_back(dirichlet);
    return map.support_.size() - 1;
  };

  for (std::size_t ci = 0; ci < mesh.cells().size(); ++ci) {
    const Cell& cell = mesh.cells()[ci];
    if (cell.subdomain != subdomain) continue;
    auto& dofs = map.cell_dofs_[ci];
    dofs.resize(ref.n_nodes());
    for (std::size_t i = 0; i < ref.n_nodes(); ++i) {
      const Point where = map_to_physical(mesh, ci, ref.nodes()[i]).x;
      if (element == ElementKind::Q0) {
        dofs[i] = new_dof(where, false);
      } else if (i < 4) {
        auto& slot = vertex_dof[cell.vertices[i]];
        if (slot == unset) slot = new_dof(where, vertex_on_exterior[cell.vertices[i]]);
        dofs[i] = slot;
      } else if (i < 8) {
        const std::size_t e = cell.edges[i - 4];
        auto& slot = edge_dof[e];
        if (slot == unset) slot = new_dof(where, mesh.edges()[e].tag == exterior);
        dofs[i] = slot;
      } else {
        dofs[i] = new_dof(where, false);
      }
    }
  }
  return map;
}

PressureSpace::PressureSpace(const Mesh& mesh, bool enrich_q0)
    : enriched_(enrich_q0), q1_(build_dofmap(mesh, SpaceKind::pressure_q1)) {
  n_dofs_ = q1_.n_dofs();
  cell_dofs_.resize(mesh.cells().size());
  bool first = true;
  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    const auto& d = q1_.cell_dofs(c);
    if (d.empty()) continue;
    auto& out = cell_dofs_[c];
    out.assign(d.begin(), d.end());
    if (enriched_) {
      out.push_back(first ? pinned : n_dofs_++);
      first = false;
    }
  }
}

void PressureSpace::values(Point ref, std::span<double> out) const {
  reference_element(ElementKind::Q1).values(ref, out.first(4));
  if (enriched_) out[4] = 1.0;
}

}  // namespace sdc
