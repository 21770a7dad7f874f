#include "sdc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace sdc {

const char* to_string(Subdomain s) { return s == Subdomain::fluid ? "fluid" : "porous"; }

const char* to_string(EdgeTag t) {
  switch (t) {
    case EdgeTag::interior: return "interior";
    case EdgeTag::exterior_fluid: return "exterior-fluid";
    case EdgeTag::exterior_porous: return "exterior-porous";
    case EdgeTag::interface: return "interface";
  }
  return "?";
}

void Geometry::validate() const {
  if (fluid.width() <= 0 || fluid.height() <= 0 || porous.width() <= 0 || porous.height() <= 0)
    throw std::invalid_argument("geometry: rectangles must have positive extent");
  if (fluid.y0 != interface_y || porous.y1 != interface_y)
    throw std::invalid_argument("geometry: fluid and porous rectangles must meet at interface_y");
  const double lo = std::max(fluid.x0, porous.x0);
  const double hi = std::min(fluid.x1, porous.x1);
  if (hi <= lo) throw std::invalid_argument("geometry: shared interface segment is empty");
  if (fluid.x0 != porous.x0 || fluid.x1 != porous.x1)
    throw std::invalid_argument("geometry: conforming mesh needs identical x-ranges");
}

namespace {

int cells_along(double length, int n, const char* what) {
  const double exact = length * n;
  const long count = std::lround(exact);
  if (count < 1 || std::abs(exact - static_cast<double>(count)) > 1e-9 * std::max(1.0, exact))
    throw std::invalid_argument(std::string("mesh: ") + what +
                                " length is not a multiple of 1/n");
  return static_cast<int>(count);
}

}  // namespace

Mesh Mesh::build_structured(const Geometry& geometry, int n) {
  if (n < 1) throw std::invalid_argument("mesh: n must be >= 1");
  geometry.validate();

  Mesh mesh;
  mesh.geometry_ = geometry;
  mesh.n_ = n;

  const int nx = cells_along(geometry.fluid.width(), n, "x");
  const int nyp = cells_along(geometry.porous.height(), n, "porous y");
  const int nyf = cells_along(geometry.fluid.height(), n, "fluid y");
  const int rows = nyp + nyf + 1;
  const double dx = geometry.fluid.width() / nx;
  const double dyp = geometry.porous.height() / nyp;
  const double dyf = geometry.fluid.height() / nyf;

  mesh.vertices_.reserve(static_cast<std::size_t>(rows) * (nx + 1));
  for (int j = 0; j < rows; ++j) {
    double y;
    if (j < nyp)
      y = geometry.porous.y0 + j * dyp;
    else if (j == nyp)
      y = geometry.interface_y;
    else
      y = geometry.interface_y + (j - nyp) * dyf;
    if (j == rows - 1) y = geometry.fluid.y1;
    for (int i = 0; i <= nx; ++i) {
      const double x = (i == nx) ? geometry.fluid.x1 : geometry.fluid.x0 + i * dx;
      mesh.vertices_.push_back({x, y});
    }
  }

  auto vid = [nx](int i, int j) { return static_cast<std::size_t>(j) * (nx + 1) + i; };
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_ids;
  auto edge_of = [&](std::size_t a, std::size_t b, std::size_t cell) {
    const auto key = std::minmax(a, b);
    auto [it, inserted] = edge_ids.try_emplace({key.first, key.second}, mesh.edges_.size());
    if (inserted) {
      Edge e;
      e.vertices = {a, b};
      e.cells[0] = static_cast<std::ptrdiff_t>(cell);
      mesh.edges_.push_back(e);
    } else {
      mesh.edges_[it->second].cells[1] = static_cast<std::ptrdiff_t>(cell);
    }
    return it->second;
  };

  for (int j = 0; j < nyp + nyf; ++j) {
    const Subdomain s = j < nyp ? Subdomain::porous : Subdomain::fluid;
    for (int i = 0; i < nx; ++i) {
      Cell c;
      c.vertices = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)};
      c.subdomain = s;
      const std::size_t id = mesh.cells_.size();
      for (int e = 0; e < 4; ++e) c.edges[e] = edge_of(c.vertices[e], c.vertices[(e + 1) % 4], id);
      mesh.cells_.push_back(c);
    }
  }

  const auto tags = classify_boundary(mesh);
  for (std::size_t e = 0; e < mesh.edges_.size(); ++e) mesh.edges_[e].tag = tags[e];

  for (const Cell& c : mesh.cells_) {
    const Point& a = mesh.vertices_[c.vertices[0]];
    const Point& b = mesh.vertices_[c.vertices[2]];
    const Point& p = mesh.vertices_[c.vertices[1]];
    const Point& q = mesh.vertices_[c.vertices[3]];
    const double d1 = std::hypot(b.x - a.x, b.y - a.y);
    const double d2 = std::hypot(q.x - p.x, q.y - p.y);
    mesh.h_ = std::max({mesh.h_, d1, d2});
  }
  return mesh;
}

std::vector<EdgeTag> classify_boundary(const Mesh& mesh) {
  std::vector<EdgeTag> tags(mesh.edges_.size(), EdgeTag::interior);
  for (std::size_t e = 0; e < mesh.edges_.size(); ++e) {
    const Edge& edge = mesh.edges_[e];
    const Subdomain s0 = mesh.cells_[static_cast<std::size_t>(edge.cells[0])].subdomain;
    if (edge.cells[1] == no_cell) {
      tags[e] = s0 == Subdomain::fluid ? EdgeTag::exterior_fluid : EdgeTag::exterior_porous;
      continue;
    }
    const Subdomain s1 = mesh.cells_[static_cast<std::size_t>(edge.cells[1])].subdomain;
    tags[e] = s0 == s1 ? EdgeTag::interior : EdgeTag::interface;
  }
  return tags;
}

std::size_t Mesh::count(EdgeTag tag) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [tag](const Edge& e) { return e.tag == tag; }));
}

std::size_t Mesh::count(Subdomain s) const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [s](const Cell& c) { return c.subdomain == s; }));
}

void Mesh::write(std::ostream& os) const {
  const auto precision = os.precision(17);
  for (const Point& p : vertices_) os << "v " << p.x << ' ' << p.y << '\n';
  for (const Cell& c : cells_)
    os << "c " << c.vertices[0] << ' ' << c.vertices[1] << ' ' << c.vertices[2] << ' '
       << c.vertices[3] << ' ' << to_string(c.subdomain) << '\n';
  os.precision(precision);
}

}  // namespace sdc
