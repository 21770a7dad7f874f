#include "sdc/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace sdc {

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::bar0: return "bar0";
    case NormKind::nabla: return "nabla";
    case NormKind::Bnorm: return "B";
    case NormKind::L2: return "L2";
  }
  return "?";
}

double norm(const SystemOperators& ops, std::span<const double> x, NormKind kind) {
  const CsrMatrix* G = nullptr;
  switch (kind) {
    case NormKind::bar0: G = &ops.mass; break;
    case NormKind::nabla: G = &ops.nabla_gram; break;
    case NormKind::Bnorm: G = &ops.stiffness; break;
    case NormKind::L2: G = &ops.pressure_mass; break;
  }
  if (x.size() != G->rows())
    throw std::invalid_argument(std::string("norm: coefficient length does not match the ") +
                                to_string(kind) + " Gram matrix");
  const double q = G->quadratic_form(x);
  if (q < 0.0) {
    // rounding may leave a tiny negative value for a vector in the kernel
    double scale = 0.0;
    for (std::size_t r = 0; r < G->rows(); ++r)
      for (std::size_t k = G->row_offsets()[r]; k < G->row_offsets()[r + 1]; ++k)
        scale += std::abs(x[r] * G->values()[k] * x[G->column_indices()[k]]);
    if (q < -1e-12 * scale)
      throw std::domain_error(std::string("norm: negative quadratic form for ") + to_string(kind));
    return 0.0;
  }
  return std::sqrt(q);
}

FieldErrors error_vs_exact(const MixedSpace& space, const PhysicalParams& params,
                           std::span<const double> w, std::span<const double> p,
                           const VectorField& velocity, const ScalarField& pressure,
                           const ScalarField& head, double t, int points) {
  if (w.size() != space.n_w() || p.size() != space.n_pressure())
    throw std::invalid_argument("error_vs_exact: coefficient length mismatch");
  const Mesh& mesh = space.mesh();
  const QuadratureRule rule = gauss_square(points);
  const auto& q2 = reference_element(ElementKind::Q2);
  const PressureSpace& ps = space.pressure();
  std::vector<std::array<double, 9>> N(rule.points.size());
  std::vector<std::vector<double>> Q(rule.points.size(), std::vector<double>(ps.n_local()));
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    q2.values(rule.points[q], N[q]);
    ps.values(rule.points[q], Q[q]);
  }

  double ev = 0.0, ephi = 0.0, ep = 0.0;
  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    const bool fluid = mesh.cells()[c].subdomain == Subdomain::fluid;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const CellMapping m = map_to_physical(mesh, c, rule.points[q]);
      const double JxW = m.det * rule.weights[q];
      if (fluid) {
        const auto& dofs = space.velocity().cell_dofs(c);
        double vx = 0.0, vy = 0.0;
        for (std::size_t i = 0; i < 9; ++i) {
          vx += N[q][i] * w[space.vx_offset() + dofs[i]];
          vy += N[q][i] * w[space.vy_offset() + dofs[i]];
        }
        const Vec2 ve = velocity ? velocity(m.x, t) : Vec2{};
        ev += ((vx - ve.x) * (vx - ve.x) + (vy - ve.y) * (vy - ve.y)) * JxW;

        const auto& pdofs = ps.cell_dofs(c);
        double ph = 0.0;
        for (std::size_t i = 0; i < pdofs.size(); ++i)
          if (pdofs[i] != PressureSpace::pinned) ph += Q[q][i] * p[pdofs[i]];
        const double pe = pressure ? pressure(m.x, t) : 0.0;
        ep += (ph - pe) * (ph - pe) * JxW;
      } else {
        const auto& dofs = space.head().cell_dofs(c);
        double phi = 0.0;
        for (std::size_t i = 0; i < 9; ++i) phi += N[q][i] * w[space.head_offset() + dofs[i]];
        const double he = head ? head(m.x, t) : 0.0;
        ephi += (phi - he) * (phi - he) * JxW;
      }
    }
  }
  FieldErrors e;
  e.v_L2 = std::sqrt(ev);
  e.phi_L2 = std::sqrt(ephi);
  e.p_L2 = std::sqrt(ep);
  e.w_bar0 = std::sqrt(params.eta * ev + params.rho_g() * params.S0 * ephi);
  return e;
}

double field_norm_bar0(const Mesh& mesh, const PhysicalParams& params, const VectorField& velocity,
                       const ScalarField& head, double t, int points) {
  const QuadratureRule rule = gauss_square(points);
  double sv = 0.0, sh = 0.0;
  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    const bool fluid = mesh.cells()[c].subdomain == Subdomain::fluid;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const CellMapping m = map_to_physical(mesh, c, rule.points[q]);
      const double JxW = m.det * rule.weights[q];
      if (fluid && velocity) {
        const Vec2 v = velocity(m.x, t);
        sv += (v.x * v.x + v.y * v.y) * JxW;
      } else if (!fluid && head) {
        const double h = head(m.x, t);
        sh += h * h * JxW;
      }
    }
  }
  return std::sqrt(params.eta * sv + params.rho_g() * params.S0 * sh);
}

double conv_order(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0))
    throw std::invalid_argument("conv_order: errors must be positive");
  return std::log2(coarse / fine);
}

std::vector<double> conv_order(std::span<const double> errors) {
  if (errors.size() < 2) throw std::invalid_argument("conv_order: need at least two errors");
  std::vector<double> out;
  for (std::size_t i = 1; i < errors.size(); ++i) out.push_back(conv_order(errors[i - 1], errors[i]));
  return out;
}

namespace {

/// beta^2 = min over zero-mean q of q^T D Gv^{-1} D^T q / q^T Gp q.
double infsup_dense(const Eigen::MatrixXd& D, const Eigen::MatrixXd& Gv, const Eigen::MatrixXd& Gp,
                    const Eigen::VectorXd& mean) {
  const Eigen::Index np = D.rows();
  // orthonormal basis of the complement of `mean`
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(mean);
  const Eigen::MatrixXd Qfull = qr.householderQ() * Eigen::MatrixXd::Identity(np, np);
  const Eigen::MatrixXd Z = Qfull.rightCols(np - 1);

  Eigen::LLT<Eigen::MatrixXd> llt(Gv);
  if (llt.info() != Eigen::Success) throw std::runtime_error("infsup: velocity Gram not SPD");
  const Eigen::MatrixXd DZ = D.transpose() * Z;  // nv x (np-1)
  const Eigen::MatrixXd S = DZ.transpose() * llt.solve(DZ);
  const Eigen::MatrixXd P = Z.transpose() * Gp * Z;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (S + S.transpose()),
                                                               0.5 * (P + P.transpose()));
  if (eig.info() != Eigen::Success) throw std::runtime_error("infsup: eigensolver failed");
  const double lmin = eig.eigenvalues().minCoeff();
  return std::sqrt(std::max(lmin, 0.0));
}

struct InfSupBlocks {
  Eigen::MatrixXd D, Gv, Gp;
  Eigen::VectorXd mean;
};

/// Unit-weight divergence, H1 Gram and pressure mass for a given velocity element.
InfSupBlocks infsup_blocks(const Mesh& mesh, ElementKind velocity_element, bool enrich_pressure,
                           std::size_t max_dense) {
  const DofMap vel = build_dofmap(mesh, Subdomain::fluid, velocity_element, SpaceKind::velocity_x);
  const PressureSpace ps(mesh, enrich_pressure);
  std::vector<long> free_index(vel.n_dofs(), -1);
  long nfree = 0;
  for (std::size_t i = 0; i < vel.n_dofs(); ++i)
    if (!vel.is_dirichlet(i)) free_index[i] = nfree++;
  if (static_cast<std::size_t>(2 * nfree) > max_dense)
    throw std::length_error("infsup_estimate: dense size cap exceeded");

  const auto& ref = reference_element(velocity_element);
  const std::size_t nl = ref.n_nodes();
  const QuadratureRule rule = gauss_square(4);
  InfSupBlocks b;
  const Eigen::Index np = static_cast<Eigen::Index>(ps.n_dofs());
  b.D = Eigen::MatrixXd::Zero(np, 2 * nfree);
  b.Gv = Eigen::MatrixXd::Zero(2 * nfree, 2 * nfree);
  b.Gp = Eigen::MatrixXd::Zero(np, np);
  b.mean = Eigen::VectorXd::Zero(np);
  std::vector<double> N(nl), Q(ps.n_local());
  std::vector<Vec2> dN(nl);
  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    if (mesh.cells()[c].subdomain != Subdomain::fluid) continue;
    const auto& vd = vel.cell_dofs(c);
    const auto& pd = ps.cell_dofs(c);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const CellMapping m = map_to_physical(mesh, c, rule.points[q]);
      const double JxW = m.det * rule.weights[q];
      const Mat2 JinvT = m.jacobian.inverse().transposed();
      ref.gradients(rule.points[q], dN);
      for (auto& g : dN) g = JinvT * g;
      ps.values(rule.points[q], Q);
      for (std::size_t i = 0; i < nl; ++i) {
        const long fi = free_index[vd[i]];
        if (fi < 0) continue;
        for (std::size_t j = 0; j < nl; ++j) {
          const long fj = free_index[vd[j]];
          if (fj < 0) continue;
          const double a = (dN[i].x * dN[j].x + dN[i].y * dN[j].y) * JxW;
          b.Gv(fi, fj) += a;
          b.Gv(nfree + fi, nfree + fj) += a;
        }
        for (std::size_t k = 0; k < pd.size(); ++k) {
          if (pd[k] == PressureSpace::pinned) continue;
          const auto pk = static_cast<Eigen::Index>(pd[k]);
          b.D(pk, fi) += Q[k] * dN[i].x * JxW;
          b.D(pk, nfree + fi) += Q[k] * dN[i].y * JxW;
        }
      }
      for (std::size_t k = 0; k < pd.size(); ++k) {
        if (pd[k] == PressureSpace::pinned) continue;
        const auto pk = static_cast<Eigen::Index>(pd[k]);
        b.mean(pk) += Q[k] * JxW;
        for (std::size_t l = 0; l < pd.size(); ++l)
          if (pd[l] != PressureSpace::pinned) b.Gp(pk, static_cast<Eigen::Index>(pd[l])) += Q[k] * Q[l] * JxW;
      }
    }
  }
  return b;
}

}  // namespace

double infsup_estimate(const Mesh& mesh, ElementKind velocity_element, bool enrich_pressure,
                       std::size_t max_dense) {
  const InfSupBlocks b = infsup_blocks(mesh, velocity_element, enrich_pressure, max_dense);
  return infsup_dense(b.D, b.Gv, b.Gp, b.mean);
}

double infsup_estimate(const MixedSpace& space, const SystemOperators& ops, const PhysicalParams& params,
                       std::size_t max_dense) {
  // Built from the assembled operators: free velocity columns of b, the
  // velocity block of the nabla Gram, and the pressure mass.
  const std::size_t nv = space.n_velocity();
  std::vector<long> free_index(2 * nv, -1);
  long nfree = 0;
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < nv; ++i)
      if (!space.velocity().is_dirichlet(i)) free_index[c * nv + i] = nfree++;
  if (static_cast<std::size_t>(nfree) > max_dense)
    throw std::length_error("infsup_estimate: dense size cap exceeded");
  const auto np = static_cast<Eigen::Index>(space.n_pressure());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(np, nfree);
  Eigen::MatrixXd Gv = Eigen::MatrixXd::Zero(nfree, nfree);
  Eigen::MatrixXd Gp = Eigen::MatrixXd::Zero(np, np);
  for (const Triplet& t : ops.divergence.triplets())
    if (t.col < 2 * nv && free_index[t.col] >= 0) D(static_cast<Eigen::Index>(t.row), free_index[t.col]) = t.value;
  for (const Triplet& t : ops.nabla_gram.triplets())
    if (t.row < 2 * nv && t.col < 2 * nv && free_index[t.row] >= 0 && free_index[t.col] >= 0)
      Gv(free_index[t.row], free_index[t.col]) = t.value;
  for (const Triplet& t : ops.pressure_mass.triplets())
    Gp(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) = t.value;
  Eigen::VectorXd mean(np);
  for (Eigen::Index i = 0; i < np; ++i) mean(i) = ops.mean[static_cast<std::size_t>(i)];
  // b carries -eta and the nabla Gram eta nu; report the unit-weight constant
  D /= params.eta;
  Gv /= params.eta * params.nu;
  return infsup_dense(D, Gv, Gp, mean);
}

std::vector<std::optional<double>> ConvergenceRecord::co_w() const {
  std::vector<std::optional<double>> out(rows.size());
  for (std::size_t i = 1; i < rows.size(); ++i) out[i] = conv_order(rows[i - 1].err_w, rows[i].err_w);
  return out;
}

std::vector<std::optional<double>> ConvergenceRecord::co_p() const {
  std::vector<std::optional<double>> out(rows.size());
  for (std::size_t i = 1; i < rows.size(); ++i) out[i] = conv_order(rows[i - 1].err_p, rows[i].err_p);
  return out;
}

namespace {
std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}
}  // namespace

std::string emit_table(const ConvergenceRecord& record) {
  if (record.rows.empty()) throw std::invalid_argument("emit_table: no records");
  for (std::size_t i = 1; i < record.rows.size(); ++i)
    if (!(record.rows[i].param < record.rows[i - 1].param))
      throw std::invalid_argument("emit_table: refinement parameters must be strictly decreasing");
  const auto cw = record.co_w();
  const auto cp = record.co_p();
  std::ostringstream os;
  os << "param,norm_w_exact,norm_w_h,err_w,CO_w,err_p,CO_p,cpu_s\n";
  for (std::size_t i = 0; i < record.rows.size(); ++i) {
    const ConvergenceRow& r = record.rows[i];
    os << fmt("%.6e", r.param) << ',' << fmt("%.6e", r.norm_w_exact) << ',' << fmt("%.6e", r.norm_w_h) << ','
       << fmt("%.6e", r.err_w) << ',' << (cw[i] ? fmt("%.4f", *cw[i]) : "") << ',' << fmt("%.6e", r.err_p)
       << ',' << (cp[i] ? fmt("%.4f", *cp[i]) : "") << ',' << fmt("%.3f", r.cpu_s) << '\n';
  }
  return os.str();
}

}  // namespace sdc
