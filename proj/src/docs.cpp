#include "sdc/docs.hpp"

#include <cstdio>
#include <sstream>

namespace sdc {

const std::vector<IndexEntry>& equation_index() {
  static const std::vector<IndexEntry> rows{
      {"Stokes momentum balance", "v_t - div T(v,p) = f in Omega_f", "mms::eval_forcing (f), assemble_B, assemble_b"},
      {"incompressibility", "div v = 0 in Omega_f", "assemble_b, divergence_residual"},
      {"Darcy head equation", "S0 phi_t - div(K grad phi) = g0 in Omega_p", "mms::eval_forcing (g0), assemble_B, assemble_mass"},
      {"Darcy flux", "v_p = -(1/eta) K grad phi", "mms::head_flux_divergence, HydraulicTensor"},
      {"initial conditions", "v(0) = v0, phi(0) = phi0", "project, run"},
      {"boundary conditions", "v = 0 on Gamma_f minus I, phi = 0 on Gamma_p minus I (data from the exact solution)",
       "DirichletConstraints, MixedSpace::dirichlet_dofs"},
      {"interface mass conservation", "v.n_f = (1/eta) n_p.K grad phi on I", "assemble_bI, InterfaceDefect::mass_flux"},
      {"interface normal force balance", "-n_f.T(v,p)n_f = rho g phi on I", "assemble_bI, InterfaceDefect::normal_force"},
      {"Beavers-Joseph-Saffman condition", "-tau.T(v,p)n_f = alpha/sqrt(tau.K tau) v.tau on I",
       "assemble_B (interface term), InterfaceDefect::tangential_stress"},
      {"weighted L2 inner product (.,.)_0bar", "eta (u,v)_f + rho g S0 (psi,phi)_p", "assemble_mass, NormKind::bar0"},
      {"gradient inner product (.,.)_nabla", "eta nu (grad u, grad v)_f + rho g k_max (grad psi, grad phi)_p",
       "assemble_nabla_gram, NormKind::nabla"},
      {"time-uniform norms |||.|||_{theta,inf}", "max over n of ||.(t_n)||_theta", "RunResult::max_err_w, RunResult::max_err_p"},
      {"integration by parts on each subdomain", "weak form with interface traces", "assemble_B, assemble_b, assemble_bI"},
      {"bilinear form B", "eta nu (grad v, grad u) + eta alpha/sqrt(tau K tau) <v.tau, u.tau>_I + rho g (K grad phi, grad psi)",
       "assemble_B"},
      {"bilinear form b", "b(w, q) = -eta (q, div v)", "assemble_b"},
      {"interface form b_I", "eta rho g (<phi, u.n_f>_I - <psi, v.n_f>_I)", "assemble_bI"},
      {"load functional F", "eta (f, u) + rho g (g0, psi) plus interface defects", "assemble_load, LoadData"},
      {"continuous variational problem", "(w_t, z)_0bar + B(w,z) + b_I(w,z) + b(z,p) = F(z), b(w,q) = 0",
       "SystemOperators, assemble_operators"},
      {"interpolation-based time derivative", "(3w^{n+1} - 4w^n + w^{n-1}) / (2 sigma)", "bdf2_weights, bdf2_derivative"},
      {"semi-discrete system", "M w' + (B + C_I) w + b^T p = F, b w = 0", "assemble_step_matrix, StepSystem"},
      {"finite element spaces", "Q2 velocity, Q2 head, Q1 or Q1+Q0 pressure", "MixedSpace, build_dofmap, PressureSpace"},
      {"discretely divergence-free set", "{w_h : b(w_h, q_h) = 0 for all q_h}", "divergence_residual"},
      {"discrete inf-sup condition", "sup b(w,q)/||w||_nabla >= beta ||q||", "infsup_estimate"},
      {"fully discrete three-level scheme", "(3w^{n+1} - 4w^n + w^{n-1})/(2 sigma) + ... = F^{n+1}", "bdf2_step, run"},
      {"fully discrete reference scheme (backward Euler)", "(w^{n+1} - w^n)/sigma + ... = F^{n+1}", "backward_euler_step"},
      {"L2 projection P_h", "(P_h w - w, z_h)_0bar = 0", "project"},
      {"first-step initialization", "w1 = P_h(w0 + sigma w_t(0)), p1 from one solve at t1", "taylor_predictor, first_step"},
      {"first-step accuracy bound", "||w1 - wbar1|| <= sigma^2/2 max ||w_tt||", "taylor_predictor (acceptance check)"},
      {"continuity and coercivity of B", "B(z,z) >= (k_min/k_max) ||z||_nabla^2", "checks: B_symmetry, B_coercivity"},
      {"energy norm ||.||_B and its equivalence", "sqrt(k_min/k_max) ||z||_nabla <= ||z||_B", "NormKind::Bnorm, checks: B_coercivity"},
      {"anti-symmetry of b_I", "b_I(w,z) = -b_I(z,w), b_I(w,w) = 0", "checks: C_I_skew, b_I_vanishes_on_diagonal"},
      {"unconditional stability", "||w^n||_0bar bounded for any sigma", "stability_run, checks: unconditional_stability"},
      {"manufactured solution", "v, p, phi in closed form", "mms::velocity, mms::pressure, mms::head, manufactured_problem"},
      {"test parameter sets", "Test 1, Test 2, Test 3", "preset"},
      {"convergence orders CO(h), CO(sigma)", "log2(e(2x)/e(x))", "conv_order, ConvergenceRecord"},
      {"convergence tables", "param, norms, errors, orders, cpu", "emit_table, cmd_convergence"},
  };
  return rows;
}

const std::vector<Erratum>& errata() {
  static const std::vector<Erratum> list{
      {"Placement of sigma in the Taylor starter",
       "vbar1 = v0 + nu sigma Lap v0 - grad p0 + f0;  phibar1 = phi0 + (1/S0) sigma div(K grad phi0) + g0",
       "vbar1 = v0 + sigma (nu Lap v0 - grad p0 + f0);  phibar1 = phi0 + (sigma/S0)(div(K grad phi0) + g0)",
       "Only the bracketed form is w0 + sigma w_t(0); the published form is dimensionally inconsistent and "
       "cannot satisfy the sigma^2/2 first-step bound."},
      {"Zero forcing in the experiments",
       "f = 0 and g0 = 0 together with the closed-form exact solution",
       "f and g0 derived from the exact solution by substitution into the equations (mms::eval_forcing)",
       "The closed-form solution does not satisfy the homogeneous equations, so zero forcing cannot reproduce it."},
      {"Spatial order claimed for Q2",
       "O(h^{d+1}) with d = 3, read as fourth order in w",
       "Q2 elements give third order in the weighted L2 norm; acceptance uses a floor of 2.7",
       "Standard Taylor-Hood theory bounds the L2 velocity/head error by h^3 for biquadratic elements."},
  };
  return list;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else out += c;
  }
  return out;
}

}  // namespace

std::string generate_index(const std::optional<MeasuredOrders>& measured) {
  std::ostringstream os;
  os << "# Math-to-code index\n\n"
     << "Generated by `sdc docs`. Each mathematical object appears once.\n\n"
     << "| object | formula | code |\n|---|---|---|\n";
  for (const IndexEntry& e : equation_index())
    os << "| " << escape(e.object) << " | " << escape(e.formula) << " | `" << escape(e.code) << "` |\n";
  os << "\n# Errata\n";
  for (const Erratum& e : errata()) {
    os << "\n## " << e.title << "\n\n"
       << "- published: " << e.published << "\n"
       << "- implemented: " << e.implemented << "\n"
       << "- why: " << e.reason << "\n";
    if (measured && e.title.rfind("Spatial order", 0) == 0) {
      os << "- measured (Test 1, sigma = 2^-6, " << measured->starter << " starter): CO_w =";
      for (double c : measured->co_w) {
        char buf[24];
        std::snprintf(buf, sizeof buf, " %.2f", c);
        os << buf;
      }
      os << "; CO_p =";
      for (double c : measured->co_p) {
        char buf[24];
        std::snprintf(buf, sizeof buf, " %.2f", c);
        os << buf;
      }
      os << "; published CO_w about 4.0\n";
    }
  }
  return os.str();
}

}  // namespace sdc
