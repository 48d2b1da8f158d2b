#include "sdmortar/coupled_solver.hpp"

#include <algorithm>
#include <cmath>

namespace sdm {

namespace {

SparseMatrix saddle_matrix(const SparseMatrix& a, const SparseMatrix& div) {
  BlockSystem bs;
  const int u = bs.add_field("velocity", static_cast<int>(a.rows()));
  const int p = bs.add_field("pressure", static_cast<int>(div.rows()));
  bs.add_block(u, u, a);
  bs.add_block(p, u, -div, true);
  return bs.assemble();
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

CoupledProblem assemble_problem(const ProblemDefinition& def) {
  CoupledProblem prob;
  prob.iface = build_interface(def.stokes_grid, def.darcy_grid, def.mortar);
  prob.stokes_geom = std::make_shared<const StaggeredGeometry>(def.stokes_grid);
  prob.darcy_space = std::make_shared<const Rt0Space>(def.darcy_grid);
  prob.mortar = std::make_unique<MortarSpace>(prob.iface, def.mortar.degree);
  prob.coupling = assemble_coupling(prob.iface, *prob.mortar);
  require_mortar_solvable(prob.coupling);

  std::vector<double> alpha;
  for (const auto& s : prob.iface.segments) alpha.push_back(def.slip_coefficient ? def.slip_coefficient(s) : 0.0);
  prob.stokes = assemble_momentum(prob.stokes_geom, prob.iface, def.mu, alpha, def.stokes_bc);
  prob.stokes_loads = assemble_rhs(prob.stokes, def.stokes_force, def.stokes_mass_source, def.stokes_load_rule);

  const auto k = def.permeability ? PermeabilityField::sample(def.darcy_grid, def.permeability)
                                  : PermeabilityField::uniform(def.darcy_grid, 1.0, 0.0, 1.0);
  const Rt0Matrices rt0 = assemble_darcy(prob.darcy_space, k, def.mu);
  prob.darcy = apply_darcy_bcs(rt0, prob.iface, def.darcy_bc);
  prob.darcy_loads = assemble_darcy_rhs(prob.darcy, def.darcy_source, def.darcy_source_rule, def.darcy_boundary_rule);

  prob.c_stokes = prob.coupling.stokes * prob.stokes.trace_map;
  prob.c_darcy = prob.coupling.darcy * prob.darcy.trace_map;

  bool stokes_natural = false;
  for (int a = 0; a < 2; ++a)
    for (auto kind : prob.stokes.dofs.face_kind[a])
      if (kind == BoundaryKind::natural) stokes_natural = true;
  bool darcy_natural = false;
  for (auto kind : prob.darcy.edge_kind)
    if (kind == BoundaryKind::natural) darcy_natural = true;
  prob.needs_gauge = !stokes_natural && !darcy_natural;
  return prob;
}

CoupledSolution solve_monolithic(const CoupledProblem& prob, double tol) {
  const StokesOperator& S = prob.stokes;
  const DarcyOperator& D = prob.darcy;
  BlockSystem bs;
  const int us = bs.add_field("stokes velocity", S.dofs.num_velocity);
  const int ps = bs.add_field("stokes pressure", S.dofs.num_pressure);
  const int ud = bs.add_field("darcy velocity", D.num_flux);
  const int pd = bs.add_field("darcy pressure", D.num_pressure());
  const int lm = bs.add_field("mortar", prob.mortar->num_dofs());
  int gauge = -1;
  if (prob.needs_gauge) gauge = bs.add_field("gauge", 1);

  bs.add_block(us, us, S.a);
  bs.add_block(ps, us, -S.div, true);
  bs.add_block(ud, ud, D.a);
  bs.add_block(pd, ud, -D.div, true);
  bs.add_block(lm, us, prob.c_stokes, true);
  bs.add_block(lm, ud, prob.c_darcy, true);
  if (gauge >= 0) bs.add_block(gauge, pd, SparseMatrix(D.cell_areas.transpose().sparseView()), true);

  const StokesLoads& ls = prob.stokes_loads;
  const DarcyLoads& ld = prob.darcy_loads;
  const Vector rus = ls.momentum - S.a_fixed * ls.fixed;
  const Vector rps = -ls.mass + S.div_fixed * ls.fixed;
  const Vector rud = ld.flux - D.a_fixed * ld.fixed;
  const Vector rpd = -ld.mass + D.div_fixed * ld.fixed;
  const Vector rl = Vector::Zero(prob.mortar->num_dofs());
  const Vector zero1 = Vector::Zero(1);
  std::vector<const Vector*> parts{&rus, &rps, &rud, &rpd, &rl};
  if (gauge >= 0) parts.push_back(&zero1);
  const Vector rhs = bs.gather(parts);

  SaddleSolver lu(tol);
  lu.factorize(bs.assemble());
  const Vector x = lu.solve(rhs);

  CoupledSolution sol;
  sol.method = "monolithic";
  sol.u_s = bs.segment(x, us);
  sol.p_s = bs.segment(x, ps);
  sol.u_d = bs.segment(x, ud);
  sol.p_d = bs.segment(x, pd);
  sol.lambda = bs.segment(x, lm);
  sol.fixed_s = ls.fixed;
  sol.fixed_d = ld.fixed;
  sol.residual = lu.last_residual();
  return sol;
}

SubdomainSolver::SubdomainSolver(const CoupledProblem& prob, double tol)
    : prob_(prob), stokes_lu_(tol), darcy_lu_(tol) {
  stokes_lu_.factorize(saddle_matrix(prob.stokes.a, prob.stokes.div));
  darcy_lu_.factorize(saddle_matrix(prob.darcy.a, prob.darcy.div));
}

StokesState SubdomainSolver::solve_stokes(const Vector& rhs_u, const Vector& rhs_p) {
  Vector rhs(rhs_u.size() + rhs_p.size());
  rhs << rhs_u, rhs_p;
  const Vector x = stokes_lu_.solve(rhs);
  ++solves_;
  return {x.head(rhs_u.size()), x.tail(rhs_p.size())};
}

DarcyState SubdomainSolver::solve_darcy(const Vector& rhs_u, const Vector& rhs_p) {
  Vector rhs(rhs_u.size() + rhs_p.size());
  rhs << rhs_u, rhs_p;
  const Vector x = darcy_lu_.solve(rhs);
  ++solves_;
  return {x.head(rhs_u.size()), x.tail(rhs_p.size())};
}

std::pair<StokesState, DarcyState> SubdomainSolver::star(const Vector& lambda) {
  const Vector rus = -(prob_.c_stokes.transpose() * lambda);
  const Vector rud = -(prob_.c_darcy.transpose() * lambda);
  return {solve_stokes(rus, Vector::Zero(prob_.stokes.dofs.num_pressure)),
          solve_darcy(rud, Vector::Zero(prob_.darcy.num_pressure()))};
}

const std::pair<StokesState, DarcyState>& SubdomainSolver::bar() {
  if (!bar_) {
    const StokesOperator& S = prob_.stokes;
    const DarcyOperator& D = prob_.darcy;
    const StokesLoads& ls = prob_.stokes_loads;
    const DarcyLoads& ld = prob_.darcy_loads;
    auto s = solve_stokes(ls.momentum - S.a_fixed * ls.fixed, -ls.mass + S.div_fixed * ls.fixed);
    auto d = solve_darcy(ld.flux - D.a_fixed * ld.fixed, -ld.mass + D.div_fixed * ld.fixed);
    bar_.emplace(std::move(s), std::move(d));
  }
  return *bar_;
}

Vector SubdomainSolver::apply_interface_operator(const Vector& lambda) {
  const auto [s, d] = star(lambda);
  return -(prob_.c_stokes * s.u + prob_.c_darcy * d.u);
}

Vector SubdomainSolver::interface_rhs() {
  const auto& [s, d] = bar();
  return prob_.c_stokes * s.u + prob_.c_darcy * d.u;
}

CoupledSolution solve_dd(SubdomainSolver& sub, const CgOptions& opts) {
  const CoupledProblem& prob = sub.problem();
  const Vector rhs = sub.interface_rhs();
  const CgResult cg = cg_solve([&](const Vector& l) { return sub.apply_interface_operator(l); }, rhs, opts);

  const auto [s, d] = sub.star(cg.x);
  const auto& [sb, db] = sub.bar();
  CoupledSolution sol;
  sol.method = "dd";
  sol.u_s = s.u + sb.u;
  sol.p_s = s.p + sb.p;
  sol.u_d = d.u + db.u;
  sol.p_d = d.p + db.p;
  sol.lambda = cg.x;
  sol.fixed_s = prob.stokes_loads.fixed;
  sol.fixed_d = prob.darcy_loads.fixed;
  sol.iterations = cg.iterations;
  sol.converged = cg.converged;
  sol.residual = cg.residual_history.empty() ? 0.0 : cg.residual_history.back();
  sol.residual_history = cg.residual_history;
  return sol;
}

Eigen::MatrixXd form_interface_operator(SubdomainSolver& sub) {
  const int n = sub.problem().mortar->num_dofs();
  Eigen::MatrixXd m(n, n);
  for (int k = 0; k < n; ++k) m.col(k) = sub.apply_interface_operator(Vector::Unit(n, k));
  return m;
}

double ConservationResiduals::worst() const {
  return std::max({stokes_mass, darcy_mass, stokes_momentum, darcy_momentum, interface_flux});
}

ConservationResiduals conservation_residuals(const CoupledProblem& prob, const CoupledSolution& sol) {
  const StokesOperator& S = prob.stokes;
  const DarcyOperator& D = prob.darcy;
  ConservationResiduals r;
  r.stokes_mass = max_abs(S.div * sol.u_s + S.div_fixed * sol.fixed_s - prob.stokes_loads.mass);
  r.darcy_mass = max_abs(D.div * sol.u_d + D.div_fixed * sol.fixed_d - prob.darcy_loads.mass);
  r.stokes_momentum = max_abs(S.a * sol.u_s + S.a_fixed * sol.fixed_s - S.div.transpose() * sol.p_s +
                              prob.c_stokes.transpose() * sol.lambda - prob.stokes_loads.momentum);
  r.darcy_momentum = max_abs(D.a * sol.u_d + D.a_fixed * sol.fixed_d - D.div.transpose() * sol.p_d +
                             prob.c_darcy.transpose() * sol.lambda - prob.darcy_loads.flux);
  r.interface_flux = max_abs(prob.c_stokes * sol.u_s + prob.c_darcy * sol.u_d);
  return r;
}

MacField stokes_field(const CoupledProblem& prob, const CoupledSolution& sol) {
  return expand_mac(prob.stokes, sol.u_s, sol.fixed_s, sol.p_s);
}

std::vector<double> darcy_edge_values(const CoupledProblem& prob, const CoupledSolution& sol) {
  return expand_rt0(prob.darcy, sol.u_d, sol.fixed_d);
}

}  // namespace sdm
