#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "sdmortar/coupled_solver.hpp"
#include "sdmortar/manufactured.hpp"

namespace sdm {
namespace {

// Case 1 data on matching 10x10 grids with a 5-interval constant mortar
ProblemDefinition small_matching() {
  ProblemDefinition d = case1_problem(0, 0);
  d.stokes_grid = uniform_grid(0.0, 1.0, 10, 0.5, 1.0, 10);
  d.darcy_grid = uniform_grid(0.0, 1.0, 10, 0.0, 0.5, 10);
  d.mortar = MortarSpec{0, {5}};
  return d;
}

double inf_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(InterfaceOperator, SymmetricPositiveDefiniteOnSmallMortar) {
  const CoupledProblem prob = assemble_problem(small_matching());
  SubdomainSolver sub(prob);
  const Eigen::MatrixXd s = form_interface_operator(sub);
  ASSERT_EQ(s.rows(), 5);
  EXPECT_LE((s - s.transpose()).cwiseAbs().maxCoeff(), 1e-10 * s.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(InterfaceOperator, EnergyIdentityAndLinearity) {
  const CoupledProblem prob = assemble_problem(case1_problem(0, 1));
  SubdomainSolver sub(prob);
  std::mt19937 gen(1);
  std::normal_distribution<double> nd;
  Vector lam(prob.mortar->num_dofs());
  for (int k = 0; k < lam.size(); ++k) lam[k] = nd(gen);
  const Vector s = sub.apply_interface_operator(lam);
  const auto [us, ud] = sub.star(lam);
  const double energy = us.u.dot(prob.stokes.a * us.u) + ud.u.dot(prob.darcy.a * ud.u);
  EXPECT_GT(energy, 0.0);
  EXPECT_NEAR(lam.dot(s), energy, 1e-10 * energy);
  const Vector s3 = sub.apply_interface_operator(-2.5 * lam);
  EXPECT_LT(inf_diff(s3, -2.5 * s), 1e-12 * s.cwiseAbs().maxCoeff() * 2.5);
}

TEST(InterfaceOperator, ZeroDataGivesZeroStarSolution) {
  const CoupledProblem prob = assemble_problem(case1_problem(0, 0));
  SubdomainSolver sub(prob);
  const auto [us, ud] = sub.star(Vector::Zero(prob.mortar->num_dofs()));
  EXPECT_EQ(us.u.norm(), 0.0);
  EXPECT_EQ(us.p.norm(), 0.0);
  EXPECT_EQ(ud.u.norm(), 0.0);
  EXPECT_EQ(ud.p.norm(), 0.0);
}

TEST(CoupledSolve, DomainDecompositionMatchesMonolithic) {
  for (int deg : {0, 1}) {
    const CoupledProblem prob = assemble_problem(case1_problem(0, deg));
    const CoupledSolution mono = solve_monolithic(prob, 1e-12);
    SubdomainSolver sub(prob);
    CgOptions opts;
    opts.tol = 1e-12;
    const CoupledSolution dd = solve_dd(sub, opts);
    EXPECT_TRUE(dd.converged);
    EXPECT_LE(inf_diff(dd.lambda, mono.lambda), 1e-8);
    EXPECT_LE(inf_diff(dd.u_s, mono.u_s), 1e-8);
    EXPECT_LE(inf_diff(dd.p_s, mono.p_s), 1e-8);
    EXPECT_LE(inf_diff(dd.u_d, mono.u_d), 1e-8);
    EXPECT_LE(inf_diff(dd.p_d, mono.p_d), 1e-8);
    // one pair of bar solves plus one pair of star solves per iteration and for the recovery
    EXPECT_EQ(sub.solves(), 2 * (dd.iterations + 2));
  }
}

TEST(CoupledSolve, ConservationAfterEitherPath) {
  const CoupledProblem prob = assemble_problem(case1_problem(0, 1));
  const CoupledSolution mono = solve_monolithic(prob);
  SubdomainSolver sub(prob);
  const CoupledSolution dd = solve_dd(sub);
  for (const CoupledSolution* s : {&mono, &dd}) {
    const ConservationResiduals r = conservation_residuals(prob, *s);
    EXPECT_LE(r.stokes_mass, 1e-9);
    EXPECT_LE(r.darcy_mass, 1e-9);
    EXPECT_LE(r.stokes_momentum, 1e-9);
    EXPECT_LE(r.darcy_momentum, 1e-9);
    EXPECT_LE(r.interface_flux, 1e-9);
  }
}

TEST(CoupledSolve, ZeroDataGivesZeroSolution) {
  ProblemDefinition d = small_matching();
  d.stokes_bc.velocity = constant_vector(0.0, 0.0);
  d.darcy_bc.pressure = constant_scalar(0.0);
  d.stokes_force = constant_vector(0.0, 0.0);
  d.stokes_mass_source = constant_scalar(0.0);
  d.darcy_source = constant_scalar(0.0);
  const CoupledProblem prob = assemble_problem(d);
  const CoupledSolution s = solve_monolithic(prob);
  EXPECT_EQ(s.u_s.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.lambda.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.p_d.cwiseAbs().maxCoeff(), 0.0);
}

TEST(CoupledSolve, ClosedSystemUsesPressureGauge) {
  // no-slip box on top of a no-flow box: pressures are fixed up to a constant
  ProblemDefinition d = small_matching();
  d.darcy_bc.classify = [](const BoundaryEdgeRef&) { return BoundaryKind::essential; };
  d.darcy_bc.normal_velocity = constant_scalar(0.0);
  d.stokes_bc.velocity = constant_vector(0.0, 0.0);
  d.stokes_mass_source = constant_scalar(0.0);
  d.darcy_source = [](double x, double) { return std::cos(M_PI * x); };
  const CoupledProblem prob = assemble_problem(d);
  EXPECT_TRUE(prob.needs_gauge);
  const CoupledSolution s = solve_monolithic(prob);
  EXPECT_NEAR(prob.darcy.cell_areas.dot(s.p_d), 0.0, 1e-12);
  const ConservationResiduals r = conservation_residuals(prob, s);
  EXPECT_LE(r.worst(), 1e-9);
}

TEST(CoupledSolve, DdReportsNonConvergence) {
  const CoupledProblem prob = assemble_problem(case1_problem(0, 0));
  SubdomainSolver sub(prob);
  CgOptions opts;
  opts.max_iter = 2;
  const CoupledSolution s = solve_dd(sub, opts);
  EXPECT_FALSE(s.converged);
  EXPECT_EQ(s.iterations, 2);
  EXPECT_GT(s.residual, opts.tol);
}

}  // namespace
}  // namespace sdm
