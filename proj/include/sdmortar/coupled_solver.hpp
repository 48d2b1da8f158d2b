#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sdmortar/darcy_rt0.hpp"
#include "sdmortar/geometry.hpp"
#include "sdmortar/linear_algebra.hpp"
#include "sdmortar/mortar.hpp"
#include "sdmortar/stokes_mac.hpp"

namespace sdm {

/// Everything needed to set up one coupled Stokes-Darcy run.
struct ProblemDefinition {
  std::string name;
  TensorGrid stokes_grid;
  TensorGrid darcy_grid;
  MortarSpec mortar;
  double mu = 1.0;
  /// Slip friction for a given interface segment.
  std::function<double(const InterfaceSegment&)> slip_coefficient;
  std::function<std::array<double, 3>(double, double)> permeability;
  MacBoundaryCondition stokes_bc;
  DarcyBoundaryCondition darcy_bc;
  VectorField stokes_force = constant_vector(0.0, 0.0);
  ScalarField stokes_mass_source = constant_scalar(0.0);
  ScalarField darcy_source = constant_scalar(0.0);
  LoadRule stokes_load_rule = LoadRule::gauss;
  LoadRule darcy_source_rule = LoadRule::gauss;
  LoadRule darcy_boundary_rule = LoadRule::gauss;
};

/// Assembled operators and loads of a coupled problem.
struct CoupledProblem {
  std::shared_ptr<const StaggeredGeometry> stokes_geom;
  std::shared_ptr<const Rt0Space> darcy_space;
  InterfaceSegmentation iface;
  std::unique_ptr<MortarSpace> mortar;
  MortarCoupling coupling;
  StokesOperator stokes;
  DarcyOperator darcy;
  StokesLoads stokes_loads;
  DarcyLoads darcy_loads;
  SparseMatrix c_stokes;  ///< mortar x Stokes velocity unknowns
  SparseMatrix c_darcy;   ///< mortar x Darcy flux unknowns
  /// Pressures are fixed only up to a common constant (no natural boundary anywhere).
  bool needs_gauge = false;
};

CoupledProblem assemble_problem(const ProblemDefinition& def);

struct CoupledSolution {
  Vector u_s, p_s, fixed_s;
  Vector u_d, p_d, fixed_d;
  Vector lambda;
  std::string method;
  int iterations = 0;
  bool converged = true;
  double residual = 0.0;
  std::vector<double> residual_history;
};

/// One factorization of the full symmetric system
/// [A_S B_S^T 0 0 C_S^T; B_S 0 ...; 0 0 A_D B_D^T C_D^T; 0 0 B_D 0 0; C_S 0 C_D 0 0].
CoupledSolution solve_monolithic(const CoupledProblem& prob, double tol = 1e-10);

struct StokesState {
  Vector u, p;
};
struct DarcyState {
  Vector u, p;
};

/// Factorized subdomain problems with the interface pressure as Neumann data.
class SubdomainSolver {
 public:
  explicit SubdomainSolver(const CoupledProblem& prob, double tol = 1e-12);

  /// Zero outer data and sources, interface pressure lambda.
  std::pair<StokesState, DarcyState> star(const Vector& lambda);
  /// True data, zero interface pressure. Cached after the first call.
  const std::pair<StokesState, DarcyState>& bar();

  /// -(C_S u*_S + C_D u*_D) for the star solutions driven by lambda.
  Vector apply_interface_operator(const Vector& lambda);
  /// C_S ubar_S + C_D ubar_D.
  Vector interface_rhs();

  const CoupledProblem& problem() const { return prob_; }
  int solves() const { return solves_; }

 private:
  StokesState solve_stokes(const Vector& rhs_u, const Vector& rhs_p);
  DarcyState solve_darcy(const Vector& rhs_u, const Vector& rhs_p);

  const CoupledProblem& prob_;
  SaddleSolver stokes_lu_;
  SaddleSolver darcy_lu_;
  std::optional<std::pair<StokesState, DarcyState>> bar_;
  int solves_ = 0;
};

/// Interface CG on the mortar pressure followed by recovery of the subdomain fields.
CoupledSolution solve_dd(SubdomainSolver& sub, const CgOptions& opts = {});

/// Explicitly formed interface operator, one column per mortar basis function.
Eigen::MatrixXd form_interface_operator(SubdomainSolver& sub);

struct ConservationResiduals {
  double stokes_mass = 0.0;      ///< max over cells
  double darcy_mass = 0.0;       ///< max over cells
  double stokes_momentum = 0.0;  ///< max over velocity unknowns
  double darcy_momentum = 0.0;   ///< max over flux unknowns
  double interface_flux = 0.0;   ///< max over mortar functions
  double worst() const;
};

ConservationResiduals conservation_residuals(const CoupledProblem& prob, const CoupledSolution& sol);

MacField stokes_field(const CoupledProblem& prob, const CoupledSolution& sol);
std::vector<double> darcy_edge_values(const CoupledProblem& prob, const CoupledSolution& sol);

}  // namespace sdm
