#pragma once

#include <array>

#include "sdmortar/coupled_solver.hpp"
#include "sdmortar/fields.hpp"

namespace sdm {

struct Case1Params {
  double mu = 1.0;
  double k = 1.0;
  double alpha = 0.5;
  double omega = 6.0;

  double g() const;      ///< sqrt(mu k) / alpha
  double beta() const;   ///< (1 - G) / (2 (1 + G))
  double chi() const;    ///< (-30 beta - 17) / 48
  double slip() const;   ///< mu alpha / sqrt(k)
};

/// Closed-form Case 1 fields with their first derivatives and source terms.
/// Stokes lives on (0,1)x(0.5,1), Darcy on (0,1)x(0,0.5).
class ExactSolution {
 public:
  explicit ExactSolution(Case1Params p = {});

  const Case1Params& params() const { return p_; }

  Vec2 u_stokes(double x, double y) const;
  double p_stokes(double x, double y) const;
  Vec2 u_darcy(double x, double y) const;
  double p_darcy(double x, double y) const;

  /// (du1/dx, du1/dy) and (du2/dx, du2/dy)
  std::array<Vec2, 2> grad_u_stokes(double x, double y) const;
  Vec2 grad_p_stokes(double x, double y) const;
  Vec2 grad_p_darcy(double x, double y) const;
  /// Laplacian of each Stokes velocity component.
  Vec2 laplace_u_stokes(double x, double y) const;
  /// Gradient of the Stokes velocity divergence.
  Vec2 grad_div_u_stokes(double x, double y) const;

  /// -div(2 mu eps(u) - p I)
  Vec2 stokes_force(double x, double y) const;
  /// div u_S
  double stokes_mass_source(double x, double y) const;
  /// div u_D
  double darcy_source(double x, double y) const;
  /// Cauchy stress of the Stokes flow as (s11, s12, s22).
  std::array<double, 3> stokes_stress(double x, double y) const;
  /// Interface pressure on y = 0.5.
  double lambda(double x) const { return p_darcy(x, 0.5); }

 private:
  Case1Params p_;
  double g_, beta_, chi_;
};

ExactSolution case1_exact(Case1Params p = {});

/// Case 1 convergence problem at a refinement level (level 0: 16x16 Stokes,
/// 15x15 Darcy, 15 constant or 14 linear mortar elements). A positive
/// `mortar_elements` overrides the level-0 mortar count.
ProblemDefinition case1_problem(int level, int mortar_degree, int mortar_elements = 0, Case1Params p = {});

struct Case2Params {
  double mu = 1.0;
  double alpha = 1.0;
  double anisotropy = 100.0;
  double k = 1e-5;
  double angle = 3.14159265358979323846 / 4.0;
  double inlet_stress = 1.1;
  double outlet_stress = 1.0;
};

/// K = R(angle) diag(k / anisotropy, k) R(angle)^-1 as (K11, K12, K22).
std::array<double, 3> case2_permeability(const Case2Params& p);

/// Channel (0,0.75)x(0,0.25) with a porous block (0.25,0.5)x(0,0.2) on the
/// floor. The Stokes grid is graded towards the block top and sides; the
/// Darcy grid is uniform and does not match it. Linear mortars use one
/// element fewer per segment than constant ones.
ProblemDefinition case2_problem(int level, int mortar_degree = 0, Case2Params p = {});

}  // namespace sdm
