#pragma once

#include <string>
#include <vector>

#include "sdmortar/coupled_solver.hpp"
#include "sdmortar/darcy_rt0.hpp"
#include "sdmortar/fields.hpp"
#include "sdmortar/manufactured.hpp"
#include "sdmortar/mortar.hpp"
#include "sdmortar/stokes_mac.hpp"

namespace sdm {

/// standard: Gauss quadrature of the error integrals; midpoint: one sample per cell / edge / interval.
enum class NormVariant { standard, midpoint };

const char* to_string(NormVariant v);

/// Cellwise constant pressure error. `ph` is indexed by active cell in cell-id order.
double pressure_error(const TensorGrid& grid, const Vector& ph, const ScalarField& exact, NormVariant v);

/// Normal component of the exact field along the given axis.
using NormalComponent = std::function<double(Axis, double, double)>;

/// sqrt( sum_E |E| sum_{e in dE} |e|^-1 int_e (v.n - v_h.n)^2 ). `face_value(axis, i, j)`
/// returns the discrete normal value on edge (i, j) of that orientation.
double edge_norm(const TensorGrid& grid, const std::function<double(Axis, int, int)>& face_value,
                 const NormalComponent& exact, NormVariant v);

/// Edge norm of a discrete field alone (exact part zero).
double edge_norm(const TensorGrid& grid, const std::function<double(Axis, int, int)>& face_value, NormVariant v);

/// H1-type Stokes error: edge norm plus the four reconstructed derivative errors.
/// `exact_grad` returns ((du1/dx, du1/dy), (du2/dx, du2/dy)).
double stokes_h1_error(const StaggeredGeometry& geom, const MacField& field, const VectorField& exact_u,
                       const std::function<std::array<Vec2, 2>(double, double)>& exact_grad, NormVariant v);

/// L2 error of the mortar pressure against an exact trace, 3-point Gauss or midpoint per mortar interval.
double mortar_error(const InterfaceSegmentation& iface, const MortarSpace& mortar, const Vector& lambda,
                    const std::function<double(double, double)>& exact, NormVariant v);

struct ErrorBundle {
  double e_pD = 0.0;
  double e_uD = 0.0;
  double e_pS = 0.0;
  double e_uS = 0.0;
  double e_lambda = 0.0;
  NormVariant variant = NormVariant::standard;

  std::array<double, 5> values() const { return {e_pD, e_uD, e_pS, e_uS, e_lambda}; }
};

ErrorBundle case1_errors(const CoupledProblem& prob, const CoupledSolution& sol, const ExactSolution& ex,
                         NormVariant v);

/// log2(e[k-1] / e[k]); NaN where undefined (zero or non-finite errors).
std::vector<double> rates(const std::vector<double>& errors);

struct ConvergenceReport {
  NormVariant variant = NormVariant::standard;
  std::vector<int> levels;
  std::vector<ErrorBundle> errors;

  void add(int level, const ErrorBundle& e);
  /// Column c in order (pD, uD, pS, uS, lambda).
  std::vector<double> column(int c) const;
  std::vector<double> column_rates(int c) const { return rates(column(c)); }
};

}  // namespace sdm
