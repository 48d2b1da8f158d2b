#pragma once

#include <Eigen/Dense>

#include <vector>

#include "sdmortar/darcy_rt0.hpp"
#include "sdmortar/geometry.hpp"
#include "sdmortar/linear_algebra.hpp"
#include "sdmortar/stokes_mac.hpp"

namespace sdm {

/// Piecewise constant (degree 0) or continuous piecewise linear (degree 1)
/// functions on the mortar partition of each interface segment. Linear
/// mortars are continuous inside a segment only.
class MortarSpace {
 public:
  MortarSpace(const InterfaceSegmentation& iface, int degree);

  int degree() const { return degree_; }
  int num_dofs() const { return num_dofs_; }
  int num_segments() const { return static_cast<int>(breaks_.size()); }
  const std::vector<double>& breaks(int seg) const { return breaks_[seg]; }
  int segment_offset(int seg) const { return offset_[seg]; }

  /// Nonzero basis functions at tangential coordinate s inside mortar interval `k` of segment `seg`.
  int basis_at(int seg, int k, double s, std::array<std::pair<int, double>, 2>& out) const;
  /// Mortar interval of segment `seg` containing s.
  int interval_of(int seg, double s) const;
  double evaluate(const Vector& coef, int seg, double s) const;

 private:
  int degree_;
  int num_dofs_ = 0;
  std::vector<std::vector<double>> breaks_;
  std::vector<int> offset_;
};

/// Coupling matrices of the interface form and the L2 projections between
/// the three interface spaces (Stokes trace, Darcy trace, mortar).
struct MortarCoupling {
  SparseMatrix stokes;       ///< mortar x Stokes trace intervals, entries integral of xi_k over the interval
  SparseMatrix darcy;        ///< mortar x Darcy trace intervals
  SparseMatrix mortar_mass;  ///< mortar x mortar
  Vector stokes_lengths;
  Vector darcy_lengths;
};

MortarCoupling assemble_coupling(const InterfaceSegmentation& iface, const MortarSpace& mortar);

struct MortarProjections {
  Eigen::MatrixXd stokes_from_mortar;  ///< onto piecewise constants of the Stokes trace
  Eigen::MatrixXd darcy_from_mortar;
  Eigen::MatrixXd mortar_from_stokes;
  Eigen::MatrixXd mortar_from_darcy;
};

MortarProjections projection_matrices(const MortarCoupling& c);

/// Smallest generalized singular value of the Darcy-trace projection on the
/// mortar space: sqrt(min eig(P^T M_D P, M_mortar)).
double darcy_trace_injectivity(const MortarCoupling& c);

/// Throws if the mortar space is not controlled by the Darcy trace.
void require_mortar_solvable(const MortarCoupling& c, double threshold = 1e-10);

/// Discrete inf-sup constant of the interface form: sqrt of the smallest
/// eigenvalue of C X^-1 C^T against the mortar mass, X being H1-type (Stokes)
/// and H(div) (Darcy) Gram matrices.
double check_infsup(const MortarCoupling& c, const StokesOperator& stokes, const DarcyOperator& darcy);

}  // namespace sdm
