#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "sdmortar/fields.hpp"
#include "sdmortar/geometry.hpp"
#include "sdmortar/linear_algebra.hpp"
#include "sdmortar/stokes_mac.hpp"

namespace sdm {

struct Rt0Edge {
  Axis axis = Axis::x;  ///< direction of the flux unknown (normal of the edge)
  int i = 0;
  int j = 0;
  Point mid;
  double length = 0.0;
  int cell_lo = -1;
  int cell_hi = -1;

  bool on_boundary() const { return cell_lo < 0 || cell_hi < 0; }
  int outward_sign() const { return cell_hi < 0 ? +1 : -1; }
};

/// Lowest order Raviart-Thomas space on a rectangular grid: one normal
/// velocity value per edge, oriented along +x or +y, and one pressure per cell.
class Rt0Space {
 public:
  explicit Rt0Space(TensorGrid grid);

  const TensorGrid& grid() const { return grid_; }
  const std::vector<Rt0Edge>& edges() const { return edges_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int edge_index(Axis a, int i, int j) const;
  int num_pressure() const { return num_pressure_; }
  const std::vector<int>& p_dof() const { return p_dof_; }

 private:
  TensorGrid grid_;
  std::vector<Rt0Edge> edges_;
  std::vector<int> lookup_[2];
  std::vector<int> p_dof_;
  int num_pressure_ = 0;
};

/// Cellwise symmetric tensor stored as (K11, K12, K22).
class PermeabilityField {
 public:
  PermeabilityField() = default;
  PermeabilityField(const TensorGrid& grid, std::vector<std::array<double, 3>> values);

  static PermeabilityField uniform(const TensorGrid& grid, double k11, double k12, double k22);
  /// Samples a tensor function at cell centers.
  static PermeabilityField sample(const TensorGrid& grid,
                                  const std::function<std::array<double, 3>(double, double)>& k);

  const std::array<double, 3>& at(int cell) const { return values_[cell]; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<std::array<double, 3>> values_;
};

/// Reads "i,j,K11,K12,K22" lines (an optional header line is skipped). Cells
/// not listed keep `fallback`.
PermeabilityField read_permeability_csv(const std::string& path, const TensorGrid& grid,
                                        std::array<double, 3> fallback);

/// Unconstrained RT0 matrices over all edges.
struct Rt0Matrices {
  std::shared_ptr<const Rt0Space> space;
  SparseMatrix mass;  ///< (mu K^-1 u, v)
  SparseMatrix div;   ///< cell flux sums, rows in pressure order
};

Rt0Matrices assemble_darcy(std::shared_ptr<const Rt0Space> space, const PermeabilityField& k, double mu);

/// Darcy boundary conditions: essential edges prescribe the outward normal
/// velocity (zero = no flow), natural edges prescribe the pressure.
struct DarcyBoundaryCondition {
  BoundaryClassifier classify;
  ScalarField pressure = constant_scalar(0.0);
  ScalarField normal_velocity = constant_scalar(0.0);
};

struct DarcyOperator {
  std::shared_ptr<const Rt0Space> space;
  DarcyBoundaryCondition bc;
  std::vector<int> edge_dof;
  std::vector<int> edge_fixed;
  std::vector<BoundaryKind> edge_kind;
  std::vector<int> edge_segment;
  std::vector<int> fixed_edges;
  int num_flux = 0;
  /// No pressure is prescribed anywhere: pressures are defined up to a constant.
  bool pressure_floating = false;

  SparseMatrix a;
  SparseMatrix a_fixed;
  SparseMatrix div;
  SparseMatrix div_fixed;
  SparseMatrix trace_map;  ///< Darcy trace intervals x flux unknowns, value u.n_D
  std::vector<double> trace_lengths;
  Vector cell_areas;  ///< pressure order

  int num_pressure() const { return space->num_pressure(); }
};

DarcyOperator apply_darcy_bcs(const Rt0Matrices& m, const InterfaceSegmentation& iface,
                              const DarcyBoundaryCondition& bc);

struct DarcyLoads {
  Vector flux;   ///< pressure boundary terms per flux unknown
  Vector mass;   ///< integral of the source over each cell
  Vector fixed;  ///< prescribed edge values (along +x / +y)
};

/// `boundary_rule` evaluates the pressure boundary integrals, `source_rule` the cell source integrals.
DarcyLoads assemble_darcy_rhs(const DarcyOperator& op, const ScalarField& source, LoadRule source_rule = LoadRule::gauss,
                              LoadRule boundary_rule = LoadRule::gauss);
DarcyLoads zero_loads(const DarcyOperator& op);

/// All edge values (unknown and fixed) in edge order.
std::vector<double> expand_rt0(const DarcyOperator& op, const Vector& u, const Vector& fixed);

}  // namespace sdm
