#pragma once

#include <memory>
#include <vector>

#include "sdmortar/fields.hpp"
#include "sdmortar/geometry.hpp"
#include "sdmortar/linear_algebra.hpp"

namespace sdm {

enum class BoundaryKind { unassigned, essential, natural, interface };

/// A boundary edge of a subdomain grid as seen by boundary-condition rules.
struct BoundaryEdgeRef {
  Axis normal = Axis::x;
  int outward_sign = 1;
  double offset = 0.0;  ///< fixed coordinate of the edge line
  double s0 = 0.0;      ///< tangential extent
  double s1 = 0.0;
  Point mid;
};

using BoundaryClassifier = std::function<BoundaryKind(const BoundaryEdgeRef&)>;

/// Stokes boundary conditions. Edges on the Stokes-Darcy interface are found
/// from the interface segmentation; `classify` is asked about the others and
/// must answer essential or natural.
struct MacBoundaryCondition {
  BoundaryClassifier classify;
  VectorField velocity = constant_vector(0.0, 0.0);  ///< essential data
  VectorField traction = constant_vector(0.0, 0.0);  ///< sigma n on natural edges
};

enum class TangentialKind { none, dirichlet, slip, natural };

/// Index spaces of the MAC unknowns.
///
/// Velocity unknowns are the non-essential normal face values (u1 faces
/// first, then u2 faces) followed by the tangential vertex values that the
/// shear stencil needs next to slip and traction boundaries. Fixed values
/// (essential faces and Dirichlet tangential vertices) live in a separate
/// vector and enter the right-hand side.
struct MacDofMap {
  struct FixedEntry {
    int component = 0;  ///< 0: u1, 1: u2
    Point pos;
  };

  std::vector<int> face_dof[2];   ///< per face: unknown index or -1
  std::vector<int> face_fixed[2];  ///< per face: fixed index or -1
  std::vector<BoundaryKind> face_kind[2];  ///< unassigned for interior faces
  std::vector<int> face_segment[2];  ///< interface segment of a face, or -1
  std::vector<TangentialKind> tangential_kind[2];  ///< per vertex, per component
  std::vector<int> tangential_dof[2];
  std::vector<int> tangential_fixed[2];
  std::vector<int> p_dof;  ///< per primal cell, -1 if inactive
  std::vector<FixedEntry> fixed;
  int num_velocity = 0;
  int num_pressure = 0;

  int num_fixed() const { return static_cast<int>(fixed.size()); }
};

MacDofMap build_mac_dofs(const StaggeredGeometry& geom, const InterfaceSegmentation& iface,
                         const MacBoundaryCondition& bc);

/// Per-face signed flux sum of every primal cell: rows are active cells in
/// pressure order, columns are all faces (u1 faces first, then u2 faces).
/// On a uniform grid a row reads h (u1^E - u1^W + u2^N - u2^S).
SparseMatrix assemble_divergence(const StaggeredGeometry& geom, const MacDofMap& dofs);

/// Interface normal trace u.n_S as a piecewise constant on the Stokes trace
/// intervals, ordered segment by segment.
SparseMatrix interface_trace(const StaggeredGeometry& geom, const InterfaceSegmentation& iface,
                             const MacDofMap& dofs);

struct StokesOperator {
  std::shared_ptr<const StaggeredGeometry> geom;
  MacDofMap dofs;
  MacBoundaryCondition bc;
  double mu = 1.0;
  std::vector<double> alpha_bjs;  ///< one per interface segment

  SparseMatrix a;              ///< velocity-velocity, unknowns only
  SparseMatrix a_fixed;        ///< velocity rows, fixed columns
  SparseMatrix div;            ///< cell flux sums, unknown columns
  SparseMatrix div_fixed;      ///< cell flux sums, fixed columns
  SparseMatrix trace_map;      ///< interface trace rows x velocity unknowns
  std::vector<double> trace_lengths;
};

/// Assembles the viscous form with slip terms, the divergence and the interface trace.
StokesOperator assemble_momentum(std::shared_ptr<const StaggeredGeometry> geom, const InterfaceSegmentation& iface,
                                 double mu, std::vector<double> alpha_bjs, const MacBoundaryCondition& bc);

struct StokesLoads {
  Vector momentum;  ///< body force integrals plus traction loads, per velocity unknown
  Vector mass;      ///< integral of the mass source over each cell
  Vector fixed;     ///< essential values
};

StokesLoads assemble_rhs(const StokesOperator& op, const VectorField& f, const ScalarField& g,
                         LoadRule rule = LoadRule::gauss);
/// Loads with zero data everywhere.
StokesLoads zero_loads(const StokesOperator& op);

/// Every MAC value, including fixed ones and the tangential vertex values.
struct MacField {
  std::vector<double> face[2];
  std::vector<double> tangential[2];  ///< per vertex; NaN where not used
  std::vector<double> pressure;       ///< per primal cell; NaN where inactive
};

MacField expand_mac(const StokesOperator& op, const Vector& u, const Vector& fixed, const Vector& p);

/// d u1/dy and d u2/dx at a vertex from the shear stencil.
Vec2 vertex_shear_parts(const StaggeredGeometry& geom, const MacField& field, int vertex);
/// d u1/dx and d u2/dy at the center of cell (i, j).
Vec2 cell_stretch_parts(const StaggeredGeometry& geom, const MacField& field, int i, int j);

}  // namespace sdm
