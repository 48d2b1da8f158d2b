#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdm {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Coordinate direction. Velocity components, edge normals and interface
/// normals are all tagged with one of these.
enum class Axis { x = 0, y = 1 };

inline int axis_index(Axis a) { return static_cast<int>(a); }
inline Axis other(Axis a) { return a == Axis::x ? Axis::y : Axis::x; }

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned rectilinear grid with a per-cell activity mask.
///
/// Cells are addressed by (i, j) with i in [0, nx) along x and j in [0, ny)
/// along y; the linear cell id is j * nx + i. Inactive cells are not part of
/// the discretized domain; they let a tensor grid describe domains such as a
/// channel with an obstacle cut out.
class TensorGrid {
 public:
  TensorGrid() = default;
  TensorGrid(std::vector<double> x, std::vector<double> y);
  TensorGrid(std::vector<double> x, std::vector<double> y, std::vector<char> active);

  int nx() const { return static_cast<int>(x_.size()) - 1; }
  int ny() const { return static_cast<int>(y_.size()) - 1; }
  int num_cells() const { return nx() * ny(); }
  const std::vector<double>& x_coords() const { return x_; }
  const std::vector<double>& y_coords() const { return y_; }

  double hx(int i) const { return x_[i + 1] - x_[i]; }
  double hy(int j) const { return y_[j + 1] - y_[j]; }
  double xc(int i) const { return 0.5 * (x_[i] + x_[i + 1]); }
  double yc(int j) const { return 0.5 * (y_[j] + y_[j + 1]); }
  double coord(Axis a, int k) const { return a == Axis::x ? x_[k] : y_[k]; }
  double width(Axis a, int k) const { return a == Axis::x ? hx(k) : hy(k); }
  int cells_along(Axis a) const { return a == Axis::x ? nx() : ny(); }

  int cell_id(int i, int j) const { return j * nx() + i; }
  /// Active test that tolerates out-of-range indices (they count as inactive).
  bool active(int i, int j) const;
  int num_active() const;
  double active_area() const;

  /// Uniform bisection of every cell; the mask is inherited by the children.
  TensorGrid refined() const;

 private:
  void validate() const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<char> active_;
};

std::vector<double> linspace(double a, double b, int n_intervals);

/// Breakpoints on [a, b] whose interval lengths grow geometrically by `ratio`
/// from `a` towards `b` (ratio < 1 clusters the points near b).
std::vector<double> graded_breaks(double a, double b, int n_intervals, double ratio);

TensorGrid uniform_grid(double x0, double x1, int nx, double y0, double y1, int ny);

/// A velocity degree of freedom location of the MAC scheme: the midpoint of a
/// primal edge. Faces with axis x carry u_1 (they sit on vertical edges),
/// faces with axis y carry u_2 (horizontal edges).
struct StaggeredFace {
  Axis axis = Axis::x;
  int i = 0;  ///< x-axis face: x = x[i], y in [y[j], y[j+1]]
  int j = 0;  ///< y-axis face: y = y[j], x in [x[i], x[i+1]]
  Point mid;
  double length = 0.0;
  int cell_lo = -1;  ///< active cell on the negative side, or -1
  int cell_hi = -1;  ///< active cell on the positive side, or -1
  double cv_area = 0.0;  ///< control volume G_i clipped to the active region

  bool on_boundary() const { return cell_lo < 0 || cell_hi < 0; }
  /// Outward unit normal sign (along `axis`) for a boundary face.
  int outward_sign() const { return cell_hi < 0 ? +1 : -1; }
};

/// Primal vertex seen as a node of the shear stencil. The quadrants are the
/// four cells touching the vertex in the order SW, SE, NW, NE.
struct StaggeredVertex {
  int i = 0;
  int j = 0;
  Point pos;
  std::array<bool, 4> quadrant{};
  double weight = 0.0;  ///< dual cell area inside the active region
  int u1_below = -1;    ///< index into u1 faces, or -1 (tangential value used)
  int u1_above = -1;
  int u2_left = -1;
  int u2_right = -1;
  double dist_y = 0.0;  ///< spacing used by d u1/dy at this vertex
  double dist_x = 0.0;  ///< spacing used by d u2/dx at this vertex

  bool needs_tangential_u1() const { return u1_below < 0 || u1_above < 0; }
  bool needs_tangential_u2() const { return u2_left < 0 || u2_right < 0; }
};

/// Primal Stokes grid plus the two staggered velocity grids of the MAC scheme.
class StaggeredGeometry {
 public:
  explicit StaggeredGeometry(TensorGrid primal);

  const TensorGrid& primal() const { return primal_; }
  const std::vector<StaggeredFace>& faces(Axis a) const { return a == Axis::x ? u1_faces_ : u2_faces_; }
  const std::vector<StaggeredVertex>& vertices() const { return vertices_; }

  /// Face index for edge (i, j) of the given orientation, or -1.
  int face_index(Axis a, int i, int j) const;
  /// Vertex index for primal node (i, j), or -1 if it touches no active cell.
  int vertex_index(int i, int j) const;

  /// Sum of control-volume areas of one velocity component.
  double control_volume_total(Axis a) const;

 private:
  TensorGrid primal_;
  std::vector<StaggeredFace> u1_faces_;
  std::vector<StaggeredFace> u2_faces_;
  std::vector<StaggeredVertex> vertices_;
  std::vector<int> u1_lookup_;
  std::vector<int> u2_lookup_;
  std::vector<int> vertex_lookup_;
};

StaggeredGeometry build_staggered(const TensorGrid& primal);

/// One straight piece of the Stokes-Darcy interface. Horizontal pieces
/// (normal along y) form Gamma^1, vertical ones Gamma^2.
struct InterfaceSegment {
  Axis normal_axis = Axis::y;
  double offset = 0.0;  ///< the fixed coordinate (y for horizontal pieces)
  double begin = 0.0;   ///< extent along the tangential coordinate
  double end = 0.0;
  int stokes_sign = -1;  ///< n_S = stokes_sign * e_normal; n_D = -n_S
  std::vector<double> stokes_breaks;
  std::vector<double> darcy_breaks;
  std::vector<double> mortar_breaks;

  bool horizontal() const { return normal_axis == Axis::y; }
  Axis tangent_axis() const { return other(normal_axis); }
  double length() const { return end - begin; }
  Point at(double s) const;
  bool contains(Axis normal, double off, double s0, double s1) const;
};

struct MortarSpec {
  int degree = 0;  ///< 0: piecewise constant, 1: continuous piecewise linear
  /// Either one total count distributed over the segments by length, or one
  /// count per segment.
  std::vector<int> elements{1};
};

struct InterfaceSegmentation {
  std::vector<InterfaceSegment> segments;

  double total_length() const;
  /// Segment containing the edge [s0, s1] on the given line, or -1.
  int locate(Axis normal, double offset, double s0, double s1) const;
};

InterfaceSegmentation build_interface(const TensorGrid& stokes, const TensorGrid& darcy,
                                      const MortarSpec& mortar);

/// Sorted union of breakpoint sets; points closer than tol * span collapse.
std::vector<double> merge_breakpoints(const std::vector<std::vector<double>>& sets, double rel_tol = 1e-13);

}  // namespace sdm
