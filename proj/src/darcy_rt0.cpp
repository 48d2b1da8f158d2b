#include "sdmortar/darcy_rt0.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sdmortar/quadrature.hpp"

namespace sdm {

Rt0Space::Rt0Space(TensorGrid grid) : grid_(std::move(grid)) {
  const TensorGrid& g = grid_;
  const int nx = g.nx();
  const int ny = g.ny();
  auto cell = [&](int i, int j) { return g.active(i, j) ? g.cell_id(i, j) : -1; };
  lookup_[0].assign(static_cast<std::size_t>((nx + 1) * ny), -1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      Rt0Edge e{Axis::x, i, j, {g.x_coords()[i], g.yc(j)}, g.hy(j), cell(i - 1, j), cell(i, j)};
      if (e.cell_lo < 0 && e.cell_hi < 0) continue;
      lookup_[0][j * (nx + 1) + i] = num_edges();
      edges_.push_back(e);
    }
  lookup_[1].assign(static_cast<std::size_t>(nx * (ny + 1)), -1);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) {
      Rt0Edge e{Axis::y, i, j, {g.xc(i), g.y_coords()[j]}, g.hx(i), cell(i, j - 1), cell(i, j)};
      if (e.cell_lo < 0 && e.cell_hi < 0) continue;
      lookup_[1][j * nx + i] = num_edges();
      edges_.push_back(e);
    }
  p_dof_.assign(static_cast<std::size_t>(g.num_cells()), -1);
  for (int c = 0; c < g.num_cells(); ++c)
    if (g.active(c % nx, c / nx)) p_dof_[c] = num_pressure_++;
}

int Rt0Space::edge_index(Axis a, int i, int j) const {
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  if (a == Axis::x) {
    if (i < 0 || i > nx || j < 0 || j >= ny) return -1;
    return lookup_[0][j * (nx + 1) + i];
  }
  if (i < 0 || i >= nx || j < 0 || j > ny) return -1;
  return lookup_[1][j * nx + i];
}

PermeabilityField::PermeabilityField(const TensorGrid& grid, std::vector<std::array<double, 3>> values)
    : values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(grid.num_cells()))
    throw std::invalid_argument("permeability field size does not match the grid");
  for (int c = 0; c < grid.num_cells(); ++c) {
    const int i = c % grid.nx();
    const int j = c / grid.nx();
    if (!grid.active(i, j)) continue;
    const auto& k = values_[c];
    const double det = k[0] * k[2] - k[1] * k[1];
    if (!(k[0] > 0.0) || !(det > 0.0) || !std::isfinite(det)) {
      std::ostringstream os;
      os << "permeability is not symmetric positive definite in cell (" << i << ", " << j << "): K11=" << k[0]
         << " K12=" << k[1] << " K22=" << k[2];
      throw std::invalid_argument(os.str());
    }
  }
}

PermeabilityField PermeabilityField::uniform(const TensorGrid& grid, double k11, double k12, double k22) {
  return PermeabilityField(grid, std::vector<std::array<double, 3>>(grid.num_cells(), {k11, k12, k22}));
}

PermeabilityField PermeabilityField::sample(const TensorGrid& grid,
                                            const std::function<std::array<double, 3>(double, double)>& k) {
  std::vector<std::array<double, 3>> v(static_cast<std::size_t>(grid.num_cells()));
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) v[grid.cell_id(i, j)] = k(grid.xc(i), grid.yc(j));
  return PermeabilityField(grid, std::move(v));
}

PermeabilityField read_permeability_csv(const std::string& path, const TensorGrid& grid,
                                        std::array<double, 3> fallback) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open permeability file " + path);
  std::vector<std::array<double, 3>> v(static_cast<std::size_t>(grid.num_cells()), fallback);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    int i = 0, j = 0;
    std::array<double, 3> k{};
    if (!(ls >> i >> j >> k[0] >> k[1] >> k[2])) {
      if (line_no == 1) continue;  // header
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected i,j,K11,K12,K22");
    }
    if (i < 0 || j < 0 || i >= grid.nx() || j >= grid.ny())
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": cell index out of range");
    v[grid.cell_id(i, j)] = k;
  }
  return PermeabilityField(grid, std::move(v));
}

Rt0Matrices assemble_darcy(std::shared_ptr<const Rt0Space> space, const PermeabilityField& k, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("viscosity must be positive");
  const TensorGrid& g = space->grid();
  if (k.size() != static_cast<std::size_t>(g.num_cells()))
    throw std::invalid_argument("permeability field size does not match the Darcy grid");
  const int ne = space->num_edges();
  TripletBuilder tm(ne, ne);
  TripletBuilder td(space->num_pressure(), ne);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.active(i, j)) continue;
      const int c = g.cell_id(i, j);
      const auto& kk = k.at(c);
      const double det = kk[0] * kk[2] - kk[1] * kk[1];
      const double a = mu * kk[2] / det;   // (K^-1)_11
      const double b = -mu * kk[1] / det;  // (K^-1)_12
      const double cc = mu * kk[0] / det;  // (K^-1)_22
      const double area = g.hx(i) * g.hy(j);
      const int w = space->edge_index(Axis::x, i, j);
      const int e = space->edge_index(Axis::x, i + 1, j);
      const int s = space->edge_index(Axis::y, i, j);
      const int n = space->edge_index(Axis::y, i, j + 1);
      const std::array<int, 2> xs{w, e};
      const std::array<int, 2> ys{s, n};
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
          const double shape = p == q ? area / 3.0 : area / 6.0;
          tm.add(xs[p], xs[q], a * shape);
          tm.add(ys[p], ys[q], cc * shape);
          tm.add(xs[p], ys[q], b * area / 4.0);
          tm.add(ys[q], xs[p], b * area / 4.0);
        }
      const int r = space->p_dof()[c];
      td.add(r, e, g.hy(j));
      td.add(r, w, -g.hy(j));
      td.add(r, n, g.hx(i));
      td.add(r, s, -g.hx(i));
    }
  return {std::move(space), tm.build(), td.build()};
}

DarcyOperator apply_darcy_bcs(const Rt0Matrices& m, const InterfaceSegmentation& iface,
                              const DarcyBoundaryCondition& bc) {
  const Rt0Space& sp = *m.space;
  const TensorGrid& g = sp.grid();
  DarcyOperator op;
  op.space = m.space;
  op.bc = bc;
  const int ne = sp.num_edges();
  op.edge_dof.assign(ne, -1);
  op.edge_fixed.assign(ne, -1);
  op.edge_kind.assign(ne, BoundaryKind::unassigned);
  op.edge_segment.assign(ne, -1);
  bool any_pressure = false;
  for (int k = 0; k < ne; ++k) {
    const Rt0Edge& e = sp.edges()[k];
    BoundaryKind kind = BoundaryKind::unassigned;
    if (e.on_boundary()) {
      BoundaryEdgeRef r;
      r.normal = e.axis;
      r.outward_sign = e.outward_sign();
      r.mid = e.mid;
      r.offset = e.axis == Axis::x ? g.x_coords()[e.i] : g.y_coords()[e.j];
      r.s0 = e.axis == Axis::x ? g.y_coords()[e.j] : g.x_coords()[e.i];
      r.s1 = e.axis == Axis::x ? g.y_coords()[e.j + 1] : g.x_coords()[e.i + 1];
      const int s = iface.locate(r.normal, r.offset, r.s0, r.s1);
      if (s >= 0 && iface.segments[s].stokes_sign == -r.outward_sign) {
        kind = BoundaryKind::interface;
        op.edge_segment[k] = s;
        any_pressure = true;
      } else {
        kind = bc.classify ? bc.classify(r) : BoundaryKind::unassigned;
        std::ostringstream os;
        os << (r.normal == Axis::x ? "x = " : "y = ") << r.offset << ", [" << r.s0 << ", " << r.s1 << "]";
        if (kind == BoundaryKind::unassigned) throw GeometryError("Darcy boundary edge without a boundary condition at " + os.str());
        if (kind == BoundaryKind::interface)
          throw GeometryError("interface condition requested on a Darcy edge off the interface at " + os.str());
        if (kind == BoundaryKind::natural) any_pressure = true;
      }
    }
    op.edge_kind[k] = kind;
    if (kind == BoundaryKind::essential) {
      op.edge_fixed[k] = static_cast<int>(op.fixed_edges.size());
      op.fixed_edges.push_back(k);
    } else {
      op.edge_dof[k] = op.num_flux++;
    }
  }
  op.pressure_floating = !any_pressure;

  const int n = op.num_flux;
  const int nf = static_cast<int>(op.fixed_edges.size());
  TripletBuilder ta(n, n), taf(n, nf), td(sp.num_pressure(), n), tdf(sp.num_pressure(), nf);
  for (int c = 0; c < m.mass.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m.mass, c); it; ++it) {
      const int r = op.edge_dof[it.row()];
      if (r < 0) continue;
      const int col = static_cast<int>(it.col());
      if (op.edge_dof[col] >= 0)
        ta.add(r, op.edge_dof[col], it.value());
      else
        taf.add(r, op.edge_fixed[col], it.value());
    }
  for (int c = 0; c < m.div.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m.div, c); it; ++it) {
      const int col = static_cast<int>(it.col());
      if (op.edge_dof[col] >= 0)
        td.add(static_cast<int>(it.row()), op.edge_dof[col], it.value());
      else
        tdf.add(static_cast<int>(it.row()), op.edge_fixed[col], it.value());
    }
  op.a = ta.build();
  op.a_fixed = taf.build();
  op.div = td.build();
  op.div_fixed = tdf.build();

  // interface trace, ordered along each segment
  std::vector<std::vector<std::pair<double, int>>> per_seg(iface.segments.size());
  for (int k = 0; k < ne; ++k) {
    const int s = op.edge_segment[k];
    if (s < 0) continue;
    const Rt0Edge& e = sp.edges()[k];
    per_seg[s].push_back({e.axis == Axis::x ? e.mid.y : e.mid.x, k});
  }
  int rows = 0;
  for (std::size_t s = 0; s < per_seg.size(); ++s) {
    std::sort(per_seg[s].begin(), per_seg[s].end());
    if (per_seg[s].size() + 1 != iface.segments[s].darcy_breaks.size())
      throw GeometryError("Darcy trace does not match the interface partition");
    rows += static_cast<int>(per_seg[s].size());
  }
  TripletBuilder tt(rows, n);
  int r = 0;
  for (std::size_t s = 0; s < per_seg.size(); ++s)
    for (const auto& [pos, k] : per_seg[s]) {
      tt.add(r++, op.edge_dof[k], -iface.segments[s].stokes_sign);
      op.trace_lengths.push_back(sp.edges()[k].length);
    }
  op.trace_map = tt.build();

  op.cell_areas = Vector::Zero(sp.num_pressure());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const int p = sp.p_dof()[g.cell_id(i, j)];
      if (p >= 0) op.cell_areas[p] = g.hx(i) * g.hy(j);
    }
  return op;
}

DarcyLoads zero_loads(const DarcyOperator& op) {
  return {Vector::Zero(op.num_flux), Vector::Zero(op.num_pressure()),
          Vector::Zero(static_cast<Eigen::Index>(op.fixed_edges.size()))};
}

DarcyLoads assemble_darcy_rhs(const DarcyOperator& op, const ScalarField& source, LoadRule source_rule,
                              LoadRule boundary_rule) {
  const Rt0Space& sp = *op.space;
  const TensorGrid& g = sp.grid();
  DarcyLoads l = zero_loads(op);
  for (int k = 0; k < sp.num_edges(); ++k) {
    const Rt0Edge& e = sp.edges()[k];
    if (op.edge_kind[k] == BoundaryKind::natural) {
      double ip = 0.0;
      if (boundary_rule == LoadRule::midpoint) {
        ip = e.length * op.bc.pressure(e.mid.x, e.mid.y);
      } else if (e.axis == Axis::x) {
        const double x = e.mid.x;
        ip = quad::line2([&](double y) { return op.bc.pressure(x, y); }, e.mid.y - 0.5 * e.length,
                         e.mid.y + 0.5 * e.length);
      } else {
        const double y = e.mid.y;
        ip = quad::line2([&](double x) { return op.bc.pressure(x, y); }, e.mid.x - 0.5 * e.length,
                         e.mid.x + 0.5 * e.length);
      }
      l.flux[op.edge_dof[k]] -= e.outward_sign() * ip;
    } else if (op.edge_kind[k] == BoundaryKind::essential) {
      l.fixed[op.edge_fixed[k]] = e.outward_sign() * op.bc.normal_velocity(e.mid.x, e.mid.y);
    }
  }
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const int p = sp.p_dof()[g.cell_id(i, j)];
      if (p < 0) continue;
      l.mass[p] = source_rule == LoadRule::midpoint
                      ? g.hx(i) * g.hy(j) * source(g.xc(i), g.yc(j))
                      : quad::box2(source, g.x_coords()[i], g.x_coords()[i + 1], g.y_coords()[j], g.y_coords()[j + 1]);
    }
  return l;
}

std::vector<double> expand_rt0(const DarcyOperator& op, const Vector& u, const Vector& fixed) {
  std::vector<double> out(op.edge_dof.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = op.edge_dof[k] >= 0 ? u[op.edge_dof[k]] : fixed[op.edge_fixed[k]];
  return out;
}

}  // namespace sdm
