#include "sdmortar/stokes_mac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sdmortar/quadrature.hpp"

namespace sdm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

BoundaryEdgeRef edge_ref(const TensorGrid& g, const StaggeredFace& f) {
  BoundaryEdgeRef e;
  e.normal = f.axis;
  e.outward_sign = f.outward_sign();
  e.mid = f.mid;
  if (f.axis == Axis::x) {
    e.offset = g.x_coords()[f.i];
    e.s0 = g.y_coords()[f.j];
    e.s1 = g.y_coords()[f.j + 1];
  } else {
    e.offset = g.y_coords()[f.j];
    e.s0 = g.x_coords()[f.i];
    e.s1 = g.x_coords()[f.i + 1];
  }
  return e;
}

std::string where(const BoundaryEdgeRef& e) {
  std::ostringstream os;
  os << (e.normal == Axis::x ? "x = " : "y = ") << e.offset << ", [" << e.s0 << ", " << e.s1 << "]";
  return os.str();
}

// Boundary edges incident to vertex (i, j) that carry the given tangential
// component: horizontal edges (u2 faces) for u1, vertical edges (u1 faces) for u2.
std::array<int, 2> tangential_edges(const StaggeredGeometry& geom, int comp, int i, int j) {
  if (comp == 0) return {geom.face_index(Axis::y, i - 1, j), geom.face_index(Axis::y, i, j)};
  return {geom.face_index(Axis::x, i, j - 1), geom.face_index(Axis::x, i, j)};
}

}  // namespace

MacDofMap build_mac_dofs(const StaggeredGeometry& geom, const InterfaceSegmentation& iface,
                         const MacBoundaryCondition& bc) {
  const TensorGrid& g = geom.primal();
  MacDofMap d;
  int next = 0;
  for (int a = 0; a < 2; ++a) {
    const auto& faces = geom.faces(static_cast<Axis>(a));
    const auto n = faces.size();
    d.face_dof[a].assign(n, -1);
    d.face_fixed[a].assign(n, -1);
    d.face_kind[a].assign(n, BoundaryKind::unassigned);
    d.face_segment[a].assign(n, -1);
    for (std::size_t k = 0; k < n; ++k) {
      const StaggeredFace& f = faces[k];
      BoundaryKind kind = BoundaryKind::unassigned;
      if (f.on_boundary()) {
        const BoundaryEdgeRef e = edge_ref(g, f);
        const int s = iface.locate(e.normal, e.offset, e.s0, e.s1);
        if (s >= 0 && iface.segments[s].stokes_sign == e.outward_sign) {
          kind = BoundaryKind::interface;
          d.face_segment[a][k] = s;
        } else {
          kind = bc.classify ? bc.classify(e) : BoundaryKind::unassigned;
          if (kind == BoundaryKind::unassigned)
            throw GeometryError("Stokes boundary edge without a boundary condition at " + where(e));
          if (kind == BoundaryKind::interface)
            throw GeometryError("interface condition requested on a Stokes edge off the interface at " + where(e));
        }
      }
      d.face_kind[a][k] = kind;
      if (kind == BoundaryKind::essential) {
        d.face_fixed[a][k] = d.num_fixed();
        d.fixed.push_back({a, f.mid});
      } else {
        d.face_dof[a][k] = next++;
      }
    }
  }

  const auto& verts = geom.vertices();
  for (int c = 0; c < 2; ++c) {
    d.tangential_kind[c].assign(verts.size(), TangentialKind::none);
    d.tangential_dof[c].assign(verts.size(), -1);
    d.tangential_fixed[c].assign(verts.size(), -1);
  }
  for (std::size_t v = 0; v < verts.size(); ++v) {
    const StaggeredVertex& vx = verts[v];
    const bool need[2] = {vx.needs_tangential_u1(), vx.needs_tangential_u2()};
    if (!need[0] && !need[1]) continue;
    bool essential = false;
    for (int c = 0; c < 2; ++c)
      for (int e : tangential_edges(geom, c, vx.i, vx.j)) {
        const int axis = c == 0 ? 1 : 0;
        if (e >= 0 && d.face_kind[axis][e] == BoundaryKind::essential) essential = true;
      }
    for (int c = 0; c < 2; ++c) {
      if (!need[c]) continue;
      TangentialKind kind = TangentialKind::natural;
      if (essential) {
        kind = TangentialKind::dirichlet;
      } else {
        const int axis = c == 0 ? 1 : 0;
        for (int e : tangential_edges(geom, c, vx.i, vx.j))
          if (e >= 0 && d.face_kind[axis][e] == BoundaryKind::interface) kind = TangentialKind::slip;
      }
      d.tangential_kind[c][v] = kind;
      if (kind == TangentialKind::dirichlet) {
        d.tangential_fixed[c][v] = d.num_fixed();
        d.fixed.push_back({c, vx.pos});
      } else {
        d.tangential_dof[c][v] = next++;
      }
    }
  }
  d.num_velocity = next;

  d.p_dof.assign(static_cast<std::size_t>(g.num_cells()), -1);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (g.active(i, j)) d.p_dof[g.cell_id(i, j)] = d.num_pressure++;
  return d;
}

SparseMatrix assemble_divergence(const StaggeredGeometry& geom, const MacDofMap& dofs) {
  const TensorGrid& g = geom.primal();
  const int n1 = static_cast<int>(geom.faces(Axis::x).size());
  const int n2 = static_cast<int>(geom.faces(Axis::y).size());
  TripletBuilder t(dofs.num_pressure, n1 + n2);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const int r = dofs.p_dof[g.cell_id(i, j)];
      if (r < 0) continue;
      t.add(r, geom.face_index(Axis::x, i + 1, j), g.hy(j));
      t.add(r, geom.face_index(Axis::x, i, j), -g.hy(j));
      t.add(r, n1 + geom.face_index(Axis::y, i, j + 1), g.hx(i));
      t.add(r, n1 + geom.face_index(Axis::y, i, j), -g.hx(i));
    }
  return t.build();
}

SparseMatrix interface_trace(const StaggeredGeometry& geom, const InterfaceSegmentation& iface,
                             const MacDofMap& dofs) {
  std::vector<std::vector<std::pair<double, std::pair<int, int>>>> per_seg(iface.segments.size());
  for (int a = 0; a < 2; ++a) {
    const auto& faces = geom.faces(static_cast<Axis>(a));
    for (std::size_t k = 0; k < faces.size(); ++k) {
      const int s = dofs.face_segment[a][k];
      if (s < 0) continue;
      const double s0 = a == 0 ? faces[k].mid.y : faces[k].mid.x;
      per_seg[s].push_back({s0, {a, static_cast<int>(k)}});
    }
  }
  int rows = 0;
  for (std::size_t s = 0; s < per_seg.size(); ++s) {
    std::sort(per_seg[s].begin(), per_seg[s].end());
    if (per_seg[s].size() + 1 != iface.segments[s].stokes_breaks.size())
      throw GeometryError("Stokes trace does not match the interface partition");
    rows += static_cast<int>(per_seg[s].size());
  }
  TripletBuilder t(rows, dofs.num_velocity);
  int r = 0;
  for (std::size_t s = 0; s < per_seg.size(); ++s)
    for (const auto& [pos, face] : per_seg[s]) {
      t.add(r++, dofs.face_dof[face.first][face.second], iface.segments[s].stokes_sign);
    }
  return t.build();
}

StokesOperator assemble_momentum(std::shared_ptr<const StaggeredGeometry> geom_ptr, const InterfaceSegmentation& iface,
                                 double mu, std::vector<double> alpha_bjs, const MacBoundaryCondition& bc) {
  if (!(mu > 0.0)) throw std::invalid_argument("viscosity must be positive");
  if (alpha_bjs.size() != iface.segments.size())
    throw std::invalid_argument("slip coefficients must be given for interface segments only, one per segment");
  for (double a : alpha_bjs)
    if (!(a >= 0.0)) throw std::invalid_argument("slip coefficient must be non-negative");

  const StaggeredGeometry& geom = *geom_ptr;
  const TensorGrid& g = geom.primal();
  StokesOperator op;
  op.geom = geom_ptr;
  op.bc = bc;
  op.mu = mu;
  op.alpha_bjs = std::move(alpha_bjs);
  op.dofs = build_mac_dofs(geom, iface, bc);
  const MacDofMap& d = op.dofs;
  const int n = d.num_velocity;

  // extended slot: unknowns first, fixed values after
  auto face_slot = [&](int a, int k) { return d.face_dof[a][k] >= 0 ? d.face_dof[a][k] : n + d.face_fixed[a][k]; };
  auto tan_slot = [&](int c, int v) {
    return d.tangential_dof[c][v] >= 0 ? d.tangential_dof[c][v] : n + d.tangential_fixed[c][v];
  };

  TripletBuilder ta(n, n);
  TripletBuilder tf(n, d.num_fixed());
  auto add = [&](int r, int c, double v) {
    if (r >= n) return;
    if (c < n)
      ta.add(r, c, v);
    else
      tf.add(r, c - n, v);
  };
  auto add_outer = [&](const std::array<std::pair<int, double>, 4>& lin, int len, double w) {
    for (int p = 0; p < len; ++p)
      for (int q = 0; q < len; ++q) add(lin[p].first, lin[q].first, w * lin[p].second * lin[q].second);
  };

  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.active(i, j)) continue;
      const double area = g.hx(i) * g.hy(j);
      std::array<std::pair<int, double>, 4> dx{{{face_slot(0, geom.face_index(Axis::x, i + 1, j)), 1.0 / g.hx(i)},
                                                {face_slot(0, geom.face_index(Axis::x, i, j)), -1.0 / g.hx(i)}}};
      add_outer(dx, 2, 2.0 * mu * area);
      std::array<std::pair<int, double>, 4> dy{{{face_slot(1, geom.face_index(Axis::y, i, j + 1)), 1.0 / g.hy(j)},
                                                {face_slot(1, geom.face_index(Axis::y, i, j)), -1.0 / g.hy(j)}}};
      add_outer(dy, 2, 2.0 * mu * area);
    }

  const auto& verts = geom.vertices();
  for (std::size_t v = 0; v < verts.size(); ++v) {
    const StaggeredVertex& vx = verts[v];
    const int vi = static_cast<int>(v);
    const int above = vx.u1_above >= 0 ? face_slot(0, vx.u1_above) : tan_slot(0, vi);
    const int below = vx.u1_below >= 0 ? face_slot(0, vx.u1_below) : tan_slot(0, vi);
    const int right = vx.u2_right >= 0 ? face_slot(1, vx.u2_right) : tan_slot(1, vi);
    const int left = vx.u2_left >= 0 ? face_slot(1, vx.u2_left) : tan_slot(1, vi);
    std::array<std::pair<int, double>, 4> shear{{{above, 1.0 / vx.dist_y},
                                                 {below, -1.0 / vx.dist_y},
                                                 {right, 1.0 / vx.dist_x},
                                                 {left, -1.0 / vx.dist_x}}};
    add_outer(shear, 4, mu * vx.weight);

    // slip friction, trapezoidal rule on the incident interface edges
    for (int c = 0; c < 2; ++c) {
      if (d.tangential_kind[c][v] != TangentialKind::slip) continue;
      const int axis = c == 0 ? 1 : 0;
      double m = 0.0;
      for (int e : tangential_edges(geom, c, vx.i, vx.j))
        if (e >= 0 && d.face_kind[axis][e] == BoundaryKind::interface)
          m += 0.5 * geom.faces(static_cast<Axis>(axis))[e].length * op.alpha_bjs[d.face_segment[axis][e]];
      add(d.tangential_dof[c][v], d.tangential_dof[c][v], m);
    }
  }
  op.a = ta.build();
  op.a_fixed = tf.build();

  const SparseMatrix full_div = assemble_divergence(geom, d);
  const int n1 = static_cast<int>(geom.faces(Axis::x).size());
  TripletBuilder tdu(d.num_pressure, n);
  TripletBuilder tdf(d.num_pressure, d.num_fixed());
  for (int k = 0; k < full_div.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(full_div, k); it; ++it) {
      const int col = static_cast<int>(it.col());
      const int a = col < n1 ? 0 : 1;
      const int face = col < n1 ? col : col - n1;
      if (d.face_dof[a][face] >= 0)
        tdu.add(static_cast<int>(it.row()), d.face_dof[a][face], it.value());
      else
        tdf.add(static_cast<int>(it.row()), d.face_fixed[a][face], it.value());
    }
  op.div = tdu.build();
  op.div_fixed = tdf.build();

  op.trace_map = interface_trace(geom, iface, d);
  for (std::size_t s = 0; s < iface.segments.size(); ++s) {
    const auto& b = iface.segments[s].stokes_breaks;
    for (std::size_t t = 0; t + 1 < b.size(); ++t) op.trace_lengths.push_back(b[t + 1] - b[t]);
  }
  return op;
}

StokesLoads zero_loads(const StokesOperator& op) {
  StokesLoads l;
  l.momentum = Vector::Zero(op.dofs.num_velocity);
  l.mass = Vector::Zero(op.dofs.num_pressure);
  l.fixed = Vector::Zero(op.dofs.num_fixed());
  return l;
}

StokesLoads assemble_rhs(const StokesOperator& op, const VectorField& f, const ScalarField& g_src, LoadRule rule) {
  const StaggeredGeometry& geom = *op.geom;
  const TensorGrid& g = geom.primal();
  const MacDofMap& d = op.dofs;
  StokesLoads l = zero_loads(op);

  for (int a = 0; a < 2; ++a) {
    const auto& faces = geom.faces(static_cast<Axis>(a));
    for (std::size_t k = 0; k < faces.size(); ++k) {
      const int r = d.face_dof[a][k];
      if (r < 0) continue;
      const StaggeredFace& fc = faces[k];
      auto comp = [&](double x, double y) { return f(x, y)[a]; };
      double s = 0.0;
      if (rule == LoadRule::midpoint) {
        s = fc.cv_area * comp(fc.mid.x, fc.mid.y);
      } else if (a == 0) {
        const double x = g.x_coords()[fc.i];
        const double y0 = g.y_coords()[fc.j], y1 = g.y_coords()[fc.j + 1];
        if (fc.cell_lo >= 0) s += quad::box2(comp, g.xc(fc.i - 1), x, y0, y1);
        if (fc.cell_hi >= 0) s += quad::box2(comp, x, g.xc(fc.i), y0, y1);
      } else {
        const double y = g.y_coords()[fc.j];
        const double x0 = g.x_coords()[fc.i], x1 = g.x_coords()[fc.i + 1];
        if (fc.cell_lo >= 0) s += quad::box2(comp, x0, x1, g.yc(fc.j - 1), y);
        if (fc.cell_hi >= 0) s += quad::box2(comp, x0, x1, y, g.yc(fc.j));
      }
      if (d.face_kind[a][k] == BoundaryKind::natural) s += fc.length * op.bc.traction(fc.mid.x, fc.mid.y)[a];
      l.momentum[r] += s;
    }
  }

  const auto& verts = geom.vertices();
  for (std::size_t v = 0; v < verts.size(); ++v)
    for (int c = 0; c < 2; ++c) {
      if (d.tangential_kind[c][v] != TangentialKind::natural) continue;
      const int axis = c == 0 ? 1 : 0;
      double len = 0.0;
      for (int e : tangential_edges(geom, c, verts[v].i, verts[v].j))
        if (e >= 0 && d.face_kind[axis][e] == BoundaryKind::natural)
          len += 0.5 * geom.faces(static_cast<Axis>(axis))[e].length;
      l.momentum[d.tangential_dof[c][v]] += len * op.bc.traction(verts[v].pos.x, verts[v].pos.y)[c];
    }

  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const int r = d.p_dof[g.cell_id(i, j)];
      if (r < 0) continue;
      l.mass[r] = rule == LoadRule::midpoint
                      ? g.hx(i) * g.hy(j) * g_src(g.xc(i), g.yc(j))
                      : quad::box2(g_src, g.x_coords()[i], g.x_coords()[i + 1], g.y_coords()[j], g.y_coords()[j + 1]);
    }

  for (int k = 0; k < d.num_fixed(); ++k) {
    const auto& e = d.fixed[k];
    l.fixed[k] = op.bc.velocity(e.pos.x, e.pos.y)[e.component];
  }
  return l;
}

MacField expand_mac(const StokesOperator& op, const Vector& u, const Vector& fixed, const Vector& p) {
  const MacDofMap& d = op.dofs;
  const StaggeredGeometry& geom = *op.geom;
  MacField out;
  for (int a = 0; a < 2; ++a) {
    const auto n = geom.faces(static_cast<Axis>(a)).size();
    out.face[a].resize(n);
    for (std::size_t k = 0; k < n; ++k)
      out.face[a][k] = d.face_dof[a][k] >= 0 ? u[d.face_dof[a][k]] : fixed[d.face_fixed[a][k]];
    const auto nv = geom.vertices().size();
    out.tangential[a].assign(nv, kNaN);
    for (std::size_t v = 0; v < nv; ++v) {
      if (d.tangential_dof[a][v] >= 0)
        out.tangential[a][v] = u[d.tangential_dof[a][v]];
      else if (d.tangential_fixed[a][v] >= 0)
        out.tangential[a][v] = fixed[d.tangential_fixed[a][v]];
    }
  }
  out.pressure.assign(d.p_dof.size(), kNaN);
  for (std::size_t c = 0; c < d.p_dof.size(); ++c)
    if (d.p_dof[c] >= 0) out.pressure[c] = p[d.p_dof[c]];
  return out;
}

Vec2 vertex_shear_parts(const StaggeredGeometry& geom, const MacField& field, int v) {
  const StaggeredVertex& vx = geom.vertices()[v];
  const double above = vx.u1_above >= 0 ? field.face[0][vx.u1_above] : field.tangential[0][v];
  const double below = vx.u1_below >= 0 ? field.face[0][vx.u1_below] : field.tangential[0][v];
  const double right = vx.u2_right >= 0 ? field.face[1][vx.u2_right] : field.tangential[1][v];
  const double left = vx.u2_left >= 0 ? field.face[1][vx.u2_left] : field.tangential[1][v];
  return {(above - below) / vx.dist_y, (right - left) / vx.dist_x};
}

Vec2 cell_stretch_parts(const StaggeredGeometry& geom, const MacField& field, int i, int j) {
  const TensorGrid& g = geom.primal();
  const double e = field.face[0][geom.face_index(Axis::x, i + 1, j)];
  const double w = field.face[0][geom.face_index(Axis::x, i, j)];
  const double nn = field.face[1][geom.face_index(Axis::y, i, j + 1)];
  const double s = field.face[1][geom.face_index(Axis::y, i, j)];
  return {(e - w) / g.hx(i), (nn - s) / g.hy(j)};
}

}  // namespace sdm
