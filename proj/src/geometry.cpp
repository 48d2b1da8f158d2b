#include "sdmortar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <tuple>

namespace sdm {

namespace {

std::string cell_name(int i, int j) {
  std::ostringstream os;
  os << "(" << i << ", " << j << ")";
  return os.str();
}

double span_of(const std::vector<double>& v) { return v.back() - v.front(); }

}  // namespace

TensorGrid::TensorGrid(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() >= 2 && y_.size() >= 2) active_.assign(static_cast<std::size_t>(nx() * ny()), 1);
  validate();
}

TensorGrid::TensorGrid(std::vector<double> x, std::vector<double> y, std::vector<char> active)
    : x_(std::move(x)), y_(std::move(y)), active_(std::move(active)) {
  validate();
}

void TensorGrid::validate() const {
  if (x_.size() < 2 || y_.size() < 2) throw GeometryError("grid needs at least one cell per direction");
  for (const auto* c : {&x_, &y_}) {
    for (std::size_t k = 1; k < c->size(); ++k) {
      if (!((*c)[k] > (*c)[k - 1])) throw GeometryError("grid coordinates must be strictly increasing");
    }
  }
  if (active_.size() != static_cast<std::size_t>(nx() * ny()))
    throw GeometryError("activity mask size does not match the grid");

  // single edge-connected active component
  int first = -1;
  int count = 0;
  for (int c = 0; c < num_cells(); ++c) {
    if (active_[c]) {
      if (first < 0) first = c;
      ++count;
    }
  }
  if (count == 0) throw GeometryError("grid has no active cells");
  std::vector<char> seen(active_.size(), 0);
  std::queue<int> q;
  q.push(first);
  seen[first] = 1;
  int reached = 0;
  while (!q.empty()) {
    const int c = q.front();
    q.pop();
    ++reached;
    const int i = c % nx();
    const int j = c / nx();
    const std::array<std::pair<int, int>, 4> nb{{{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}}};
    for (auto [a, b] : nb) {
      if (active(a, b) && !seen[cell_id(a, b)]) {
        seen[cell_id(a, b)] = 1;
        q.push(cell_id(a, b));
      }
    }
  }
  if (reached != count) throw GeometryError("active region is not edge-connected");
}

bool TensorGrid::active(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx() || j >= ny()) return false;
  return active_[cell_id(i, j)] != 0;
}

int TensorGrid::num_active() const {
  return static_cast<int>(std::count(active_.begin(), active_.end(), 1));
}

double TensorGrid::active_area() const {
  double a = 0.0;
  for (int j = 0; j < ny(); ++j)
    for (int i = 0; i < nx(); ++i)
      if (active(i, j)) a += hx(i) * hy(j);
  return a;
}

TensorGrid TensorGrid::refined() const {
  auto bisect = [](const std::vector<double>& c) {
    std::vector<double> r;
    r.reserve(2 * c.size() - 1);
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
      r.push_back(c[k]);
      r.push_back(0.5 * (c[k] + c[k + 1]));
    }
    r.push_back(c.back());
    return r;
  };
  std::vector<double> x = bisect(x_);
  std::vector<double> y = bisect(y_);
  const int nxr = 2 * nx();
  std::vector<char> mask(static_cast<std::size_t>(nxr * 2 * ny()));
  for (int j = 0; j < 2 * ny(); ++j)
    for (int i = 0; i < nxr; ++i) mask[j * nxr + i] = active_[cell_id(i / 2, j / 2)];
  return TensorGrid(std::move(x), std::move(y), std::move(mask));
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw GeometryError("linspace needs at least one interval");
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) v[k] = a + (b - a) * static_cast<double>(k) / n;
  v.back() = b;
  return v;
}

std::vector<double> graded_breaks(double a, double b, int n, double ratio) {
  if (n < 1) throw GeometryError("graded_breaks needs at least one interval");
  if (!(ratio > 0.0)) throw GeometryError("grading ratio must be positive");
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    w[k] = std::pow(ratio, k);
    total += w[k];
  }
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  v[0] = a;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += w[k];
    v[k + 1] = a + (b - a) * acc / total;
  }
  v.back() = b;
  return v;
}

TensorGrid uniform_grid(double x0, double x1, int nx, double y0, double y1, int ny) {
  return TensorGrid(linspace(x0, x1, nx), linspace(y0, y1, ny));
}

// ---------------------------------------------------------------------------
// Staggered grids

StaggeredGeometry::StaggeredGeometry(TensorGrid primal) : primal_(std::move(primal)) {
  const TensorGrid& g = primal_;
  const int nx = g.nx();
  const int ny = g.ny();

  auto cell_or_none = [&](int i, int j) { return g.active(i, j) ? g.cell_id(i, j) : -1; };

  // u1 faces on vertical edges
  u1_lookup_.assign(static_cast<std::size_t>((nx + 1) * ny), -1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const int lo = cell_or_none(i - 1, j);
      const int hi = cell_or_none(i, j);
      if (lo < 0 && hi < 0) continue;
      StaggeredFace f;
      f.axis = Axis::x;
      f.i = i;
      f.j = j;
      f.mid = {g.x_coords()[i], g.yc(j)};
      f.length = g.hy(j);
      f.cell_lo = lo;
      f.cell_hi = hi;
      f.cv_area = ((lo >= 0 ? 0.5 * g.hx(i - 1) : 0.0) + (hi >= 0 ? 0.5 * g.hx(i) : 0.0)) * g.hy(j);
      u1_lookup_[j * (nx + 1) + i] = static_cast<int>(u1_faces_.size());
      u1_faces_.push_back(f);
    }
  }
  // u2 faces on horizontal edges
  u2_lookup_.assign(static_cast<std::size_t>(nx * (ny + 1)), -1);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int lo = cell_or_none(i, j - 1);
      const int hi = cell_or_none(i, j);
      if (lo < 0 && hi < 0) continue;
      StaggeredFace f;
      f.axis = Axis::y;
      f.i = i;
      f.j = j;
      f.mid = {g.xc(i), g.y_coords()[j]};
      f.length = g.hx(i);
      f.cell_lo = lo;
      f.cell_hi = hi;
      f.cv_area = ((lo >= 0 ? 0.5 * g.hy(j - 1) : 0.0) + (hi >= 0 ? 0.5 * g.hy(j) : 0.0)) * g.hx(i);
      u2_lookup_[j * nx + i] = static_cast<int>(u2_faces_.size());
      u2_faces_.push_back(f);
    }
  }

  // vertices
  vertex_lookup_.assign(static_cast<std::size_t>((nx + 1) * (ny + 1)), -1);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      StaggeredVertex v;
      v.i = i;
      v.j = j;
      v.pos = {g.x_coords()[i], g.y_coords()[j]};
      v.quadrant = {g.active(i - 1, j - 1), g.active(i, j - 1), g.active(i - 1, j), g.active(i, j)};
      const int n_active = static_cast<int>(std::count(v.quadrant.begin(), v.quadrant.end(), true));
      if (n_active == 0) continue;
      if (n_active == 2 && v.quadrant[0] == v.quadrant[3])
        throw GeometryError("degenerate staggered cell at vertex " + cell_name(i, j) +
                            ": active cells touch only diagonally (cells " + cell_name(i - 1, j - 1) + ", " +
                            cell_name(i, j) + ")");
      const std::array<std::pair<int, int>, 4> q{{{i - 1, j - 1}, {i, j - 1}, {i - 1, j}, {i, j}}};
      for (int k = 0; k < 4; ++k)
        if (v.quadrant[k]) v.weight += 0.25 * g.hx(q[k].first) * g.hy(q[k].second);

      v.u1_above = j < ny ? face_index(Axis::x, i, j) : -1;
      v.u1_below = j > 0 ? face_index(Axis::x, i, j - 1) : -1;
      v.u2_right = i < nx ? face_index(Axis::y, i, j) : -1;
      v.u2_left = i > 0 ? face_index(Axis::y, i - 1, j) : -1;
      if (v.u1_above >= 0 && v.u1_below >= 0)
        v.dist_y = g.yc(j) - g.yc(j - 1);
      else
        v.dist_y = v.u1_above >= 0 ? 0.5 * g.hy(j) : 0.5 * g.hy(j - 1);
      if (v.u2_right >= 0 && v.u2_left >= 0)
        v.dist_x = g.xc(i) - g.xc(i - 1);
      else
        v.dist_x = v.u2_right >= 0 ? 0.5 * g.hx(i) : 0.5 * g.hx(i - 1);

      vertex_lookup_[j * (nx + 1) + i] = static_cast<int>(vertices_.size());
      vertices_.push_back(v);
    }
  }
}

int StaggeredGeometry::face_index(Axis a, int i, int j) const {
  const int nx = primal_.nx();
  const int ny = primal_.ny();
  if (a == Axis::x) {
    if (i < 0 || i > nx || j < 0 || j >= ny) return -1;
    return u1_lookup_[j * (nx + 1) + i];
  }
  if (i < 0 || i >= nx || j < 0 || j > ny) return -1;
  return u2_lookup_[j * nx + i];
}

int StaggeredGeometry::vertex_index(int i, int j) const {
  const int nx = primal_.nx();
  if (i < 0 || i > nx || j < 0 || j > primal_.ny()) return -1;
  return vertex_lookup_[j * (nx + 1) + i];
}

double StaggeredGeometry::control_volume_total(Axis a) const {
  double s = 0.0;
  for (const auto& f : faces(a)) s += f.cv_area;
  return s;
}

StaggeredGeometry build_staggered(const TensorGrid& primal) { return StaggeredGeometry(primal); }

// ---------------------------------------------------------------------------
// Interface

Point InterfaceSegment::at(double s) const {
  return horizontal() ? Point{s, offset} : Point{offset, s};
}

bool InterfaceSegment::contains(Axis normal, double off, double s0, double s1) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(length()));
  return normal == normal_axis && std::abs(off - offset) <= tol && s0 >= begin - tol && s1 <= end + tol;
}

double InterfaceSegmentation::total_length() const {
  double l = 0.0;
  for (const auto& s : segments) l += s.length();
  return l;
}

int InterfaceSegmentation::locate(Axis normal, double offset, double s0, double s1) const {
  for (std::size_t k = 0; k < segments.size(); ++k)
    if (segments[k].contains(normal, offset, s0, s1)) return static_cast<int>(k);
  return -1;
}

std::vector<double> merge_breakpoints(const std::vector<std::vector<double>>& sets, double rel_tol) {
  std::vector<double> all;
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  if (all.empty()) return all;
  std::sort(all.begin(), all.end());
  const double tol = rel_tol * std::max(all.back() - all.front(), 1e-300);
  std::vector<double> out;
  for (double v : all)
    if (out.empty() || v - out.back() > tol) out.push_back(v);
  return out;
}

namespace {

struct BoundaryEdge {
  Axis normal;
  double offset;
  double s0, s1;
  int sign;  // outward normal sign
};

std::vector<BoundaryEdge> boundary_edges(const TensorGrid& g) {
  std::vector<BoundaryEdge> out;
  const auto& x = g.x_coords();
  const auto& y = g.y_coords();
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const bool lo = g.active(i, j - 1);
      const bool hi = g.active(i, j);
      if (lo != hi) out.push_back({Axis::y, y[j], x[i], x[i + 1], hi ? -1 : +1});
    }
  for (int i = 0; i <= g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      const bool lo = g.active(i - 1, j);
      const bool hi = g.active(i, j);
      if (lo != hi) out.push_back({Axis::x, x[i], y[j], y[j + 1], hi ? -1 : +1});
    }
  return out;
}

double overlap(const BoundaryEdge& a, const BoundaryEdge& b) {
  return std::min(a.s1, b.s1) - std::max(a.s0, b.s0);
}

}  // namespace

InterfaceSegmentation build_interface(const TensorGrid& stokes, const TensorGrid& darcy, const MortarSpec& mortar) {
  if (mortar.degree != 0 && mortar.degree != 1) throw GeometryError("mortar degree must be 0 or 1");
  const auto es = boundary_edges(stokes);
  const auto ed = boundary_edges(darcy);
  const double scale = std::max({span_of(stokes.x_coords()), span_of(stokes.y_coords()), span_of(darcy.x_coords()),
                                 span_of(darcy.y_coords())});
  const double tol = 1e-12 * scale;

  // coverage of each edge by edges of the other grid lying on the same line with opposite normal
  auto covered = [&](const BoundaryEdge& e, const std::vector<BoundaryEdge>& others) {
    double c = 0.0;
    for (const auto& o : others)
      if (o.normal == e.normal && std::abs(o.offset - e.offset) <= tol && o.sign == -e.sign) {
        const double ov = overlap(e, o);
        if (ov > tol) c += ov;
      }
    return c;
  };

  std::vector<BoundaryEdge> pieces;
  for (const auto& e : es) {
    const double c = covered(e, ed);
    if (c <= tol) continue;
    if (std::abs(c - (e.s1 - e.s0)) > 1e-9 * (e.s1 - e.s0))
      throw GeometryError("Stokes boundary edge only partially touches the Darcy boundary");
    pieces.push_back(e);
  }
  for (const auto& e : ed) {
    const double c = covered(e, es);
    if (c > tol && std::abs(c - (e.s1 - e.s0)) > 1e-9 * (e.s1 - e.s0))
      throw GeometryError("Darcy boundary edge only partially touches the Stokes boundary");
  }
  if (pieces.empty()) throw GeometryError("empty interface: subdomain boundaries share no segment of positive length");

  // merge collinear contiguous pieces into maximal segments
  std::sort(pieces.begin(), pieces.end(), [](const BoundaryEdge& a, const BoundaryEdge& b) {
    return std::tie(a.normal, a.offset, a.sign, a.s0) < std::tie(b.normal, b.offset, b.sign, b.s0);
  });
  std::vector<InterfaceSegment> segs;
  for (const auto& p : pieces) {
    if (!segs.empty()) {
      auto& s = segs.back();
      if (s.normal_axis == p.normal && std::abs(s.offset - p.offset) <= tol && s.stokes_sign == p.sign &&
          std::abs(s.end - p.s0) <= tol) {
        s.end = p.s1;
        s.stokes_breaks.push_back(p.s1);
        continue;
      }
    }
    InterfaceSegment s;
    s.normal_axis = p.normal;
    s.offset = p.offset;
    s.begin = p.s0;
    s.end = p.s1;
    s.stokes_sign = p.sign;
    s.stokes_breaks = {p.s0, p.s1};
    segs.push_back(std::move(s));
  }

  for (auto& s : segs) {
    std::vector<double> db;
    for (const auto& e : ed)
      if (e.normal == s.normal_axis && std::abs(e.offset - s.offset) <= tol && e.s0 >= s.begin - tol &&
          e.s1 <= s.end + tol && e.sign == -s.stokes_sign) {
        db.push_back(e.s0);
        db.push_back(e.s1);
      }
    s.darcy_breaks = merge_breakpoints({db});
    s.darcy_breaks.front() = s.begin;
    s.darcy_breaks.back() = s.end;
  }

  // order segments as a walk along the interface
  std::vector<InterfaceSegment> ordered;
  {
    auto key = [](const Point& p) { return std::make_pair(p.x, p.y); };
    std::vector<char> used(segs.size(), 0);
    auto close = [&](const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y) <= tol; };
    while (ordered.size() < segs.size()) {
      // start from the unused segment with the lexicographically smallest free endpoint
      int best = -1;
      Point best_pt{};
      for (std::size_t k = 0; k < segs.size(); ++k) {
        if (used[k]) continue;
        for (const Point& p : {segs[k].at(segs[k].begin), segs[k].at(segs[k].end)}) {
          bool shared = false;
          for (std::size_t m = 0; m < segs.size(); ++m)
            if (m != k && !used[m] && (close(p, segs[m].at(segs[m].begin)) || close(p, segs[m].at(segs[m].end))))
              shared = true;
          if (!shared && (best < 0 || key(p) < key(best_pt))) {
            best = static_cast<int>(k);
            best_pt = p;
          }
        }
      }
      if (best < 0) {  // closed loop: start anywhere
        for (std::size_t k = 0; k < segs.size(); ++k)
          if (!used[k]) {
            best = static_cast<int>(k);
            best_pt = segs[k].at(segs[k].begin);
            break;
          }
      }
      Point tip = best_pt;
      int cur = best;
      while (cur >= 0) {
        used[cur] = 1;
        ordered.push_back(segs[cur]);
        const auto& s = segs[cur];
        tip = close(tip, s.at(s.begin)) ? s.at(s.end) : s.at(s.begin);
        cur = -1;
        for (std::size_t m = 0; m < segs.size(); ++m)
          if (!used[m] && (close(tip, segs[m].at(segs[m].begin)) || close(tip, segs[m].at(segs[m].end)))) {
            cur = static_cast<int>(m);
            break;
          }
      }
    }
  }

  // mortar partitions
  std::vector<int> counts;
  if (mortar.elements.size() == ordered.size()) {
    counts = mortar.elements;
  } else if (mortar.elements.size() == 1) {
    const double total = [&] {
      double l = 0.0;
      for (const auto& s : ordered) l += s.length();
      return l;
    }();
    for (const auto& s : ordered)
      counts.push_back(ordered.size() == 1 ? mortar.elements[0]
                                           : std::max(1, static_cast<int>(std::lround(mortar.elements[0] * s.length() / total))));
  } else {
    throw GeometryError("mortar element counts must be a single total or one per interface segment");
  }
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    if (counts[k] < 1) throw GeometryError("each interface segment needs at least one mortar element");
    ordered[k].mortar_breaks = linspace(ordered[k].begin, ordered[k].end, counts[k]);
  }

  InterfaceSegmentation out;
  out.segments = std::move(ordered);
  return out;
}

}  // namespace sdm
