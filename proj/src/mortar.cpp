#include "sdmortar/mortar.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdmortar/quadrature.hpp"

namespace sdm {

MortarSpace::MortarSpace(const InterfaceSegmentation& iface, int degree) : degree_(degree) {
  if (degree != 0 && degree != 1) throw std::invalid_argument("mortar degree must be 0 or 1");
  for (const auto& s : iface.segments) {
    if (s.mortar_breaks.size() < 2) throw GeometryError("interface segment without a mortar partition");
    breaks_.push_back(s.mortar_breaks);
    offset_.push_back(num_dofs_);
    const int intervals = static_cast<int>(s.mortar_breaks.size()) - 1;
    num_dofs_ += degree == 0 ? intervals : intervals + 1;
  }
}

int MortarSpace::interval_of(int seg, double s) const {
  const auto& b = breaks_[seg];
  const auto it = std::upper_bound(b.begin(), b.end(), s);
  int k = static_cast<int>(it - b.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(b.size()) - 2);
}

int MortarSpace::basis_at(int seg, int k, double s, std::array<std::pair<int, double>, 2>& out) const {
  const auto& b = breaks_[seg];
  if (degree_ == 0) {
    out[0] = {offset_[seg] + k, 1.0};
    return 1;
  }
  const double t = (s - b[k]) / (b[k + 1] - b[k]);
  out[0] = {offset_[seg] + k, 1.0 - t};
  out[1] = {offset_[seg] + k + 1, t};
  return 2;
}

double MortarSpace::evaluate(const Vector& coef, int seg, double s) const {
  std::array<std::pair<int, double>, 2> bf;
  const int n = basis_at(seg, interval_of(seg, s), s, bf);
  double v = 0.0;
  for (int q = 0; q < n; ++q) v += coef[bf[q].first] * bf[q].second;
  return v;
}

MortarCoupling assemble_coupling(const InterfaceSegmentation& iface, const MortarSpace& mortar) {
  int ns = 0, nd = 0;
  for (const auto& s : iface.segments) {
    ns += static_cast<int>(s.stokes_breaks.size()) - 1;
    nd += static_cast<int>(s.darcy_breaks.size()) - 1;
  }
  const int nm = mortar.num_dofs();
  TripletBuilder ts(nm, ns), td(nm, nd), tm(nm, nm);
  MortarCoupling c;
  c.stokes_lengths.resize(ns);
  c.darcy_lengths.resize(nd);

  int s_off = 0, d_off = 0;
  for (int seg = 0; seg < static_cast<int>(iface.segments.size()); ++seg) {
    const auto& S = iface.segments[seg];
    for (std::size_t t = 0; t + 1 < S.stokes_breaks.size(); ++t)
      c.stokes_lengths[s_off + static_cast<int>(t)] = S.stokes_breaks[t + 1] - S.stokes_breaks[t];
    for (std::size_t t = 0; t + 1 < S.darcy_breaks.size(); ++t)
      c.darcy_lengths[d_off + static_cast<int>(t)] = S.darcy_breaks[t + 1] - S.darcy_breaks[t];

    const auto merged = merge_breakpoints({S.stokes_breaks, S.darcy_breaks, mortar.breaks(seg)});
    auto locate = [](const std::vector<double>& b, double x) {
      const auto it = std::upper_bound(b.begin(), b.end(), x);
      return std::clamp(static_cast<int>(it - b.begin()) - 1, 0, static_cast<int>(b.size()) - 2);
    };
    for (std::size_t q = 0; q + 1 < merged.size(); ++q) {
      const double a = merged[q], b = merged[q + 1];
      if (!(b - a > 0.0)) throw GeometryError("zero-length interval in the merged interface partition");
      const double mid = 0.5 * (a + b);
      const int is = s_off + locate(S.stokes_breaks, mid);
      const int id = d_off + locate(S.darcy_breaks, mid);
      const int k = mortar.interval_of(seg, mid);
      const double r = 0.5 * (b - a);
      for (int g = 0; g < 2; ++g) {
        const double x = mid + r * quad::gauss2_pts[g];
        const double w = r * quad::gauss2_wts[g];
        std::array<std::pair<int, double>, 2> bf;
        const int n = mortar.basis_at(seg, k, x, bf);
        for (int p = 0; p < n; ++p) {
          ts.add(bf[p].first, is, w * bf[p].second);
          td.add(bf[p].first, id, w * bf[p].second);
          for (int pp = 0; pp < n; ++pp) tm.add(bf[p].first, bf[pp].first, w * bf[p].second * bf[pp].second);
        }
      }
    }
    s_off += static_cast<int>(S.stokes_breaks.size()) - 1;
    d_off += static_cast<int>(S.darcy_breaks.size()) - 1;
  }
  c.stokes = ts.build();
  c.darcy = td.build();
  c.mortar_mass = tm.build();
  return c;
}

MortarProjections projection_matrices(const MortarCoupling& c) {
  MortarProjections p;
  const Eigen::MatrixXd bs = Eigen::MatrixXd(c.stokes);
  const Eigen::MatrixXd bd = Eigen::MatrixXd(c.darcy);
  p.stokes_from_mortar = c.stokes_lengths.cwiseInverse().asDiagonal() * bs.transpose();
  p.darcy_from_mortar = c.darcy_lengths.cwiseInverse().asDiagonal() * bd.transpose();
  const Eigen::LLT<Eigen::MatrixXd> mm(Eigen::MatrixXd(c.mortar_mass));
  p.mortar_from_stokes = mm.solve(bs);
  p.mortar_from_darcy = mm.solve(bd);
  return p;
}

double darcy_trace_injectivity(const MortarCoupling& c) {
  const Eigen::MatrixXd bd = Eigen::MatrixXd(c.darcy);
  // P^T M_D P = B_D M_D^-1 B_D^T
  const Eigen::MatrixXd g = bd * c.darcy_lengths.cwiseInverse().asDiagonal() * bd.transpose();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::MatrixXd(c.mortar_mass),
                                                               Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
}

void require_mortar_solvable(const MortarCoupling& c, double threshold) {
  const double s = darcy_trace_injectivity(c);
  if (!(s > threshold)) {
    std::ostringstream os;
    os << "mortar space is too rich for the Darcy trace: smallest singular value of the projection is " << s
       << " (need > " << threshold << "); use fewer mortar elements";
    throw std::runtime_error(os.str());
  }
}

double check_infsup(const MortarCoupling& c, const StokesOperator& stokes, const DarcyOperator& darcy) {
  const StaggeredGeometry& geom = *stokes.geom;
  const int nv = stokes.dofs.num_velocity;
  Vector mass = Vector::Zero(nv);
  for (int a = 0; a < 2; ++a) {
    const auto& faces = geom.faces(static_cast<Axis>(a));
    for (std::size_t k = 0; k < faces.size(); ++k)
      if (stokes.dofs.face_dof[a][k] >= 0) mass[stokes.dofs.face_dof[a][k]] = faces[k].cv_area;
  }
  SparseMatrix xs = stokes.a;
  xs += SparseMatrix(mass.asDiagonal());
  SparseMatrix xd = darcy.a;
  xd += SparseMatrix(darcy.div.transpose() * darcy.cell_areas.cwiseInverse().asDiagonal() * darcy.div);

  const Eigen::MatrixXd cs = Eigen::MatrixXd(SparseMatrix(c.stokes * stokes.trace_map).transpose());
  const Eigen::MatrixXd cd = Eigen::MatrixXd(SparseMatrix(c.darcy * darcy.trace_map).transpose());
  Eigen::SimplicialLDLT<SparseMatrix> fs(xs), fd(xd);
  if (fs.info() != Eigen::Success || fd.info() != Eigen::Success)
    throw LinearAlgebraError("inf-sup check: norm Gram matrix is not positive definite");
  const Eigen::MatrixXd ys = fs.solve(cs);
  const Eigen::MatrixXd yd = fd.solve(cd);
  Eigen::MatrixXd s = cs.transpose() * ys + cd.transpose() * yd;
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::MatrixXd(c.mortar_mass),
                                                               Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
}

}  // namespace sdm
