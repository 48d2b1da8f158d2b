#include "sdmortar/norms.hpp"

#include <cmath>
#include <limits>

#include "sdmortar/quadrature.hpp"

namespace sdm {

const char* to_string(NormVariant v) { return v == NormVariant::standard ? "standard" : "midpoint"; }

double pressure_error(const TensorGrid& g, const Vector& ph, const ScalarField& exact, NormVariant v) {
  double s = 0.0;
  int k = 0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.active(i, j)) continue;
      const double p = ph[k++];
      if (v == NormVariant::midpoint) {
        const double e = exact(g.xc(i), g.yc(j)) - p;
        s += g.hx(i) * g.hy(j) * e * e;
      } else {
        s += quad::box2(
            [&](double x, double y) {
              const double e = exact(x, y) - p;
              return e * e;
            },
            g.x_coords()[i], g.x_coords()[i + 1], g.y_coords()[j], g.y_coords()[j + 1]);
      }
    }
  return std::sqrt(s);
}

double edge_norm(const TensorGrid& g, const std::function<double(Axis, int, int)>& face_value,
                 const NormalComponent& exact, NormVariant v) {
  const auto& xs = g.x_coords();
  const auto& ys = g.y_coords();
  auto edge_sq = [&](Axis a, int i, int j) {
    const double vh = face_value(a, i, j);
    if (a == Axis::x) {
      const double x = xs[i];
      if (v == NormVariant::midpoint) {
        const double e = (exact ? exact(a, x, g.yc(j)) : 0.0) - vh;
        return e * e;
      }
      return quad::line2(
                 [&](double y) {
                   const double e = (exact ? exact(a, x, y) : 0.0) - vh;
                   return e * e;
                 },
                 ys[j], ys[j + 1]) /
             g.hy(j);
    }
    const double y = ys[j];
    if (v == NormVariant::midpoint) {
      const double e = (exact ? exact(a, g.xc(i), y) : 0.0) - vh;
      return e * e;
    }
    return quad::line2(
               [&](double x) {
                 const double e = (exact ? exact(a, x, y) : 0.0) - vh;
                 return e * e;
               },
               xs[i], xs[i + 1]) /
           g.hx(i);
  };
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.active(i, j)) continue;
      const double t = edge_sq(Axis::x, i, j) + edge_sq(Axis::x, i + 1, j) + edge_sq(Axis::y, i, j) +
                       edge_sq(Axis::y, i, j + 1);
      s += g.hx(i) * g.hy(j) * t;
    }
  return std::sqrt(s);
}

double edge_norm(const TensorGrid& g, const std::function<double(Axis, int, int)>& face_value, NormVariant v) {
  return edge_norm(g, face_value, NormalComponent{}, v);
}

double stokes_h1_error(const StaggeredGeometry& geom, const MacField& field, const VectorField& exact_u,
                       const std::function<std::array<Vec2, 2>(double, double)>& exact_grad, NormVariant v) {
  const TensorGrid& g = geom.primal();
  const auto face_value = [&](Axis a, int i, int j) {
    return field.face[axis_index(a)][geom.face_index(a, i, j)];
  };
  const double en = edge_norm(
      g, face_value, [&](Axis a, double x, double y) { return exact_u(x, y)[axis_index(a)]; }, v);

  // vertex values of the shear parts
  std::vector<Vec2> shear(geom.vertices().size());
  for (std::size_t k = 0; k < shear.size(); ++k) shear[k] = vertex_shear_parts(geom, field, static_cast<int>(k));

  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.active(i, j)) continue;
      const Vec2 st = cell_stretch_parts(geom, field, i, j);
      const std::array<Vec2, 4> vv{shear[geom.vertex_index(i, j)], shear[geom.vertex_index(i + 1, j)],
                                   shear[geom.vertex_index(i, j + 1)], shear[geom.vertex_index(i + 1, j + 1)]};
      const double x0 = g.x_coords()[i], x1 = g.x_coords()[i + 1];
      const double y0 = g.y_coords()[j], y1 = g.y_coords()[j + 1];
      auto integrand = [&](double x, double y) {
        const auto gu = exact_grad(x, y);
        const double tx = (x - x0) / (x1 - x0);
        const double ty = (y - y0) / (y1 - y0);
        double bil[2];
        for (int c = 0; c < 2; ++c)
          bil[c] = (1 - tx) * (1 - ty) * vv[0][c] + tx * (1 - ty) * vv[1][c] + (1 - tx) * ty * vv[2][c] +
                   tx * ty * vv[3][c];
        const double a = gu[0][0] - st[0];
        const double b = gu[1][1] - st[1];
        const double c = gu[0][1] - bil[0];
        const double d = gu[1][0] - bil[1];
        return a * a + b * b + c * c + d * d;
      };
      if (v == NormVariant::midpoint)
        s += (x1 - x0) * (y1 - y0) * integrand(0.5 * (x0 + x1), 0.5 * (y0 + y1));
      else
        s += quad::box2(integrand, x0, x1, y0, y1);
    }
  return std::sqrt(en * en + s);
}

double mortar_error(const InterfaceSegmentation& iface, const MortarSpace& mortar, const Vector& lambda,
                    const std::function<double(double, double)>& exact, NormVariant v) {
  double s = 0.0;
  for (int seg = 0; seg < mortar.num_segments(); ++seg) {
    const auto& S = iface.segments[seg];
    const auto& b = mortar.breaks(seg);
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      auto err2 = [&](double t) {
        const Point p = S.at(t);
        const double e = exact(p.x, p.y) - mortar.evaluate(lambda, seg, t);
        return e * e;
      };
      if (v == NormVariant::midpoint)
        s += (b[k + 1] - b[k]) * err2(0.5 * (b[k] + b[k + 1]));
      else
        s += quad::line3(err2, b[k], b[k + 1]);
    }
  }
  return std::sqrt(s);
}

ErrorBundle case1_errors(const CoupledProblem& prob, const CoupledSolution& sol, const ExactSolution& ex,
                         NormVariant v) {
  ErrorBundle e;
  e.variant = v;
  const TensorGrid& gd = prob.darcy_space->grid();
  e.e_pD = pressure_error(gd, sol.p_d, [&](double x, double y) { return ex.p_darcy(x, y); }, v);
  const auto dv = darcy_edge_values(prob, sol);
  const Rt0Space& sp = *prob.darcy_space;
  e.e_uD = edge_norm(
      gd, [&](Axis a, int i, int j) { return dv[sp.edge_index(a, i, j)]; },
      [&](Axis a, double x, double y) { return ex.u_darcy(x, y)[axis_index(a)]; }, v);
  const TensorGrid& gs = prob.stokes_geom->primal();
  e.e_pS = pressure_error(gs, sol.p_s, [&](double x, double y) { return ex.p_stokes(x, y); }, v);
  const MacField f = stokes_field(prob, sol);
  e.e_uS = stokes_h1_error(
      *prob.stokes_geom, f, [&](double x, double y) { return ex.u_stokes(x, y); },
      [&](double x, double y) { return ex.grad_u_stokes(x, y); }, v);
  e.e_lambda = mortar_error(prob.iface, *prob.mortar, sol.lambda,
                            [&](double x, double y) { return ex.p_darcy(x, y); }, v);
  return e;
}

std::vector<double> rates(const std::vector<double>& errors) {
  std::vector<double> r;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    const double a = errors[k - 1], b = errors[k];
    if (a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b))
      r.push_back(std::log(a / b) / std::log(2.0));
    else
      r.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  return r;
}

void ConvergenceReport::add(int level, const ErrorBundle& e) {
  levels.push_back(level);
  errors.push_back(e);
}

std::vector<double> ConvergenceReport::column(int c) const {
  std::vector<double> out;
  for (const auto& e : errors) out.push_back(e.values()[c]);
  return out;
}

}  // namespace sdm
