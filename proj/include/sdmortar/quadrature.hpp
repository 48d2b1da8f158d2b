#pragma once

#include <array>
#include <cmath>

namespace sdm::quad {

// Gauss-Legendre rules on [-1, 1].
inline constexpr std::array<double, 2> gauss2_pts{-0.57735026918962576451, 0.57735026918962576451};
inline constexpr std::array<double, 2> gauss2_wts{1.0, 1.0};
inline constexpr std::array<double, 3> gauss3_pts{-0.77459666924148337704, 0.0, 0.77459666924148337704};
inline constexpr std::array<double, 3> gauss3_wts{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

/// 2-point Gauss on [a, b].
template <class F>
double line2(F&& f, double a, double b) {
  const double m = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 2; ++k) s += gauss2_wts[k] * f(m + r * gauss2_pts[k]);
  return r * s;
}

template <class F>
double line3(F&& f, double a, double b) {
  const double m = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += gauss3_wts[k] * f(m + r * gauss3_pts[k]);
  return r * s;
}

/// Tensor 2x2 Gauss on [x0, x1] x [y0, y1].
template <class F>
double box2(F&& f, double x0, double x1, double y0, double y1) {
  const double mx = 0.5 * (x0 + x1), rx = 0.5 * (x1 - x0);
  const double my = 0.5 * (y0 + y1), ry = 0.5 * (y1 - y0);
  double s = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) s += f(mx + rx * gauss2_pts[a], my + ry * gauss2_pts[b]);
  return rx * ry * s;
}

}  // namespace sdm::quad
