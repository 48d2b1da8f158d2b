#pragma once

#include <array>
#include <functional>

namespace sdm {

using Vec2 = std::array<double, 2>;
using ScalarField = std::function<double(double, double)>;
using VectorField = std::function<Vec2(double, double)>;

/// How load integrals are evaluated: tensor 2-point Gauss, or the integrand
/// at the degree-of-freedom location times the measure.
enum class LoadRule { gauss, midpoint };

inline ScalarField constant_scalar(double c) {
  return [c](double, double) { return c; };
}
inline VectorField constant_vector(double a, double b) {
  return [a, b](double, double) { return Vec2{a, b}; };
}

}  // namespace sdm
