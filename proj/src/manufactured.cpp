#include "sdmortar/manufactured.hpp"

#include <cmath>

namespace sdm {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double Case1Params::g() const { return std::sqrt(mu * k) / alpha; }
double Case1Params::beta() const { return (1.0 - g()) / (2.0 * (1.0 + g())); }
double Case1Params::chi() const { return (-30.0 * beta() - 17.0) / 48.0; }
double Case1Params::slip() const { return mu * alpha / std::sqrt(k); }

ExactSolution::ExactSolution(Case1Params p) : p_(p), g_(p.g()), beta_(p.beta()), chi_(p.chi()) {
  if (!(p.mu > 0.0) || !(p.k > 0.0) || !(p.alpha > 0.0)) throw std::invalid_argument("mu, K and alpha must be positive");
}

Vec2 ExactSolution::u_stokes(double x, double y) const {
  const double w = p_.omega;
  return {(2.0 - x) * (1.5 - y) * (y - beta_) + g_ * w * std::cos(w * x),
          -y * y * y / 3.0 + 0.5 * y * y * (beta_ + 1.5) - 1.5 * beta_ * y - 0.5 + std::sin(w * x)};
}

double ExactSolution::p_stokes(double x, double y) const {
  return -(std::sin(p_.omega * x) + chi_) / (2.0 * p_.k) + 2.0 * p_.mu * (0.5 - beta_) + std::cos(kPi * y);
}

Vec2 ExactSolution::u_darcy(double x, double y) const {
  const double w = p_.omega;
  return {w * std::cos(w * x) * y, chi_ * (y + 0.5) + std::sin(w * x)};
}

double ExactSolution::p_darcy(double x, double y) const {
  return -chi_ / p_.k * 0.5 * (y + 0.5) * (y + 0.5) - std::sin(p_.omega * x) * y / p_.k;
}

std::array<Vec2, 2> ExactSolution::grad_u_stokes(double x, double y) const {
  const double w = p_.omega;
  const double q = (1.5 - y) * (y - beta_);
  return {Vec2{-q - g_ * w * w * std::sin(w * x), (2.0 - x) * (1.5 + beta_ - 2.0 * y)},
          Vec2{w * std::cos(w * x), -y * y + y * (beta_ + 1.5) - 1.5 * beta_}};
}

Vec2 ExactSolution::grad_p_stokes(double x, double y) const {
  return {-p_.omega * std::cos(p_.omega * x) / (2.0 * p_.k), -kPi * std::sin(kPi * y)};
}

Vec2 ExactSolution::grad_p_darcy(double x, double y) const {
  const double w = p_.omega;
  return {-w * std::cos(w * x) * y / p_.k, -chi_ / p_.k * (y + 0.5) - std::sin(w * x) / p_.k};
}

Vec2 ExactSolution::laplace_u_stokes(double x, double y) const {
  const double w = p_.omega;
  return {-g_ * w * w * w * std::cos(w * x) - 2.0 * (2.0 - x), -w * w * std::sin(w * x) - 2.0 * y + beta_ + 1.5};
}

Vec2 ExactSolution::grad_div_u_stokes(double x, double) const {
  const double w = p_.omega;
  return {-g_ * w * w * w * std::cos(w * x), 0.0};
}

Vec2 ExactSolution::stokes_force(double x, double y) const {
  const Vec2 lap = laplace_u_stokes(x, y);
  const Vec2 gd = grad_div_u_stokes(x, y);
  const Vec2 gp = grad_p_stokes(x, y);
  return {-p_.mu * (lap[0] + gd[0]) + gp[0], -p_.mu * (lap[1] + gd[1]) + gp[1]};
}

double ExactSolution::stokes_mass_source(double x, double) const {
  return -g_ * p_.omega * p_.omega * std::sin(p_.omega * x);
}

double ExactSolution::darcy_source(double x, double y) const {
  return chi_ - p_.omega * p_.omega * std::sin(p_.omega * x) * y;
}

std::array<double, 3> ExactSolution::stokes_stress(double x, double y) const {
  const auto gu = grad_u_stokes(x, y);
  const double p = p_stokes(x, y);
  return {2.0 * p_.mu * gu[0][0] - p, p_.mu * (gu[0][1] + gu[1][0]), 2.0 * p_.mu * gu[1][1] - p};
}

ExactSolution case1_exact(Case1Params p) { return ExactSolution(p); }

ProblemDefinition case1_problem(int level, int mortar_degree, int mortar_elements, Case1Params p) {
  if (level < 0) throw std::invalid_argument("refinement level must be non-negative");
  if (mortar_degree != 0 && mortar_degree != 1) throw std::invalid_argument("mortar degree must be 0 or 1");
  const int f = 1 << level;
  const auto ex = std::make_shared<ExactSolution>(p);
  ProblemDefinition d;
  d.name = "case1";
  d.stokes_grid = uniform_grid(0.0, 1.0, 16 * f, 0.5, 1.0, 16 * f);
  d.darcy_grid = uniform_grid(0.0, 1.0, 15 * f, 0.0, 0.5, 15 * f);
  const int base = mortar_elements > 0 ? mortar_elements : (mortar_degree == 0 ? 15 : 14);
  d.mortar.degree = mortar_degree;
  d.mortar.elements = {base * f};
  d.mu = p.mu;
  const double slip = p.slip();
  d.slip_coefficient = [slip](const InterfaceSegment&) { return slip; };
  d.permeability = [k = p.k](double, double) { return std::array<double, 3>{k, 0.0, k}; };
  d.stokes_bc.classify = [](const BoundaryEdgeRef&) { return BoundaryKind::essential; };
  d.stokes_bc.velocity = [ex](double x, double y) { return ex->u_stokes(x, y); };
  d.darcy_bc.classify = [](const BoundaryEdgeRef&) { return BoundaryKind::natural; };
  d.darcy_bc.pressure = [ex](double x, double y) { return ex->p_darcy(x, y); };
  d.stokes_force = [ex](double x, double y) { return ex->stokes_force(x, y); };
  d.stokes_mass_source = [ex](double x, double y) { return ex->stokes_mass_source(x, y); };
  d.darcy_source = [ex](double x, double y) { return ex->darcy_source(x, y); };
  return d;
}

std::array<double, 3> case2_permeability(const Case2Params& p) {
  const double a = p.k / p.anisotropy;
  const double b = p.k;
  const double c = std::cos(p.angle);
  const double s = std::sin(p.angle);
  return {a * c * c + b * s * s, (a - b) * c * s, a * s * s + b * c * c};
}

ProblemDefinition case2_problem(int level, int mortar_degree, Case2Params p) {
  if (level < 0) throw std::invalid_argument("refinement level must be non-negative");
  if (mortar_degree != 0 && mortar_degree != 1) throw std::invalid_argument("mortar degree must be 0 or 1");
  auto join = [](std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin() + 1, b.end());
    return a;
  };
  const std::vector<double> x = join(join(graded_breaks(0.0, 0.25, 8, 0.85), linspace(0.25, 0.5, 10)),
                                     graded_breaks(0.5, 0.75, 8, 1.0 / 0.85));
  const std::vector<double> y = join(graded_breaks(0.0, 0.2, 8, 0.8), linspace(0.2, 0.25, 5));
  std::vector<char> active((x.size() - 1) * (y.size() - 1), 1);
  const int nx = static_cast<int>(x.size()) - 1;
  for (int j = 0; j + 1 < static_cast<int>(y.size()); ++j)
    for (int i = 0; i < nx; ++i) {
      const double xc = 0.5 * (x[i] + x[i + 1]);
      const double yc = 0.5 * (y[j] + y[j + 1]);
      if (xc > 0.25 && xc < 0.5 && yc < 0.2) active[j * nx + i] = 0;
    }
  TensorGrid stokes(x, y, active);
  TensorGrid darcy = uniform_grid(0.25, 0.5, 20, 0.0, 0.2, 16);
  for (int k = 0; k < level; ++k) {
    stokes = stokes.refined();
    darcy = darcy.refined();
  }

  ProblemDefinition d;
  d.name = "case2";
  d.stokes_grid = std::move(stokes);
  d.darcy_grid = std::move(darcy);
  d.mortar.degree = mortar_degree;
  d.mortar.elements = {(16 << level) - mortar_degree, (20 << level) - mortar_degree, (16 << level) - mortar_degree};
  d.mu = p.mu;
  const auto k = case2_permeability(p);
  d.permeability = [k](double, double) { return k; };
  d.slip_coefficient = [p, k](const InterfaceSegment& s) {
    const double kt = s.horizontal() ? k[0] : k[2];
    return p.mu * p.alpha / std::sqrt(kt);
  };
  d.stokes_bc.classify = [](const BoundaryEdgeRef& e) {
    if (e.normal == Axis::x && (std::abs(e.offset) < 1e-12 || std::abs(e.offset - 0.75) < 1e-12))
      return BoundaryKind::natural;
    return BoundaryKind::essential;
  };
  // sigma n = -p_in n on the inlet and -p_out n on the outlet
  d.stokes_bc.traction = [p](double x, double) {
    return x < 0.375 ? Vec2{p.inlet_stress, 0.0} : Vec2{-p.outlet_stress, 0.0};
  };
  d.stokes_bc.velocity = constant_vector(0.0, 0.0);
  d.darcy_bc.classify = [](const BoundaryEdgeRef&) { return BoundaryKind::essential; };
  return d;
}

}  // namespace sdm
