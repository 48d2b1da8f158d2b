#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "sdmortar/coupled_solver.hpp"
#include "sdmortar/manufactured.hpp"
#include "sdmortar/stokes_mac.hpp"

namespace sdm {
namespace {

MacBoundaryCondition all_essential() {
  MacBoundaryCondition bc;
  bc.classify = [](const BoundaryEdgeRef&) { return BoundaryKind::essential; };
  return bc;
}

StokesOperator box_operator(const TensorGrid& g, double mu = 1.0) {
  return assemble_momentum(std::make_shared<const StaggeredGeometry>(g), InterfaceSegmentation{}, mu, {},
                           all_essential());
}

Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

int u1(const StokesOperator& op, int i, int j) {
  return op.dofs.face_dof[0][op.geom->face_index(Axis::x, i, j)];
}
int u2(const StokesOperator& op, int i, int j) {
  return op.dofs.face_dof[1][op.geom->face_index(Axis::y, i, j)];
}

TEST(MacMomentum, InteriorRowCoefficients) {
  const double h = 1.0 / 6.0;
  const StokesOperator op = box_operator(uniform_grid(0.0, 1.0, 6, 0.0, 1.0, 6));
  const Eigen::MatrixXd a = dense(op.a);
  const int i = 3, j = 2;  // u1 on x = 0.5, y in [1/3, 1/2]
  const int r = u1(op, i, j);
  EXPECT_NEAR(a(r, r), 6.0, 1e-13);
  EXPECT_NEAR(a(r, u1(op, i + 1, j)), -2.0, 1e-13);
  EXPECT_NEAR(a(r, u1(op, i - 1, j)), -2.0, 1e-13);
  EXPECT_NEAR(a(r, u1(op, i, j + 1)), -1.0, 1e-13);
  EXPECT_NEAR(a(r, u1(op, i, j - 1)), -1.0, 1e-13);
  // u2 on the four edges meeting the face's end points
  EXPECT_NEAR(a(r, u2(op, i, j)), 1.0, 1e-13);           // below right
  EXPECT_NEAR(a(r, u2(op, i - 1, j)), -1.0, 1e-13);      // below left
  EXPECT_NEAR(a(r, u2(op, i, j + 1)), -1.0, 1e-13);      // above right
  EXPECT_NEAR(a(r, u2(op, i - 1, j + 1)), 1.0, 1e-13);   // above left
  EXPECT_NEAR(a.row(r).cwiseAbs().sum(), 6.0 + 4.0 + 2.0 + 4.0, 1e-12);

  // pressure column of the system [A -B^T; -B 0]
  const Eigen::MatrixXd b = dense(op.div);
  const Eigen::VectorXd grad = -b.col(r);
  EXPECT_NEAR(grad[op.dofs.p_dof[op.geom->primal().cell_id(i - 1, j)]], -h, 1e-15);
  EXPECT_NEAR(grad[op.dofs.p_dof[op.geom->primal().cell_id(i, j)]], h, 1e-15);
  EXPECT_NEAR(grad.cwiseAbs().sum(), 2.0 * h, 1e-15);
}

TEST(MacMomentum, InteriorU2RowMirrorsU1Row) {
  const StokesOperator op = box_operator(uniform_grid(0.0, 1.0, 6, 0.0, 1.0, 6));
  const Eigen::MatrixXd a = dense(op.a);
  const int i = 2, j = 3;
  const int r = u2(op, i, j);
  EXPECT_NEAR(a(r, r), 6.0, 1e-13);
  EXPECT_NEAR(a(r, u2(op, i, j + 1)), -2.0, 1e-13);
  EXPECT_NEAR(a(r, u2(op, i, j - 1)), -2.0, 1e-13);
  EXPECT_NEAR(a(r, u2(op, i + 1, j)), -1.0, 1e-13);
  EXPECT_NEAR(a(r, u2(op, i - 1, j)), -1.0, 1e-13);
  EXPECT_NEAR(a(r, u1(op, i, j)), 1.0, 1e-13);
  EXPECT_NEAR(a(r, u1(op, i + 1, j - 1)), 1.0, 1e-13);
  EXPECT_NEAR(a(r, u1(op, i, j - 1)), -1.0, 1e-13);
  EXPECT_NEAR(a(r, u1(op, i + 1, j)), -1.0, 1e-13);
}

TEST(MacMomentum, ViscosityScalesOperator) {
  const TensorGrid g = uniform_grid(0.0, 1.0, 4, 0.0, 1.0, 4);
  const Eigen::MatrixXd a1 = dense(box_operator(g, 1.0).a);
  const Eigen::MatrixXd a3 = dense(box_operator(g, 3.0).a);
  EXPECT_LT((a3 - 3.0 * a1).cwiseAbs().maxCoeff(), 1e-13);
}

// Cross term a(phi_r, phi_c) of the discrete viscous form evaluated from its
// definition: 2 mu (d1 u1 d1 v1 + d2 u2 d2 v2) on primal cells plus
// mu (d2 u1 + d1 u2)(d2 v1 + d1 v2) at vertices weighted by the dual cell area.
// Valid when the support of phi_r touches interior vertices only.
double form_entry(const TensorGrid& g, double mu, int ar, int ir, int jr, int ac, int ic, int jc) {
  const auto& x = g.x_coords();
  const auto& y = g.y_coords();
  auto cell_part = [&](int a, int i, int j, int ci, int cj) {
    // d(u_a)/d(x_a) on cell (ci, cj) for the unit function on face (a, i, j)
    if (a == 0) {
      if (cj != j) return 0.0;
      if (ci == i) return -1.0 / g.hx(ci);
      if (ci == i - 1) return 1.0 / g.hx(ci);
      return 0.0;
    }
    if (ci != i) return 0.0;
    if (cj == j) return -1.0 / g.hy(cj);
    if (cj == j - 1) return 1.0 / g.hy(cj);
    return 0.0;
  };
  auto vertex_part = [&](int a, int i, int j, int vi, int vj) {
    if (a == 0) {  // d u1/dy at vertex; u1 face (i, j) sits at y centre of row j
      if (vi != i) return 0.0;
      const double dy = vj >= 1 && vj < g.ny() ? g.yc(vj) - g.yc(vj - 1) : NAN;
      if (vj == j) return 1.0 / dy;      // face above the vertex
      if (vj == j + 1) return -1.0 / dy;  // face below
      return 0.0;
    }
    if (vj != j) return 0.0;
    const double dx = vi >= 1 && vi < g.nx() ? g.xc(vi) - g.xc(vi - 1) : NAN;
    if (vi == i) return 1.0 / dx;
    if (vi == i + 1) return -1.0 / dx;
    return 0.0;
  };
  double s = 0.0;
  for (int cj = 0; cj < g.ny(); ++cj)
    for (int ci = 0; ci < g.nx(); ++ci) {
      if (ar != ac) continue;
      const double pr = cell_part(ar, ir, jr, ci, cj);
      if (pr == 0.0) continue;
      s += 2.0 * mu * g.hx(ci) * g.hy(cj) * pr * cell_part(ac, ic, jc, ci, cj);
    }
  for (int vj = 1; vj < g.ny(); ++vj)
    for (int vi = 1; vi < g.nx(); ++vi) {
      const double pr = vertex_part(ar, ir, jr, vi, vj);
      if (pr == 0.0) continue;
      const double w = 0.25 * (x[vi + 1] - x[vi - 1]) * (y[vj + 1] - y[vj - 1]);
      s += mu * w * pr * vertex_part(ac, ic, jc, vi, vj);
    }
  return s;
}

void check_against_form(const TensorGrid& g, double mu, int& checked) {
  const StokesOperator op = box_operator(g, mu);
  const Eigen::MatrixXd a = dense(op.a);
  const double scale = a.cwiseAbs().maxCoeff();
  const StaggeredGeometry& geom = *op.geom;
  for (int ar = 0; ar < 2; ++ar)
    for (std::size_t kr = 0; kr < geom.faces(static_cast<Axis>(ar)).size(); ++kr) {
      const StaggeredFace& fr = geom.faces(static_cast<Axis>(ar))[kr];
      const bool deep = ar == 0 ? fr.i >= 1 && fr.i <= g.nx() - 1 && fr.j >= 1 && fr.j + 1 <= g.ny() - 1
                                : fr.j >= 1 && fr.j <= g.ny() - 1 && fr.i >= 1 && fr.i + 1 <= g.nx() - 1;
      if (!deep) continue;
      const int r = op.dofs.face_dof[ar][kr];
      ASSERT_GE(r, 0);
      for (int ac = 0; ac < 2; ++ac)
        for (std::size_t kc = 0; kc < geom.faces(static_cast<Axis>(ac)).size(); ++kc) {
          const int c = op.dofs.face_dof[ac][kc];
          if (c < 0) continue;
          const StaggeredFace& fc = geom.faces(static_cast<Axis>(ac))[kc];
          const double expect = form_entry(g, mu, ar, fr.i, fr.j, ac, fc.i, fc.j);
          EXPECT_NEAR(a(r, c), expect, 1e-13 * scale) << "row " << r << " col " << c;
        }
      ++checked;
    }
}

TEST(MacMomentum, InteriorRowsMatchDiscreteFormUniform) {
  int checked = 0;
  check_against_form(uniform_grid(0.0, 1.0, 4, 0.0, 1.0, 4), 1.0, checked);
  EXPECT_EQ(checked, 2 * 3 * 2);
}

TEST(MacMomentum, InteriorRowsMatchDiscreteFormGraded) {
  int checked = 0;
  check_against_form(TensorGrid(graded_breaks(0.0, 1.0, 6, 0.8), graded_breaks(0.0, 0.5, 5, 1.15)), 0.7, checked);
  EXPECT_GT(checked, 10);
}

TEST(MacMomentum, SymmetricAndPositiveDefinite) {
  std::vector<char> mask(6 * 5, 1);
  mask[2] = mask[3] = mask[8] = mask[9] = 0;  // notch on the floor
  const TensorGrid g(graded_breaks(0.0, 1.2, 6, 0.85), graded_breaks(0.0, 1.0, 5, 1.1), mask);
  const StokesOperator op = box_operator(g);
  EXPECT_LE(symmetry_defect(op.a), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(op.a));
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(MacMomentum, CoerciveOnDiscretelyDivergenceFreeFields) {
  const StokesOperator op = box_operator(uniform_grid(0.0, 1.0, 5, 0.0, 1.0, 5));
  const Eigen::MatrixXd b = dense(op.div);
  const Eigen::MatrixXd a = dense(op.a);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  const Eigen::MatrixXd kernel = lu.kernel();
  ASSERT_GT(kernel.cols(), 0);
  std::mt19937 gen(11);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd c(kernel.cols());
    for (int k = 0; k < c.size(); ++k) c[k] = nd(gen);
    const Eigen::VectorXd v = kernel * c;
    EXPECT_LT((b * v).cwiseAbs().maxCoeff(), 1e-12 * v.norm());
    EXPECT_GT(v.dot(a * v), 0.0);
  }
}

TEST(MacMomentum, SingleCellAllEssentialHasNoMomentumRows) {
  const StokesOperator op = box_operator(uniform_grid(0.0, 1.0, 1, 0.0, 1.0, 1));
  EXPECT_EQ(op.dofs.num_velocity, 0);
  EXPECT_EQ(op.a.rows(), 0);
  EXPECT_EQ(op.dofs.num_pressure, 1);
  for (int a = 0; a < 2; ++a)
    for (int f : op.dofs.face_fixed[a]) EXPECT_GE(f, 0);
}

TEST(MacMomentum, RejectsBadParameters) {
  const auto geom = std::make_shared<const StaggeredGeometry>(uniform_grid(0.0, 1.0, 2, 0.0, 1.0, 2));
  EXPECT_THROW(assemble_momentum(geom, InterfaceSegmentation{}, -1.0, {}, all_essential()), std::invalid_argument);
  EXPECT_THROW(assemble_momentum(geom, InterfaceSegmentation{}, 1.0, {0.5}, all_essential()), std::invalid_argument);
  MacBoundaryCondition none;
  EXPECT_THROW(assemble_momentum(geom, InterfaceSegmentation{}, 1.0, {}, none), GeometryError);
}

TEST(MacDivergence, UniformFieldIsDivergenceFree) {
  const StaggeredGeometry geom(uniform_grid(0.0, 1.0, 1, 0.0, 1.0, 1));
  const MacDofMap d = build_mac_dofs(geom, InterfaceSegmentation{}, all_essential());
  const Eigen::MatrixXd b = dense(assemble_divergence(geom, d));
  ASSERT_EQ(b.rows(), 1);
  ASSERT_EQ(b.cols(), 4);
  Eigen::VectorXd u(4);
  u << 1.0, 1.0, 0.0, 0.0;  // u1 faces then u2 faces
  EXPECT_DOUBLE_EQ((b * u)[0], 0.0);
}

TEST(MacDivergence, SingleCellFluxSum) {
  const StaggeredGeometry geom(uniform_grid(0.0, 0.25, 1, 0.0, 0.25, 1));
  const MacDofMap d = build_mac_dofs(geom, InterfaceSegmentation{}, all_essential());
  const Eigen::MatrixXd b = dense(assemble_divergence(geom, d));
  Eigen::VectorXd u = Eigen::VectorXd::Zero(4);
  u[geom.face_index(Axis::x, 1, 0)] = 2.0;
  u[geom.face_index(Axis::x, 0, 0)] = 1.0;
  EXPECT_NEAR((b * u)[0], 0.25, 1e-15);
}

TEST(MacDivergence, KernelFieldsSatisfyCellBalance) {
  const StokesOperator op = box_operator(uniform_grid(0.0, 1.0, 4, 0.0, 1.0, 3));
  const Eigen::MatrixXd b = dense(op.div);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  const Eigen::MatrixXd kernel = lu.kernel();
  const StaggeredGeometry& geom = *op.geom;
  const TensorGrid& g = geom.primal();
  for (int c = 0; c < kernel.cols(); ++c) {
    const MacField f = expand_mac(op, kernel.col(c), Vector::Zero(op.dofs.num_fixed()), Vector::Zero(op.dofs.num_pressure));
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const double flux = g.hy(j) * (f.face[0][geom.face_index(Axis::x, i + 1, j)] - f.face[0][geom.face_index(Axis::x, i, j)]) +
                            g.hx(i) * (f.face[1][geom.face_index(Axis::y, i, j + 1)] - f.face[1][geom.face_index(Axis::y, i, j)]);
        EXPECT_NEAR(flux, 0.0, 1e-13);
      }
  }
}

TEST(MacLoads, ConstantForceGivesControlVolumeAreas) {
  const double h = 0.125;
  const StokesOperator op = box_operator(uniform_grid(0.0, 1.0, 8, 0.0, 1.0, 8));
  const StokesLoads l = assemble_rhs(op, constant_vector(1.0, 0.0), constant_scalar(0.0));
  for (int k = 0; k < static_cast<int>(op.geom->faces(Axis::x).size()); ++k) {
    const int r = op.dofs.face_dof[0][k];
    if (r >= 0) EXPECT_NEAR(l.momentum[r], h * h, 1e-15);
  }
  for (int k = 0; k < static_cast<int>(op.geom->faces(Axis::y).size()); ++k) {
    const int r = op.dofs.face_dof[1][k];
    if (r >= 0) EXPECT_EQ(l.momentum[r], 0.0);
  }
  const StokesLoads z = assemble_rhs(op, constant_vector(0.0, 0.0), constant_scalar(0.0));
  EXPECT_EQ(z.momentum.norm(), 0.0);
  EXPECT_EQ(z.mass.norm(), 0.0);
}

TEST(MacLoads, CaseOneForceMatchesGaussOracle) {
  const CoupledProblem prob = assemble_problem(case1_problem(0, 0));
  const ExactSolution ex = case1_exact();
  const StaggeredGeometry& geom = *prob.stokes_geom;
  const TensorGrid& g = geom.primal();
  // u1 face (5, 7): control volume [xc(4), xc(5)] x [y7, y8], split at the face into two boxes
  const int k = geom.face_index(Axis::x, 5, 7);
  const int r = prob.stokes.dofs.face_dof[0][k];
  ASSERT_GE(r, 0);
  const double gp = 1.0 / std::sqrt(3.0);
  auto box = [&](double x0, double x1, double y0, double y1) {
    double s = 0.0;
    for (double a : {-gp, gp})
      for (double b : {-gp, gp})
        s += ex.stokes_force(0.5 * (x0 + x1) + 0.5 * (x1 - x0) * a, 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * b)[0];
    return 0.25 * (x1 - x0) * (y1 - y0) * s;
  };
  const double x = g.x_coords()[5];
  const double expect = box(g.xc(4), x, g.y_coords()[7], g.y_coords()[8]) + box(x, g.xc(5), g.y_coords()[7], g.y_coords()[8]);
  EXPECT_NEAR(prob.stokes_loads.momentum[r], expect, 1e-10 * std::max(1.0, std::abs(expect)));
}

TEST(MacTrace, CaseOneTraceRowsAndLength) {
  const CoupledProblem prob = assemble_problem(case1_problem(0, 0));
  const SparseMatrix& t = prob.stokes.trace_map;
  ASSERT_EQ(t.rows(), 16);
  const Eigen::MatrixXd d = dense(t);
  for (int r = 0; r < 16; ++r) EXPECT_EQ((d.row(r).array() != 0.0).count(), 1);
  // u.n_S = 1 on every trace interval integrates to |Gamma| = 1
  double integral = 0.0;
  for (int r = 0; r < 16; ++r) integral += prob.stokes.trace_lengths[r];
  EXPECT_NEAR(integral, 1.0, 1e-14);
  // a velocity with u2 = -1 on the interface faces has outward normal trace +1 (Stokes lies above)
  Vector u = Vector::Zero(prob.stokes.dofs.num_velocity);
  for (int k = 0; k < static_cast<int>(prob.stokes_geom->faces(Axis::y).size()); ++k)
    if (prob.stokes.dofs.face_segment[1][k] == 0) u[prob.stokes.dofs.face_dof[1][k]] = -1.0;
  const Vector tr = t * u;
  for (int r = 0; r < 16; ++r) EXPECT_DOUBLE_EQ(tr[r], 1.0);
}

TEST(MacTrace, MatchingTraceIsSignedPermutation) {
  ProblemDefinition def = case1_problem(0, 0);
  def.stokes_grid = uniform_grid(0.0, 1.0, 8, 0.5, 1.0, 8);
  def.darcy_grid = uniform_grid(0.0, 1.0, 8, 0.0, 0.5, 8);
  def.mortar = MortarSpec{0, {8}};
  const CoupledProblem prob = assemble_problem(def);
  const Eigen::MatrixXd t = dense(prob.stokes.trace_map);
  ASSERT_EQ(t.rows(), 8);
  for (int r = 0; r < 8; ++r) EXPECT_DOUBLE_EQ(t.row(r).cwiseAbs().sum(), 1.0);
  for (int c = 0; c < t.cols(); ++c) EXPECT_LE(t.col(c).cwiseAbs().sum(), 1.0);
}

TEST(MacSlip, FrictionAddsTrapezoidalDiagonal) {
  ProblemDefinition def = case1_problem(0, 0);
  const InterfaceSegmentation iface = build_interface(def.stokes_grid, def.darcy_grid, def.mortar);
  const auto geom = std::make_shared<const StaggeredGeometry>(def.stokes_grid);
  const StokesOperator a0 = assemble_momentum(geom, iface, 1.0, {0.0}, def.stokes_bc);
  const StokesOperator a1 = assemble_momentum(geom, iface, 1.0, {0.5}, def.stokes_bc);
  const Eigen::MatrixXd diff = dense(a1.a) - dense(a0.a);
  const Eigen::MatrixXd off = diff - Eigen::MatrixXd(diff.diagonal().asDiagonal());
  EXPECT_EQ(off.cwiseAbs().maxCoeff(), 0.0);
  const double h = 1.0 / 16.0;
  int slip_vertices = 0;
  for (std::size_t v = 0; v < geom->vertices().size(); ++v) {
    if (a1.dofs.tangential_kind[0][v] != TangentialKind::slip) continue;
    ++slip_vertices;
    EXPECT_NEAR(diff(a1.dofs.tangential_dof[0][v], a1.dofs.tangential_dof[0][v]), 0.5 * h, 1e-15);
  }
  EXPECT_EQ(slip_vertices, 15);  // end points touch the essential side walls
  EXPECT_NEAR(diff.trace(), 15 * 0.5 * h, 1e-14);
}

}  // namespace
}  // namespace sdm
