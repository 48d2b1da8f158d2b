#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "sdmortar/geometry.hpp"

namespace sdm {
namespace {

TEST(TensorGrid, RejectsNonIncreasingCoordinates) {
  EXPECT_THROW(TensorGrid({0.0, 0.5, 0.5, 1.0}, {0.0, 1.0}), GeometryError);
  EXPECT_THROW(TensorGrid({0.0, 1.0, 0.5}, {0.0, 1.0}), GeometryError);
}

TEST(TensorGrid, RejectsDisconnectedMask) {
  // two active cells touching only at a corner
  EXPECT_THROW(TensorGrid({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}, {1, 0, 0, 1}), GeometryError);
  EXPECT_NO_THROW(TensorGrid({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}, {1, 1, 0, 1}));
}

TEST(TensorGrid, RefinementDoublesCountsAndKeepsArea) {
  std::vector<char> mask(4 * 3, 1);
  mask[1] = 0;
  mask[2] = 0;
  const TensorGrid g(graded_breaks(0.0, 1.0, 4, 0.7), {0.0, 0.1, 0.3, 0.35}, mask);
  const TensorGrid r = g.refined();
  EXPECT_EQ(r.nx(), 2 * g.nx());
  EXPECT_EQ(r.ny(), 2 * g.ny());
  EXPECT_EQ(r.num_active(), 4 * g.num_active());
  EXPECT_NEAR(r.active_area(), g.active_area(), 1e-15);
}

TEST(GradedBreaks, GeometricGrowth) {
  const auto b = graded_breaks(0.0, 0.25, 8, 0.85);
  ASSERT_EQ(b.size(), 9u);
  EXPECT_DOUBLE_EQ(b.front(), 0.0);
  EXPECT_DOUBLE_EQ(b.back(), 0.25);
  for (int k = 1; k + 1 < 9; ++k) EXPECT_NEAR((b[k + 1] - b[k]) / (b[k] - b[k - 1]), 0.85, 1e-12);
}

TEST(StaggeredGeometry, TwoByTwoHasSixHorizontalVelocities) {
  const StaggeredGeometry g(uniform_grid(0.0, 1.0, 2, 0.0, 1.0, 2));
  EXPECT_EQ(g.faces(Axis::x).size(), 6u);
  EXPECT_EQ(g.faces(Axis::y).size(), 6u);
  for (const auto& f : g.faces(Axis::x)) EXPECT_GT(f.length, 0.0);
}

TEST(StaggeredGeometry, SingleCell) {
  const StaggeredGeometry g(uniform_grid(0.0, 1.0, 1, 0.0, 1.0, 1));
  EXPECT_EQ(g.faces(Axis::x).size() + g.faces(Axis::y).size(), 4u);
  EXPECT_EQ(g.primal().num_active(), 1);
  for (Axis a : {Axis::x, Axis::y})
    for (const auto& f : g.faces(a)) {
      EXPECT_TRUE(f.on_boundary());
      EXPECT_DOUBLE_EQ(f.cv_area, 0.5);
    }
}

TEST(StaggeredGeometry, ControlVolumesTileTheDomain) {
  const StaggeredGeometry g(uniform_grid(0.0, 1.0, 16, 0.5, 1.0, 16));
  for (Axis a : {Axis::x, Axis::y}) {
    double sum = 0.0;
    for (const auto& f : g.faces(a)) sum += f.cv_area;
    EXPECT_NEAR(sum, 0.5, 1e-12);
    EXPECT_NEAR(g.control_volume_total(a), 0.5, 1e-12);
  }
}

TEST(StaggeredGeometry, ControlVolumesTileMaskedGradedDomain) {
  std::vector<double> x = graded_breaks(0.0, 0.4, 5, 0.8);
  const auto x2 = linspace(0.4, 1.0, 4);
  x.insert(x.end(), x2.begin() + 1, x2.end());
  const std::vector<double> y = graded_breaks(0.0, 0.5, 6, 0.9);
  std::vector<char> mask((x.size() - 1) * (y.size() - 1), 1);
  const int nx = static_cast<int>(x.size()) - 1;
  for (int j = 0; j < 3; ++j)
    for (int i = 5; i < nx; ++i) mask[j * nx + i] = 0;
  const StaggeredGeometry g(TensorGrid(x, y, mask));
  for (Axis a : {Axis::x, Axis::y}) EXPECT_NEAR(g.control_volume_total(a), g.primal().active_area(), 1e-12);
}

TEST(StaggeredGeometry, InteriorFullBoundaryHalf) {
  const double h = 0.25;
  const StaggeredGeometry g(uniform_grid(0.0, 1.0, 4, 0.0, 1.0, 4));
  for (Axis a : {Axis::x, Axis::y})
    for (const auto& f : g.faces(a)) EXPECT_NEAR(f.cv_area, f.on_boundary() ? 0.5 * h * h : h * h, 1e-15);
}

TEST(StaggeredGeometry, DiagonalOnlyVertexIsReported) {
  // cells (1,1) and (2,2) meet only at vertex (2,2); the region is connected around it
  const std::vector<char> mask{1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0};
  try {
    StaggeredGeometry g(TensorGrid(linspace(0.0, 4.0, 4), linspace(0.0, 4.0, 4), mask));
    FAIL() << "expected a geometry error";
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("vertex"), std::string::npos);
  }
}

TEST(BuildInterface, CaseOneGrids) {
  const TensorGrid s = uniform_grid(0.0, 1.0, 16, 0.5, 1.0, 16);
  const TensorGrid d = uniform_grid(0.0, 1.0, 15, 0.0, 0.5, 15);
  const auto iface = build_interface(s, d, MortarSpec{0, {15}});
  ASSERT_EQ(iface.segments.size(), 1u);
  const auto& seg = iface.segments[0];
  EXPECT_TRUE(seg.horizontal());
  EXPECT_DOUBLE_EQ(seg.offset, 0.5);
  EXPECT_EQ(seg.stokes_breaks.size(), 17u);
  EXPECT_EQ(seg.darcy_breaks.size(), 16u);
  EXPECT_EQ(seg.mortar_breaks.size(), 16u);
  EXPECT_EQ(seg.stokes_sign, -1);  // Stokes lies above
  EXPECT_NEAR(iface.total_length(), 1.0, 1e-15);
}

TEST(BuildInterface, MatchingGridsGiveIdenticalPartitions) {
  const TensorGrid s = uniform_grid(0.0, 1.0, 8, 1.0, 2.0, 8);
  const TensorGrid d = uniform_grid(0.0, 1.0, 8, 0.0, 1.0, 8);
  const auto seg = build_interface(s, d, MortarSpec{0, {8}}).segments.at(0);
  ASSERT_EQ(seg.stokes_breaks.size(), seg.darcy_breaks.size());
  ASSERT_EQ(seg.stokes_breaks.size(), seg.mortar_breaks.size());
  for (std::size_t k = 0; k < seg.stokes_breaks.size(); ++k) {
    EXPECT_NEAR(seg.stokes_breaks[k], seg.darcy_breaks[k], 1e-15);
    EXPECT_NEAR(seg.stokes_breaks[k], seg.mortar_breaks[k], 1e-15);
  }
}

TEST(BuildInterface, ObstacleGivesThreeSegments) {
  const std::vector<double> x = linspace(0.0, 0.75, 12);
  const std::vector<double> y{0.0, 0.05, 0.1, 0.15, 0.2, 0.25};
  std::vector<char> mask(12 * 5, 1);
  for (int j = 0; j < 4; ++j)
    for (int i = 4; i < 8; ++i) mask[j * 12 + i] = 0;
  const TensorGrid s(x, y, mask);
  const TensorGrid d = uniform_grid(0.25, 0.5, 5, 0.0, 0.2, 3);
  const auto iface = build_interface(s, d, MortarSpec{0, {3, 5, 3}});
  ASSERT_EQ(iface.segments.size(), 3u);
  EXPECT_FALSE(iface.segments[0].horizontal());
  EXPECT_TRUE(iface.segments[1].horizontal());
  EXPECT_FALSE(iface.segments[2].horizontal());
  EXPECT_DOUBLE_EQ(iface.segments[0].offset, 0.25);
  EXPECT_DOUBLE_EQ(iface.segments[1].offset, 0.2);
  EXPECT_DOUBLE_EQ(iface.segments[2].offset, 0.5);
  // outward Stokes normals: +x left of the block, -y above it, -x right of it
  EXPECT_EQ(iface.segments[0].stokes_sign, +1);
  EXPECT_EQ(iface.segments[1].stokes_sign, -1);
  EXPECT_EQ(iface.segments[2].stokes_sign, -1);
  EXPECT_NEAR(iface.total_length(), 0.2 + 0.25 + 0.2, 1e-14);
  for (const auto& seg : iface.segments) {
    EXPECT_DOUBLE_EQ(seg.stokes_breaks.front(), seg.begin);
    EXPECT_DOUBLE_EQ(seg.darcy_breaks.back(), seg.end);
    EXPECT_DOUBLE_EQ(seg.mortar_breaks.back(), seg.end);
  }
}

TEST(BuildInterface, CornerContactOnlyIsEmpty) {
  const TensorGrid s = uniform_grid(1.0, 2.0, 2, 1.0, 2.0, 2);
  const TensorGrid d = uniform_grid(0.0, 1.0, 2, 0.0, 1.0, 2);
  try {
    build_interface(s, d, MortarSpec{0, {1}});
    FAIL() << "expected an empty interface error";
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("empty interface"), std::string::npos);
  }
}

TEST(BuildInterface, PartialEdgeOverlapIsRejected) {
  const TensorGrid s = uniform_grid(0.25, 1.25, 2, 1.0, 2.0, 2);
  const TensorGrid d = uniform_grid(0.0, 1.0, 2, 0.0, 1.0, 2);
  EXPECT_THROW(build_interface(s, d, MortarSpec{0, {1}}), GeometryError);
}

TEST(MergeBreakpoints, UnionWithoutZeroLengthPieces) {
  const auto s = linspace(0.0, 1.0, 16);
  const auto d = linspace(0.0, 1.0, 15);
  const auto m = linspace(0.0, 1.0, 14);
  const auto merged = merge_breakpoints({s, d, m});
  std::set<long> keys;
  for (const auto* v : {&s, &d, &m})
    for (double t : *v) keys.insert(std::lround(t * 16 * 15 * 14));
  EXPECT_EQ(merged.size(), keys.size());
  for (std::size_t k = 1; k < merged.size(); ++k) EXPECT_GT(merged[k] - merged[k - 1], 1e-13);
  // points that differ by round-off collapse
  const auto again = merge_breakpoints({{0.0, 0.1 + 0.2, 1.0}, {0.0, 0.3, 1.0}});
  EXPECT_EQ(again.size(), 3u);
}

}  // namespace
}  // namespace sdm
