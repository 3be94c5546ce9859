#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "entangle/lattice.hpp"
#include "entangle/point_io.hpp"

using namespace entangle;

namespace {

// Broken line of x by walking coordinates from the last to the first.
std::vector<LatticePoint> broken_line(LatticePoint x) {
  std::vector<LatticePoint> out{x};
  for (std::size_t i = x.dim(); i-- > 0;) {
    while (x[i] != 0) {
      x[i] -= x[i] > 0 ? 1 : -1;
      out.push_back(x);
    }
  }
  return out;
}

std::vector<LatticePoint> box_points(std::size_t dim, int r) {
  std::vector<LatticePoint> out;
  std::vector<int> c(dim, -r);
  while (true) {
    out.emplace_back(c);
    std::size_t j = 0;
    while (j < dim && c[j] == r) c[j++] = -r;
    if (j == dim) break;
    ++c[j];
  }
  return out;
}

}  // namespace

TEST(Lattice, DescendingStepAndLastNonnull) {
  EXPECT_EQ(last_nonnull(LatticePoint{3, 0, -2}), 3u);
  EXPECT_EQ(last_nonnull(LatticePoint{3, 1, 0}), 2u);
  EXPECT_THROW(last_nonnull(LatticePoint{0, 0}), ZeroPoint);
  EXPECT_EQ((LatticePoint{3, 0, -2} + descending_step(LatticePoint{3, 0, -2})), (LatticePoint{3, 0, -1}));
  EXPECT_EQ((LatticePoint{-1, 0} + descending_step(LatticePoint{-1, 0})), (LatticePoint{0, 0}));
}

TEST(Lattice, PrecedesMatchesBrokenLine) {
  for (std::size_t d : {2u, 3u}) {
    const auto pts = box_points(d, 2);
    for (const auto& x : pts) {
      const auto line = broken_line(x);
      for (const auto& y : pts) {
        const bool on = std::find(line.begin(), line.end(), y) != line.end();
        EXPECT_EQ(precedes(y, x), on);
      }
    }
  }
}

TEST(Lattice, StepClassification) {
  // Each non-origin point has exactly one descending step and every
  // neighbour pointing back along a descending step is ascending.
  for (const auto& x : box_points(3, 2)) {
    int desc = 0;
    for (const auto& s : unit_steps(3)) {
      const auto c = classify_step(x, s);
      desc += c == StepClass::Descending;
      const LatticePoint y = x + s;
      const bool asc = !y.is_zero() && y + descending_step(y) == x;
      EXPECT_EQ(c == StepClass::Ascending, asc);
    }
    EXPECT_EQ(desc, x.is_zero() ? 0 : 1);
  }
}

TEST(Lattice, ClosureIsSmallestDescendingSet) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> c(-4, 4);
  for (int t = 0; t < 200; ++t) {
    PointSet s;
    for (int i = 0; i < 5; ++i) s.insert(LatticePoint{c(rng), c(rng), c(rng)});
    const PointSet k = descending_closure(s, 3);
    EXPECT_TRUE(is_descending_set(k, 3));
    PointSet expect{LatticePoint(3)};
    for (const auto& x : s) {
      for (const auto& y : broken_line(x)) expect.insert(y);
    }
    EXPECT_EQ(k, expect);
  }
}

TEST(Lattice, BoundaryEdgesBruteForce) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    const PointSet k = random_descending_set(3, 1 + rng() % 20, rng);
    ASSERT_TRUE(is_descending_set(k, 3));
    const long r = radius(k) + 1;
    EdgeSet expect;
    for (const auto& u : box_points(3, static_cast<int>(r))) {
      for (std::size_t a = 0; a < 3; ++a) {
        const LatticePoint v = u + UnitStep{a, +1};
        if (k.count(u) != k.count(v)) expect.insert(LatticeEdge{u, a});
      }
    }
    EXPECT_EQ(boundary_edges(k, 3), expect);
  }
  EXPECT_THROW(boundary_edges(PointSet{LatticePoint{0, 0}, LatticePoint{1, 1}}, 2), NotDescending);
  EXPECT_EQ(boundary_edges(PointSet{LatticePoint{0, 0, 0}}, 3).size(), 6u);
}

TEST(Lattice, EdgeCanonicalForm) {
  const LatticePoint u{1, 2}, v{1, 3};
  EXPECT_EQ(LatticeEdge::between(u, v), LatticeEdge::between(v, u));
  EXPECT_EQ(LatticeEdge::between(v, u).base, u);
  EXPECT_THROW(LatticeEdge::between(u, u), std::invalid_argument);
  EXPECT_THROW(LatticeEdge::between(u, LatticePoint{1, 2, 0}), DimensionMismatch);
}

TEST(PointIo, RoundTripAndErrors) {
  std::stringstream ss;
  write_point(ss, LatticePoint{1, -2, 3});
  ss << "# comment\n\n0 0 0\n";
  const PointList pl = read_points(ss);
  EXPECT_EQ(pl.dim, 3u);
  ASSERT_EQ(pl.points.size(), 2u);
  EXPECT_EQ(pl.points[0], (LatticePoint{1, -2, 3}));
  std::stringstream bad("1 2\n1 2 3\n");
  EXPECT_THROW(read_points(bad), DimensionMismatch);
  std::stringstream junk("1 x\n");
  EXPECT_THROW(read_points(junk), std::runtime_error);
}
