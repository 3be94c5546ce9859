#include <gtest/gtest.h>

#include <cmath>

#include "entangle/perc_sim.hpp"

using namespace entangle;

TEST(Percolation, EdgeStatesArePureFunctions) {
  const BondConfiguration a(3, 0.3, 5), b(3, 0.3, 5), c(3, 0.3, 6);
  int open = 0, differ = 0;
  for (int i = 0; i < 20000; ++i) {
    const LatticeEdge e{LatticePoint{i % 37 - 18, i / 37 % 23 - 11, i / 851 - 12}, static_cast<std::size_t>(i % 3)};
    EXPECT_EQ(a.is_open(e), b.is_open(e));
    open += a.is_open(e);
    differ += a.is_open(e) != c.is_open(e);
  }
  EXPECT_NEAR(open / 20000.0, 0.3, 0.02);
  EXPECT_GT(differ, 1000);
  const LatticePoint u{1, 2, 3}, v{1, 3, 3};
  EXPECT_EQ(a.is_open(u, v), a.is_open(v, u));
  EXPECT_THROW(BondConfiguration(3, 1.5, 0), std::invalid_argument);
}

TEST(Percolation, ClosureExtremes) {
  const ClosureResult none = good_closure(BondConfiguration(3, 0.0, 1));
  EXPECT_EQ(none.status, ClosureStatus::Finite);
  EXPECT_EQ(none.k.size(), 1u);
  EXPECT_EQ(none.radius, 0);
  const ClosureResult all = good_closure(BondConfiguration(3, 1.0, 1), 1000);
  EXPECT_EQ(all.status, ClosureStatus::CapExceeded);
  EXPECT_THROW(radius_of(PointSet{}), EmptySet);
}

TEST(Percolation, ClosureIsDescendingAndClosedUnderGoodSteps) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const BondConfiguration cfg(3, 0.12, s);
    const ClosureResult r = good_closure(cfg);
    ASSERT_EQ(r.status, ClosureStatus::Finite);
    EXPECT_TRUE(is_descending_set(r.k, 3));
    EXPECT_EQ(r.radius, radius(r.k));
    for (const auto& x : r.k) {
      for (const auto& st : unit_steps(3)) {
        const LatticePoint y = x + st;
        if (cfg.is_open(x, y)) {
          EXPECT_TRUE(r.k.count(y));
        }
      }
    }
  }
}

TEST(Percolation, WilsonInterval) {
  const auto [lo, hi] = wilson_interval(50, 100);
  EXPECT_NEAR(lo, 0.4038, 1e-4);
  EXPECT_NEAR(hi, 0.5962, 1e-4);
  EXPECT_EQ(wilson_interval(0, 100).first, 0.0);
  EXPECT_EQ(wilson_interval(100, 100).second, 1.0);
}

TEST(Percolation, TailTableIsMonotoneAndReproducible) {
  const TailTable a = tail_estimate(3, 0.05, 3000, 10, 100000, 3, 1);
  const TailTable b = tail_estimate(3, 0.05, 3000, 10, 100000, 3, 2);
  ASSERT_EQ(a.rows.size(), 11u);
  EXPECT_EQ(a.rows[0].count, 3000u);
  for (int r = 0; r <= 10; ++r) {
    EXPECT_EQ(a.rows[r].count, b.rows[r].count);
    if (r) {
      EXPECT_LE(a.rows[r].count, a.rows[r - 1].count);
    }
    EXPECT_LE(a.rows[r].ci_low, a.rows[r].probability);
    EXPECT_GE(a.rows[r].ci_high, a.rows[r].probability);
  }
}

TEST(Percolation, SlopeFitRecoversExponent) {
  TailTable t;
  t.trials = 1000000;
  for (int r = 0; r <= 8; ++r) {
    TailRow row;
    row.r = r;
    row.probability = std::pow(0.3, r);
    row.count = static_cast<std::uint64_t>(row.probability * 1e6);
    row.probability = row.count / 1e6;
    t.rows.push_back(row);
  }
  EXPECT_NEAR(fit_log_slope(t, 1, 8).slope, std::log(0.3), 0.02);
  EXPECT_THROW(fit_log_slope(t, 20, 30), std::invalid_argument);
}
