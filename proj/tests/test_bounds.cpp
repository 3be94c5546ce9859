#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "entangle/bounds.hpp"
#include "entangle/pipeline.hpp"
#include "entangle/schedule.hpp"

using namespace entangle;

TEST(Bounds, TheoremOneValues) {
  EXPECT_EQ(theorem1_bound(3).str(), "1/16");
  EXPECT_EQ(theorem1_bound(4).str(), "1/24");
  EXPECT_EQ(theorem1_bound(5).str(), "1/32");
  EXPECT_THROW(theorem1_bound(2), std::invalid_argument);
}

TEST(Bounds, ChernoffLowerIsBelowExact) {
  for (int d = 3; d <= 6; ++d) {
    for (int i = 0; i <= 50; ++i) {
      const ChernoffH h = chernoff_H(i / 100.0, d);
      EXPECT_LE(h.lower, h.exact + 1e-15);
    }
    // The exact rate vanishes at the mean 1/(2d-1).
    EXPECT_NEAR(chernoff_H(1.0 / (2 * d - 1), d).exact, 0.0, 1e-15);
  }
}

TEST(Bounds, ClosedFormDominatesSum) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int t = 0; t < 300; ++t) {
    const int d = 3 + t % 3;
    const double p = u(rng) / (8.0 * (d - 1));
    const int r = closed_form_min_r(d, p) + static_cast<int>(rng() % 30);
    const double sum = expected_paths_sum(d, p, r, closed_form_M(r), 3000);
    EXPECT_GE(expected_paths_closed(d, p, r), sum) << d << ' ' << p << ' ' << r;
  }
  // A case computed independently: the truncated sum at (3, 0.05, 20) is about 35.35.
  EXPECT_NEAR(expected_paths_sum(3, 0.05, 20, 20, 5000), 35.35, 0.01);
}

TEST(Bounds, ClosedFormDecreasesInR) {
  const int r0 = closed_form_min_r(3, 0.05);
  for (int r = r0 + 2; r < 200; r += 2) EXPECT_LT(expected_paths_closed(3, 0.05, r), expected_paths_closed(3, 0.05, r - 2));
}

TEST(Bounds, Divergence) {
  EXPECT_THROW(expected_paths_sum(3, 0.07, 20, 20, 10), DivergentParameters);
  EXPECT_EQ(closed_form_min_r(3, 1.0 / 16), -1);
  EXPECT_THROW(b_param(3, 5, 0.01), std::invalid_argument);
  EXPECT_THROW(expected_paths_closed(3, 0.01, 3), std::invalid_argument);
}

TEST(Bounds, FinalAndConjectureValues) {
  EXPECT_LE(final_bound(3, 1.0), 1.0 / 16);
  EXPECT_NEAR(final_bound(3, 0.974886571911), 0.065761519632, 1e-11);
  EXPECT_LE(final_bound(3, 0.974886571911), 1.0 / (16 * 0.974886571911 * 0.974886571911));
  EXPECT_NEAR(conjecture_value(3, 0.24857770256), std::exp(2 * 0.24857770256) / 25, 1e-14);
  EXPECT_THROW(final_bound(3, 1.5), std::invalid_argument);
}

TEST(Schedule, Validation) {
  EXPECT_NO_THROW(AlphaSchedule({0.0, 0.3, 0.5}));
  EXPECT_THROW(AlphaSchedule({0.1, 0.3, 0.5}), InvalidSchedule);
  EXPECT_THROW(AlphaSchedule({0.0, 0.3, 0.4}), InvalidSchedule);
  EXPECT_THROW(AlphaSchedule({0.0, 0.3, 0.3, 0.5}), InvalidSchedule);
}

TEST(Schedule, RoundTripKeepsHash) {
  const AlphaSchedule s = geometric_schedule(0.31, 40, 1e-6);
  std::stringstream ss;
  write_schedule(ss, s);
  const AlphaSchedule t = read_schedule(ss);
  EXPECT_EQ(s.values(), t.values());
  EXPECT_EQ(s.hash_hex(), t.hash_hex());
  EXPECT_NE(s.hash_hex(), geometric_schedule(0.31, 41, 1e-6).hash_hex());
}

TEST(Schedule, GreedyAndBackward) {
  const double l0 = 0.975;
  const AlphaSchedule g = greedy_schedule(3, l0, 1e-5);
  EXPECT_GE(base_case_margin(3, g[1], l0), 0.0);
  EXPECT_DOUBLE_EQ(g[g.k()], 0.5);
  const AlphaSchedule p = backward_schedule();
  EXPECT_DOUBLE_EQ(p[1], 0.32);
  EXPECT_GT(p.k(), 1000u);
}

TEST(Schedule, ThresholdAndComputeLAgree) {
  // With sigma lower ends exactly at the thresholds, L comes out at L0.
  const AlphaSchedule s({0.0, 0.3, 0.4, 0.5});
  const double l0 = 0.99;
  std::vector<double> sig;
  for (std::size_t i = 2; i <= s.k(); ++i) sig.push_back(schedule_threshold(3, s[i], l0).hi);
  const Interval l = compute_L(3, s, sig);
  EXPECT_NEAR(l.hi, l0, 1e-13);
  EXPECT_THROW(compute_L(3, s, {0.1}), MissingCertificate);
}

TEST(Schedule, SmallCertification) {
  const AlphaSchedule s = greedy_schedule(3, 0.985, 1e-3);
  ScheduleOptions opt;
  const ScheduleVerdict v = certify_schedule(3, s, 0.985, opt);
  EXPECT_TRUE(v.base_case);
  EXPECT_EQ(v.verdict(), Verdict::Proven);
  ASSERT_EQ(v.certificates.size(), s.k() - 1);
  EXPECT_DOUBLE_EQ(v.certificates[0].alpha, s[1]);
  opt.shared_partition = true;
  EXPECT_EQ(certify_schedule(3, s, 0.985, opt).verdict(), Verdict::Proven);
  // Below the limiting value of L no schedule can work.
  const ScheduleVerdict low = certify_schedule(3, s, 0.97, opt);
  EXPECT_EQ(low.verdict(), Verdict::Failed);
}
