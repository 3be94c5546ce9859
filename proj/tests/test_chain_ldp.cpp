#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "entangle/branch_bound.hpp"
#include "entangle/chain_ldp.hpp"

using namespace entangle;

namespace {

// sum_ij q_ij log(q_ij / (q1(i) pi_ij)) straight from the 3x3 matrices.
double raw_entropy(double x, double b, double c, double alpha, int d) {
  const QParams q = QParams::from_xbc(x, b, c, alpha);
  const auto m = q.matrix();
  const TransitionMatrix pi = transition_matrix(d);
  double s = 0;
  for (int i = 0; i < 3; ++i) {
    const double row = m[i][0] + m[i][1] + m[i][2];
    for (int j = 0; j < 3; ++j) {
      if (m[i][j] > 0) s += m[i][j] * std::log(m[i][j] / (row * pi(static_cast<ChainState>(i), static_cast<ChainState>(j))));
    }
  }
  return s;
}

std::array<double, 3> interior_point(double alpha, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  for (;;) {
    const double x = alpha * u(rng), s = 1 - alpha - x;
    const double b = 0.5 * s * u(rng), c = s * u(rng);
    const QParams q = QParams::from_xbc(x, b, c, alpha);
    if (std::min({q.a, b, c, x, alpha - x}) > 1e-3) return {x, b, c};
  }
}

}  // namespace

TEST(Chain, TransitionRowsSumToOne) {
  for (int d = 2; d <= 6; ++d) {
    const TransitionMatrix pi = transition_matrix(d);
    for (ChainState i : {W1, W2, W3}) {
      EXPECT_NEAR(pi(i, W1) + pi(i, W2) + pi(i, W3), 1.0, 1e-15);
    }
    EXPECT_DOUBLE_EQ(pi(W3, W2), 0.0);
    EXPECT_DOUBLE_EQ(pi(W2, W3), 0.0);
  }
}

TEST(Chain, EntropyMatchesRawSum) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.01, 0.5);
  for (int t = 0; t < 5000; ++t) {
    const int d = 3 + t % 4;
    const double alpha = u(rng);
    const auto p = interior_point(alpha, rng);
    EXPECT_NEAR(entropy(p[0], p[1], p[2], alpha, d), raw_entropy(p[0], p[1], p[2], alpha, d), 1e-12);
  }
}

TEST(Chain, EntropyIsNonnegativeAndZeroAtStationaryPairs) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 2000; ++t) {
    const double alpha = 0.05 + 0.4 * (t % 10) / 10.0;
    const auto p = interior_point(alpha, rng);
    EXPECT_GE(entropy(p[0], p[1], p[2], alpha, 3), -1e-15);
  }
}

TEST(Chain, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 1000; ++t) {
    const int d = 3 + t % 3;
    const double alpha = 0.05 + 0.45 * (t % 97) / 97.0;
    const auto p = interior_point(alpha, rng);
    const auto g = entropy_gradient(QParams::from_xbc(p[0], p[1], p[2], alpha), d);
    for (int k = 0; k < 3; ++k) {
      auto pp = p, pm = p;
      pp[k] += 1e-6;
      pm[k] -= 1e-6;
      const double fd = (entropy(pp[0], pp[1], pp[2], alpha, d) - entropy(pm[0], pm[1], pm[2], alpha, d)) / 2e-6;
      EXPECT_NEAR(fd, g[k], 1e-6 * std::max(1.0, std::abs(g[k])));
    }
  }
}

TEST(Chain, HessianMatchesGradientDifferences) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 200; ++t) {
    const double alpha = 0.3;
    const auto p = interior_point(alpha, rng);
    const auto h = entropy_hessian(QParams::from_xbc(p[0], p[1], p[2], alpha));
    for (int k = 0; k < 3; ++k) {
      auto pp = p, pm = p;
      pp[k] += 1e-6;
      pm[k] -= 1e-6;
      const auto gp = entropy_gradient(QParams::from_xbc(pp[0], pp[1], pp[2], alpha), 3);
      const auto gm = entropy_gradient(QParams::from_xbc(pm[0], pm[1], pm[2], alpha), 3);
      for (int j = 0; j < 3; ++j) EXPECT_NEAR((gp[j] - gm[j]) / 2e-6, h[j][k], 1e-4 * std::max(1.0, std::abs(h[j][k])));
    }
  }
}

TEST(Chain, FeasibilityAndBoundary) {
  EXPECT_THROW(entropy(0.3, 0.1, 0.1, 0.2, 3), InfeasibleQ);   // x > alpha
  EXPECT_THROW(entropy(0.1, 0.4, 0.3, 0.5, 3), InfeasibleQ);   // a < 0
  EXPECT_THROW(entropy(0.1, 0.1, 0.1, 0.6, 3), InfeasibleQ);   // alpha > 0.5
  EXPECT_NO_THROW(entropy(0.0, 0.0, 0.0, 0.5, 3));
  EXPECT_THROW(entropy_gradient(QParams::from_xbc(0.0, 0.1, 0.1, 0.3), 3), BoundaryPoint);
}

TEST(Chain, CandidateMinimumAtHalf) {
  const CandidateMinimum m = candidate_minimum(3, 0.5);
  EXPECT_NEAR(m.value, 0.2485777026, 1e-9);
  EXPECT_NEAR(m.q.x, 0.24582, 1e-4);
  EXPECT_NEAR(m.q.b, 0.035321, 1e-5);
  EXPECT_NEAR(m.q.c, 0.005248, 1e-5);
  EXPECT_NEAR(entropy(0.24582, 0.035321, 0.005248, 0.5, 3), 0.2485777026, 1e-9);
}

TEST(BranchBound, ProvesBelowAndFailsAboveTheMinimum) {
  const double m = candidate_minimum(3, 0.4).value;
  const SigmaCertificate ok = certify_sigma(3, 0.4, m - 1e-6);
  EXPECT_EQ(ok.verdict, Verdict::Proven);
  EXPECT_GT(ok.nodes, 0u);
  const SigmaCertificate bad = certify_sigma(3, 0.4, m + 1e-6);
  ASSERT_EQ(bad.verdict, Verdict::Failed);
  ASSERT_TRUE(bad.witness.has_value());
  const auto& w = *bad.witness;
  EXPECT_LT(entropy(w[0], w[1], w[2], 0.4, 3), m + 1e-6);
}

TEST(BranchBound, BudgetExceeded) {
  BranchBoundOptions opt;
  opt.node_budget = 10;
  EXPECT_EQ(certify_sigma(3, 0.5, 0.2485777, opt).verdict, Verdict::BudgetExceeded);
}

TEST(BranchBound, BlockLowerBoundsAreBelowSampledValues) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(0, 1);
  const double alpha = 0.35;
  for (int t = 0; t < 300; ++t) {
    const auto p = interior_point(alpha, rng);
    const double w = 1e-3 * u(rng) + 1e-6;
    ParamBox box{Interval(std::max(0.0, p[0] - w), p[0] + w), Interval(std::max(0.0, p[1] - w), p[1] + w),
                 Interval(std::max(0.0, p[2] - w), p[2] + w), 0};
    for (BoundMethod m : {BoundMethod::Monotone, BoundMethod::FirstOrder, BoundMethod::SecondOrder}) {
      double lb;
      try {
        lb = box_lower_bound(box, 3, alpha, m);
      } catch (const std::exception&) {
        continue;
      }
      for (int s = 0; s < 20; ++s) {
        const double x = box.x.lo + (box.x.hi - box.x.lo) * u(rng);
        const double b = box.b.lo + (box.b.hi - box.b.lo) * u(rng);
        const double c = box.c.lo + (box.c.hi - box.c.lo) * u(rng);
        const QParams q = QParams::from_xbc(x, b, c, alpha);
        if (q.a < 0 || x > alpha) continue;
        EXPECT_LE(lb, entropy(x, b, c, alpha, 3));
      }
    }
  }
}

TEST(BranchBound, SharedPartitionAgreesWithIndependentRuns) {
  SharedPartition part(ParamBox::covering(0.3, 0.5));
  for (double alpha : {0.5, 0.4, 0.3}) {
    const double th = next_down(candidate_minimum(3, alpha).value - 1e-7);
    EXPECT_EQ(part.certify(3, alpha, th).verdict, Verdict::Proven);
    EXPECT_EQ(certify_sigma(3, alpha, th).verdict, Verdict::Proven);
  }
}
