#include <gtest/gtest.h>
#include <mpfr.h>

#include <cmath>
#include <random>

#include "entangle/interval.hpp"

using namespace entangle;

namespace {

// lo <= f(v) <= hi with f evaluated by MPFR at 256 bits.
class Mp {
 public:
  Mp() { mpfr_init2(v_, 256); }
  ~Mp() { mpfr_clear(v_); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
  mpfr_t& get() { return v_; }
  bool inside(const Interval& x) { return mpfr_cmp_d(v_, x.lo) >= 0 && mpfr_cmp_d(v_, x.hi) <= 0; }

 private:
  mpfr_t v_;
};

bool log_contains(double v, const Interval& x) {
  Mp m;
  mpfr_set_d(m.get(), v, MPFR_RNDN);
  mpfr_log(m.get(), m.get(), MPFR_RNDN);
  return m.inside(x);
}

bool exp_contains(double v, const Interval& x) {
  Mp m;
  mpfr_set_d(m.get(), v, MPFR_RNDN);
  mpfr_exp(m.get(), m.get(), MPFR_RNDN);
  return m.inside(x);
}

}  // namespace

TEST(NextUp, MatchesNextafter) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(next_up(v), std::nextafter(v, INFINITY));
    EXPECT_EQ(next_down(v), std::nextafter(v, -INFINITY));
  }
  EXPECT_EQ(next_up(0.0), std::numeric_limits<double>::denorm_min());
  EXPECT_EQ(next_up(-0.0), std::numeric_limits<double>::denorm_min());
  EXPECT_EQ(next_down(0.0), -std::numeric_limits<double>::denorm_min());
  EXPECT_EQ(next_up(INFINITY), INFINITY);
  EXPECT_EQ(next_up(-std::numeric_limits<double>::max()), std::nextafter(-std::numeric_limits<double>::max(), 0.0));
}

TEST(LogEnclosure, ContainsMpfrValue) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> e(-300, 300), m(1, 2);
  for (int i = 0; i < 20000; ++i) {
    const double v = std::ldexp(m(rng), static_cast<int>(e(rng)));
    const Interval x = log_enclosure(v);
    ASSERT_TRUE(log_contains(v, x)) << v;
    EXPECT_LT(x.hi - x.lo, 1e-13 * std::max(1.0, std::abs(x.lo)));
  }
  for (double v : {1.0, 2.0, 0.5, 0.7071067811865476, 1.0000000000000002, 0.9999999999999999, 1e-308, 5e-324}) {
    EXPECT_TRUE(log_contains(v, log_enclosure(v))) << v;
  }
}

TEST(ExpEnclosure, ContainsMpfrValue) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-700, 700);
  for (int i = 0; i < 20000; ++i) {
    const double v = i % 2 ? u(rng) : u(rng) * 1e-3;
    const Interval x = exp_enclosure(v);
    ASSERT_TRUE(exp_contains(v, x)) << v;
    // The reduction v - k ln2 carries the width of the ln2 enclosure times k.
    EXPECT_LT(x.hi - x.lo, 1e-15 * (4 + std::abs(v)) * x.hi);
  }
  EXPECT_TRUE(exp_contains(0.0, exp_enclosure(0.0)));
}

TEST(IntervalArithmetic, ProductAndQuotientContainExactValues) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 10000; ++i) {
    const double a = u(rng), b = u(rng);
    Mp m;
    mpfr_set_d(m.get(), a, MPFR_RNDN);
    mpfr_mul_d(m.get(), m.get(), b, MPFR_RNDN);
    EXPECT_TRUE(m.inside(Interval(a) * Interval(b)));
    if (std::abs(b) > 1e-3) {
      mpfr_set_d(m.get(), a, MPFR_RNDN);
      mpfr_div_d(m.get(), m.get(), b, MPFR_RNDN);
      EXPECT_TRUE(m.inside(Interval(a) / Interval(b)));
    }
    mpfr_set_d(m.get(), a, MPFR_RNDN);
    mpfr_add_d(m.get(), m.get(), b, MPFR_RNDN);
    EXPECT_TRUE(m.inside(Interval(a) + Interval(b)));
  }
}

TEST(IntervalArithmetic, XlogxRangeCoversSamples) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 2000; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const Interval r = xlogx_range(Interval(a, b));
    for (int k = 0; k <= 20; ++k) {
      const double t = a + (b - a) * k / 20.0;
      const double v = t > 0 ? t * std::log(t) : 0.0;
      EXPECT_LE(r.lo, v + 1e-15);
      EXPECT_GE(r.hi, v - 1e-15);
    }
  }
}
