#pragma once

// Outward-rounded interval arithmetic on doubles.
//
// Every elementary operation is evaluated in round-to-nearest and then pushed
// one ulp outward, which encloses the exact result of a correctly rounded
// IEEE operation. log and exp are evaluated from argument-reduced series whose
// truncation error is bounded explicitly, so no enclosure depends on the
// accuracy of the platform libm.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace entangle {

inline double next_up(double v) {
  if (!(v < std::numeric_limits<double>::infinity())) return v;  // +inf, NaN
  if (v == 0.0) return std::numeric_limits<double>::denorm_min();
  auto bits = std::bit_cast<std::uint64_t>(v);
  bits += v > 0 ? 1 : -1;
  return std::bit_cast<double>(bits);
}

inline double next_down(double v) { return -next_up(-v); }

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr explicit Interval(double v) : lo(v), hi(v) {}
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool is_empty() const { return !(lo <= hi); }

  static constexpr Interval entire() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
};

inline std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << '[' << x.lo << ", " << x.hi << ']';
}

inline Interval operator+(const Interval& a, const Interval& b) {
  return {next_down(a.lo + b.lo), next_up(a.hi + b.hi)};
}

inline Interval operator-(const Interval& a, const Interval& b) {
  return {next_down(a.lo - b.hi), next_up(a.hi - b.lo)};
}

inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

inline Interval operator*(const Interval& a, const Interval& b) {
  if (a.lo >= 0 && b.lo >= 0) return {next_down(a.lo * b.lo), next_up(a.hi * b.hi)};
  const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {next_down(std::min(std::min(p1, p2), std::min(p3, p4))),
          next_up(std::max(std::max(p1, p2), std::max(p3, p4)))};
}

inline Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo <= 0 && b.hi >= 0) return Interval::entire();
  const double q1 = a.lo / b.lo, q2 = a.lo / b.hi, q3 = a.hi / b.lo, q4 = a.hi / b.hi;
  return {next_down(std::min(std::min(q1, q2), std::min(q3, q4))),
          next_up(std::max(std::max(q1, q2), std::max(q3, q4)))};
}

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }

inline Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval clamp_nonnegative(const Interval& a) { return {std::max(a.lo, 0.0), a.hi}; }

namespace detail {

// ln 2 = 0.693147180559945309417232...; 0x1.62e42fefa39efp-1 lies just below it.
inline constexpr double kLn2Lo = 0x1.62e42fefa39efp-1;
inline constexpr double kLn2Hi = 0x1.62e42fefa39f0p-1;

inline constexpr int kLogTerms = 13;  // atanh series: sum_{k<13} t^k/(2k+1)
inline constexpr int kExpTerms = 22;  // Taylor degree for exp on |r| <= ln2/2 + slack

struct SeriesCoefficients {
  std::array<double, kLogTerms> log_lo{}, log_hi{};
  std::array<double, kExpTerms + 1> exp_lo{}, exp_hi{};

  SeriesCoefficients() {
    for (int k = 0; k < kLogTerms; ++k) {
      const double c = 1.0 / (2 * k + 1);
      log_lo[k] = next_down(c);
      log_hi[k] = next_up(c);
    }
    // 1/j! by repeated outward division.
    exp_lo[0] = exp_hi[0] = 1.0;
    for (int j = 1; j <= kExpTerms; ++j) {
      exp_lo[j] = next_down(exp_lo[j - 1] / j);
      exp_hi[j] = next_up(exp_hi[j - 1] / j);
    }
  }
};

inline const SeriesCoefficients& coefficients() {
  static const SeriesCoefficients c;
  return c;
}

}  // namespace detail

inline Interval ln2() { return {detail::kLn2Lo, detail::kLn2Hi}; }

/// Enclosure of log(v) for a positive finite double v.
///
/// v = m 2^e with m in [1/sqrt2, sqrt2); log m = 2 atanh(s), s = (m-1)/(m+1),
/// |s| <= 0.1716, expanded as 2 s sum t^k/(2k+1) with t = s^2. The tail past
/// kLogTerms terms is at most t^K/((2K+1)(1-t)), which is added to the upper end.
inline Interval log_enclosure(double v) {
  if (!(v > 0) || !std::isfinite(v)) throw std::domain_error("log_enclosure: argument must be positive and finite");
  if (v == 1.0) return Interval(0.0);
  int e = 0;
  double m = std::frexp(v, &e);  // m in [0.5, 1)
  if (m < 0.70710678118654752) {
    m *= 2.0;
    e -= 1;
  }
  const auto& cf = detail::coefficients();
  const double num = m - 1.0;  // exact (Sterbenz)
  const Interval den{next_down(m + 1.0), next_up(m + 1.0)};
  Interval log_m(0.0);
  if (num != 0.0) {
    const Interval s = Interval(num) / den;
    const double abs_lo = num > 0 ? s.lo : -s.hi;
    const double abs_hi = num > 0 ? s.hi : -s.lo;
    const double t_lo = std::max(0.0, next_down(abs_lo * abs_lo));
    const double t_hi = next_up(abs_hi * abs_hi);
    double p_lo = cf.log_lo[detail::kLogTerms - 1];
    double p_hi = cf.log_hi[detail::kLogTerms - 1];
    for (int k = detail::kLogTerms - 2; k >= 0; --k) {
      p_lo = next_down(next_down(p_lo * t_lo) + cf.log_lo[k]);
      p_hi = next_up(next_up(p_hi * t_hi) + cf.log_hi[k]);
    }
    double tail = 1.0;
    for (int k = 0; k < detail::kLogTerms; ++k) tail = next_up(tail * t_hi);
    tail = next_up(tail / next_down((2.0 * detail::kLogTerms + 1.0) * next_down(1.0 - t_hi)));
    p_hi = next_up(p_hi + tail);
    // log m = 2 s P with s of the sign of num.
    if (num > 0) {
      log_m = {next_down(2.0 * next_down(abs_lo * p_lo)), next_up(2.0 * next_up(abs_hi * p_hi))};
    } else {
      log_m = {-next_up(2.0 * next_up(abs_hi * p_hi)), -next_down(2.0 * next_down(abs_lo * p_lo))};
    }
  }
  if (e == 0) return log_m;
  const double ed = static_cast<double>(e);
  const Interval e_ln2 = e > 0 ? Interval{next_down(ed * detail::kLn2Lo), next_up(ed * detail::kLn2Hi)}
                               : Interval{next_down(ed * detail::kLn2Hi), next_up(ed * detail::kLn2Lo)};
  return e_ln2 + log_m;
}

/// Enclosure of log over an interval; a non-positive lower end maps to -inf.
inline Interval log(const Interval& x) {
  if (!(x.hi > 0)) throw std::domain_error("log of a non-positive interval");
  const double lo = x.lo > 0 ? log_enclosure(x.lo).lo : -std::numeric_limits<double>::infinity();
  return {lo, log_enclosure(x.hi).hi};
}

/// Enclosure of exp(v) for a double v.
///
/// v = k ln2 + r with k = round(v / ln2); exp(r) by its Taylor polynomial of
/// degree kExpTerms in interval arithmetic, with the Lagrange remainder
/// |r|^{N+1} e^{|r|} / (N+1)! added symmetrically.
inline Interval exp_enclosure(double v) {
  if (std::isnan(v)) throw std::domain_error("exp_enclosure: NaN");
  if (v == 0.0) return Interval(1.0);
  if (v < -700.0) return {0.0, std::ldexp(1.0, -1000)};
  if (v > 700.0) throw std::overflow_error("exp_enclosure: argument too large");
  const double k = std::nearbyint(v / detail::kLn2Lo);
  const Interval r = Interval(v) - Interval(k) * ln2();
  const auto& cf = detail::coefficients();
  Interval p{cf.exp_lo[detail::kExpTerms], cf.exp_hi[detail::kExpTerms]};
  for (int j = detail::kExpTerms - 1; j >= 0; --j) {
    p = p * r + Interval{cf.exp_lo[j], cf.exp_hi[j]};
  }
  const double rmax = std::max(std::fabs(r.lo), std::fabs(r.hi));
  double rem = 2.0;  // e^{|r|} <= 2 for |r| <= 0.69
  for (int j = 0; j <= detail::kExpTerms; ++j) rem = next_up(rem * rmax);
  rem = next_up(rem * cf.exp_hi[detail::kExpTerms]);
  rem = next_up(rem / (detail::kExpTerms + 1));
  p = p + Interval{-rem, rem};
  const int ki = static_cast<int>(k);
  return {std::ldexp(std::max(p.lo, 0.0), ki), std::ldexp(p.hi, ki)};
}

inline Interval exp(const Interval& x) { return {exp_enclosure(x.lo).lo, exp_enclosure(x.hi).hi}; }

/// base^power for a positive base, as exp(power * log(base)).
inline Interval pow(const Interval& base, const Interval& power) { return exp(power * log(base)); }

/// 1/e, used by the t log t range computation.
inline Interval inv_e() {
  static const Interval v = exp_enclosure(-1.0);
  return v;
}

/// Enclosure of t log t at a non-negative double t (0 log 0 = 0).
inline Interval xlogx_enclosure(double t) {
  if (t < 0) throw std::domain_error("xlogx of a negative number");
  if (t == 0.0) return Interval(0.0);
  return Interval(t) * log_enclosure(t);
}

/// Range enclosure of t log t over t in [lo, hi], lo >= 0.
///
/// t log t decreases on [0, 1/e] and increases afterwards; its minimum over a
/// range straddling 1/e is -1/e, and being convex its maximum sits at an end.
inline Interval xlogx_range(const Interval& t) {
  const Interval tt = clamp_nonnegative(t);
  const Interval at_lo = xlogx_enclosure(tt.lo);
  const Interval at_hi = xlogx_enclosure(tt.hi);
  const Interval ie = inv_e();
  double lower = 0;
  if (tt.hi <= ie.lo) {
    lower = at_hi.lo;
  } else if (tt.lo >= ie.hi) {
    lower = at_lo.lo;
  } else {
    lower = std::min({-ie.hi, at_lo.lo, at_hi.lo});
  }
  return {lower, std::max(at_lo.hi, at_hi.hi)};
}

}  // namespace entangle
