#pragma once

// Path-count bounds on E(N_p(r)) and the resulting lower bounds on the
// critical probability: 1/(8(d-1)) from the binomial comparison, and
// 1/(8(d-1) L0^2) once the rate function certifies L <= L0.

#include <cmath>
#include <stdexcept>
#include <string>

#include "entangle/chain_ldp.hpp"
#include "entangle/interval.hpp"

namespace entangle {

class DivergentParameters : public std::invalid_argument {
 public:
  explicit DivergentParameters(double b)
      : std::invalid_argument("series diverges: b = " + std::to_string(b) + " is not below 1/4") {}
};

struct ChernoffH {
  double exact;  // binomial rate of Bernoulli(1/(2d-1)) at level alpha
  double lower;  // -log 2 + log(2d-1) - (1-alpha) log(2d-2)
};

inline ChernoffH chernoff_H(double alpha, int dim) {
  if (!(alpha >= 0 && alpha <= 0.5)) throw std::invalid_argument("chernoff_H: alpha must lie in [0, 0.5]");
  if (dim < 2) throw std::invalid_argument("chernoff_H: dimension must be >= 2");
  const double n = 2.0 * dim - 1;
  const auto tlog = [](double t) { return t > 0 ? t * std::log(t) : 0.0; };
  const double exact = tlog(alpha) + tlog(1 - alpha) + alpha * std::log(n) - (1 - alpha) * std::log1p(-1.0 / n);
  const double lower = -std::log(2.0) + std::log(n) - (1 - alpha) * std::log(2.0 * dim - 2);
  return {exact, lower};
}

/// b = (2d-2)^{1 + 2/(M-2)} p.
inline double b_param(int dim, int M, double p) {
  if (M < 4 || M % 2 != 0) throw std::invalid_argument("b_param: M must be even and >= 4");
  return std::pow(2.0 * dim - 2, 1.0 + 2.0 / (M - 2)) * p;
}

/// Truncated double sum
///   sum_{m <= mMax} sum_{i < M/2} ((r+2m)/M + 1) 2^{n+1} (2d-2)^{n(1-i/M)} p^{n(1-(i+1)/M)},  n = r + 2m.
inline double expected_paths_sum(int dim, double p, int r, int M, int m_max) {
  if (r < 1 || m_max < 0) throw std::invalid_argument("expected_paths_sum: r >= 1 and mMax >= 0 required");
  const double b = b_param(dim, M, p);
  if (b >= 0.25) throw DivergentParameters(b);
  const double lg = std::log(2.0 * dim - 2), lp = std::log(p);
  double total = 0;
  for (int m = 0; m <= m_max; ++m) {
    const double n = r + 2.0 * m;
    const double weight = n / M + 1;
    for (int i = 0; i < M / 2; ++i) {
      const double p_exp = n * (1.0 - (i + 1.0) / M);
      if (p == 0 && p_exp > 0) continue;
      const double lt = (n + 1) * std::log(2.0) + n * (1.0 - static_cast<double>(i) / M) * lg +
                        (p_exp > 0 ? p_exp * lp : 0.0);
      total += weight * std::exp(lt);
    }
  }
  return total;
}

/// M used by the closed form: r for even r, r - 1 for odd r.
inline int closed_form_M(int r) { return r % 2 == 0 ? r : r - 1; }

/// 4/((1-b)(1-4b)) (1 + (1+4b)/((r-1)(1-4b))) (2 sqrt b)^r with b = b_param(d, M, p).
///
/// Summing b^{-n(i+1)/M} over i < M/2 gives at most b^{-n/2}/(1-b), since
/// n/M >= 1; this is what makes the expression dominate expected_paths_sum.
inline double expected_paths_closed(int dim, double p, int r) {
  if (r < 4) throw std::invalid_argument("expected_paths_closed: r must be >= 4");
  const double b = b_param(dim, closed_form_M(r), p);
  if (b >= 0.25) throw DivergentParameters(b);
  const double pre = 4.0 / ((1 - b) * (1 - 4 * b));
  return pre * (1 + (1 + 4 * b) / ((r - 1) * (1 - 4 * b))) * std::pow(2 * std::sqrt(b), r);
}

/// Smallest r for which the closed form applies at (d, p), or -1 when
/// p >= 1/(8(d-1)).
inline int closed_form_min_r(int dim, double p, int r_limit = 1 << 20) {
  for (int r = 4; r <= r_limit; ++r) {
    if (b_param(dim, closed_form_M(r), p) < 0.25) return r;
  }
  return -1;
}

/// 1/(8(d-1)).
inline Rational theorem1_bound(int dim) {
  if (dim < 3) throw std::invalid_argument("theorem1_bound: dimension must be >= 3");
  return Rational{1, 8L * (dim - 1)};
}

/// Lower end of an enclosure of 1/(8(d-1) L0^2).
inline double final_bound(int dim, double l0) {
  if (!(l0 > 0 && l0 <= 1)) throw std::invalid_argument("final_bound: L0 must lie in (0, 1]");
  if (dim < 3) throw std::invalid_argument("final_bound: dimension must be >= 3");
  const Interval l(l0);
  return (Interval(1.0) / (Interval(8.0 * (dim - 1)) * l * l)).lo;
}

/// Lower end of exp(2 sigma)/(2d-1)^2. Exploratory: its validity rests on L
/// being attained at alpha = 0.5, which is not proved.
inline double conjecture_value(int dim, double sigma_lower) {
  const Interval n(2.0 * dim - 1);
  return (exp_enclosure(2.0 * sigma_lower) / (n * n)).lo;
}

/// (2d-1) exp(-sigma)/(2 sqrt(2d-2)): the limit of L for an infinitely fine
/// schedule, if the maximum sits at alpha = 0.5.
inline Interval limiting_L(int dim, double sigma_lower) {
  const Interval g(2.0 * dim - 2);
  return Interval(2.0 * dim - 1) * exp(-Interval(sigma_lower)) / (Interval(2.0) * pow(g, Interval(0.5)));
}

}  // namespace entangle
