#pragma once

// Three-state chain W1 (neutral), W2 (ascending), W3 (descending) that
// dominates the step classes of a uniform immediate-self-avoiding walk, and
// the relative entropy H(q, pi) of pair-empirical matrices
//
//        | a  b  x     |
//    q = | b  c  0     |      a + 2b + c + x + alpha = 1,
//        | x  0  alpha-x |
//
// whose infimum over (x, b, c) is the large-deviation rate sigma_d(alpha).

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace entangle {

struct Rational {
  long num = 0;
  long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num * b.den == b.num * a.den; }
};

enum ChainState : int { W1 = 0, W2 = 1, W3 = 2 };

/// Row-stochastic pi(d) with denominators 2d-1.
struct TransitionMatrix {
  int dim = 3;
  std::array<std::array<Rational, 3>, 3> entries{};

  double operator()(int from, int to) const { return entries[from][to].value(); }
};

inline TransitionMatrix transition_matrix(int dim) {
  if (dim < 2) throw std::invalid_argument("transition_matrix: dimension must be >= 2");
  const long den = 2L * dim - 1;
  TransitionMatrix t;
  t.dim = dim;
  t.entries[W1] = {Rational{2L * dim - 3, den}, Rational{1, den}, Rational{1, den}};
  t.entries[W2] = {Rational{2L * dim - 2, den}, Rational{1, den}, Rational{0, den}};
  t.entries[W3] = {Rational{2L * dim - 2, den}, Rational{0, den}, Rational{1, den}};
  return t;
}

class InfeasibleQ : public std::invalid_argument {
 public:
  explicit InfeasibleQ(const std::string& what) : std::invalid_argument("infeasible q: " + what) {}
};

class BoundaryPoint : public std::domain_error {
 public:
  BoundaryPoint() : std::domain_error("gradient undefined on the boundary of the feasible region") {}
};

/// Pair-matrix parameters; a is eliminated through the mass constraint.
struct QParams {
  double a = 0, b = 0, c = 0, x = 0, alpha = 0;

  static QParams from_xbc(double x, double b, double c, double alpha) {
    return {1.0 - 2.0 * b - c - x - alpha, b, c, x, alpha};
  }

  /// Row sums q1(i).
  std::array<double, 3> row_mass() const { return {a + b + x, b + c, alpha}; }

  std::array<std::array<double, 3>, 3> matrix() const {
    return {{{a, b, x}, {b, c, 0.0}, {x, 0.0, alpha - x}}};
  }
};

inline constexpr double kFeasibilityTolerance = 1e-15;

inline void check_feasible(const QParams& q) {
  const double tol = kFeasibilityTolerance;
  if (q.alpha < 0 || q.alpha > 0.5) throw InfeasibleQ("alpha outside [0, 0.5]");
  if (q.a < -tol) throw InfeasibleQ("a = 1 - 2b - c - x - alpha is negative");
  if (q.b < -tol || q.c < -tol || q.x < -tol) throw InfeasibleQ("negative entry");
  if (q.x > q.alpha + tol) throw InfeasibleQ("x exceeds alpha");
}

namespace detail {

// t log(arg) with the convention 0 log(anything) = 0.
inline double tlog(double t, double arg) { return t <= 0 ? 0.0 : t * std::log(arg); }

}  // namespace detail

/// H(q, pi) in the expanded seven-term form.
inline double entropy(const QParams& q, int dim) {
  check_feasible(q);
  const double a = std::max(q.a, 0.0), b = std::max(q.b, 0.0), c = std::max(q.c, 0.0);
  const double x = std::max(q.x, 0.0), al = q.alpha, w = std::max(q.alpha - q.x, 0.0);
  const double n = 2.0 * dim - 1, n3 = 2.0 * dim - 3, n2 = 2.0 * dim - 2;
  const double r1 = a + b + x, r2 = b + c;
  using detail::tlog;
  return tlog(a, a * n / (n3 * r1)) + tlog(b, b * n / r1) + tlog(x, x * n / r1) +
         tlog(b, b * n / (r2 * n2)) + tlog(c, c * n / r2) + tlog(x, x * n / (al * n2)) +
         tlog(w, w * n / al);
}

inline double entropy(double x, double b, double c, double alpha, int dim) {
  return entropy(QParams::from_xbc(x, b, c, alpha), dim);
}

/// Partial derivatives of H in (x, b, c) with a eliminated.
inline std::array<double, 3> entropy_gradient(const QParams& q, int dim) {
  check_feasible(q);
  const double w = q.alpha - q.x, u = q.a + q.b + q.x, v = q.b + q.c;
  if (!(q.a > 0 && q.b > 0 && q.c > 0 && q.x > 0 && w > 0)) throw BoundaryPoint();
  const double l3 = std::log(2.0 * dim - 3), l2 = std::log(2.0 * dim - 2);
  const double la = std::log(q.a), lu = std::log(u), lv = std::log(v);
  return {-la + 2.0 * std::log(q.x) - std::log(w) + l3 - l2,
          -2.0 * la + 2.0 * std::log(q.b) + lu - lv + 2.0 * l3 - l2,
          -la + std::log(q.c) + lu - lv + l3};
}

/// Hessian in (x, b, c); symmetric.
inline std::array<std::array<double, 3>, 3> entropy_hessian(const QParams& q) {
  const double a = q.a, w = q.alpha - q.x, u = q.a + q.b + q.x, v = q.b + q.c;
  if (!(a > 0 && q.b > 0 && q.c > 0 && q.x > 0 && w > 0)) throw BoundaryPoint();
  const double hxx = 1 / a + 2 / q.x + 1 / w;
  const double hxb = 2 / a, hxc = 1 / a;
  const double hbb = 4 / a + 2 / q.b - 1 / u - 1 / v;
  const double hbc = 2 / a - 1 / u - 1 / v;
  const double hcc = 1 / a + 1 / q.c - 1 / u - 1 / v;
  return {{{hxx, hxb, hxc}, {hxb, hbb, hbc}, {hxc, hbc, hcc}}};
}

struct CandidateMinimum {
  QParams q;
  double value = std::numeric_limits<double>::infinity();
};

namespace detail {

inline bool strictly_interior(double x, double b, double c, double alpha) {
  const double a = 1.0 - 2.0 * b - c - x - alpha;
  return a > 0 && b > 0 && c > 0 && x > 0 && alpha - x > 0;
}

// Solves H s = -g by Cramer's rule; false if H is not positive definite.
inline bool newton_direction(const std::array<std::array<double, 3>, 3>& h, const std::array<double, 3>& g,
                             std::array<double, 3>& s) {
  const double m1 = h[0][0];
  const double m2 = h[0][0] * h[1][1] - h[0][1] * h[1][0];
  const double det = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) -
                     h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0]) +
                     h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
  if (!(m1 > 0 && m2 > 0 && det > 0)) return false;
  std::array<double, 3> rhs{-g[0], -g[1], -g[2]};
  for (int col = 0; col < 3; ++col) {
    auto m = h;
    for (int r = 0; r < 3; ++r) m[r][col] = rhs[r];
    const double dc = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    s[col] = dc / det;
  }
  return true;
}

// Damped Newton from an interior start; falls back to steepest descent when
// the Hessian is indefinite. Steps are shortened to stay strictly interior.
inline CandidateMinimum descend(std::array<double, 3> p, double alpha, int dim, int max_iter = 200) {
  auto f = [&](const std::array<double, 3>& v) { return entropy(v[0], v[1], v[2], alpha, dim); };
  double fp = f(p);
  for (int it = 0; it < max_iter; ++it) {
    const QParams q = QParams::from_xbc(p[0], p[1], p[2], alpha);
    const auto g = entropy_gradient(q, dim);
    std::array<double, 3> s{};
    if (!newton_direction(entropy_hessian(q), g, s) || s[0] * g[0] + s[1] * g[1] + s[2] * g[2] >= 0) {
      s = {-g[0], -g[1], -g[2]};
    }
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 80; ++ls, t *= 0.5) {
      const std::array<double, 3> cand{p[0] + t * s[0], p[1] + t * s[1], p[2] + t * s[2]};
      if (!strictly_interior(cand[0], cand[1], cand[2], alpha)) continue;
      const double fc = f(cand);
      if (fc <= fp) {
        moved = cand != p;
        p = cand;
        fp = fc;
        break;
      }
    }
    const double gnorm = std::fabs(g[0]) + std::fabs(g[1]) + std::fabs(g[2]);
    if (!moved || gnorm < 1e-14) break;
  }
  return {QParams::from_xbc(p[0], p[1], p[2], alpha), fp};
}

}  // namespace detail

/// Heuristic minimum of H over the feasible region for fixed alpha: multi-start
/// damped Newton. The value is an upper bound on sigma_d(alpha), not certified.
inline CandidateMinimum candidate_minimum(int dim, double alpha, int starts = 8, std::uint64_t seed = 0x5eed) {
  if (!(alpha > 0 && alpha <= 0.5)) throw std::invalid_argument("candidate_minimum: alpha must lie in (0, 0.5]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CandidateMinimum best;
  // Structured start: the stationary pair matrix scaled to W3-mass alpha.
  {
    const double n = 2.0 * dim - 1;
    const double x0 = alpha * (n - 1) / n;
    const double rest = 1.0 - alpha - x0;
    const double b0 = rest / (n + 2), c0 = b0 / n;
    if (detail::strictly_interior(x0, b0, c0, alpha)) best = detail::descend({x0, b0, c0}, alpha, dim);
  }
  for (int s = 0; s < starts; ++s) {
    std::array<double, 3> p{};
    do {
      p = {alpha * unit(rng), 0.5 * (1.0 - alpha) * unit(rng), (1.0 - alpha) * unit(rng)};
    } while (!detail::strictly_interior(p[0], p[1], p[2], alpha));
    const auto m = detail::descend(p, alpha, dim);
    if (m.value < best.value) best = m;
  }
  return best;
}

}  // namespace entangle
