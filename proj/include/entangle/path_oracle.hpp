#pragma once

// Exhaustive enumeration of immediate-self-avoiding walks (no step undoes the
// previous one) and self-avoiding walks from the origin, with the number B of
// descending steps; and sampling of a walk coupled to the three-state chain.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entangle/chain_ldp.hpp"
#include "entangle/lattice.hpp"

namespace entangle {

using BigInt = boost::multiprecision::cpp_int;

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::uint64_t budget)
      : std::runtime_error("enumeration budget of " + std::to_string(budget) + " nodes exceeded") {}
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 4'000'000'000ULL;

/// 2d (2d-1)^{n-1}.
inline BigInt isaw_count_formula(int dim, int n) {
  if (dim < 1 || n < 1) throw std::invalid_argument("isaw_count_formula: d >= 1 and n >= 1 required");
  BigInt v = 2 * dim;
  for (int i = 1; i < n; ++i) v *= 2 * dim - 1;
  return v;
}

struct DescHistogram {
  int dim = 3;
  int n = 0;
  std::vector<BigInt> counts;  // counts[B], B = 0..n

  BigInt total() const {
    BigInt t = 0;
    for (const auto& c : counts) t += c;
    return t;
  }

  /// G_n(alpha): walks with at least alpha n descending steps.
  BigInt at_least(double alpha) const {
    BigInt t = 0;
    for (int b = 0; b <= n; ++b) {
      // alpha * n is exact in long double for double alpha and small n.
      if (static_cast<long double>(b) >= static_cast<long double>(alpha) * n) t += counts[b];
    }
    return t;
  }
};

namespace detail {

// Position and descending direction kept incrementally; dimension <= 16.
struct Walker {
  int dim;
  std::array<int, 16> pos{};

  explicit Walker(int d) : dim(d) {
    if (d < 1 || d > 16) throw std::invalid_argument("dimension must lie in [1, 16]");
  }

  // Descending step as (axis, sign); axis -1 at the origin.
  std::pair<int, int> descending() const {
    for (int i = dim - 1; i >= 0; --i) {
      if (pos[i] != 0) return {i, pos[i] > 0 ? -1 : 1};
    }
    return {-1, 0};
  }
};

}  // namespace detail

/// Histograms of B for every length 1..n_max, in one depth-first pass.
inline std::vector<DescHistogram> desc_histograms(int dim, int n_max,
                                                  std::uint64_t budget = kDefaultEnumerationBudget) {
  if (n_max < 1) throw std::invalid_argument("desc_histograms: n_max must be >= 1");
  std::vector<std::vector<std::uint64_t>> raw(n_max + 1);
  for (int n = 1; n <= n_max; ++n) raw[n].assign(n + 1, 0);
  detail::Walker w(dim);
  std::uint64_t nodes = 0;
  // Depth-first with an explicit recursion on (depth, previous step, B).
  auto rec = [&](auto&& self, int depth, int prev_axis, int prev_sign, int b) -> void {
    if (++nodes > budget) throw BudgetExceeded(budget);
    const auto [da, ds] = w.descending();
    for (int axis = 0; axis < dim; ++axis) {
      for (int sign : {1, -1}) {
        if (axis == prev_axis && sign == -prev_sign) continue;
        const int nb = b + (axis == da && sign == ds ? 1 : 0);
        ++raw[depth + 1][nb];
        if (depth + 1 < n_max) {
          w.pos[axis] += sign;
          self(self, depth + 1, axis, sign, nb);
          w.pos[axis] -= sign;
        }
      }
    }
  };
  rec(rec, 0, -1, 0, 0);
  std::vector<DescHistogram> out;
  for (int n = 1; n <= n_max; ++n) {
    DescHistogram h;
    h.dim = dim;
    h.n = n;
    for (auto c : raw[n]) h.counts.emplace_back(c);
    out.push_back(std::move(h));
  }
  return out;
}

inline DescHistogram desc_histogram(int dim, int n, std::uint64_t budget = kDefaultEnumerationBudget) {
  return desc_histograms(dim, n, budget).back();
}

/// Number of immediate-self-avoiding walks of length n, by enumeration.
inline BigInt count_isaw(int dim, int n, std::uint64_t budget = kDefaultEnumerationBudget) {
  return desc_histogram(dim, n, budget).total();
}

struct CharTable {
  int dim = 3;
  int r = 1;
  int n_max = 0;
  std::map<std::pair<int, int>, BigInt> entries;  // (A, B) -> count

  BigInt at(int a, int b) const {
    const auto it = entries.find({a, b});
    return it == entries.end() ? BigInt(0) : it->second;
  }
};

/// (A, B) table of self-avoiding walks of length <= n_max ending at l1 norm r.
inline CharTable char_table(int dim, int r, int n_max, std::uint64_t budget = kDefaultEnumerationBudget) {
  if (r < 1) throw std::invalid_argument("char_table: r must be >= 1");
  if (n_max < 0) throw std::invalid_argument("char_table: n_max must be >= 0");
  CharTable out;
  out.dim = dim;
  out.r = r;
  out.n_max = n_max;
  if (n_max == 0) return out;
  detail::Walker w(dim);
  // Dense visited grid over [-n_max, n_max]^d.
  const int side = 2 * n_max + 1;
  std::size_t cells = 1;
  for (int i = 0; i < dim; ++i) {
    cells *= static_cast<std::size_t>(side);
    if (cells > (std::size_t{1} << 31)) throw BudgetExceeded(budget);
  }
  std::vector<std::uint8_t> visited(cells, 0);
  auto index = [&] {
    std::size_t idx = 0;
    for (int i = 0; i < dim; ++i) idx = idx * side + static_cast<std::size_t>(w.pos[i] + n_max);
    return idx;
  };
  std::map<std::pair<int, int>, std::uint64_t> raw;
  std::uint64_t nodes = 0;
  visited[index()] = 1;
  long norm = 0;
  auto rec = [&](auto&& self, int depth, int b) -> void {
    if (++nodes > budget) throw BudgetExceeded(budget);
    if (norm == r) ++raw[{depth - b, b}];
    if (depth == n_max) return;
    // Walks that cannot come back to norm r in the remaining steps are cut.
    if (norm - (n_max - depth) > r) return;
    const auto [da, ds] = w.descending();
    for (int axis = 0; axis < dim; ++axis) {
      for (int sign : {1, -1}) {
        const int before = w.pos[axis];
        w.pos[axis] += sign;
        const std::size_t idx = index();
        if (!visited[idx]) {
          visited[idx] = 1;
          const long dn = std::abs(w.pos[axis]) - std::abs(before);
          norm += dn;
          self(self, depth + 1, b + (axis == da && sign == ds ? 1 : 0));
          norm -= dn;
          visited[idx] = 0;
        }
        w.pos[axis] = before;
      }
    }
  };
  rec(rec, 0, 0);
  for (const auto& [k, v] : raw) out.entries[k] = v;
  return out;
}

struct CoupledTrace {
  std::vector<ChainState> path_states;   // classification of the walk's steps
  std::vector<ChainState> chain_states;  // the dominating Markov chain
  std::vector<LatticePoint> path;        // vertices 0 = Z_0, ..., Z_n

  static std::size_t count(const std::vector<ChainState>& s, ChainState which) {
    std::size_t c = 0;
    for (auto v : s) c += v == which;
    return c;
  }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline ChainState state_of(StepClass c) {
  switch (c) {
    case StepClass::Neutral: return W1;
    case StepClass::Ascending: return W2;
    case StepClass::Descending: return W3;
  }
  return W1;
}

/// One walk of length n coupled to the chain through shared uniforms U_i:
/// U_i < a2 selects W2, U_i < a2 + a1 selects W1, otherwise W3, where (a1, a2)
/// are the chain's transition probabilities from X_{i-1} and, for the walk,
/// the shares of neutral and ascending steps among the 2d-1 non-reversing
/// ones. Within a class the walk picks uniformly with a separate draw.
inline CoupledTrace sample_coupled(int dim, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_coupled: n must be >= 1");
  if (dim < 2) throw std::invalid_argument("sample_coupled: dimension must be >= 2");
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const TransitionMatrix pi = transition_matrix(dim);
  const auto steps = unit_steps(static_cast<std::size_t>(dim));
  CoupledTrace t;
  t.path.emplace_back(static_cast<std::size_t>(dim));
  // First step: uniform among the 2d steps, all ascending from the origin.
  UnitStep prev = steps[std::uniform_int_distribution<std::size_t>(0, steps.size() - 1)(rng)];
  t.path.push_back(t.path.back() + prev);
  t.path_states.push_back(W2);
  t.chain_states.push_back(W2);
  std::vector<UnitStep> by_class[3];
  for (int i = 2; i <= n; ++i) {
    const double u = unif(rng);
    const ChainState xc = t.chain_states.back();
    const double a2 = pi(xc, W2), a1 = pi(xc, W1);
    t.chain_states.push_back(u < a2 ? W2 : (u < a2 + a1 ? W1 : W3));
    for (auto& v : by_class) v.clear();
    const LatticePoint& z = t.path.back();
    for (const auto& s : steps) {
      if (s == prev.reversed()) continue;
      by_class[state_of(classify_step(z, s))].push_back(s);
    }
    const double m = 2.0 * dim - 1;
    const double b2 = by_class[W2].size() / m, b1 = by_class[W1].size() / m;
    const ChainState pc = u < b2 ? W2 : (u < b2 + b1 ? W1 : W3);
    const auto& pool = by_class[pc];
    prev = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    t.path.push_back(z + prev);
    t.path_states.push_back(pc);
  }
  return t;
}

}  // namespace entangle
