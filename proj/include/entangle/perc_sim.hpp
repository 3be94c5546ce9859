#pragma once

// Bond percolation with lazily hashed edge states, and the closure of the
// origin under good paths: open edges in either direction, descending steps
// always.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <thread>
#include <vector>

#include "entangle/lattice.hpp"
#include "entangle/path_oracle.hpp"

namespace entangle {

class EmptySet : public std::invalid_argument {
 public:
  EmptySet() : std::invalid_argument("empty set") {}
};

/// Edge states as a pure function of (seed, d, edge): edge e is open iff
/// hash(seed, d, e) < p 2^64.
class BondConfiguration {
 public:
  BondConfiguration(int dim, double p, std::uint64_t seed) : dim_(dim), p_(p), seed_(seed) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("p must lie in [0, 1]");
    all_open_ = p >= 1;
    threshold_ = all_open_ ? 0 : static_cast<std::uint64_t>(std::ldexp(p, 64));
  }

  int dim() const { return dim_; }
  double p() const { return p_; }
  std::uint64_t seed() const { return seed_; }

  /// Canonical id: lower endpoint and axis, each coordinate mixed in turn
  /// after a dimension tag.
  std::uint64_t edge_hash(const LatticeEdge& e) const {
    std::uint64_t h = splitmix64(seed_ ^ (0xd1b54a32d192ed03ULL * static_cast<std::uint64_t>(dim_)));
    h = splitmix64(h ^ e.axis);
    for (std::size_t i = 0; i < e.base.dim(); ++i) {
      h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(e.base[i])));
    }
    return h;
  }

  bool is_open(const LatticeEdge& e) const { return all_open_ || edge_hash(e) < threshold_; }
  bool is_open(const LatticePoint& u, const LatticePoint& v) const { return is_open(LatticeEdge::between(u, v)); }

 private:
  int dim_;
  double p_;
  std::uint64_t seed_;
  bool all_open_ = false;
  std::uint64_t threshold_ = 0;
};

enum class ClosureStatus { Finite, CapExceeded };

struct ClosureResult {
  ClosureStatus status = ClosureStatus::Finite;
  PointSet k;  // the reached set; partial when CapExceeded
  long radius = 0;
  std::uint64_t explored_edges = 0;
};

inline long radius_of(const PointSet& k) {
  if (k.empty()) throw EmptySet();
  return radius(k);
}

/// Breadth-first closure of the origin. CapExceeded once more than `cap`
/// vertices are reached.
inline ClosureResult good_closure(const BondConfiguration& config, std::size_t cap = 1'000'000) {
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  const auto dim = static_cast<std::size_t>(config.dim());
  const auto steps = unit_steps(dim);
  ClosureResult out;
  const LatticePoint origin(dim);
  out.k.insert(origin);
  std::deque<LatticePoint> queue{origin};
  while (!queue.empty()) {
    const LatticePoint x = queue.front();
    queue.pop_front();
    const bool at_origin = x.is_zero();
    const UnitStep down = at_origin ? UnitStep{} : descending_step(x);
    for (const auto& s : steps) {
      const LatticePoint y = x + s;
      if (out.k.count(y)) continue;
      ++out.explored_edges;
      if ((at_origin || !(s == down)) && !config.is_open(x, y)) continue;
      out.k.insert(y);
      out.radius = std::max(out.radius, y.l1_norm());
      if (out.k.size() > cap) {
        out.status = ClosureStatus::CapExceeded;
        return out;
      }
      queue.push_back(y);
    }
  }
  return out;
}

struct TailRow {
  int r = 0;
  std::uint64_t count = 0;  // trials with rad >= r, capped trials included
  double probability = 0;
  double ci_low = 0, ci_high = 0;
};

struct TailTable {
  int dim = 3;
  double p = 0;
  std::uint64_t trials = 0;
  std::uint64_t cap_exceeded = 0;
  std::vector<TailRow> rows;  // r = 0..r_max
};

/// Wilson score interval for k successes out of n at normal quantile z.
inline std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n), ph = static_cast<double>(k) / nn, z2 = z * z;
  const double centre = (ph + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z / (1 + z2 / nn) * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn));
  return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

/// Seed of trial `index` in a run seeded by `seed`.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline TailTable tail_estimate(int dim, double p, std::uint64_t trials, int r_max, std::size_t cap = 1'000'000,
                               std::uint64_t seed = 1, unsigned threads = 1) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (r_max < 0) throw std::invalid_argument("r_max must be >= 0");
  // hist[r] = trials whose radius is exactly r (r_max + 1 collects larger ones).
  std::vector<std::atomic<std::uint64_t>> hist(r_max + 2);
  std::atomic<std::uint64_t> capped{0}, next{0};
  auto worker = [&] {
    for (std::uint64_t t = next++; t < trials; t = next++) {
      const auto res = good_closure(BondConfiguration(dim, p, trial_seed(seed, t)), cap);
      if (res.status == ClosureStatus::CapExceeded) {
        ++capped;
        ++hist[r_max + 1];
      } else {
        ++hist[std::min<long>(res.radius, r_max + 1)];
      }
    }
  };
  const unsigned n = std::max(1u, threads);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  TailTable out;
  out.dim = dim;
  out.p = p;
  out.trials = trials;
  out.cap_exceeded = capped;
  std::uint64_t at_least = 0;
  out.rows.resize(r_max + 1);
  at_least = hist[r_max + 1];
  for (int r = r_max; r >= 0; --r) {
    at_least += hist[r];
    auto& row = out.rows[r];
    row.r = r;
    row.count = at_least;
    row.probability = static_cast<double>(at_least) / static_cast<double>(trials);
    std::tie(row.ci_low, row.ci_high) = wilson_interval(at_least, trials);
  }
  return out;
}

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  int points = 0;
};

/// Weighted least-squares fit of log P(rad >= r) against r over [r_lo, r_hi].
/// Rows with a zero count carry no information on the log scale and are
/// skipped; the others are weighted by k/(1-p), the inverse of the
/// delta-method variance of log p.
inline SlopeFit fit_log_slope(const TailTable& t, int r_lo, int r_hi) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  SlopeFit f;
  for (const auto& row : t.rows) {
    if (row.r < r_lo || row.r > r_hi || row.count == 0 || row.probability >= 1) continue;
    const double w = static_cast<double>(row.count) / (1 - row.probability);
    const double x = row.r, y = std::log(row.probability);
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
    ++f.points;
  }
  if (f.points < 2) throw std::invalid_argument("fit_log_slope: fewer than two usable rows");
  const double den = sw * sxx - sx * sx;
  f.slope = (sw * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / sw;
  return f;
}

}  // namespace entangle
