#pragma once

// Alpha schedules 0 = alpha_0 < alpha_1 < ... < alpha_k = 0.5 and the
// per-index checks that turn certified rates into an upper bound L0 on
//
//   L = max_{i in [2,k]} (2d-1) exp(-sigma_d(alpha_{i-1})) / (2 (2d-2)^{1-alpha_i}).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "entangle/branch_bound.hpp"
#include "entangle/chain_ldp.hpp"
#include "entangle/interval.hpp"

namespace entangle {

class InvalidSchedule : public std::invalid_argument {
 public:
  explicit InvalidSchedule(const std::string& what) : std::invalid_argument("invalid schedule: " + what) {}
};

class MissingCertificate : public std::invalid_argument {
 public:
  MissingCertificate() : std::invalid_argument("a certified rate is required for every alpha_{i-1}, i in [2,k]") {}
};

class AlphaSchedule {
 public:
  AlphaSchedule() = default;
  explicit AlphaSchedule(std::vector<double> values) : values_(std::move(values)) { validate(); }

  const std::vector<double>& values() const { return values_; }
  std::size_t k() const { return values_.size() - 1; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// FNV-1a over the %.17g text of every value.
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : values_) {
      char buf[64];
      const int n = std::snprintf(buf, sizeof buf, "%.17g\n", v);
      for (int i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(buf[i]);
        h *= 0x100000001b3ULL;
      }
    }
    return h;
  }

  std::string hash_hex() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
  }

 private:
  void validate() const {
    if (values_.size() < 2) throw InvalidSchedule("needs at least alpha_0 and alpha_k");
    if (values_.front() != 0.0) throw InvalidSchedule("alpha_0 must be 0");
    if (values_.back() != 0.5) throw InvalidSchedule("alpha_k must be 0.5");
    for (std::size_t i = 1; i < values_.size(); ++i) {
      if (!(values_[i] > values_[i - 1])) throw InvalidSchedule("values must be strictly increasing");
    }
  }

  std::vector<double> values_;
};

inline AlphaSchedule read_schedule(std::istream& in) {
  std::vector<double> v;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double a = 0;
    if (ls >> a) v.push_back(a);
  }
  return AlphaSchedule(std::move(v));
}

inline void write_schedule(std::ostream& out, const AlphaSchedule& s) {
  char buf[64];
  for (double v : s.values()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
}

/// Largest alpha_1 that passes the base case L0 * 2 * (2d-2)^{1-alpha_1} >= 2d-1,
/// in floating point (callers re-check it with certify_schedule).
inline double max_alpha1(int dim, double l0) {
  return 1.0 - std::log((2.0 * dim - 1) / (2.0 * l0)) / std::log(2.0 * dim - 2);
}

/// Geometric refinement toward 0.5: alpha_1, then points whose distance to
/// 0.5 shrinks by a constant ratio down to `last_gap`, then 0.5.
inline AlphaSchedule geometric_schedule(double alpha1, std::size_t points, double last_gap) {
  if (points < 4) throw InvalidSchedule("geometric schedule needs at least 4 points");
  if (!(alpha1 > 0 && alpha1 < 0.5)) throw InvalidSchedule("alpha_1 must lie in (0, 0.5)");
  const double d0 = 0.5 - alpha1;
  const std::size_t steps = points - 3;  // exponents 0..steps
  const double ratio = std::pow(last_gap / d0, 1.0 / static_cast<double>(steps));
  std::vector<double> v{0.0};
  for (std::size_t j = 0; j <= steps; ++j) {
    const double a = j == 0 ? alpha1 : 0.5 - d0 * std::pow(ratio, static_cast<double>(j));
    if (a > v.back() && a < 0.5) v.push_back(a);
  }
  v.push_back(0.5);
  return AlphaSchedule(std::move(v));
}

/// Schedule built backwards from 0.5: 1000 steps of 1e-13, then 900 steps at
/// each of 1e-12, ..., 1e-5, then steps of 1e-4 down to alpha_1, then 0.
inline AlphaSchedule backward_schedule(double alpha1 = 0.32) {
  std::vector<long double> offsets;
  long double off = 0;
  auto run = [&](int count, long double step) {
    for (int j = 0; j < count; ++j) {
      off += step;
      offsets.push_back(off);
    }
  };
  run(1000, 1e-13L);
  for (int e = -12; e <= -5; ++e) run(900, std::pow(10.0L, static_cast<long double>(e)));
  while (0.5L - off - 1e-4L > static_cast<long double>(alpha1) + 1e-9L) run(1, 1e-4L);
  std::vector<double> v{0.0, alpha1};
  for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) {
    const double a = static_cast<double>(0.5L - *it);
    if (a > v.back()) v.push_back(a);
  }
  v.push_back(0.5);
  return AlphaSchedule(std::move(v));
}

/// Threshold the rate at alpha_{i-1} has to reach for index i:
/// log((2d-1)/2) + (alpha_i - 1) log(2d-2) - log(L0), as an enclosure.
inline Interval schedule_threshold(int dim, double alpha_i, double l0) {
  const Interval n(2.0 * dim - 1), two(2.0);
  return log(n / two) + (Interval(alpha_i) - Interval(1.0)) * log_enclosure(2.0 * dim - 2) - log_enclosure(l0);
}

/// Lower bound of L0 * 2 * (2d-2)^{1-alpha_1} - (2d-1): the base case holds
/// when it is >= 0.
inline double base_case_margin(int dim, double alpha1, double l0) {
  const Interval lhs = Interval(l0) * Interval(2.0) *
                       pow(Interval(2.0 * dim - 2), Interval(1.0) - Interval(alpha1));
  return (lhs - Interval(2.0 * dim - 1)).lo;
}

struct ScheduleOptions {
  BranchBoundOptions bb;
  bool shared_partition = false;
};

struct ScheduleVerdict {
  int dim = 3;
  double l0 = 1;
  std::string schedule_hash;
  std::size_t k = 0;
  bool base_case = false;
  double base_case_margin = 0;
  /// Entry j certifies sigma(alpha_{j+1}) against the threshold of index j+2.
  std::vector<SigmaCertificate> certificates;
  double elapsed_seconds = 0;

  bool all_proven() const {
    return base_case && std::all_of(certificates.begin(), certificates.end(),
                                    [](const SigmaCertificate& c) { return c.verdict == Verdict::Proven; });
  }

  std::uint64_t total_nodes() const {
    std::uint64_t n = 0;
    for (const auto& c : certificates) n += c.nodes;
    return n;
  }

  MethodCounts total_method_counts() const {
    MethodCounts m;
    for (const auto& c : certificates) m += c.method_counts;
    return m;
  }

  int max_depth() const {
    int d = 0;
    for (const auto& c : certificates) d = std::max(d, c.max_depth);
    return d;
  }

  /// Worst verdict over the indices (Failed dominates BudgetExceeded).
  Verdict verdict() const {
    if (!base_case) return Verdict::Failed;
    Verdict v = Verdict::Proven;
    for (const auto& c : certificates) {
      if (c.verdict == Verdict::Failed) return Verdict::Failed;
      if (c.verdict == Verdict::BudgetExceeded) v = Verdict::BudgetExceeded;
    }
    return v;
  }
};

/// Certifies sigma_d(alpha_{i-1}) >= threshold_i for every i in [2,k] and the
/// base case for alpha_1. In shared-partition mode the indices are processed
/// from alpha = 0.5 downwards on one partition that is refined as needed.
inline ScheduleVerdict certify_schedule(int dim, const AlphaSchedule& schedule, double l0,
                                        const ScheduleOptions& opt = {}) {
  if (!(l0 > 0 && l0 <= 1)) throw std::invalid_argument("L0 must lie in (0, 1]");
  const auto start = std::chrono::steady_clock::now();
  ScheduleVerdict out;
  out.dim = dim;
  out.l0 = l0;
  out.schedule_hash = schedule.hash_hex();
  out.k = schedule.k();
  out.base_case_margin = base_case_margin(dim, schedule[1], l0);
  out.base_case = out.base_case_margin >= 0;
  const std::size_t k = schedule.k();
  if (k < 2) {
    out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }
  out.certificates.resize(k - 1);
  if (opt.shared_partition) {
    SharedPartition partition(ParamBox::covering(schedule[1], schedule[k - 1]));
    for (std::size_t i = k; i >= 2; --i) {
      const double threshold = schedule_threshold(dim, schedule[i], l0).hi;
      out.certificates[i - 2] = partition.certify(dim, schedule[i - 1], threshold, opt.bb);
    }
  } else {
    for (std::size_t i = 2; i <= k; ++i) {
      const double threshold = schedule_threshold(dim, schedule[i], l0).hi;
      out.certificates[i - 2] = certify_sigma(dim, schedule[i - 1], threshold, opt.bb);
    }
  }
  out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// Outward-rounded enclosure of L given certified lower bounds
/// sigma_lower[j] <= sigma_d(alpha_{j+1}), j = 0..k-2.
inline Interval compute_L(int dim, const AlphaSchedule& schedule, const std::vector<double>& sigma_lower) {
  const std::size_t k = schedule.k();
  if (k < 2 || sigma_lower.size() != k - 1) throw MissingCertificate();
  Interval best(-std::numeric_limits<double>::infinity());
  const Interval n(2.0 * dim - 1), base(2.0 * dim - 2);
  for (std::size_t i = 2; i <= k; ++i) {
    const Interval term = n * exp(-Interval(sigma_lower[i - 2])) /
                          (Interval(2.0) * pow(base, Interval(1.0) - Interval(schedule[i])));
    best = {std::max(best.lo, term.lo), std::max(best.hi, term.hi)};
  }
  return best;
}

}  // namespace entangle
