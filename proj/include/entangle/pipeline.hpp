#pragma once

// End-to-end improved bound: pick a schedule, estimate L from heuristic
// minima, round it up to L0, certify every index and report 1/(8(d-1)L0^2).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <vector>

#include "entangle/bounds.hpp"
#include "entangle/chain_ldp.hpp"
#include "entangle/schedule.hpp"

namespace entangle {

/// Schedule adapted to a target L0: alpha_1 is the largest value the base case
/// allows and every next alpha_i is the largest one whose index still meets
/// L0 / (1 + margin) with the heuristic rate at alpha_{i-1}. Steps shrink
/// geometrically as L approaches its limit near 0.5.
inline AlphaSchedule greedy_schedule(int dim, double l0, double margin, std::size_t max_points = 100000) {
  const double lg = std::log(2.0 * dim - 2);
  const double target = std::log((2.0 * dim - 1) / 2.0) - std::log(l0 / (1 + margin));
  std::vector<double> v{0.0};
  double a = std::floor(max_alpha1(dim, l0) * 1e12) * 1e-12 - 1e-12;
  if (!(a > 0 && a < 0.5)) throw InvalidSchedule("no admissible alpha_1 for this L0");
  while (a < 0.5) {
    v.push_back(a);
    if (v.size() > max_points) throw InvalidSchedule("L0 too close to its limit for the point budget");
    const double next = 1.0 - (target - candidate_minimum(dim, a).value) / lg;
    if (!(next > a)) throw InvalidSchedule("L0 is below the limiting value of L");
    a = next;
  }
  v.push_back(0.5);
  return AlphaSchedule(std::move(v));
}

struct PipelineOptions {
  /// Relative room between the limiting value of L and the target L0.
  double slack = 1e-4;
  /// Share of the slack left to the certification of each index.
  double margin_share = 0.2;
  /// Geometric schedule with this many points instead of the greedy one.
  std::size_t geometric_points = 0;
  double last_gap = 1e-9;
  /// Use the long backwards-built schedule instead of the greedy one.
  bool full_schedule = false;
  std::optional<AlphaSchedule> schedule;
  std::optional<double> l0;
  ScheduleOptions certify;
};

struct PipelineResult {
  AlphaSchedule schedule;
  double l0 = 1;
  double l_hat = 0;
  double sigma_half = 0;  // heuristic sigma_d(0.5)
  ScheduleVerdict verdict;
  double value = 0;  // final_bound(d, L0); meaningful only when proven
};

/// max_i (2d-1) exp(-s(alpha_{i-1})) / (2 (2d-2)^{1-alpha_i}) with the
/// heuristic minima s; a lower estimate of the true L.
inline double heuristic_L(int dim, const AlphaSchedule& s) {
  double best = 0;
  for (std::size_t i = 2; i <= s.k(); ++i) {
    const double sig = candidate_minimum(dim, s[i - 1]).value;
    const double li = (2.0 * dim - 1) * std::exp(-sig) / (2.0 * std::pow(2.0 * dim - 2, 1.0 - s[i]));
    best = std::max(best, li);
  }
  return best;
}

/// Rounds up to `digits` significant decimal digits.
inline double round_up_digits(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
  double r = std::strtod(buf, nullptr);
  const double ulp = std::pow(10.0, std::floor(std::log10(v)) - (digits - 1));
  while (r < v) r += ulp;
  return r;
}

inline PipelineResult run_pipeline(int dim, const PipelineOptions& opt = {}) {
  PipelineResult out;
  out.sigma_half = candidate_minimum(dim, 0.5).value;
  const double ideal = limiting_L(dim, out.sigma_half).hi;
  const double target = opt.l0 ? *opt.l0 : std::min(1.0, round_up_digits(ideal * (1 + opt.slack)));
  if (opt.schedule) {
    out.schedule = *opt.schedule;
  } else if (opt.full_schedule || opt.geometric_points) {
    const double a1 = std::min(max_alpha1(dim, target) - 1e-9, 0.32);
    out.schedule = opt.full_schedule ? backward_schedule(a1) : geometric_schedule(a1, opt.geometric_points, opt.last_gap);
  } else {
    out.schedule = greedy_schedule(dim, target, opt.slack * opt.margin_share);
  }
  out.l_hat = heuristic_L(dim, out.schedule);
  out.l0 = target;
  out.verdict = certify_schedule(dim, out.schedule, out.l0, opt.certify);
  out.value = final_bound(dim, out.l0);
  return out;
}

}  // namespace entangle
