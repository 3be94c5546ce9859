#pragma once

// JSON forms of certificates and reports.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "json.hpp"

#include "entangle/branch_bound.hpp"
#include "entangle/bounds.hpp"
#include "entangle/schedule.hpp"

namespace entangle {

using json = nlohmann::ordered_json;

/// Shortest decimal text that reads back to the same double.
inline std::string exact_decimal(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline json to_json(const MethodCounts& m) {
  return {{"monotone", m.monotone}, {"firstOrder", m.first_order}, {"secondOrder", m.second_order}};
}

inline json to_json(const SigmaCertificate& c, bool with_time = true) {
  json j;
  j["d"] = c.dim;
  j["alpha"] = c.alpha;
  j["threshold"] = c.threshold;
  j["thresholdExact"] = exact_decimal(c.threshold);
  j["verdict"] = to_string(c.verdict);
  j["nodes"] = c.nodes;
  j["maxDepth"] = c.max_depth;
  j["infeasibleBlocks"] = c.infeasible_blocks;
  j["methodCounts"] = to_json(c.method_counts);
  if (with_time) j["elapsedSeconds"] = c.elapsed_seconds;
  j["arithmeticMode"] = c.arithmetic_mode;
  if (c.witness) j["witness"] = {{"x", (*c.witness)[0]}, {"b", (*c.witness)[1]}, {"c", (*c.witness)[2]}};
  return j;
}

/// Schedule certification summary with one compact entry per index.
inline json to_json(const ScheduleVerdict& v, const AlphaSchedule& s, bool with_time = true) {
  json j;
  j["d"] = v.dim;
  j["scheduleHash"] = v.schedule_hash;
  j["k"] = v.k;
  j["alpha1"] = s[1];
  j["L0"] = v.l0;
  j["baseCase"] = v.base_case;
  j["verdict"] = to_string(v.verdict());
  j["nodes"] = v.total_nodes();
  j["maxDepth"] = v.max_depth();
  j["methodCounts"] = to_json(v.total_method_counts());
  if (with_time) j["elapsedSeconds"] = v.elapsed_seconds;
  j["arithmeticMode"] = "interval-outward";
  json idx = json::array();
  for (std::size_t i = 0; i < v.certificates.size(); ++i) {
    const auto& c = v.certificates[i];
    idx.push_back({{"i", i + 2}, {"alpha", c.alpha}, {"threshold", c.threshold}, {"verdict", to_string(c.verdict)},
                   {"nodes", c.nodes}});
  }
  j["indices"] = std::move(idx);
  return j;
}

}  // namespace entangle
