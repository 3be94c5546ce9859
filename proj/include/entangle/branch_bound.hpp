#pragma once

// Certified lower bounds for sigma_d(alpha) = inf H(q, pi) by branch and bound
// over blocks [x1,x2] x [b1,b2] x [c1,c2], with three bounding methods:
//
//   Monotone     each t log t part bounded through its monotonicity,
//   FirstOrder   f(corner) + sum_i min(0, inf d_i f) * width_i,
//   SecondOrder  f(corner) + sum_i min(0, d_i f(corner)) * width_i
//                + 1/2 sum_ij min(0, inf d_ij f) * width_i * width_j,
//
// all in outward-rounded interval arithmetic. The corner is the lower corner
// of the clipped block, which is feasible whenever any point of the block is.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "entangle/chain_ldp.hpp"
#include "entangle/interval.hpp"

namespace entangle {

enum class BoundMethod { Monotone = 0, FirstOrder = 1, SecondOrder = 2 };

inline const char* to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::Monotone: return "monotone";
    case BoundMethod::FirstOrder: return "firstOrder";
    case BoundMethod::SecondOrder: return "secondOrder";
  }
  return "?";
}

/// Axis-aligned block in (x, b, c)-space. Bounds are doubles taken as exact.
struct ParamBox {
  Interval x, b, c;
  int depth = 0;

  Interval& axis(int i) { return i == 0 ? x : (i == 1 ? b : c); }
  const Interval& axis(int i) const { return i == 0 ? x : (i == 1 ? b : c); }

  /// Block covering the feasible set of every alpha in [alpha_min, alpha_max].
  static ParamBox covering(double alpha_min, double alpha_max) {
    return {Interval(0.0, alpha_max), Interval(0.0, next_up(0.5 * next_up(1.0 - alpha_min))),
            Interval(0.0, next_up(1.0 - alpha_min)), 0};
  }

  static ParamBox point(double x, double b, double c) { return {Interval(x), Interval(b), Interval(c), 0}; }
};

class EmptyIntersection : public std::invalid_argument {
 public:
  EmptyIntersection() : std::invalid_argument("block does not meet the feasible region") {}
};

/// Enclosures of every quantity the entropy depends on over a clipped block.
struct ClippedBlock {
  Interval x, b, c;
  Interval a;  // 1 - alpha - 2b - c - x
  Interval u;  // a + b + x = 1 - alpha - b - c
  Interval v;  // b + c
  Interval w;  // alpha - x
  bool corner_feasible = false;
};

/// Constants of the entropy for fixed (d, alpha).
class EntropyModel {
 public:
  EntropyModel(int dim, double alpha) : dim_(dim), alpha_(alpha) {
    if (dim < 2) throw std::invalid_argument("dimension must be >= 2");
    if (!(alpha >= 0 && alpha <= 0.5)) throw std::invalid_argument("alpha must lie in [0, 0.5]");
    one_minus_alpha_ = Interval(1.0) - Interval(alpha);
    l1_ = log_enclosure(2.0 * dim - 1);
    l3_ = log_enclosure(2.0 * dim - 3);
    l2_ = log_enclosure(2.0 * dim - 2);
    phi_alpha_ = xlogx_enclosure(alpha);
    // Linear part: log(2d-1) - a log(2d-3) - (b+x) log(2d-2), a eliminated.
    lin_const_ = l1_ - one_minus_alpha_ * l3_;
    lin_b_ = Interval(2.0) * l3_ - l2_;
    lin_c_ = l3_;
    lin_x_ = l3_ - l2_;
    grad_const_ = {l3_ - l2_, Interval(2.0) * l3_ - l2_, l3_};
  }

  int dim() const { return dim_; }
  double alpha() const { return alpha_; }

  /// Clips a block to {a >= 0, 0 <= x <= alpha, b, c >= 0}; nullopt when
  /// the block certainly contains no feasible point.
  std::optional<ClippedBlock> clip(const ParamBox& box) const {
    ClippedBlock r;
    r.x = {std::max(box.x.lo, 0.0), std::min(box.x.hi, alpha_)};
    r.b = {std::max(box.b.lo, 0.0), box.b.hi};
    r.c = {std::max(box.c.lo, 0.0), box.c.hi};
    if (r.x.is_empty() || r.b.is_empty() || r.c.is_empty()) return std::nullopt;
    // Largest a over the block, at the lower corner.
    const Interval a_corner = one_minus_alpha_ - Interval(2.0) * Interval(r.b.lo) - Interval(r.c.lo) - Interval(r.x.lo);
    if (a_corner.hi < 0) return std::nullopt;
    r.corner_feasible = a_corner.lo >= 0;
    // Shrink upper ends using a >= 0 (rounded outward, so only ever looser).
    r.b.hi = std::min(r.b.hi, next_up(0.5 * (one_minus_alpha_ - Interval(r.c.lo) - Interval(r.x.lo)).hi));
    r.c.hi = std::min(r.c.hi, (one_minus_alpha_ - Interval(2.0) * Interval(r.b.lo) - Interval(r.x.lo)).hi);
    r.x.hi = std::min(r.x.hi, (one_minus_alpha_ - Interval(2.0) * Interval(r.b.lo) - Interval(r.c.lo)).hi);
    const Interval a = one_minus_alpha_ - Interval(2.0) * r.b - r.c - r.x;
    r.a = clamp_nonnegative(a);
    Interval u = one_minus_alpha_ - r.b - r.c;
    u.lo = std::max({u.lo, 0.0, (r.a + r.b + r.x).lo});
    r.u = u;
    r.v = r.b + r.c;
    r.w = clamp_nonnegative(Interval(alpha_) - r.x);
    return r;
  }

  /// Enclosure of f over the block from independent ranges of its parts.
  Interval monotone_enclosure(const ClippedBlock& r) const {
    Interval s = xlogx_range(r.a);
    s += Interval(2.0) * xlogx_range(r.b);
    s += Interval(2.0) * xlogx_range(r.x);
    s += xlogx_range(r.c);
    s += xlogx_range(r.w);
    s -= xlogx_range(r.u);
    s -= xlogx_range(r.v);
    s -= phi_alpha_;
    s += lin_const_ + lin_b_ * r.b + lin_c_ * r.c + lin_x_ * r.x;
    return s;
  }

  /// Enclosure of f at a feasible point.
  Interval value_at(double x, double b, double c) const {
    const auto r = clip(ParamBox::point(x, b, c));
    if (!r) throw EmptyIntersection();
    return monotone_enclosure(*r);
  }

  /// True when (x, b, c) is certainly feasible.
  bool point_feasible(double x, double b, double c) const {
    if (!(x >= 0 && x <= alpha_ && b >= 0 && c >= 0)) return false;
    return (one_minus_alpha_ - Interval(2.0) * Interval(b) - Interval(c) - Interval(x)).lo >= 0;
  }

  /// Enclosure of the gradient over the block (entries may be -inf/+inf near
  /// the boundary).
  std::array<Interval, 3> gradient(const ClippedBlock& r) const {
    const Interval la = log_or_neg_inf(r.a), lx = log_or_neg_inf(r.x), lw = log_or_neg_inf(r.w);
    const Interval lb = log_or_neg_inf(r.b), lc = log_or_neg_inf(r.c);
    const Interval lu = log_or_neg_inf(r.u), lv = log_or_neg_inf(r.v);
    return {Interval(2.0) * lx - la - lw + grad_const_[0],
            Interval(2.0) * lb - Interval(2.0) * la + lu - lv + grad_const_[1],
            lc - la + lu - lv + grad_const_[2]};
  }

  /// Enclosure of the Hessian over the block.
  std::array<std::array<Interval, 3>, 3> hessian(const ClippedBlock& r) const {
    const Interval ia = recip(r.a), ix = recip(r.x), iw = recip(r.w), ib = recip(r.b), ic = recip(r.c);
    const Interval iu = recip(r.u), iv = recip(r.v);
    const Interval two(2.0), four(4.0);
    const Interval hxx = ia + two * ix + iw;
    const Interval hxb = two * ia, hxc = ia;
    const Interval hbb = four * ia + two * ib - iu - iv;
    const Interval hbc = two * ia - iu - iv;
    const Interval hcc = ia + ic - iu - iv;
    return {{{hxx, hxb, hxc}, {hxb, hbb, hbc}, {hxc, hbc, hcc}}};
  }

  /// Lower bound by the chosen method; -inf when the method does not apply.
  double lower_bound(const ClippedBlock& r, BoundMethod m) const {
    switch (m) {
      case BoundMethod::Monotone: return monotone_enclosure(r).lo;
      case BoundMethod::FirstOrder: return first_order(r);
      case BoundMethod::SecondOrder: return second_order(r);
    }
    return -std::numeric_limits<double>::infinity();
  }

  /// Enclosure of f at the lower corner of the clipped block (feasible only
  /// when corner_feasible holds).
  std::optional<Interval> corner_value(const ClippedBlock& r) const {
    if (!r.corner_feasible) return std::nullopt;
    return value_at(r.x.lo, r.b.lo, r.c.lo);
  }

 private:
  static Interval log_or_neg_inf(const Interval& t) {
    if (!(t.hi > 0)) return {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    return log(t);
  }

  static Interval recip(const Interval& t) {
    if (!(t.lo > 0)) return {0.0, std::numeric_limits<double>::infinity()};
    return Interval(1.0) / t;
  }

  // Upper bound on the width of one clipped axis; exactly 0 for a thin axis.
  static double width_up(const ClippedBlock& r, int i) {
    const Interval& t = i == 0 ? r.x : (i == 1 ? r.b : r.c);
    return t.hi == t.lo ? 0.0 : next_up(t.hi - t.lo);
  }

  // Adds slope * width for every axis with a negative slope lower bound.
  // A slope of -inf (block touching the boundary) makes the bound -inf.
  static bool add_negative_first_order(Interval& s, const std::array<Interval, 3>& g, const ClippedBlock& r) {
    for (int i = 0; i < 3; ++i) {
      const double w = width_up(r, i);
      if (w == 0.0) continue;
      if (std::isnan(g[i].lo) || std::isinf(g[i].lo)) return false;
      if (g[i].lo < 0) s += Interval(g[i].lo) * Interval(w);
    }
    return true;
  }

  double first_order(const ClippedBlock& r) const {
    const auto f0 = corner_value(r);
    if (!f0) return -std::numeric_limits<double>::infinity();
    return first_order(r, *f0);
  }

  double second_order(const ClippedBlock& r) const {
    const auto f0 = corner_value(r);
    if (!f0) return -std::numeric_limits<double>::infinity();
    return second_order(r, *f0, corner_gradient(r));
  }

 public:
  /// Gradient at the lower corner (requires corner_feasible).
  std::array<Interval, 3> corner_gradient(const ClippedBlock& r) const {
    return gradient(*clip(ParamBox::point(r.x.lo, r.b.lo, r.c.lo)));
  }

  /// First-order bound from a known corner value.
  double first_order(const ClippedBlock& r, const Interval& f0) const {
    Interval s(f0.lo);
    if (!add_negative_first_order(s, gradient(r), r)) return -std::numeric_limits<double>::infinity();
    return s.lo;
  }

  /// Second-order bound from a known corner value and corner gradient.
  double second_order(const ClippedBlock& r, const Interval& f0, const std::array<Interval, 3>& g0) const {
    Interval s(f0.lo);
    if (!add_negative_first_order(s, g0, r)) return -std::numeric_limits<double>::infinity();
    const auto h = hessian(r);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double wi = width_up(r, i), wj = width_up(r, j);
        if (wi == 0.0 || wj == 0.0) continue;
        if (std::isnan(h[i][j].lo) || std::isinf(h[i][j].lo)) return -std::numeric_limits<double>::infinity();
        if (h[i][j].lo < 0) s += Interval(0.5) * Interval(h[i][j].lo) * Interval(wi) * Interval(wj);
      }
    }
    return s.lo;
  }

 private:
  int dim_;
  double alpha_;
  Interval one_minus_alpha_, l1_, l2_, l3_, phi_alpha_;
  Interval lin_const_, lin_b_, lin_c_, lin_x_;
  std::array<Interval, 3> grad_const_;
};

/// Certified lower bound for inf f over box ∩ feasible region.
inline double box_lower_bound(const ParamBox& box, int dim, double alpha, BoundMethod method) {
  const EntropyModel model(dim, alpha);
  const auto r = model.clip(box);
  if (!r) throw EmptyIntersection();
  return model.lower_bound(*r, method);
}

enum class Verdict { Proven, Failed, BudgetExceeded };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Proven: return "Proven";
    case Verdict::Failed: return "Failed";
    case Verdict::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

struct MethodCounts {
  std::uint64_t monotone = 0, first_order = 0, second_order = 0;

  void add(BoundMethod m) {
    switch (m) {
      case BoundMethod::Monotone: ++monotone; break;
      case BoundMethod::FirstOrder: ++first_order; break;
      case BoundMethod::SecondOrder: ++second_order; break;
    }
  }
  MethodCounts& operator+=(const MethodCounts& o) {
    monotone += o.monotone;
    first_order += o.first_order;
    second_order += o.second_order;
    return *this;
  }
};

struct SigmaCertificate {
  int dim = 3;
  double alpha = 0.5;
  double threshold = 0;
  Verdict verdict = Verdict::BudgetExceeded;
  std::uint64_t nodes = 0;
  int max_depth = 0;
  std::uint64_t infeasible_blocks = 0;
  MethodCounts method_counts;
  double elapsed_seconds = 0;
  std::string arithmetic_mode = "interval-outward";
  /// Feasible point whose value is certainly below the threshold (Failed only).
  std::optional<std::array<double, 3>> witness;
};

struct BranchBoundOptions {
  std::uint64_t node_budget = 100'000'000;
  int max_depth = 200;
  unsigned threads = 1;
};

namespace detail {

struct SearchState {
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> stop{false};
  std::mutex mutex;
  Verdict verdict = Verdict::Proven;
  std::optional<std::array<double, 3>> witness;
  MethodCounts counts;
  std::uint64_t infeasible = 0;
  int max_depth = 0;

  void fail(Verdict v, std::optional<std::array<double, 3>> w = std::nullopt) {
    std::lock_guard lock(mutex);
    if (verdict == Verdict::Proven || (verdict == Verdict::BudgetExceeded && v == Verdict::Failed)) {
      verdict = v;
      if (w) witness = w;
    }
    stop = true;
  }
};

enum class NodeOutcome { Certified, Infeasible, Split, Failed };

// Evaluates one block: certified, infeasible, needs splitting, or holds a
// point certainly below the threshold. Methods are tried cheapest first; the
// block is certified iff the best of the three reaches the threshold.
inline NodeOutcome evaluate_block(const EntropyModel& model, const ParamBox& box, double threshold,
                                  BoundMethod& used, std::optional<std::array<double, 3>>& witness) {
  const auto r = model.clip(box);
  if (!r) return NodeOutcome::Infeasible;
  const Interval mono = model.monotone_enclosure(*r);
  if (mono.lo >= threshold) {
    used = BoundMethod::Monotone;
    return NodeOutcome::Certified;
  }
  const auto fc = model.corner_value(*r);
  if (!fc) return NodeOutcome::Split;
  if (fc->hi < threshold) {
    witness = std::array<double, 3>{r->x.lo, r->b.lo, r->c.lo};
    return NodeOutcome::Failed;
  }
  if (model.second_order(*r, *fc, model.corner_gradient(*r)) >= threshold) {
    used = BoundMethod::SecondOrder;
    return NodeOutcome::Certified;
  }
  if (model.first_order(*r, *fc) >= threshold) {
    used = BoundMethod::FirstOrder;
    return NodeOutcome::Certified;
  }
  return NodeOutcome::Split;
}

// Bisects the axis depth mod 3 (x, b, c) at its midpoint.
inline std::optional<std::array<ParamBox, 2>> split(const ParamBox& box) {
  const int axis = box.depth % 3;
  const Interval& iv = box.axis(axis);
  const double mid = 0.5 * (iv.lo + iv.hi);
  if (!(mid > iv.lo && mid < iv.hi)) return std::nullopt;
  ParamBox left = box, right = box;
  left.axis(axis).hi = mid;
  right.axis(axis).lo = mid;
  left.depth = right.depth = box.depth + 1;
  return std::array<ParamBox, 2>{left, right};
}

// Depth-first refinement of one block. Certified and infeasible leaves are
// appended to `leaves` when it is non-null.
inline void refine(const EntropyModel& model, const ParamBox& root, double threshold, const BranchBoundOptions& opt,
                   SearchState& state, std::vector<ParamBox>* leaves) {
  std::vector<ParamBox> stack{root};
  MethodCounts counts;
  std::uint64_t infeasible = 0;
  int max_depth = 0;
  while (!stack.empty() && !state.stop.load(std::memory_order_relaxed)) {
    const ParamBox box = stack.back();
    stack.pop_back();
    if (state.nodes.fetch_add(1, std::memory_order_relaxed) >= opt.node_budget) {
      state.fail(Verdict::BudgetExceeded);
      break;
    }
    max_depth = std::max(max_depth, box.depth);
    BoundMethod used = BoundMethod::Monotone;
    std::optional<std::array<double, 3>> witness;
    switch (evaluate_block(model, box, threshold, used, witness)) {
      case NodeOutcome::Certified:
        counts.add(used);
        if (leaves) leaves->push_back(box);
        break;
      case NodeOutcome::Infeasible:
        ++infeasible;
        if (leaves) leaves->push_back(box);
        break;
      case NodeOutcome::Failed:
        state.fail(Verdict::Failed, witness);
        break;
      case NodeOutcome::Split: {
        const auto children = box.depth < opt.max_depth ? split(box) : std::nullopt;
        if (!children) {
          state.fail(Verdict::BudgetExceeded);
          break;
        }
        stack.push_back((*children)[1]);
        stack.push_back((*children)[0]);
        break;
      }
    }
  }
  std::lock_guard lock(state.mutex);
  state.counts += counts;
  state.infeasible += infeasible;
  state.max_depth = std::max(state.max_depth, max_depth);
}

// Runs `refine` over a list of blocks, distributing them across threads.
// Leaves are collected per block so the resulting partition does not depend
// on the schedule of the workers.
inline void refine_all(const EntropyModel& model, const std::vector<ParamBox>& blocks, double threshold,
                       const BranchBoundOptions& opt, SearchState& state,
                       std::vector<std::vector<ParamBox>>* leaves_per_block) {
  if (leaves_per_block) leaves_per_block->assign(blocks.size(), {});
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < blocks.size() && !state.stop; i = next++) {
      refine(model, blocks[i], threshold, opt, state, leaves_per_block ? &(*leaves_per_block)[i] : nullptr);
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(blocks.size())));
  if (n == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline SigmaCertificate make_certificate(int dim, double alpha, double threshold, const SearchState& state,
                                         std::chrono::steady_clock::time_point start) {
  SigmaCertificate cert;
  cert.dim = dim;
  cert.alpha = alpha;
  cert.threshold = threshold;
  cert.verdict = state.verdict;
  cert.nodes = std::min<std::uint64_t>(state.nodes.load(), std::numeric_limits<std::uint64_t>::max());
  cert.max_depth = state.max_depth;
  cert.infeasible_blocks = state.infeasible;
  cert.method_counts = state.counts;
  cert.witness = state.witness;
  cert.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cert;
}

// Splits blocks breadth-first until there are at least `target` of them.
inline std::vector<ParamBox> initial_frontier(const ParamBox& root, std::size_t target) {
  std::vector<ParamBox> frontier{root};
  while (frontier.size() < target) {
    std::vector<ParamBox> next;
    for (const auto& b : frontier) {
      if (const auto ch = split(b)) {
        next.push_back((*ch)[0]);
        next.push_back((*ch)[1]);
      } else {
        next.push_back(b);
      }
    }
    if (next.size() == frontier.size()) break;
    frontier = std::move(next);
  }
  return frontier;
}

}  // namespace detail

namespace detail {

// Certified value at the heuristic minimiser. Refinement alone tends to follow
// the level set f = threshold when the threshold is too high, so this is what
// usually turns such runs into Failed.
inline bool probe_candidate(const EntropyModel& model, double threshold, SearchState& state) {
  if (!(model.alpha() > 0)) return false;
  const CandidateMinimum m = candidate_minimum(model.dim(), model.alpha());
  if (!model.point_feasible(m.q.x, m.q.b, m.q.c)) return false;
  if (model.value_at(m.q.x, m.q.b, m.q.c).hi >= threshold) return false;
  state.fail(Verdict::Failed, std::array<double, 3>{m.q.x, m.q.b, m.q.c});
  return true;
}

}  // namespace detail

/// Starting block for a single alpha: [0, alpha] x [0, (1-alpha)/2] x [0, 1-alpha],
/// which is [0,0.5] x [0,0.25] x [0,0.5] at alpha = 0.5.
inline ParamBox starting_box(double alpha) { return ParamBox::covering(alpha, alpha); }

/// Attempts to prove sigma_d(alpha) >= threshold.
inline SigmaCertificate certify_sigma(int dim, double alpha, double threshold, const BranchBoundOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  const EntropyModel model(dim, alpha);
  detail::SearchState state;
  const ParamBox root = starting_box(alpha);
  if (detail::probe_candidate(model, threshold, state)) {
    // witness found, nothing to refine
  } else if (opt.threads <= 1) {
    detail::refine(model, root, threshold, opt, state, nullptr);
  } else {
    // The breadth-first frontier is itself a set of split nodes.
    const auto frontier = detail::initial_frontier(root, 8 * static_cast<std::size_t>(opt.threads));
    state.nodes = 2 * frontier.size() - 1 - frontier.size();
    detail::refine_all(model, frontier, threshold, opt, state, nullptr);
  }
  return detail::make_certificate(dim, alpha, threshold, state, start);
}

/// A partition of a covering block whose leaves all certify a threshold (or
/// are infeasible) for the alphas processed so far.
class SharedPartition {
 public:
  explicit SharedPartition(const ParamBox& root) : leaves_{root} {}

  const std::vector<ParamBox>& leaves() const { return leaves_; }

  /// Re-verifies every leaf for (alpha, threshold), refining the ones that
  /// fail; the refinement is kept for later calls.
  SigmaCertificate certify(int dim, double alpha, double threshold, const BranchBoundOptions& opt = {}) {
    const auto start = std::chrono::steady_clock::now();
    const EntropyModel model(dim, alpha);
    detail::SearchState state;
    std::vector<std::vector<ParamBox>> refined;
    if (!detail::probe_candidate(model, threshold, state)) {
      detail::refine_all(model, leaves_, threshold, opt, state, &refined);
    }
    if (state.verdict == Verdict::Proven) {
      std::vector<ParamBox> next;
      for (auto& r : refined) next.insert(next.end(), r.begin(), r.end());
      leaves_ = std::move(next);
    }
    return detail::make_certificate(dim, alpha, threshold, state, start);
  }

 private:
  std::vector<ParamBox> leaves_;
};

}  // namespace entangle
