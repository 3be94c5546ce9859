#pragma once

// Lattice geometry on Z^d: the broken-line order, descending/ascending/neutral
// steps, descending sets and their edge boundaries.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace entangle {

class ZeroPoint : public std::invalid_argument {
 public:
  ZeroPoint() : std::invalid_argument("operation undefined at the origin") {}
};

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t a, std::size_t b)
      : std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " +
                              std::to_string(b)) {}
};

class NotDescending : public std::invalid_argument {
 public:
  explicit NotDescending(const std::string& what) : std::invalid_argument(what) {}
};

/// Integer point of Z^d. Coordinates are 0-based in code; the "last nonnull
/// index" is reported 1-based to match the usual convention n(x) in [1, d].
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::size_t dim) : coords_(dim, 0) {}
  explicit LatticePoint(std::vector<int> coords) : coords_(std::move(coords)) {}
  LatticePoint(std::initializer_list<int> coords) : coords_(coords) {}

  std::size_t dim() const { return coords_.size(); }
  int operator[](std::size_t i) const { return coords_[i]; }
  int& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<int>& coords() const { return coords_; }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](int c) { return c == 0; });
  }

  long l1_norm() const {
    long s = 0;
    for (int c : coords_) s += std::labs(c);
    return s;
  }

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

 private:
  std::vector<int> coords_;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ p.dim();
    for (std::size_t i = 0; i < p.dim(); ++i) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(p[i])) + 0x9e3779b97f4a7c15ULL +
           (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

using PointSet = std::unordered_set<LatticePoint, LatticePointHash>;

/// A unit step +e_axis or -e_axis (axis is 0-based).
struct UnitStep {
  std::size_t axis = 0;
  int sign = 1;

  UnitStep reversed() const { return {axis, -sign}; }
  friend bool operator==(const UnitStep&, const UnitStep&) = default;
};

inline LatticePoint operator+(LatticePoint p, const UnitStep& s) {
  p[s.axis] += s.sign;
  return p;
}

enum class StepClass { Descending, Ascending, Neutral };

inline const char* to_string(StepClass c) {
  switch (c) {
    case StepClass::Descending: return "descending";
    case StepClass::Ascending: return "ascending";
    case StepClass::Neutral: return "neutral";
  }
  return "?";
}

inline void require_same_dim(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
}

/// 1-based index of the last non-null coordinate.
inline std::size_t last_nonnull(const LatticePoint& x) {
  for (std::size_t i = x.dim(); i > 0; --i) {
    if (x[i - 1] != 0) return i;
  }
  throw ZeroPoint();
}

inline int sgn(int v) { return (v > 0) - (v < 0); }

/// y ⪯ x: y lies on the broken line joining x to the origin, last coordinate
/// first. Reflexive, and the origin precedes every point.
inline bool precedes(const LatticePoint& y, const LatticePoint& x) {
  require_same_dim(y, x);
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (static_cast<long>(x[i]) * y[i] < 0) return false;
    if (std::abs(y[i]) > std::abs(x[i])) return false;
  }
  if (y.is_zero()) return true;
  const std::size_t ny = last_nonnull(y);
  for (std::size_t i = 0; i + 1 < ny; ++i) {
    if (y[i] != x[i]) return false;
  }
  return true;
}

/// The descending step of x != 0: -sgn(x_{n(x)}) e_{n(x)}.
inline UnitStep descending_step(const LatticePoint& x) {
  const std::size_t n = last_nonnull(x);
  return {n - 1, -sgn(x[n - 1])};
}

inline StepClass classify_step(const LatticePoint& x, const UnitStep& step) {
  if (!x.is_zero() && descending_step(x) == step) return StepClass::Descending;
  const LatticePoint y = x + step;
  if (!y.is_zero() && descending_step(y) == step.reversed()) return StepClass::Ascending;
  return StepClass::Neutral;
}

/// All 2d unit steps in a fixed order: +e_1, -e_1, +e_2, -e_2, ...
inline std::vector<UnitStep> unit_steps(std::size_t dim) {
  std::vector<UnitStep> steps;
  steps.reserve(2 * dim);
  for (std::size_t a = 0; a < dim; ++a) {
    steps.push_back({a, +1});
    steps.push_back({a, -1});
  }
  return steps;
}

/// Appends the broken line of x (x itself down to, and including, the origin).
inline void append_broken_line(LatticePoint x, PointSet& out) {
  out.insert(x);
  while (!x.is_zero()) {
    x = x + descending_step(x);
    out.insert(x);
  }
}

/// Smallest descending set containing S and the origin.
inline PointSet descending_closure(const PointSet& s, std::size_t dim) {
  PointSet out;
  out.insert(LatticePoint(dim));
  for (const auto& x : s) {
    if (x.dim() != dim) throw DimensionMismatch(x.dim(), dim);
    if (out.count(x)) continue;
    append_broken_line(x, out);
  }
  return out;
}

inline bool is_descending_set(const PointSet& k, std::size_t dim) {
  if (!k.count(LatticePoint(dim))) return false;
  for (const auto& x : k) {
    if (x.dim() != dim) return false;
    if (!x.is_zero() && !k.count(x + descending_step(x))) return false;
  }
  return true;
}

/// Undirected lattice edge stored as (lower endpoint, axis): joins p and p + e_axis.
struct LatticeEdge {
  LatticePoint base;
  std::size_t axis = 0;

  static LatticeEdge between(const LatticePoint& u, const LatticePoint& v) {
    require_same_dim(u, v);
    for (std::size_t a = 0; a < u.dim(); ++a) {
      if (u[a] != v[a]) return u[a] < v[a] ? LatticeEdge{u, a} : LatticeEdge{v, a};
    }
    throw std::invalid_argument("edge endpoints coincide");
  }

  LatticePoint other() const { return base + UnitStep{axis, +1}; }

  friend bool operator==(const LatticeEdge&, const LatticeEdge&) = default;
  friend auto operator<=>(const LatticeEdge&, const LatticeEdge&) = default;
};

struct LatticeEdgeHash {
  std::size_t operator()(const LatticeEdge& e) const noexcept {
    return LatticePointHash{}(e.base) * 31 + e.axis;
  }
};

using EdgeSet = std::unordered_set<LatticeEdge, LatticeEdgeHash>;

/// Edges with exactly one endpoint in K.
inline EdgeSet boundary_edges(const PointSet& k, std::size_t dim) {
  if (!is_descending_set(k, dim)) throw NotDescending("set is not a descending set");
  EdgeSet out;
  for (const auto& x : k) {
    for (const auto& s : unit_steps(dim)) {
      const LatticePoint y = x + s;
      if (!k.count(y)) out.insert(LatticeEdge::between(x, y));
    }
  }
  return out;
}

/// Random descending set of the given size: grows from {0} by adding, at a
/// uniformly chosen member x, a neighbour whose descending step leads to x.
template <class Rng>
PointSet random_descending_set(std::size_t dim, std::size_t size, Rng& rng) {
  PointSet k{LatticePoint(dim)};
  std::vector<LatticePoint> members{LatticePoint(dim)};
  const auto steps = unit_steps(dim);
  while (k.size() < size) {
    const LatticePoint& x = members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng)];
    const LatticePoint y = x + steps[std::uniform_int_distribution<std::size_t>(0, steps.size() - 1)(rng)];
    if (k.count(y) || y + descending_step(y) != x) continue;
    k.insert(y);
    members.push_back(y);
  }
  return k;
}

inline long radius(const PointSet& k) {
  if (k.empty()) throw std::invalid_argument("radius of an empty set");
  long r = 0;
  for (const auto& x : k) r = std::max(r, x.l1_norm());
  return r;
}

}  // namespace entangle
