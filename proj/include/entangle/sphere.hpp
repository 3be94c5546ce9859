#pragma once

// The union of boxes A_d around a descending set K, built level by level,
// and exact checks on it: which lattice bonds meet its boundary, and (d = 3)
// whether that boundary is a closed connected surface.
//
// Box coordinates are tenths of lattice units stored as integers. A box is
// anchored at a lattice point and extends at most 0.6 from it.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "entangle/lattice.hpp"

namespace entangle {

class RadiusTooSmall : public std::invalid_argument {
 public:
  RadiusTooSmall(long radius, long needed)
      : std::invalid_argument("search radius " + std::to_string(radius) + " is below rad(K) + 1 = " +
                              std::to_string(needed)) {}
};

class NotThreeDimensional : public std::invalid_argument {
 public:
  NotThreeDimensional() : std::invalid_argument("boundary complex requires d = 3") {}
};

enum class BoxOrigin { Origin, Column, Bridge };

inline const char* to_string(BoxOrigin o) {
  switch (o) {
    case BoxOrigin::Origin: return "origin";
    case BoxOrigin::Column: return "column";
    case BoxOrigin::Bridge: return "bridge";
  }
  return "?";
}

/// Closed box with integer (tenths) bounds lo[j] <= hi[j].
struct GridBox {
  std::vector<int> lo, hi;

  std::size_t dim() const { return lo.size(); }

  bool contains_scaled(const std::vector<long>& q, long scale) const {
    for (std::size_t j = 0; j < lo.size(); ++j) {
      if (q[j] < lo[j] * scale || q[j] > hi[j] * scale) return false;
    }
    return true;
  }
};

struct BoxProvenance {
  BoxOrigin origin = BoxOrigin::Origin;
  LatticePoint anchor;
  std::size_t axis = 0;   // i, 1-based (0 for the origin box)
  long level = 0;         // n, with |anchor_i| = n + 1
  std::size_t bridge_axis = 0;  // k, 1-based, bridges only
};

struct BoxUnion {
  std::size_t dim = 0;
  std::vector<GridBox> boxes;
  std::vector<BoxProvenance> provenance;

  std::size_t count(BoxOrigin o) const {
    return static_cast<std::size_t>(
        std::count_if(provenance.begin(), provenance.end(), [&](const BoxProvenance& p) { return p.origin == o; }));
  }
};

/// B(x, i): [-0.4, 0.4] on every axis except i, where it reaches 0.6 toward
/// the origin ([-0.6, 0.4] for x_i > 0, [-0.4, 0.6] for x_i < 0).
inline GridBox column_box(const LatticePoint& x, std::size_t i) {
  GridBox b;
  for (std::size_t j = 0; j < x.dim(); ++j) {
    b.lo.push_back(10 * x[j] - 4);
    b.hi.push_back(10 * x[j] + 4);
  }
  if (x[i - 1] > 0) b.lo[i - 1] -= 2;
  else b.hi[i - 1] += 2;
  return b;
}

/// B(x, k, i): the column box of x restricted to [0.4, 0.6] on axis k,
/// joining B(x, i) to B(x + e_k, i).
inline GridBox bridge_box(const LatticePoint& x, std::size_t k, std::size_t i) {
  GridBox b = column_box(x, i);
  b.lo[k - 1] = 10 * x[k - 1] + 4;
  b.hi[k - 1] = 10 * x[k - 1] + 6;
  return b;
}

/// A_d: A_0 = [-0.4, 0.4]^d, then for i = 1..d and n = 0, 1, ... the column
/// boxes of Y = {x in K_i : |x_i| = n + 1} followed by the bridges between
/// members of Y differing by e_k, k < i.
inline BoxUnion build_volume(const PointSet& k, std::size_t dim) {
  if (!is_descending_set(k, dim)) throw NotDescending("set is not a descending set");
  BoxUnion u;
  u.dim = dim;
  GridBox a0;
  a0.lo.assign(dim, -4);
  a0.hi.assign(dim, 4);
  u.boxes.push_back(a0);
  u.provenance.push_back({BoxOrigin::Origin, LatticePoint(dim), 0, 0, 0});
  // K_i \ K_{i-1} grouped by |x_i|, in a fixed order.
  for (std::size_t i = 1; i <= dim; ++i) {
    std::map<long, std::vector<LatticePoint>> levels;
    for (const auto& x : k) {
      if (x.is_zero() || last_nonnull(x) != i) continue;
      levels[std::labs(x[i - 1])].push_back(x);
    }
    for (long n = 0;; ++n) {
      const auto it = levels.find(n + 1);
      if (it == levels.end()) break;
      auto& y = it->second;
      std::sort(y.begin(), y.end());
      const PointSet yset(y.begin(), y.end());
      for (const auto& x : y) {
        u.boxes.push_back(column_box(x, i));
        u.provenance.push_back({BoxOrigin::Column, x, i, n, 0});
      }
      for (const auto& x : y) {
        for (std::size_t kk = 1; kk < i; ++kk) {
          if (!yset.count(x + UnitStep{kk - 1, +1})) continue;
          u.boxes.push_back(bridge_box(x, kk, i));
          u.provenance.push_back({BoxOrigin::Bridge, x, i, n, kk});
        }
      }
    }
  }
  return u;
}

namespace detail {

// Point queries at four times the box resolution: box faces lie on multiples
// of 4, so probes at odd offsets are never on a face.
class UnionIndex {
 public:
  explicit UnionIndex(const BoxUnion& u) : u_(u) {
    for (std::size_t b = 0; b < u.boxes.size(); ++b) {
      // Lattice point nearest to the box centre; every box lies within 0.6 of it.
      std::vector<int> anchor(u.dim);
      for (std::size_t j = 0; j < u.dim; ++j) anchor[j] = floor_div(u.boxes[b].lo[j] + u.boxes[b].hi[j] + 10, 20);
      by_anchor_[LatticePoint(anchor)].push_back(b);
    }
  }

  static constexpr long kScale = 4;

  // Closed membership of q (in units of 1/40).
  bool covered(const std::vector<long>& q) const {
    bool hit = false;
    for_each_candidate(q, [&](std::size_t b) {
      if (!hit && u_.boxes[b].contains_scaled(q, kScale)) hit = true;
    });
    return hit;
  }

  // Interior membership: every one of the 2^d cells around q is covered.
  bool interior(const std::vector<long>& q) const {
    std::vector<long> probe(q.size());
    for (unsigned mask = 0; mask < (1u << q.size()); ++mask) {
      for (std::size_t j = 0; j < q.size(); ++j) probe[j] = q[j] + ((mask >> j) & 1 ? 1 : -1);
      if (!covered(probe)) return false;
    }
    return true;
  }

 private:
  static int floor_div(long a, long b) { return static_cast<int>(a >= 0 ? a / b : -((-a + b - 1) / b)); }

  // Boxes whose anchor is within 1 of q's lattice cell on every axis.
  template <class F>
  void for_each_candidate(const std::vector<long>& q, F&& f) const {
    const std::size_t d = q.size();
    std::vector<int> base(d);
    for (std::size_t j = 0; j < d; ++j) base[j] = floor_div(q[j], 40);
    std::vector<int> c(d);
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      for (std::size_t j = 0; j < d; ++j) c[j] = base[j] + static_cast<int>((mask >> j) & 1);
      const auto it = by_anchor_.find(LatticePoint(c));
      if (it == by_anchor_.end()) continue;
      for (std::size_t b : it->second) f(b);
    }
  }

  const BoxUnion& u_;
  std::unordered_map<LatticePoint, std::vector<std::size_t>, LatticePointHash> by_anchor_;
};

}  // namespace detail

enum class PointPosition { Interior, Boundary, Exterior };

/// Position of a lattice point relative to the union.
inline PointPosition classify_point(const BoxUnion& u, const LatticePoint& x) {
  const detail::UnionIndex idx(u);
  std::vector<long> q(x.dim());
  for (std::size_t j = 0; j < x.dim(); ++j) q[j] = 40L * x[j];
  if (idx.interior(q)) return PointPosition::Interior;
  return idx.covered(q) ? PointPosition::Boundary : PointPosition::Exterior;
}

/// Bonds with both endpoints in the l1 ball of the search radius whose closed
/// segment meets the boundary of the union, i.e. lies neither inside its
/// interior nor outside it. Along a bond the union changes only at box faces,
/// so sampling every face crossing and every midpoint between them is exact.
inline EdgeSet bonds_crossing_boundary(const BoxUnion& u, long search_radius) {
  const std::size_t d = u.dim;
  // Boxes lie within 0.6 (sup norm) of their anchors, whose norm is at most
  // rad(K); bonds touching them have both endpoints within rad(K) + 1.
  long rad_k = 0;
  for (const auto& p : u.provenance) rad_k = std::max(rad_k, p.anchor.l1_norm());
  if (search_radius < rad_k + 1) throw RadiusTooSmall(search_radius, rad_k + 1);
  const detail::UnionIndex idx(u);
  EdgeSet out;
  std::vector<long> q(d);
  // Enumerate lattice points of the l1 ball by odometer over the sup ball.
  const long r = search_radius;
  std::vector<long> x(d, -r);
  while (true) {
    long norm = 0;
    for (long v : x) norm += std::labs(v);
    if (norm <= r) {
      for (std::size_t a = 0; a < d; ++a) {
        if (norm - std::labs(x[a]) + std::labs(x[a] + 1) > r) continue;
        bool touches = false, all_interior = true;
        for (long t = 0; t <= 40; t += 2) {
          for (std::size_t j = 0; j < d; ++j) q[j] = 40 * x[j];
          q[a] += t;
          if (idx.covered(q)) touches = true;
          if (!idx.interior(q)) all_interior = false;
          if (touches && !all_interior) break;
        }
        if (touches && !all_interior) {
          std::vector<int> base(x.begin(), x.end());
          out.insert(LatticeEdge{LatticePoint(base), a});
        }
      }
    }
    std::size_t j = 0;
    while (j < d && x[j] == r) x[j++] = -r;
    if (j == d) break;
    ++x[j];
  }
  return out;
}

struct BoundaryComplex {
  std::size_t vertices = 0, edges = 0, faces = 0;
  std::size_t components = 0;
  bool manifold = false;
  long euler_characteristic() const {
    return static_cast<long>(vertices) - static_cast<long>(edges) + static_cast<long>(faces);
  }

  /// Boundary faces as quads of vertex coordinates (tenths), outward oriented.
  std::vector<std::array<std::array<int, 3>, 4>> quads;
};

namespace detail {

struct Grid {
  std::array<std::vector<int>, 3> lines;  // sorted distinct face coordinates per axis

  std::size_t cells(int a) const { return lines[a].size() - 1; }
};

inline std::size_t find_line(const std::vector<int>& v, int x) {
  return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
}

inline std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace detail

/// Boundary of the union in d = 3, refined to the grid of all box faces.
/// Manifold means every grid edge of the boundary borders exactly two faces
/// and the faces around every boundary vertex form a single fan.
inline BoundaryComplex boundary_complex(const BoxUnion& u) {
  if (u.dim != 3) throw NotThreeDimensional();
  detail::Grid g;
  for (int a = 0; a < 3; ++a) {
    for (const auto& b : u.boxes) {
      g.lines[a].push_back(b.lo[a]);
      g.lines[a].push_back(b.hi[a]);
    }
    std::sort(g.lines[a].begin(), g.lines[a].end());
    g.lines[a].erase(std::unique(g.lines[a].begin(), g.lines[a].end()), g.lines[a].end());
  }
  const std::size_t nx = g.cells(0), ny = g.cells(1), nz = g.cells(2);
  std::vector<std::uint8_t> filled(nx * ny * nz, 0);
  auto cell = [&](std::size_t i, std::size_t j, std::size_t k) { return (i * ny + j) * nz + k; };
  for (const auto& b : u.boxes) {
    std::array<std::size_t, 3> lo{}, hi{};
    for (int a = 0; a < 3; ++a) {
      lo[a] = detail::find_line(g.lines[a], b.lo[a]);
      hi[a] = detail::find_line(g.lines[a], b.hi[a]);
    }
    for (std::size_t i = lo[0]; i < hi[0]; ++i)
      for (std::size_t j = lo[1]; j < hi[1]; ++j)
        for (std::size_t k = lo[2]; k < hi[2]; ++k) filled[cell(i, j, k)] = 1;
  }
  auto is_filled = [&](long i, long j, long k) {
    if (i < 0 || j < 0 || k < 0 || i >= static_cast<long>(nx) || j >= static_cast<long>(ny) ||
        k >= static_cast<long>(nz))
      return false;
    return filled[cell(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k))] != 0;
  };
  // Faces as grid-index quads; vertices and edges keyed by grid indices.
  using V = std::array<long, 3>;
  std::vector<std::array<V, 4>> faces;
  BoundaryComplex out;
  for (long i = 0; i <= static_cast<long>(nx); ++i)
    for (long j = 0; j <= static_cast<long>(ny); ++j)
      for (long k = 0; k <= static_cast<long>(nz); ++k)
        for (int a = 0; a < 3; ++a) {
          // Face on the plane lines[a][idx_a] between the cell below and the cell at (i,j,k).
          V c{i, j, k};
          const long lim[3] = {static_cast<long>(nx), static_cast<long>(ny), static_cast<long>(nz)};
          const int b1 = (a + 1) % 3, b2 = (a + 2) % 3;
          if (c[b1] >= lim[b1] || c[b2] >= lim[b2]) continue;
          V below = c;
          --below[a];
          const bool f_here = is_filled(c[0], c[1], c[2]);
          const bool f_below = is_filled(below[0], below[1], below[2]);
          if (f_here == f_below) continue;
          V p0 = c, p1 = c, p2 = c, p3 = c;
          ++p1[b1];
          ++p2[b1];
          ++p2[b2];
          ++p3[b2];
          // Outward normal points from filled to empty: -e_a if the cell here is filled.
          if (f_here) faces.push_back({p0, p3, p2, p1});
          else faces.push_back({p0, p1, p2, p3});
        }
  out.faces = faces.size();
  std::map<V, std::size_t> vid;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> edge_faces;
  std::vector<std::array<std::size_t, 4>> fv(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (int c = 0; c < 4; ++c) {
      auto [it, inserted] = vid.try_emplace(faces[f][c], vid.size());
      fv[f][c] = it->second;
    }
    for (int c = 0; c < 4; ++c) {
      const std::size_t a = fv[f][c], b = fv[f][(c + 1) % 4];
      edge_faces[{std::min(a, b), std::max(a, b)}].push_back(f);
    }
  }
  out.vertices = vid.size();
  out.edges = edge_faces.size();
  std::vector<std::size_t> parent(faces.size());
  std::iota(parent.begin(), parent.end(), 0);
  bool manifold = true;
  for (const auto& [e, fs] : edge_faces) {
    if (fs.size() != 2) manifold = false;
    for (std::size_t t = 1; t < fs.size(); ++t) {
      parent[detail::find_root(parent, fs[t])] = detail::find_root(parent, fs[0]);
    }
  }
  // Vertex fans: faces at v linked through edges at v must form one cycle.
  std::vector<std::vector<std::size_t>> vfaces(vid.size());
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (int c = 0; c < 4; ++c) vfaces[fv[f][c]].push_back(f);
  for (std::size_t v = 0; v < vid.size() && manifold; ++v) {
    const auto& fs = vfaces[v];
    std::map<std::size_t, std::size_t> local;
    for (std::size_t t = 0; t < fs.size(); ++t) local[fs[t]] = t;
    std::vector<std::size_t> lp(fs.size());
    std::iota(lp.begin(), lp.end(), 0);
    for (std::size_t f : fs) {
      for (int c = 0; c < 4; ++c) {
        const std::size_t a = fv[f][c], b = fv[f][(c + 1) % 4];
        if (a != v && b != v) continue;
        for (std::size_t h : edge_faces[{std::min(a, b), std::max(a, b)}]) {
          lp[detail::find_root(lp, local[h])] = detail::find_root(lp, local[f]);
        }
      }
    }
    std::set<std::size_t> roots;
    for (std::size_t t = 0; t < fs.size(); ++t) roots.insert(detail::find_root(lp, t));
    if (roots.size() != 1) manifold = false;
  }
  out.manifold = manifold;
  std::set<std::size_t> roots;
  for (std::size_t f = 0; f < faces.size(); ++f) roots.insert(detail::find_root(parent, f));
  out.components = roots.size();
  for (const auto& f : faces) {
    std::array<std::array<int, 3>, 4> q{};
    for (int c = 0; c < 4; ++c)
      for (int a = 0; a < 3; ++a) q[c][a] = g.lines[a][static_cast<std::size_t>(f[c][a])];
    out.quads.push_back(q);
  }
  return out;
}

struct BoundaryCurve {
  std::size_t vertices = 0, segments = 0, components = 0;
  bool simple_closed = false;  // every vertex on exactly two segments, one cycle
};

/// Boundary of the union in d = 2, refined to the grid of all box sides.
inline BoundaryCurve boundary_curve(const BoxUnion& u) {
  if (u.dim != 2) throw std::invalid_argument("boundary curve requires d = 2");
  std::array<std::vector<int>, 2> lines;
  for (int a = 0; a < 2; ++a) {
    for (const auto& b : u.boxes) {
      lines[a].push_back(b.lo[a]);
      lines[a].push_back(b.hi[a]);
    }
    std::sort(lines[a].begin(), lines[a].end());
    lines[a].erase(std::unique(lines[a].begin(), lines[a].end()), lines[a].end());
  }
  const long nx = static_cast<long>(lines[0].size()) - 1, ny = static_cast<long>(lines[1].size()) - 1;
  std::vector<std::uint8_t> filled(static_cast<std::size_t>(nx * ny), 0);
  for (const auto& b : u.boxes) {
    const auto i0 = detail::find_line(lines[0], b.lo[0]), i1 = detail::find_line(lines[0], b.hi[0]);
    const auto j0 = detail::find_line(lines[1], b.lo[1]), j1 = detail::find_line(lines[1], b.hi[1]);
    for (auto i = i0; i < i1; ++i)
      for (auto j = j0; j < j1; ++j) filled[i * static_cast<std::size_t>(ny) + j] = 1;
  }
  auto is_filled = [&](long i, long j) {
    return i >= 0 && j >= 0 && i < nx && j < ny && filled[static_cast<std::size_t>(i * ny + j)];
  };
  using P = std::pair<long, long>;
  std::vector<std::pair<P, P>> segs;
  for (long i = 0; i <= nx; ++i)
    for (long j = 0; j <= ny; ++j) {
      if (j < ny && is_filled(i, j) != is_filled(i - 1, j)) segs.push_back({{i, j}, {i, j + 1}});
      if (i < nx && is_filled(i, j) != is_filled(i, j - 1)) segs.push_back({{i, j}, {i + 1, j}});
    }
  std::map<P, std::size_t> vid;
  for (const auto& s : segs) {
    vid.try_emplace(s.first, vid.size());
    vid.try_emplace(s.second, vid.size());
  }
  std::vector<std::size_t> degree(vid.size(), 0), parent(vid.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& s : segs) {
    const auto a = vid[s.first], b = vid[s.second];
    ++degree[a];
    ++degree[b];
    parent[detail::find_root(parent, a)] = detail::find_root(parent, b);
  }
  BoundaryCurve out;
  out.vertices = vid.size();
  out.segments = segs.size();
  std::set<std::size_t> roots;
  for (std::size_t v = 0; v < vid.size(); ++v) roots.insert(detail::find_root(parent, v));
  out.components = roots.size();
  out.simple_closed = out.components == 1 &&
                      std::all_of(degree.begin(), degree.end(), [](std::size_t x) { return x == 2; });
  return out;
}

/// Wavefront OBJ text of a boundary complex (coordinates in lattice units).
inline void write_obj(std::ostream& os, const BoundaryComplex& c) {
  std::map<std::array<int, 3>, std::size_t> vid;
  std::vector<std::array<int, 3>> verts;
  for (const auto& q : c.quads)
    for (const auto& v : q)
      if (vid.try_emplace(v, verts.size() + 1).second) verts.push_back(v);
  for (const auto& v : verts) os << "v " << v[0] / 10.0 << ' ' << v[1] / 10.0 << ' ' << v[2] / 10.0 << '\n';
  for (const auto& q : c.quads)
    os << "f " << vid[q[0]] << ' ' << vid[q[1]] << ' ' << vid[q[2]] << ' ' << vid[q[3]] << '\n';
}

}  // namespace entangle
