#pragma once

// Plain-text point lists: one point per line, space-separated integers.
// The dimension is taken from the first non-empty line.

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "entangle/lattice.hpp"

namespace entangle {

struct PointList {
  std::size_t dim = 0;
  std::vector<LatticePoint> points;
};

inline PointList read_points(std::istream& in) {
  PointList out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<int> coords;
    int v = 0;
    while (ls >> v) coords.push_back(v);
    if (!ls.eof()) throw std::runtime_error("line " + std::to_string(lineno) + ": not an integer list");
    if (coords.empty()) continue;
    if (out.dim == 0) out.dim = coords.size();
    if (coords.size() != out.dim) throw DimensionMismatch(coords.size(), out.dim);
    out.points.emplace_back(std::move(coords));
  }
  return out;
}

inline void write_point(std::ostream& out, const LatticePoint& p) {
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) out << ' ';
    out << p[i];
  }
  out << '\n';
}

}  // namespace entangle
