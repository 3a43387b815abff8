#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "udr/pointset.hpp"

namespace udr {

/// Graph on the points of a PointSet whose edges are exactly the unit pairs.
struct UnitDistanceGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, sorted lexicographically

  std::string to_json() const;
  std::string to_tsv() const;
};

/// Point / unit-circle incidences: centers[c] denotes the unit circle around
/// that point; (p, c) is incident iff squared_distance = unit_sq.
struct IncidenceStructure {
  int num_points = 0;
  int num_centers = 0;
  std::vector<std::pair<int, int>> pairs;  // (point index, center index), sorted

  std::string to_json() const;
};

/// All unit pairs via the bucket grid (side = unit length, 3x3 neighborhoods).
/// Expected O(n + output) on non-adversarial data; must agree with the O(n^2)
/// oracle everywhere.
UnitDistanceGraph build_unit_graph(const PointSet& ps);

/// u(P) = |edges(build_unit_graph(P))|.
std::size_t count_unit_distances(const PointSet& ps);

/// Independent O(n^2) reference; exported on purpose so tests can pit the
/// hashed construction against it.
UnitDistanceGraph build_unit_graph_oracle(const PointSet& ps);
std::size_t count_unit_distances_oracle(const PointSet& ps);

/// Incidences between ps and the unit circles centered at the given subset of
/// points (same mode required). When centers == points, |I| = 2 u(P).
IncidenceStructure incidences(const PointSet& points, const PointSet& centers);
IncidenceStructure incidences_oracle(const PointSet& points, const PointSet& centers);

/// Szemeredi-Trotter-shaped sanity monitor: incidence_count vs
/// constant * (m^{2/3} n^{2/3} + m + n).
struct StBoundReport {
  double bound = 0;
  double ratio = 0;
  bool pass = false;
};
StBoundReport st_bound_check(std::size_t m_points, std::size_t n_curves,
                             std::size_t incidence_count, double constant);

}  // namespace udr
