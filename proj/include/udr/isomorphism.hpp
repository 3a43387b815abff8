#pragma once

#include <string>
#include <utility>
#include <vector>

namespace udr {

/// Small simple graph with optional vertex colors (used for the bipartite
/// side tags). Edges are undirected, stored with i < j.
struct SmallGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> colors;  // empty = uniform

  void normalize_edges();
};

/// Canonical labeling by color/degree refinement plus individualization
/// backtracking. Exact for the small graphs this project meets; `exact`
/// drops to false only if the node budget is exhausted (the key is then a
/// refinement-based heuristic).
struct CanonicalForm {
  std::vector<int> labeling;  // labeling[v] = canonical position of v
  std::vector<std::pair<int, int>> edges;
  std::vector<int> colors;
  bool exact = true;

  std::string key() const;
};

CanonicalForm canonical_form(const SmallGraph& g, long budget = 400000);

bool are_isomorphic(const SmallGraph& a, const SmallGraph& b, long budget = 400000);

/// Color-preserving automorphisms (as vertex permutations), capped; the bool
/// is false when the cap or budget truncated the enumeration.
std::pair<std::vector<std::vector<int>>, bool> automorphisms(const SmallGraph& g,
                                                             std::size_t cap = 2000,
                                                             long budget = 400000);

}  // namespace udr
