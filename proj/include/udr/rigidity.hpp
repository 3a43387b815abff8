#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "udr/geometry.hpp"

namespace udr {

/// Simple graph: vertices 0..n-1, undirected edges with i < j.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  void normalize();
  std::vector<std::vector<int>> adjacency() const;
};

/// Graph plus a planar realization (one point per vertex, not necessarily
/// injective).
struct Framework {
  Graph graph;
  std::vector<Point> realization;

  std::string to_json() const;
  static Framework from_json(const std::string& text);
  static Framework load(const std::string& path);

  std::vector<std::array<double, 2>> coords() const;
  Framework induced(const std::vector<int>& vertices) const;  // local reindexing
};

/// |E| x 2|V| rigidity matrix: row for edge {i,j} carries (p_i - p_j) in i's
/// columns and (p_j - p_i) in j's columns. Built in binary64 regardless of the
/// input mode (rank is a numerical question).
Eigen::MatrixXd rigidity_matrix(const Framework& fw);

enum class RigidityOutcome { Rigid, Flexible, Inconclusive };

struct RigidityVerdict {
  RigidityOutcome outcome = RigidityOutcome::Inconclusive;
  int rank = 0;
  int target_rank = 0;  // 2|V| - 3 (1 for |V| = 2)
  int flex_dim = 0;     // target - rank when positive
  bool degenerate_edge = false;  // a zero-length edge produced an all-zero row
  std::string note;
};

const char* rigidity_outcome_name(RigidityOutcome o);

/// Rank certificate via SVD with threshold tol * sigma_max. rank = 2|V|-3
/// certifies rigidity; a persistent rank gap under 3 seeded coordinate
/// perturbations downgrades to Flexible, otherwise Inconclusive (non-regular
/// realizations cannot be decided by one rank).
RigidityVerdict infinitesimal_rigidity_test(const Framework& fw, double tol = 1e-8,
                                            std::uint64_t seed = 0x726967);

struct PebbleReport {
  std::vector<bool> independent;               // aligned with graph.edges
  int rank = 0;                                // number of independent edges
  bool generically_rigid = false;              // rank == 2n-3 (n >= 2)
  std::vector<std::vector<int>> components;    // maximal rigid components (sorted)
};

/// (2,3)-pebble game: classifies edges as independent/redundant, decides
/// generic rigidity, extracts maximal rigid components.
PebbleReport pebble_game_2_3(const Graph& g);

struct Subgraph {
  std::vector<int> vertices;
  std::vector<std::pair<int, int>> edges;  // original vertex ids
};

/// Smallest pebble-game rigid component with >= minV vertices (>= 3 for a
/// nontrivial rigid subgraph), as the induced subgraph; nullopt for sparse G.
std::optional<Subgraph> find_rigid_subgraph_generic(const Graph& g, int min_vertices = 3);

struct WitnessCaps {
  int exhaustive_max_vertices = 12;   // subset size cap for the fallback search
  long exhaustive_budget = 200000;    // max subsets examined
};

struct SubframeworkWitness {
  std::vector<int> vertices;  // original ids
  Subgraph subgraph;
  RigidityVerdict verdict;
};

/// Rigid subframework at the actual realization: pebble-game components first
/// (each certified by the rank test), then a capped exhaustive search over
/// induced subgraphs. minV >= 4 per the hypothesis this feeds.
std::optional<SubframeworkWitness> find_rigid_subframework(const Framework& fw,
                                                           int min_vertices = 4,
                                                           double tol = 1e-8,
                                                           const WitnessCaps& caps = {});

/// Vertices whose neighborhood lies on one line: a vertex with >= 3 neighbors
/// is flagged when the neighbors alone are collinear; with exactly 2 it is
/// flagged when it sits on its neighbors' line (so unit triangles pass and
/// straight paths fail).
std::vector<int> neighbors_collinear_violations(const Framework& fw, double tol = kDefaultTol);

enum class ExperimentModel { RandomGraph, UnitGrid };

struct ExperimentRow {
  int trial = 0;
  std::size_t edges = 0;
  bool hypothesis_ok = false;
  bool witness_found = false;
  int witness_size = 0;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;
  double witness_fraction = 0;
  double violation_rate = 0;
  std::size_t requested_edges = 0;
  bool edge_count_clamped = false;

  std::string to_tsv() const;
};

/// Conjecture harness: per trial builds a graph with ~ceil(n^{1+alpha}) edges
/// under the model, realizes it, checks the collinearity hypothesis and hunts
/// for a rigid subframework. Statistics only; no asymptotic claim.
ExperimentTable conjecture_experiment(int n, double alpha, int trials, ExperimentModel model,
                                      std::uint64_t seed, double tol = 1e-8,
                                      const WitnessCaps& caps = {});

}  // namespace udr
