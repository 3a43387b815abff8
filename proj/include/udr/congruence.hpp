#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "udr/pointset.hpp"
#include "udr/rigidity.hpp"

namespace udr {

/// Equal squared length on every edge (same graph required).
bool are_equivalent(const Framework& a, const Framework& b, double tol = kDefaultTol);

/// Equal squared distance on every vertex pair, i.e. related by an isometry
/// respecting the vertex order.
bool are_congruent(const Framework& a, const Framework& b, double tol = kDefaultTol);

/// Hashable congruence-class key: exact mode uses the anchor-scaled pose
/// coordinates (always rational); float mode quantizes the canonical pose on
/// two offset grids so tolerance-close poses cannot straddle a bucket edge.
struct CongruenceKey {
  std::string primary;
  std::string offset;  // float mode only
  bool exact = false;
};

CongruenceKey congruence_key(const Framework& fw, double q_tol);

struct CongruenceClasses {
  /// Partition of the input indices, largest class first (ties: smaller first
  /// member first).
  std::vector<std::vector<int>> classes;
};

/// Partition under are_congruent via canonical keys (union-find over the two
/// quantization grids in float mode).
CongruenceClasses congruence_classes(const std::vector<Framework>& frameworks,
                                     double q_tol = 10 * kDefaultTol);

struct EnumerationResult {
  bool flexible = false;  // some vertex was placeable with < 2 placed neighbors
  std::vector<std::vector<std::array<double, 2>>> realizations;  // pairwise non-congruent
};

/// Enumerates non-congruent realizations of G with the given squared edge
/// lengths by pinning the first edge and branching on circle-circle
/// intersections; graphs where the placement order leaves a vertex with
/// fewer than two placed neighbors get the flexible flag instead of a count.
/// Every returned count is checked against the 9^|V| bound.
EnumerationResult enumerate_realizations(const Graph& g, const std::vector<double>& edge_sq_lengths,
                                         int max_vertices = 6, double tol = 1e-9);

/// Unordered pairs of P at squared distance dist_sq (exact or within the unit
/// band in float mode). Reuses the bucket grid when dist_sq is the unit.
std::size_t repeated_distance_count(const PointSet& ps, const Scalar& dist_sq);

struct PigeonholeInput {
  Graph graph;                  // bipartite cell graph, local ids
  std::vector<int> u_side;      // local ids on the U side
  std::vector<Point> embedding; // one per local vertex
  std::vector<int> global_ids;  // P indices, aligned with vertices
};

struct PairViolation {
  long long gid1 = 0, gid2 = 0;
  std::vector<int> inputs;  // >= 3 class members embedding (v1,v2) to this ordered pair
};

struct PigeonholeReport {
  std::size_t inputs = 0;
  std::size_t witnesses = 0;
  std::size_t iso_groups = 0;
  std::size_t largest_iso_group = 0;
  std::size_t congruence_classes_in_group = 0;
  std::size_t largest_class = 0;
  bool grouping_exact = true;       // canonical/automorphism budgets held
  double distance_sq = 0;           // a^2 for the chosen (v1, v2)
  std::size_t derived_lower_bound = 0;  // ceil(|I| / 4)
  std::size_t direct_count = 0;         // repeated_distance_count(P', a)
  bool bound_satisfied = false;
  bool two_index_claim_holds = false;
  std::vector<PairViolation> violations;
  double chain_value = 0;  // k / (4 * 2^{h^12} * 9^{2 h^6})
  std::string note;

  std::string to_json() const;
};

struct PigeonholeOptions {
  double tol = 1e-8;       // rank certification tolerance
  double q_tol = 1e-8;     // congruence quantization
  WitnessCaps caps;
};

/// The counting chain on pipeline output: rigid witnesses, isomorphism
/// grouping, congruence classes, the at-most-two-indices check, and the
/// implied repeated-distance lower bound verified by direct counting.
PigeonholeReport pigeonhole_simulation(const std::vector<PigeonholeInput>& graphs,
                                       const PointSet& p_prime, double h,
                                       const PigeonholeOptions& opts = {});

}  // namespace udr
