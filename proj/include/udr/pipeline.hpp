#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "udr/congruence.hpp"
#include "udr/partition.hpp"
#include "udr/pointset.hpp"
#include "udr/unit_graph.hpp"

namespace udr {

struct PipelineParams {
  double h = 1.0;
  int r = 0;  // 0 = default round(n^{1/3} / h^2)
  int t = 0;  // same default
  std::uint64_t seed = 0;
  double c_thresh = 0.5;  // incidence threshold multiplier for c h^7
  // verification constants (all configurable)
  double c1 = 4.0;   // |P'| within [1/c1, c1] * n^{1/3} h^4
  double c2 = 0.05;  // k >= c2 * n^{2/3} / h^5
  double c3 = 4.0;   // |U_i|, |V_i| <= c3 * h^6
  double c4 = 0.5;   // |E_i| >= c4 * h^7
  double c5 = 4.0;   // ST cap per cell graph
  PartitionOptions partition;

  static int default_stage_degree(std::size_t n, double h) {
    double v = std::pow(static_cast<double>(n), 1.0 / 3.0) / (h * h);
    return std::max(1, static_cast<int>(std::llround(v)));
  }
};

/// One emitted G_i = (U_i u V_i, E_i) with its unit embedding. U holds P
/// indices (the second-stage cell's points), V holds P indices inside P'
/// (the crossing circles' centers); every edge is a unit pair.
struct BipartiteCellGraph {
  int cell_id = 0;
  std::vector<int> u_indices;                      // global P indices
  std::vector<int> v_indices;                      // global P indices (subset of P')
  std::vector<std::pair<int, int>> edges;          // (u local, v local)
  std::vector<std::array<double, 2>> u_embedding;  // coordinates
  std::vector<std::array<double, 2>> v_embedding;

  std::string to_json() const;
};

struct BoundCheck {
  std::string name;
  double measured = 0;
  double bound = 0;
  bool pass = false;
  std::string detail;
};

struct StructureReport {
  std::size_t n = 0;
  double h = 0;
  int first_degree = 0;
  int second_degree = 0;
  std::size_t total_incidences = 0;
  std::size_t zero_discarded_first = 0;
  std::size_t zero_discarded_second = 0;
  double zero_budget_first = 0;   // n*r + n + r^2
  double zero_budget_second = 0;  // t*|D| + |Q| + t^2
  bool zero_below_half_first = false;
  bool zero_below_half_second = false;
  int heavy_cell = -1;
  std::size_t heavy_incidences = 0;
  std::size_t p_prime_size = 0;
  std::size_t q_size = 0;
  std::size_t k_emitted = 0;
  std::size_t cells_dropped_small_sides = 0;
  std::size_t cells_dropped_threshold = 0;
  std::vector<std::size_t> u_sizes, v_sizes, e_sizes;
  std::vector<BoundCheck> checks;
  bool unit_edges_sound = false;
  bool u_disjoint = false;
  bool v_in_p_prime = false;
  std::string note;

  std::string to_json() const;
  std::string summary_tsv() const;
};

struct StructureExtraction {
  std::vector<int> p_prime;  // P indices of the heavy cell's points
  std::vector<BipartiteCellGraph> graphs;
  StructureReport report;
};

/// Pigeonhole step over first-stage cells: argmax incidence count, ties to the
/// smallest cell id.
int heavy_cell_select(const std::vector<Cell>& cells,
                      const std::vector<std::size_t>& incidence_counts);

/// Executes the two-stage partitioning proof as a pipeline on a concrete P:
/// unit circles centered at P, first partition at degree r, heavy cell, second
/// partition of the crossing centers at degree t, threshold filter, emission.
StructureExtraction run_structure_extraction(const PointSet& ps, const PipelineParams& params);

/// Instance-level Theorem-3 checks with explicit constants; report-only.
StructureReport verify_structure_theorem(const StructureExtraction& out, std::size_t n,
                                         const PipelineParams& params);

/// Per emitted graph: |E| <= c5 ((|U||V|)^{2/3}) + |U| + |V|.
std::vector<BoundCheck> st_cell_cap_check(const std::vector<BipartiteCellGraph>& graphs, double c5);

/// Adapters for the congruence machinery.
std::vector<PigeonholeInput> pigeonhole_inputs(const StructureExtraction& out, const PointSet& ps);

}  // namespace udr
