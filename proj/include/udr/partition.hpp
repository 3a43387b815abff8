#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "udr/geometry.hpp"
#include "udr/ham_sandwich.hpp"
#include "udr/pointset.hpp"
#include "udr/polynomial.hpp"

namespace udr {

/// Open connected component of R^2 \ Z(f), identified on a sign-vector raster.
struct Cell {
  int id = 0;
  std::array<double, 2> sample{};   // interior raster node
  BBox bbox{};
  std::vector<int> members;         // point indices assigned to this cell
  std::vector<int> crossing;        // circle indices, filled by circles_crossing_cell
  std::vector<std::int8_t> signs;   // per-factor sign of the whole component
};

/// Final raster used to identify cells; kept so circles can be located in the
/// same geometry the cells came from.
struct CellRaster {
  BBox bbox{};
  int resolution = 0;               // nodes per axis = resolution + 1
  std::vector<std::int32_t> cell_of_node;  // -1 on Z(f) band
  double step_x = 0, step_y = 0;

  /// Cell id at (x, y) given the point's own sign vector; -1 if no surrounding
  /// node matches (too close to the zero set at this resolution).
  int locate(double x, double y, const std::vector<std::int8_t>& signs,
             const std::vector<Cell>& cells) const;
};

struct PartitionStats {
  int requested_degree = 0;
  int total_degree = 0;
  std::size_t num_cells = 0;
  std::size_t num_points = 0;
  std::size_t zero_set_size = 0;
  std::size_t max_occupancy = 0;
  double occupancy_bound = 0;   // c_occ * n / D^2
  bool occupancy_met = false;
  double measured_c_occ = 0;    // max_occupancy * D^2 / n
  int final_resolution = 0;
  std::size_t max_circle_crossings = 0;
  double crossing_bound = 0;    // c_cross * D
  bool crossing_met = true;
};

struct PartitionResult {
  BivariatePoly poly;
  std::vector<Cell> cells;
  std::vector<int> zero_set;  // point indices inside the zero band of some factor
  std::vector<BisectionCertificate> certificates;
  CellRaster raster;
  PartitionStats stats;

  std::string to_json() const;
};

struct PartitionOptions {
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  double c_occ = 2.0;
  double c_cross = 4.0;
  double c_cells = 2.0;
  int resolution = 128;        // initial raster resolution (>= 64)
  int max_refinements = 5;
  HamSandwichOptions search;
  /// Extra padding around the data bbox so circles stay inside the domain.
  double bbox_pad = 1.5;
  /// 0 = choose stage degrees from the overfull count; 1 = single lines only
  /// (more stages, each registering fewer sets but refining everything they
  /// cross).
  int max_stage_degree = 0;
  /// How many alternative registration choices to try per stage (best split
  /// kept).
  int stage_candidates = 2;
};

/// Iterated discrete halving: registers the currently-largest overfull cells
/// at each stage, multiplies the certified bisecting factor into f, and stops
/// when every part is within the occupancy target or the budget is consumed.
/// `stats.occupancy_met` records whether c_occ * n / D^2 was achieved.
PartitionResult partition_points(const PointSet& ps, int degree,
                                 const PartitionOptions& opts = {});

struct ComplementCells {
  std::vector<Cell> cells;
  CellRaster raster;
  std::vector<int> point_cell;  // per input point: cell id or -1 (zero band)
  int refinements_used = 0;
};

/// Identifies cells by rasterizing factor signs at the given resolution and
/// flood-filling 4-connected equal nonzero sign vectors, then refines x2 until
/// the induced point assignment (and cell count) repeats twice in a row.
/// Throws Errc::UnstableCells when the refinement cap is hit, with both
/// final assignments encoded in the message.
ComplementCells cells_of_complement(const BivariatePoly& f, BBox bbox, int resolution,
                                    int max_refinements = 5,
                                    const std::vector<std::array<double, 2>>* points = nullptr);

struct CircleCrossings {
  std::vector<std::vector<int>> cells_of_circle;  // per circle: sorted cell ids
  std::vector<bool> unstable;                     // sampling did not settle
  std::size_t max_crossings = 0;
};

/// Cells each unit circle meets, by adaptive angular sampling located on the
/// partition raster. Samples falling in the zero band or outside the raster
/// domain are skipped. Fills Cell::crossing and the crossing stats in place.
CircleCrossings circles_crossing_cell(const std::vector<std::array<double, 2>>& centers,
                                      double radius, PartitionResult& partition);

struct ZeroSetIncidenceReport {
  std::size_t incidences_on_zero = 0;
  std::size_t total_incidences = 0;
  double budget = 0;        // |C| * deg + |P| + deg^2
  bool within_budget = false;
  bool below_half = false;  // < totals/2
};

/// Incidence accounting for the zero band of f (the paper's I_0 budget).
ZeroSetIncidenceReport incidences_on_zero_set(const PointSet& points, const PointSet& centers,
                                              const BivariatePoly& f);

}  // namespace udr
