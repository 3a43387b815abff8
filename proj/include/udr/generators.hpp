#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "udr/pointset.hpp"

namespace udr {

enum class GeneratorKind { IntegerGrid, ScaledGridUnit, RandomDisk, PseudoGeneric };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::IntegerGrid;
  int m = 1;                 // side length (grids) / point-count parameter (random_disk)
  long long d = 1;           // squared popular distance for scaled_grid_unit
  std::uint64_t seed = 0;
  double epsilon = 0.0;      // perturbation radius
  NumericMode mode = NumericMode::Exact;
  double tol = kDefaultTol;
};

GeneratorKind generator_kind_from_string(const std::string& s);
std::string generator_kind_name(GeneratorKind k);

/// {0..m-1}^2 as exact rationals, unit_sq = 1.
PointSet integer_grid(int m);

/// The integer squared distance occurring most often among pairs of the m x m
/// grid, ties broken toward smaller d. Brute-force histogram over all pairs.
std::pair<long long, std::size_t> best_popular_square_distance(int m);

struct ScaledGridResult {
  PointSet points;
  /// d not a sum of two squares means the "unit" never occurs; this is a
  /// warning, not an error.
  bool has_unit_pairs = true;
};

/// m x m grid whose popular distance sqrt(d) plays the unit role. Exact mode
/// keeps the unscaled grid and tags unit_sq = d; float mode divides the
/// coordinates by sqrt(d) with unit_sq = 1.
ScaledGridResult scaled_grid_unit(int m, long long d, NumericMode mode = NumericMode::Exact,
                                  double tol = kDefaultTol);

/// m points drawn uniformly from the disk of radius m/2 (float mode).
PointSet random_disk(int m, std::uint64_t seed, double tol = kDefaultTol);

/// Seeded uniform coordinates in [-range, range]^2, one per vertex. This is a
/// stand-in for a generic realization; algebraic independence is not (and
/// cannot be) certified, so downstream generic-rigidity verdicts are Monte
/// Carlo with Schwartz-Zippel-style failure probability.
std::vector<Point> pseudo_generic_realization(int num_vertices, std::uint64_t seed,
                                              double coordinate_range = 1024.0);

/// Independent per-point offsets uniform in [-epsilon, epsilon]^2; epsilon = 0
/// is the identity. Exact mode draws dyadic-rational offsets so the result
/// stays exact.
PointSet perturb(const PointSet& ps, double epsilon, std::uint64_t seed);

PointSet generate(const GeneratorSpec& spec);

}  // namespace udr
