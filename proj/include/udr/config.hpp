#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "udr/generators.hpp"
#include "udr/pipeline.hpp"

namespace udr {

/// Everything a verb needs to run, fully serializable: a persisted config
/// re-runs to identical artifacts.
struct RunConfig {
  std::string verb;
  std::string input_path;
  std::string centers_path;  // incidence verb
  std::string out_dir = ".";
  NumericMode mode = NumericMode::Exact;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;

  GeneratorSpec gen;

  // partition / extract
  int degree = 4;
  int resolution = 128;
  PipelineParams pipeline;

  // conjecture
  int n = 64;
  double alpha = 1.0 / 6.0;
  int trials = 20;
  std::string model = "random";

  // congruence
  double q_tol = 10 * kDefaultTol;

  // distance probe (unitcount and friends)
  std::string dist_sq = "";

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
};

struct ValidationResult {
  RunConfig normalized;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

/// Fills defaults (r and t from n^{1/3}/h^2 when an input size is known),
/// checks ranges, and reports every violation at once.
ValidationResult validate_config(const RunConfig& config,
                                 std::optional<std::size_t> known_n = std::nullopt);

/// Environment overrides for the configurable constants, prefix UDR_
/// (UDR_C_OCC, UDR_C_CROSS, UDR_C_THRESH, UDR_C1..UDR_C5).
void apply_env_overrides(RunConfig& config);

}  // namespace udr
