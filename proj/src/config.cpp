#include "udr/config.hpp"

#include <cstdlib>

#include <nlohmann/json.hpp>

namespace udr {

using nlohmann::json;

std::string RunConfig::to_json() const {
  json j;
  j["verb"] = verb;
  j["input"] = input_path;
  j["centers"] = centers_path;
  j["out"] = out_dir;
  j["mode"] = mode == NumericMode::Exact ? "exact" : "float";
  j["tol"] = tol;
  j["seed"] = seed;
  j["gen"] = {{"kind", generator_kind_name(gen.kind)}, {"m", gen.m},     {"d", gen.d},
              {"seed", gen.seed},                      {"epsilon", gen.epsilon}};
  j["degree"] = degree;
  j["resolution"] = resolution;
  j["pipeline"] = {{"h", pipeline.h},
                   {"r", pipeline.r},
                   {"t", pipeline.t},
                   {"seed", pipeline.seed},
                   {"c_thresh", pipeline.c_thresh},
                   {"c1", pipeline.c1},
                   {"c2", pipeline.c2},
                   {"c3", pipeline.c3},
                   {"c4", pipeline.c4},
                   {"c5", pipeline.c5},
                   {"c_occ", pipeline.partition.c_occ},
                   {"c_cross", pipeline.partition.c_cross},
                   {"c_cells", pipeline.partition.c_cells}};
  j["n"] = n;
  j["alpha"] = alpha;
  j["trials"] = trials;
  j["model"] = model;
  j["q_tol"] = q_tol;
  j["dist_sq"] = dist_sq;
  return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  RunConfig c;
  c.verb = j.value("verb", "");
  c.input_path = j.value("input", "");
  c.centers_path = j.value("centers", "");
  c.out_dir = j.value("out", ".");
  c.mode = j.value("mode", "exact") == std::string("float") ? NumericMode::Float
                                                            : NumericMode::Exact;
  c.tol = j.value("tol", kDefaultTol);
  c.seed = j.value("seed", 0ULL);
  if (j.contains("gen")) {
    const auto& g = j["gen"];
    c.gen.kind = generator_kind_from_string(g.value("kind", "integer_grid"));
    c.gen.m = g.value("m", 1);
    c.gen.d = g.value("d", 1LL);
    c.gen.seed = g.value("seed", 0ULL);
    c.gen.epsilon = g.value("epsilon", 0.0);
  }
  c.degree = j.value("degree", 4);
  c.resolution = j.value("resolution", 128);
  if (j.contains("pipeline")) {
    const auto& p = j["pipeline"];
    c.pipeline.h = p.value("h", 1.0);
    c.pipeline.r = p.value("r", 0);
    c.pipeline.t = p.value("t", 0);
    c.pipeline.seed = p.value("seed", 0ULL);
    c.pipeline.c_thresh = p.value("c_thresh", 0.5);
    c.pipeline.c1 = p.value("c1", 4.0);
    c.pipeline.c2 = p.value("c2", 0.05);
    c.pipeline.c3 = p.value("c3", 4.0);
    c.pipeline.c4 = p.value("c4", 0.5);
    c.pipeline.c5 = p.value("c5", 4.0);
    c.pipeline.partition.c_occ = p.value("c_occ", 2.0);
    c.pipeline.partition.c_cross = p.value("c_cross", 4.0);
    c.pipeline.partition.c_cells = p.value("c_cells", 2.0);
  }
  c.n = j.value("n", 64);
  c.alpha = j.value("alpha", 1.0 / 6.0);
  c.trials = j.value("trials", 20);
  c.model = j.value("model", "random");
  c.q_tol = j.value("q_tol", 10 * kDefaultTol);
  c.dist_sq = j.value("dist_sq", "");
  return c;
}

ValidationResult validate_config(const RunConfig& config, std::optional<std::size_t> known_n) {
  ValidationResult res;
  res.normalized = config;
  auto& c = res.normalized;
  auto fail = [&](const std::string& m) { res.errors.push_back(m); };

  static const std::vector<std::string> verbs = {"generate",  "unitcount",  "incidence",
                                                 "partition", "extract",    "rigidity",
                                                 "conjecture", "congruence", "report",
                                                 "rerun"};
  if (std::find(verbs.begin(), verbs.end(), c.verb) == verbs.end())
    fail("unknown verb: " + c.verb);
  if (!(c.tol > 0)) fail("tol must be > 0");
  if (c.pipeline.h <= 0) fail("h must be > 0");
  if (c.degree < 1) fail("degree must be >= 1");
  if (c.resolution < 64) fail("resolution must be >= 64");
  if (c.gen.m < 1) fail("generator m must be >= 1");
  if (c.gen.d < 1) fail("generator d must be >= 1");
  if (c.gen.epsilon < 0) fail("epsilon must be >= 0");
  if (c.verb == "conjecture") {
    if (c.n < 8) fail("conjecture needs n >= 8");
    if (!(c.alpha > 0) || c.alpha > 1) fail("alpha must be in (0, 1]");
    if (c.trials < 1) fail("trials must be >= 1");
    if (c.model != "random" && c.model != "unit_grid") fail("model must be random or unit_grid");
  }
  if (!(c.q_tol > 0)) fail("q_tol must be > 0");
  if (c.pipeline.c_thresh < 0) fail("c_thresh must be >= 0");
  for (auto [name, v] : {std::pair<const char*, double>{"c1", c.pipeline.c1},
                         {"c2", c.pipeline.c2},
                         {"c3", c.pipeline.c3},
                         {"c4", c.pipeline.c4},
                         {"c5", c.pipeline.c5},
                         {"c_occ", c.pipeline.partition.c_occ},
                         {"c_cross", c.pipeline.partition.c_cross},
                         {"c_cells", c.pipeline.partition.c_cells}})
    if (!(v > 0)) fail(std::string(name) + " must be > 0");

  if (known_n) {
    if (c.pipeline.r <= 0)
      c.pipeline.r = PipelineParams::default_stage_degree(*known_n, c.pipeline.h);
    if (c.pipeline.t <= 0)
      c.pipeline.t = PipelineParams::default_stage_degree(*known_n, c.pipeline.h);
  }
  return res;
}

void apply_env_overrides(RunConfig& config) {
  auto get = [](const char* name) -> std::optional<double> {
    const char* v = std::getenv(name);
    if (!v) return std::nullopt;
    return std::atof(v);
  };
  if (auto v = get("UDR_C_OCC")) config.pipeline.partition.c_occ = *v;
  if (auto v = get("UDR_C_CROSS")) config.pipeline.partition.c_cross = *v;
  if (auto v = get("UDR_C_CELLS")) config.pipeline.partition.c_cells = *v;
  if (auto v = get("UDR_C_THRESH")) config.pipeline.c_thresh = *v;
  if (auto v = get("UDR_C1")) config.pipeline.c1 = *v;
  if (auto v = get("UDR_C2")) config.pipeline.c2 = *v;
  if (auto v = get("UDR_C3")) config.pipeline.c3 = *v;
  if (auto v = get("UDR_C4")) config.pipeline.c4 = *v;
  if (auto v = get("UDR_C5")) config.pipeline.c5 = *v;
}

}  // namespace udr
