#include "udr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "udr/rng.hpp"

namespace udr {

int heavy_cell_select(const std::vector<Cell>& cells,
                      const std::vector<std::size_t>& incidence_counts) {
  if (cells.empty()) throw Error(Errc::InvalidInput, "no cells to select from");
  if (cells.size() != incidence_counts.size())
    throw Error(Errc::InvalidInput, "incidence count list does not match cells");
  int best = 0;
  for (std::size_t i = 1; i < cells.size(); ++i)
    if (incidence_counts[i] > incidence_counts[best]) best = static_cast<int>(i);
  return cells[best].id;
}

StructureExtraction run_structure_extraction(const PointSet& ps, const PipelineParams& params) {
  std::size_t n = ps.size();
  if (params.h <= 0) throw Error(Errc::InvalidInput, "h must be positive");
  int r = params.r > 0 ? params.r : PipelineParams::default_stage_degree(n, params.h);
  int t = params.t > 0 ? params.t : PipelineParams::default_stage_degree(n, params.h);

  StructureExtraction out;
  out.report.n = n;
  out.report.h = params.h;
  out.report.first_degree = r;
  out.report.second_degree = t;

  // (1) unit circles centered at P and the full incidence set
  IncidenceStructure inc = incidences(ps, ps);
  out.report.total_incidences = inc.pairs.size();
  if (inc.pairs.empty())
    throw Error(Errc::InvalidInput, "u(P) = 0: no unit structure to extract");

  // (2) first partition, discard zero-band incidences
  PartitionOptions popt = params.partition;
  popt.seed = Rng::derive(params.seed, 1);
  PartitionResult part1 = partition_points(ps, r, popt);

  const auto& pv = ps.float_view();
  std::vector<int> cell_of_point(n, -1);
  for (const auto& cell : part1.cells)
    for (int p : cell.members) cell_of_point[p] = cell.id;

  std::vector<std::pair<int, int>> surviving;  // (point, center) incidences off Z(f)
  surviving.reserve(inc.pairs.size());
  for (auto [p, c] : inc.pairs)
    if (cell_of_point[p] >= 0) surviving.push_back({p, c});
  out.report.zero_discarded_first = inc.pairs.size() - surviving.size();
  out.report.zero_budget_first =
      static_cast<double>(n) * r + static_cast<double>(n) + static_cast<double>(r) * r;
  out.report.zero_below_half_first = 2 * out.report.zero_discarded_first < inc.pairs.size();

  // (3) heavy cell by surviving incidences
  std::vector<std::size_t> per_cell(part1.cells.size(), 0);
  for (auto [p, c] : surviving) ++per_cell[cell_of_point[p]];
  int heavy = heavy_cell_select(part1.cells, per_cell);
  out.report.heavy_cell = heavy;
  out.report.heavy_incidences = per_cell[heavy];

  // (4) Q = centers of circles meeting the heavy cell (crossing table union
  // incidence evidence), P' = points of the heavy cell
  CircleCrossings cross1 = circles_crossing_cell(pv, std::sqrt(ps.unit_sq().approx()), part1);
  std::set<int> q_set;
  for (std::size_t c = 0; c < n; ++c)
    if (std::binary_search(cross1.cells_of_circle[c].begin(), cross1.cells_of_circle[c].end(),
                           heavy))
      q_set.insert(static_cast<int>(c));
  for (auto [p, c] : surviving)
    if (cell_of_point[p] == heavy) q_set.insert(c);  // p on circle c inside the cell

  out.p_prime = part1.cells[heavy].members;
  std::sort(out.p_prime.begin(), out.p_prime.end());
  std::vector<int> q_indices(q_set.begin(), q_set.end());
  out.report.p_prime_size = out.p_prime.size();
  out.report.q_size = q_indices.size();

  if (q_indices.empty() || out.p_prime.empty()) {
    out.report.note = "heavy cell carries no circles or points; empty emission";
    out.report = verify_structure_theorem(out, n, params);
    return out;
  }

  // (5) second partition of Q
  PointSet q_points = ps.subset(q_indices);
  PartitionOptions popt2 = params.partition;
  popt2.seed = Rng::derive(params.seed, 2);
  PartitionResult part2 = partition_points(q_points, t, popt2);

  // incidences between Q and the circles centered at P' (exact predicate on
  // the original coordinates)
  PointSet pprime_points = ps.subset(out.p_prime);
  IncidenceStructure inc2 = incidences(q_points, pprime_points);

  std::vector<int> cell_of_q(q_indices.size(), -1);
  for (const auto& cell : part2.cells)
    for (int p : cell.members) cell_of_q[p] = cell.id;

  std::size_t surviving2 = 0;
  std::map<int, std::vector<std::pair<int, int>>> per_cell2;  // cell -> (q local, p' local)
  for (auto [q, c] : inc2.pairs) {
    if (cell_of_q[q] < 0) continue;
    ++surviving2;
    per_cell2[cell_of_q[q]].push_back({q, c});
  }
  out.report.zero_discarded_second = inc2.pairs.size() - surviving2;
  out.report.zero_budget_second = static_cast<double>(t) * pprime_points.size() +
                                  static_cast<double>(q_points.size()) +
                                  static_cast<double>(t) * t;
  out.report.zero_below_half_second = 2 * out.report.zero_discarded_second < inc2.pairs.size() ||
                                      inc2.pairs.empty();

  // crossing circles per second-stage cell (D_pi side)
  CircleCrossings cross2 = circles_crossing_cell(pprime_points.float_view(),
                                                 std::sqrt(ps.unit_sq().approx()), part2);

  // (6)+(7) threshold filter and emission
  double threshold = params.c_thresh * std::pow(params.h, 7.0);
  for (const auto& cell : part2.cells) {
    auto it = per_cell2.find(cell.id);
    std::size_t inc_count = it == per_cell2.end() ? 0 : it->second.size();
    if (static_cast<double>(inc_count) < threshold || inc_count == 0) {
      ++out.report.cells_dropped_threshold;
      continue;
    }
    // U = Q_pi, V = centers of D_pi (circles crossing the cell, plus any
    // center with incidence evidence inside it)
    std::set<int> v_local;  // local indices into p_prime
    for (std::size_t c = 0; c < pprime_points.size(); ++c)
      if (std::binary_search(cross2.cells_of_circle[c].begin(), cross2.cells_of_circle[c].end(),
                             cell.id))
        v_local.insert(static_cast<int>(c));
    if (it != per_cell2.end())
      for (auto [q, c] : it->second) v_local.insert(c);

    if (cell.members.size() < 2 || v_local.size() < 2) {
      ++out.report.cells_dropped_small_sides;
      continue;
    }

    BipartiteCellGraph g;
    g.cell_id = cell.id;
    for (int q : cell.members) g.u_indices.push_back(q_indices[q]);
    std::sort(g.u_indices.begin(), g.u_indices.end());
    for (int c : v_local) g.v_indices.push_back(out.p_prime[c]);
    std::sort(g.v_indices.begin(), g.v_indices.end());

    std::map<int, int> u_pos, v_pos;
    for (std::size_t i = 0; i < g.u_indices.size(); ++i) u_pos[g.u_indices[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < g.v_indices.size(); ++i) v_pos[g.v_indices[i]] = static_cast<int>(i);
    if (it != per_cell2.end())
      for (auto [q, c] : it->second)
        g.edges.emplace_back(u_pos[q_indices[q]], v_pos[out.p_prime[c]]);
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    for (int u : g.u_indices) g.u_embedding.push_back(pv[u]);
    for (int v : g.v_indices) g.v_embedding.push_back(pv[v]);
    out.graphs.push_back(std::move(g));
  }
  out.report.k_emitted = out.graphs.size();

  // invariant sweep: exact unit predicate per emitted edge, disjoint U sides,
  // V inside P'
  bool unit_ok = true;
  for (const auto& g : out.graphs)
    for (auto [ul, vl] : g.edges) {
      Scalar d2 = squared_distance(ps[g.u_indices[ul]], ps[g.v_indices[vl]]);
      if (!ps.is_unit_sq(d2)) unit_ok = false;
    }
  out.report.unit_edges_sound = unit_ok;
  std::set<int> seen_u;
  bool disjoint = true;
  for (const auto& g : out.graphs)
    for (int u : g.u_indices)
      if (!seen_u.insert(u).second) disjoint = false;
  out.report.u_disjoint = disjoint;
  std::set<int> pp(out.p_prime.begin(), out.p_prime.end());
  bool v_ok = true;
  for (const auto& g : out.graphs)
    for (int v : g.v_indices)
      if (!pp.count(v)) v_ok = false;
  out.report.v_in_p_prime = v_ok;

  for (const auto& g : out.graphs) {
    out.report.u_sizes.push_back(g.u_indices.size());
    out.report.v_sizes.push_back(g.v_indices.size());
    out.report.e_sizes.push_back(g.edges.size());
  }

  out.report = verify_structure_theorem(out, n, params);
  return out;
}

StructureReport verify_structure_theorem(const StructureExtraction& out, std::size_t n,
                                         const PipelineParams& params) {
  StructureReport rep = out.report;
  rep.checks.clear();
  double h = params.h;
  double n13 = std::pow(static_cast<double>(n), 1.0 / 3.0);
  double n23 = std::pow(static_cast<double>(n), 2.0 / 3.0);
  double h4 = std::pow(h, 4), h5 = std::pow(h, 5), h6 = std::pow(h, 6), h7 = std::pow(h, 7);

  {
    BoundCheck c;
    c.name = "pprime_size";
    c.measured = static_cast<double>(out.p_prime.size());
    c.bound = n13 * h4;
    double lo = c.bound / params.c1, hi = c.bound * params.c1;
    c.pass = c.measured >= lo && c.measured <= hi;
    std::ostringstream os;
    os << "|P'| vs n^{1/3} h^4 in [" << lo << ", " << hi << "]";
    c.detail = os.str();
    rep.checks.push_back(c);
  }
  {
    BoundCheck c;
    c.name = "k_lower";
    c.measured = static_cast<double>(out.graphs.size());
    c.bound = params.c2 * n23 / h5;
    c.pass = c.measured >= c.bound;
    c.detail = "k >= c2 n^{2/3} / h^5";
    rep.checks.push_back(c);
  }
  {
    BoundCheck c;
    c.name = "side_sizes";
    double worst = 0;
    bool ok = true;
    for (const auto& g : out.graphs) {
      worst = std::max({worst, static_cast<double>(g.u_indices.size()),
                        static_cast<double>(g.v_indices.size())});
      if (g.u_indices.size() < 2 || g.v_indices.size() < 2) ok = false;
    }
    c.measured = worst;
    c.bound = params.c3 * h6;
    c.pass = ok && (out.graphs.empty() || worst <= c.bound);
    c.detail = "2 <= |U_i|,|V_i| <= c3 h^6";
    rep.checks.push_back(c);
  }
  {
    BoundCheck c;
    c.name = "edge_lower";
    double worst = out.graphs.empty() ? 0 : std::numeric_limits<double>::max();
    for (const auto& g : out.graphs) worst = std::min(worst, static_cast<double>(g.edges.size()));
    c.measured = out.graphs.empty() ? 0 : worst;
    c.bound = params.c4 * h7;
    c.pass = !out.graphs.empty() && worst >= c.bound;
    c.detail = "|E_i| >= c4 h^7";
    rep.checks.push_back(c);
  }
  {
    BoundCheck c;
    c.name = "u_disjoint";
    c.measured = rep.u_disjoint ? 1 : 0;
    c.bound = 1;
    c.pass = rep.u_disjoint;
    c.detail = "U_i index sets pairwise disjoint";
    rep.checks.push_back(c);
  }
  {
    BoundCheck c;
    c.name = "v_in_pprime";
    c.measured = rep.v_in_p_prime ? 1 : 0;
    c.bound = 1;
    c.pass = rep.v_in_p_prime;
    c.detail = "V_i subsets of P'";
    rep.checks.push_back(c);
  }
  {
    BoundCheck c;
    c.name = "unit_edges";
    c.measured = rep.unit_edges_sound ? 1 : 0;
    c.bound = 1;
    c.pass = rep.unit_edges_sound;
    c.detail = "every emitted edge satisfies the exact unit predicate";
    rep.checks.push_back(c);
  }
  for (auto& c : st_cell_cap_check(out.graphs, params.c5)) rep.checks.push_back(std::move(c));
  return rep;
}

std::vector<BoundCheck> st_cell_cap_check(const std::vector<BipartiteCellGraph>& graphs,
                                          double c5) {
  std::vector<BoundCheck> out;
  BoundCheck agg;
  agg.name = "st_cell_cap";
  agg.pass = true;
  double worst_ratio = 0;
  for (const auto& g : graphs) {
    double u = static_cast<double>(g.u_indices.size());
    double v = static_cast<double>(g.v_indices.size());
    double bound = c5 * std::pow(u * v, 2.0 / 3.0) + u + v;
    double ratio = bound > 0 ? static_cast<double>(g.edges.size()) / bound : 0;
    worst_ratio = std::max(worst_ratio, ratio);
    if (static_cast<double>(g.edges.size()) > bound) agg.pass = false;
  }
  agg.measured = worst_ratio;
  agg.bound = 1.0;
  agg.detail = "|E_i| <= c5 (|U_i||V_i|)^{2/3} + |U_i| + |V_i| (worst ratio)";
  out.push_back(agg);
  return out;
}

std::vector<PigeonholeInput> pigeonhole_inputs(const StructureExtraction& out,
                                               const PointSet& ps) {
  std::vector<PigeonholeInput> inputs;
  for (const auto& g : out.graphs) {
    PigeonholeInput in;
    int nu = static_cast<int>(g.u_indices.size());
    int nv = static_cast<int>(g.v_indices.size());
    in.graph.n = nu + nv;
    for (auto [ul, vl] : g.edges) in.graph.edges.emplace_back(ul, nu + vl);
    in.graph.normalize();
    for (int i = 0; i < nu; ++i) {
      in.u_side.push_back(i);
      in.embedding.push_back(ps[g.u_indices[i]]);
      in.global_ids.push_back(g.u_indices[i]);
    }
    for (int i = 0; i < nv; ++i) {
      in.embedding.push_back(ps[g.v_indices[i]]);
      in.global_ids.push_back(g.v_indices[i]);
    }
    inputs.push_back(std::move(in));
  }
  return inputs;
}

std::string BipartiteCellGraph::to_json() const {
  nlohmann::json j;
  j["cell"] = cell_id;
  j["U"] = u_indices;
  j["V"] = v_indices;
  auto je = nlohmann::json::array();
  for (auto [u, v] : edges) je.push_back({u, v});
  j["edges"] = je;
  auto ju = nlohmann::json::array();
  for (const auto& p : u_embedding) ju.push_back({p[0], p[1]});
  j["u_embedding"] = ju;
  auto jv = nlohmann::json::array();
  for (const auto& p : v_embedding) jv.push_back({p[0], p[1]});
  j["v_embedding"] = jv;
  return j.dump();
}

std::string StructureReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["h"] = h;
  j["first_degree"] = first_degree;
  j["second_degree"] = second_degree;
  j["total_incidences"] = total_incidences;
  j["zero_discarded_first"] = zero_discarded_first;
  j["zero_discarded_second"] = zero_discarded_second;
  j["zero_budget_first"] = zero_budget_first;
  j["zero_budget_second"] = zero_budget_second;
  j["zero_below_half_first"] = zero_below_half_first;
  j["zero_below_half_second"] = zero_below_half_second;
  j["heavy_cell"] = heavy_cell;
  j["heavy_incidences"] = heavy_incidences;
  j["p_prime_size"] = p_prime_size;
  j["q_size"] = q_size;
  j["k_emitted"] = k_emitted;
  j["cells_dropped_small_sides"] = cells_dropped_small_sides;
  j["cells_dropped_threshold"] = cells_dropped_threshold;
  j["u_sizes"] = u_sizes;
  j["v_sizes"] = v_sizes;
  j["e_sizes"] = e_sizes;
  j["unit_edges_sound"] = unit_edges_sound;
  j["u_disjoint"] = u_disjoint;
  j["v_in_p_prime"] = v_in_p_prime;
  auto jc = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e;
    e["name"] = c.name;
    e["measured"] = c.measured;
    e["bound"] = c.bound;
    e["pass"] = c.pass;
    e["detail"] = c.detail;
    jc.push_back(e);
  }
  j["checks"] = jc;
  j["note"] = note;
  return j.dump(2);
}

std::string StructureReport::summary_tsv() const {
  std::ostringstream os;
  os << "graph\tU\tV\tE\n";
  for (std::size_t i = 0; i < u_sizes.size(); ++i)
    os << i << "\t" << u_sizes[i] << "\t" << v_sizes[i] << "\t" << e_sizes[i] << "\n";
  return os.str();
}

}  // namespace udr
