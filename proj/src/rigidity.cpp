#include "udr/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "udr/generators.hpp"
#include "udr/rng.hpp"
#include "udr/unit_graph.hpp"

namespace udr {

void Graph::normalize() {
  for (auto& e : edges) {
    if (e.first == e.second) throw Error(Errc::InvalidInput, "self-loop");
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (auto& e : edges)
    if (e.first < 0 || e.second >= n) throw Error(Errc::InvalidInput, "edge out of range");
}

std::vector<std::vector<int>> Graph::adjacency() const {
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

std::vector<std::array<double, 2>> Framework::coords() const {
  std::vector<std::array<double, 2>> out;
  out.reserve(realization.size());
  for (const auto& p : realization) out.push_back(p.approx());
  return out;
}

Framework Framework::induced(const std::vector<int>& vertices) const {
  std::vector<int> local(graph.n, -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<int>(i);
  Framework out;
  out.graph.n = static_cast<int>(vertices.size());
  for (auto [a, b] : graph.edges)
    if (local[a] >= 0 && local[b] >= 0)
      out.graph.edges.emplace_back(std::min(local[a], local[b]), std::max(local[a], local[b]));
  std::sort(out.graph.edges.begin(), out.graph.edges.end());
  out.realization.reserve(vertices.size());
  for (int v : vertices) out.realization.push_back(realization[v]);
  return out;
}

std::string Framework::to_json() const {
  nlohmann::json j;
  j["n"] = graph.n;
  auto je = nlohmann::json::array();
  for (auto [a, b] : graph.edges) je.push_back({a, b});
  j["edges"] = je;
  auto jr = nlohmann::json::array();
  for (const auto& p : realization) jr.push_back({p.x.approx(), p.y.approx()});
  j["realization"] = jr;
  return j.dump();
}

Framework Framework::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Framework fw;
  fw.graph.n = j.at("n").get<int>();
  for (const auto& e : j.at("edges")) fw.graph.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  fw.graph.normalize();
  if (j.contains("realization"))
    for (const auto& p : j.at("realization"))
      fw.realization.push_back(Point::real(p[0].get<double>(), p[1].get<double>()));
  if (!fw.realization.empty() && static_cast<int>(fw.realization.size()) != fw.graph.n)
    throw Error(Errc::InvalidInput, "realization size mismatch");
  return fw;
}

Framework Framework::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open framework file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

Eigen::MatrixXd rigidity_matrix(const Framework& fw) {
  if (static_cast<int>(fw.realization.size()) != fw.graph.n)
    throw Error(Errc::InvalidInput, "framework realization size mismatch");
  auto pts = fw.coords();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(fw.graph.edges.size()),
                                            2 * fw.graph.n);
  for (std::size_t r = 0; r < fw.graph.edges.size(); ++r) {
    auto [i, j] = fw.graph.edges[r];
    double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1];
    m(static_cast<Eigen::Index>(r), 2 * i) = dx;
    m(static_cast<Eigen::Index>(r), 2 * i + 1) = dy;
    m(static_cast<Eigen::Index>(r), 2 * j) = -dx;
    m(static_cast<Eigen::Index>(r), 2 * j + 1) = -dy;
  }
  return m;
}

namespace {

int svd_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  double smax = sv(0);
  if (smax <= 0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= tol * smax) ++rank;
  return rank;
}

}  // namespace

const char* rigidity_outcome_name(RigidityOutcome o) {
  switch (o) {
    case RigidityOutcome::Rigid: return "rigid";
    case RigidityOutcome::Flexible: return "flexible";
    case RigidityOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

RigidityVerdict infinitesimal_rigidity_test(const Framework& fw, double tol, std::uint64_t seed) {
  if (fw.graph.n < 2) throw Error(Errc::InvalidInput, "rigidity test needs at least 2 vertices");
  RigidityVerdict v;
  v.target_rank = 2 * fw.graph.n - 3;
  Eigen::MatrixXd m = rigidity_matrix(fw);
  v.rank = svd_rank(m, tol);
  auto pts = fw.coords();
  for (auto [a, b] : fw.graph.edges) {
    double dx = pts[a][0] - pts[b][0], dy = pts[a][1] - pts[b][1];
    if (dx == 0 && dy == 0) v.degenerate_edge = true;
  }
  if (v.rank >= v.target_rank) {
    v.outcome = RigidityOutcome::Rigid;
    if (v.degenerate_edge) v.note = "zero-length edge present (row of zeros)";
    return v;
  }
  v.flex_dim = v.target_rank - v.rank;
  // the rank gap must survive perturbation before we call it flexible:
  // at non-regular realizations the rank understates the generic one
  double scale = 0;
  for (const auto& p : pts) scale = std::max({scale, std::abs(p[0]), std::abs(p[1])});
  double mag = 1e3 * tol * (1.0 + scale);
  bool persists = true;
  for (int trial = 0; trial < 3 && persists; ++trial) {
    Rng rng(Rng::derive(seed, trial));
    Framework pf = fw;
    for (auto& p : pf.realization) {
      double px = p.x.approx() + rng.uniform(-mag, mag);
      double py = p.y.approx() + rng.uniform(-mag, mag);
      p = Point::real(px, py);
    }
    if (svd_rank(rigidity_matrix(pf), tol) >= v.target_rank) persists = false;
  }
  if (persists) {
    v.outcome = RigidityOutcome::Flexible;
  } else {
    v.outcome = RigidityOutcome::Inconclusive;
    v.note = "rank gap vanished under perturbation (non-regular realization)";
  }
  if (v.degenerate_edge) {
    v.outcome = RigidityOutcome::Inconclusive;
    v.note = "degenerate (zero-length) edge";
  }
  return v;
}

namespace {

// (2,3)-pebble game state over a fixed vertex set
struct PebbleState {
  int n;
  std::vector<int> pebbles;
  std::vector<std::set<int>> out;  // oriented edges

  explicit PebbleState(int nn) : n(nn), pebbles(nn, 2), out(nn) {}

  // move one free pebble to root by a DFS path reversal; u, v are off limits
  bool find_pebble(int root, int u, int v) {
    std::vector<int> parent(n, -2);
    std::vector<int> stack{root};
    parent[root] = -1;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int b : out[a]) {
        if (parent[b] != -2) continue;
        parent[b] = a;
        if (b != u && b != v && pebbles[b] > 0) {
          // reverse the path root -> ... -> b
          --pebbles[b];
          ++pebbles[root];
          int cur = b;
          while (parent[cur] != -1) {
            int pa = parent[cur];
            out[pa].erase(cur);
            out[cur].insert(pa);
            cur = pa;
          }
          return true;
        }
        stack.push_back(b);
      }
    }
    return false;
  }

  bool gather(int u, int v, int needed) {
    while (pebbles[u] + pebbles[v] < needed) {
      if (!find_pebble(u, u, v) && !find_pebble(v, u, v)) return false;
    }
    return true;
  }

  // accept edge u-v if 4 pebbles can sit on its endpoints
  bool insert(int u, int v) {
    if (!gather(u, v, 4)) return false;
    --pebbles[u];
    out[u].insert(v);
    return true;
  }
};

}  // namespace

PebbleReport pebble_game_2_3(const Graph& g) {
  Graph gg = g;
  gg.normalize();
  PebbleReport rep;
  rep.independent.assign(gg.edges.size(), false);
  PebbleState st(gg.n);
  for (std::size_t e = 0; e < gg.edges.size(); ++e) {
    auto [u, v] = gg.edges[e];
    if (st.insert(u, v)) {
      rep.independent[e] = true;
      ++rep.rank;
    }
  }
  rep.generically_rigid = gg.n == 1 || (gg.n >= 2 && rep.rank == 2 * gg.n - 3);

  // components: an edge whose endpoints cannot collect 4 pebbles lies in a
  // nontrivial rigid block; membership of w is decided the same way against
  // both endpoints
  std::set<std::vector<int>> comps;
  std::vector<bool> edge_done(gg.edges.size(), false);
  for (std::size_t e = 0; e < gg.edges.size(); ++e) {
    if (edge_done[e]) continue;
    auto [u, v] = gg.edges[e];
    if (st.gather(u, v, 4)) {
      comps.insert({u, v});
      continue;
    }
    std::vector<int> comp{u, v};
    for (int w = 0; w < gg.n; ++w) {
      if (w == u || w == v) continue;
      if (!st.gather(u, w, 4) && !st.gather(v, w, 4)) comp.push_back(w);
    }
    std::sort(comp.begin(), comp.end());
    comps.insert(comp);
    // edges inside this component need no further queries
    std::vector<bool> inside(gg.n, false);
    for (int w : comp) inside[w] = true;
    for (std::size_t e2 = 0; e2 < gg.edges.size(); ++e2)
      if (inside[gg.edges[e2].first] && inside[gg.edges[e2].second]) edge_done[e2] = true;
  }
  rep.components.assign(comps.begin(), comps.end());
  return rep;
}

std::optional<Subgraph> find_rigid_subgraph_generic(const Graph& g, int min_vertices) {
  if (min_vertices < 3) min_vertices = 3;
  PebbleReport rep = pebble_game_2_3(g);
  const std::vector<int>* best = nullptr;
  for (const auto& comp : rep.components) {
    if (static_cast<int>(comp.size()) < min_vertices) continue;
    if (!best || comp.size() < best->size()) best = &comp;
  }
  if (!best) return std::nullopt;
  Subgraph sg;
  sg.vertices = *best;
  std::vector<bool> inside(g.n, false);
  for (int v : sg.vertices) inside[v] = true;
  for (auto [a, b] : g.edges)
    if (inside[a] && inside[b]) sg.edges.emplace_back(a, b);
  return sg;
}

std::optional<SubframeworkWitness> find_rigid_subframework(const Framework& fw, int min_vertices,
                                                           double tol, const WitnessCaps& caps) {
  if (min_vertices < 4) min_vertices = 4;
  PebbleReport rep = pebble_game_2_3(fw.graph);
  std::vector<std::vector<int>> candidates;
  for (const auto& comp : rep.components)
    if (static_cast<int>(comp.size()) >= min_vertices) candidates.push_back(comp);
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  for (const auto& cand : candidates) {
    Framework sub = fw.induced(cand);
    RigidityVerdict v = infinitesimal_rigidity_test(sub, tol);
    if (v.outcome == RigidityOutcome::Rigid) {
      SubframeworkWitness w;
      w.vertices = cand;
      std::vector<bool> inside(fw.graph.n, false);
      for (int vv : cand) inside[vv] = true;
      w.subgraph.vertices = cand;
      for (auto [a, b] : fw.graph.edges)
        if (inside[a] && inside[b]) w.subgraph.edges.emplace_back(a, b);
      w.verdict = v;
      return w;
    }
  }

  // capped exhaustive fallback over induced subsets, smallest size first
  long budget = caps.exhaustive_budget;
  int n = fw.graph.n;
  int kmax = std::min(caps.exhaustive_max_vertices, n);
  for (int k = min_vertices; k <= kmax && budget > 0; ++k) {
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      if (--budget < 0) break;
      // quick reject: a rigid k-subgraph needs 2k-3 induced edges
      int cnt = 0;
      std::vector<bool> inside(n, false);
      for (int v : idx) inside[v] = true;
      for (auto [a, b] : fw.graph.edges)
        if (inside[a] && inside[b]) ++cnt;
      if (cnt >= 2 * k - 3) {
        Framework sub = fw.induced(idx);
        RigidityVerdict v = infinitesimal_rigidity_test(sub, tol);
        if (v.outcome == RigidityOutcome::Rigid) {
          SubframeworkWitness w;
          w.vertices = idx;
          w.subgraph.vertices = idx;
          for (auto [a, b] : fw.graph.edges)
            if (inside[a] && inside[b]) w.subgraph.edges.emplace_back(a, b);
          w.verdict = v;
          return w;
        }
      }
      // next k-combination
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return std::nullopt;
}

std::vector<int> neighbors_collinear_violations(const Framework& fw, double tol) {
  auto adj = fw.graph.adjacency();
  std::vector<int> out;
  for (int v = 0; v < fw.graph.n; ++v) {
    if (adj[v].size() < 2) continue;
    std::vector<Point> nbrs;
    nbrs.reserve(adj[v].size() + 1);
    for (int w : adj[v]) nbrs.push_back(fw.realization[w]);
    bool flagged;
    if (nbrs.size() == 2) {
      // two points always span a line; the violation is v sitting on it
      nbrs.push_back(fw.realization[v]);
      flagged = are_collinear(nbrs, tol);
    } else {
      flagged = are_collinear(nbrs, tol);
    }
    if (flagged) out.push_back(v);
  }
  return out;
}

std::string ExperimentTable::to_tsv() const {
  std::ostringstream os;
  os << "trial\tedges\thypothesis_ok\twitness_found\twitness_size\n";
  for (const auto& r : rows)
    os << r.trial << "\t" << r.edges << "\t" << (r.hypothesis_ok ? 1 : 0) << "\t"
       << (r.witness_found ? 1 : 0) << "\t" << r.witness_size << "\n";
  return os.str();
}

ExperimentTable conjecture_experiment(int n, double alpha, int trials, ExperimentModel model,
                                      std::uint64_t seed, double tol, const WitnessCaps& caps) {
  if (n < 8) throw Error(Errc::InvalidInput, "experiment needs n >= 8");
  if (alpha <= 0 || alpha > 1) throw Error(Errc::InvalidInput, "alpha must be in (0, 1]");
  if (trials < 1) throw Error(Errc::InvalidInput, "need at least one trial");

  ExperimentTable table;
  std::size_t max_edges = static_cast<std::size_t>(n) * (n - 1) / 2;
  double raw = std::pow(static_cast<double>(n), 1.0 + alpha);
  std::size_t target = static_cast<std::size_t>(std::ceil(raw));
  table.requested_edges = target;
  if (target > max_edges) {
    // alpha = 1 requests n^2 > C(n,2): clamp to the complete graph
    table.edge_count_clamped = true;
    target = max_edges;
  }

  int witnesses = 0, violations = 0;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t tseed = Rng::derive(seed, static_cast<std::uint64_t>(t));
    Framework fw;
    if (model == ExperimentModel::RandomGraph) {
      fw.graph.n = n;
      // uniform m-subset of all pairs via seeded partial shuffle
      std::vector<std::pair<int, int>> all;
      all.reserve(max_edges);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
      Rng rng(tseed);
      for (std::size_t k = 0; k < target; ++k) {
        std::size_t pick = k + rng.below(all.size() - k);
        std::swap(all[k], all[pick]);
      }
      fw.graph.edges.assign(all.begin(), all.begin() + static_cast<long>(target));
      fw.graph.normalize();
      fw.realization = pseudo_generic_realization(n, Rng::derive(tseed, 1));
    } else {
      int m = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
      long long d = best_popular_square_distance(m).first;
      ScaledGridResult grid = scaled_grid_unit(m, d, NumericMode::Exact);
      UnitDistanceGraph ug = build_unit_graph(grid.points);
      fw.graph.n = static_cast<int>(grid.points.size());
      fw.graph.edges = ug.edges;
      if (fw.graph.edges.size() > target) {
        Rng rng(tseed);
        auto& e = fw.graph.edges;
        for (std::size_t k = 0; k < target; ++k) {
          std::size_t pick = k + rng.below(e.size() - k);
          std::swap(e[k], e[pick]);
        }
        e.resize(target);
        std::sort(e.begin(), e.end());
      }
      fw.realization.reserve(grid.points.size());
      for (std::size_t i = 0; i < grid.points.size(); ++i) {
        auto c = grid.points[i].approx();
        fw.realization.push_back(Point::real(c[0], c[1]));
      }
    }

    ExperimentRow row;
    row.trial = t;
    row.edges = fw.graph.edges.size();
    row.hypothesis_ok = neighbors_collinear_violations(fw).empty();
    auto witness = find_rigid_subframework(fw, 4, tol, caps);
    row.witness_found = witness.has_value();
    row.witness_size = witness ? static_cast<int>(witness->vertices.size()) : 0;
    if (row.witness_found) ++witnesses;
    if (!row.hypothesis_ok) ++violations;
    table.rows.push_back(row);
  }
  table.witness_fraction = static_cast<double>(witnesses) / trials;
  table.violation_rate = static_cast<double>(violations) / trials;
  return table;
}

}  // namespace udr
