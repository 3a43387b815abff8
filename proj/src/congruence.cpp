#include "udr/congruence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "udr/isomorphism.hpp"
#include "udr/unit_graph.hpp"

namespace udr {

namespace {

double scale_of(const std::vector<std::array<double, 2>>& pts) {
  double s = 1.0;
  for (const auto& p : pts) s = std::max({s, std::abs(p[0]), std::abs(p[1])});
  return s;
}

}  // namespace

bool are_equivalent(const Framework& a, const Framework& b, double tol) {
  if (a.graph.n != b.graph.n || a.graph.edges != b.graph.edges)
    throw Error(Errc::GraphMismatch, "equivalence requires the same graph");
  bool exact = !a.realization.empty() && a.realization[0].mode() == NumericMode::Exact &&
               !b.realization.empty() && b.realization[0].mode() == NumericMode::Exact;
  for (auto [i, j] : a.graph.edges) {
    Scalar da = squared_distance(a.realization[i], a.realization[j]);
    Scalar db = squared_distance(b.realization[i], b.realization[j]);
    if (exact) {
      if (da.rat() != db.rat()) return false;
    } else if (std::abs(da.approx() - db.approx()) > tol) {
      return false;
    }
  }
  return true;
}

bool are_congruent(const Framework& a, const Framework& b, double tol) {
  if (a.realization.size() != b.realization.size()) return false;
  std::size_t n = a.realization.size();
  bool exact = n > 0 && a.realization[0].mode() == NumericMode::Exact &&
               b.realization[0].mode() == NumericMode::Exact;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Scalar da = squared_distance(a.realization[i], a.realization[j]);
      Scalar db = squared_distance(b.realization[i], b.realization[j]);
      if (exact) {
        if (da.rat() != db.rat()) return false;
      } else if (std::abs(da.approx() - db.approx()) > tol) {
        return false;
      }
    }
  return true;
}

namespace {

// lex-first anchor triple (i, j, k): p_i != p_j and the triple not collinear;
// falls back to the first distinct pair when everything is collinear
struct Anchors {
  int i = -1, j = -1, k = -1;
  bool collinear = false;   // no non-collinear triple exists
  bool coincident = false;  // all points equal
};

Anchors pick_anchors(const std::vector<Point>& pts, double tol) {
  int n = static_cast<int>(pts.size());
  Anchors a;
  for (int i = 0; i < n && a.i < 0; ++i)
    for (int j = i + 1; j < n && a.i < 0; ++j) {
      if (pts[i] == pts[j]) continue;
      for (int k = j + 1; k < n; ++k) {
        if (!are_collinear({pts[i], pts[j], pts[k]}, tol)) {
          a = {i, j, k, false, false};
          return a;
        }
      }
    }
  // collinear (or tiny) configuration
  for (int i = 0; i < n && a.i < 0; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!(pts[i] == pts[j])) {
        a = {i, j, j, true, false};
        return a;
      }
  a.coincident = true;
  return a;
}

}  // namespace

CongruenceKey congruence_key(const Framework& fw, double q_tol) {
  CongruenceKey key;
  const auto& pts = fw.realization;
  std::size_t n = pts.size();
  if (n == 0) {
    key.primary = key.offset = "empty";
    return key;
  }
  bool exact = pts[0].mode() == NumericMode::Exact;
  key.exact = exact;
  Anchors anc = pick_anchors(pts, exact ? 0.0 : q_tol / 10.0);
  if (anc.coincident) {
    key.primary = key.offset = "coincident:" + std::to_string(n);
    return key;
  }

  if (exact) {
    // anchor-scaled pose: rotation times |p_j - p_i| keeps everything rational
    Rational ix = pts[anc.i].x.rat(), iy = pts[anc.i].y.rat();
    Rational dx = pts[anc.j].x.rat() - ix, dy = pts[anc.j].y.rat() - iy;
    Rational r2 = dx * dx + dy * dy;
    std::vector<Rational> xs(n), ys(n);
    for (std::size_t t = 0; t < n; ++t) {
      Rational qx = pts[t].x.rat() - ix, qy = pts[t].y.rat() - iy;
      xs[t] = dx * qx + dy * qy;
      ys[t] = -dy * qx + dx * qy;
    }
    int flip = 0;
    for (std::size_t t = 0; t < n; ++t)
      if (ys[t] != 0) {
        flip = ys[t] < 0 ? -1 : 1;
        break;
      }
    if (flip < 0)
      for (auto& v : ys) v = -v;
    std::ostringstream os;
    os << "x:" << r2 << "|";
    for (std::size_t t = 0; t < n; ++t) os << xs[t] << "," << ys[t] << ";";
    key.primary = key.offset = os.str();
    return key;
  }

  std::vector<Point> posed = canonical_pose(pts, {anc.i, anc.j, anc.k}, q_tol / 10.0);
  std::ostringstream p1, p2;
  for (const auto& p : posed) {
    auto c = p.approx();
    for (double v : {c[0], c[1]}) {
      long long q1 = static_cast<long long>(std::llround(v / q_tol));
      long long q2 = static_cast<long long>(std::llround(v / q_tol + 0.5));
      p1 << q1 << ",";
      p2 << q2 << ",";
    }
  }
  key.primary = p1.str();
  key.offset = p2.str();
  return key;
}

CongruenceClasses congruence_classes(const std::vector<Framework>& frameworks, double q_tol) {
  std::size_t n = frameworks.size();
  CongruenceClasses out;
  if (n == 0) return out;
  std::size_t nv = frameworks[0].realization.size();
  for (const auto& fw : frameworks)
    if (fw.realization.size() != nv)
      throw Error(Errc::InvalidInput, "congruence classes require one common vertex count");

  // union-find over both quantization grids
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  std::map<std::string, int> by_primary, by_offset;
  for (std::size_t i = 0; i < n; ++i) {
    CongruenceKey k = congruence_key(frameworks[i], q_tol);
    auto [it1, fresh1] = by_primary.emplace(k.primary, static_cast<int>(i));
    if (!fresh1) unite(static_cast<int>(i), it1->second);
    auto [it2, fresh2] = by_offset.emplace(k.offset, static_cast<int>(i));
    if (!fresh2) unite(static_cast<int>(i), it2->second);
  }

  std::map<int, std::vector<int>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(static_cast<int>(i))].push_back(static_cast<int>(i));
  for (auto& [root, members] : groups) out.classes.push_back(std::move(members));
  std::stable_sort(out.classes.begin(), out.classes.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

namespace {

struct Placer {
  const Graph& g;
  const std::vector<double>& sq;
  double tol;
  std::vector<std::vector<std::pair<int, double>>> adj;  // neighbor, sq length
  std::vector<std::array<double, 2>> pos;
  std::vector<bool> placed;
  std::vector<std::vector<std::array<double, 2>>> complete;
  bool flexible = false;
  std::size_t branch_cap;

  Placer(const Graph& gg, const std::vector<double>& s, double t)
      : g(gg), sq(s), tol(t), branch_cap(2'000'000) {
    adj.assign(g.n, {});
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      auto [a, b] = g.edges[e];
      adj[a].push_back({b, sq[e]});
      adj[b].push_back({a, sq[e]});
    }
    pos.assign(g.n, {0, 0});
    placed.assign(g.n, false);
  }

  bool edges_ok(int v) const {
    for (auto [w, l2] : adj[v]) {
      if (!placed[w]) continue;
      double dx = pos[v][0] - pos[w][0], dy = pos[v][1] - pos[w][1];
      double scale = std::max({1.0, l2, dx * dx + dy * dy});
      if (std::abs(dx * dx + dy * dy - l2) > 64 * tol * scale) return false;
    }
    return true;
  }

  void rec(int placed_count) {
    if (flexible || branch_cap == 0) return;
    --branch_cap;
    if (placed_count == g.n) {
      complete.push_back(pos);
      return;
    }
    // next vertex: most placed neighbors, tie lowest id
    int best = -1, best_cnt = -1;
    for (int v = 0; v < g.n; ++v) {
      if (placed[v]) continue;
      int cnt = 0;
      for (auto [w, l2] : adj[v])
        if (placed[w]) ++cnt;
      if (cnt > best_cnt) {
        best_cnt = cnt;
        best = v;
      }
    }
    if (best_cnt < 2) {
      // a vertex pinned by fewer than two placed neighbors moves on a curve
      flexible = true;
      return;
    }
    int v = best;
    std::pair<int, double> c1{-1, 0}, c2{-1, 0};
    for (auto [w, l2] : adj[v]) {
      if (!placed[w]) continue;
      if (c1.first < 0) c1 = {w, l2};
      else if (c2.first < 0) {
        c2 = {w, l2};
        break;
      }
    }
    double ax = pos[c1.first][0], ay = pos[c1.first][1];
    double bx = pos[c2.first][0], by = pos[c2.first][1];
    double d2 = (ax - bx) * (ax - bx) + (ay - by) * (ay - by);
    double scale = std::max({1.0, c1.second, c2.second, d2});
    if (d2 <= tol * scale) {
      // both constraints share a center: a circle of positions remains
      flexible = true;
      return;
    }
    double d = std::sqrt(d2);
    double along = (d2 + c1.second - c2.second) / (2 * d);
    double h2 = c1.second - along * along;
    if (h2 < -64 * tol * scale) return;  // inconsistent lengths: dead branch
    double h = h2 > 0 ? std::sqrt(std::max(0.0, h2)) : 0.0;
    double ux = (bx - ax) / d, uy = (by - ay) / d;
    double basex = ax + along * ux, basey = ay + along * uy;
    int solutions = (h2 <= 64 * tol * scale) ? 1 : 2;
    for (int s = 0; s < solutions; ++s) {
      double sgn = s == 0 ? 1.0 : -1.0;
      pos[v] = {basex - sgn * h * uy, basey + sgn * h * ux};
      placed[v] = true;
      if (edges_ok(v)) rec(placed_count + 1);
      placed[v] = false;
      if (flexible) return;
    }
  }
};

bool realizations_congruent(const std::vector<std::array<double, 2>>& a,
                            const std::vector<std::array<double, 2>>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      double da = (a[i][0] - a[j][0]) * (a[i][0] - a[j][0]) +
                  (a[i][1] - a[j][1]) * (a[i][1] - a[j][1]);
      double db = (b[i][0] - b[j][0]) * (b[i][0] - b[j][0]) +
                  (b[i][1] - b[j][1]) * (b[i][1] - b[j][1]);
      double scale = std::max({1.0, da, db});
      if (std::abs(da - db) > 1e4 * tol * scale) return false;
    }
  return true;
}

}  // namespace

EnumerationResult enumerate_realizations(const Graph& g, const std::vector<double>& edge_sq_lengths,
                                         int max_vertices, double tol) {
  Graph gg = g;
  gg.normalize();
  if (gg.n > max_vertices)
    throw Error(Errc::InvalidInput, "graph exceeds the enumeration vertex cap");
  if (edge_sq_lengths.size() != gg.edges.size())
    throw Error(Errc::InvalidInput, "edge length list does not match the edge count");
  for (double l : edge_sq_lengths)
    if (!(l > 0)) throw Error(Errc::InvalidInput, "edge lengths must be positive");

  EnumerationResult out;
  if (gg.n == 0) return out;
  if (gg.n == 1) {
    out.realizations.push_back({{0.0, 0.0}});
    return out;
  }
  // connectivity
  {
    auto adj = gg.adjacency();
    std::vector<bool> seen(gg.n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
      throw Error(Errc::InvalidInput, "graph must be connected");
  }

  Placer placer(gg, edge_sq_lengths, tol);
  auto [a, b] = gg.edges[0];
  placer.pos[a] = {0.0, 0.0};
  placer.pos[b] = {std::sqrt(edge_sq_lengths[0]), 0.0};
  placer.placed[a] = placer.placed[b] = true;
  placer.rec(2);
  if (placer.flexible) {
    out.flexible = true;
    return out;
  }
  for (auto& r : placer.complete) {
    bool dup = false;
    for (const auto& kept : out.realizations)
      if (realizations_congruent(r, kept, tol)) {
        dup = true;
        break;
      }
    if (!dup) out.realizations.push_back(std::move(r));
  }
  double milnor = std::pow(9.0, gg.n);
  if (static_cast<double>(out.realizations.size()) > milnor)
    throw Error(Errc::InvalidInput, "realization count exceeds the 9^|V| bound");
  return out;
}

std::size_t repeated_distance_count(const PointSet& ps, const Scalar& dist_sq) {
  if (dist_sq.mode() != ps.unit_sq().mode())
    throw Error(Errc::ModeMismatch, "distance mode differs from point set mode");
  bool is_unit = ps.mode() == NumericMode::Exact
                     ? dist_sq.rat() == ps.unit_sq().rat()
                     : std::abs(dist_sq.dbl() - ps.unit_sq().dbl()) <= ps.tol();
  if (is_unit) return build_unit_graph(ps).edges.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      Scalar d2 = squared_distance(ps[i], ps[j]);
      if (ps.mode() == NumericMode::Exact) {
        if (d2.rat() == dist_sq.rat()) ++count;
      } else if (std::abs(d2.dbl() - dist_sq.dbl()) <= 2 * ps.tol()) {
        ++count;
      }
    }
  return count;
}

std::string PigeonholeReport::to_json() const {
  nlohmann::json j;
  j["inputs"] = inputs;
  j["witnesses"] = witnesses;
  j["iso_groups"] = iso_groups;
  j["largest_iso_group"] = largest_iso_group;
  j["congruence_classes_in_group"] = congruence_classes_in_group;
  j["largest_class"] = largest_class;
  j["grouping_exact"] = grouping_exact;
  j["distance_sq"] = distance_sq;
  j["derived_lower_bound"] = derived_lower_bound;
  j["direct_count"] = direct_count;
  j["bound_satisfied"] = bound_satisfied;
  j["two_index_claim_holds"] = two_index_claim_holds;
  auto jv = nlohmann::json::array();
  for (const auto& v : violations) {
    nlohmann::json e;
    e["gid1"] = v.gid1;
    e["gid2"] = v.gid2;
    e["inputs"] = v.inputs;
    jv.push_back(e);
  }
  j["violations"] = jv;
  j["chain_value"] = chain_value;
  j["note"] = note;
  return j.dump(2);
}

PigeonholeReport pigeonhole_simulation(const std::vector<PigeonholeInput>& graphs,
                                       const PointSet& p_prime, double h,
                                       const PigeonholeOptions& opts) {
  PigeonholeReport rep;
  rep.inputs = graphs.size();

  struct Witness {
    int input = 0;
    SmallGraph shape;
    std::vector<Point> embedding;     // canonical order
    std::vector<long long> gids;      // canonical order
    std::string iso_key;
    std::vector<std::vector<int>> autos;  // canonical-position permutations
    bool autos_complete = true;
  };
  std::vector<Witness> witnesses;

  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto& in = graphs[gi];
    Framework fw{in.graph, in.embedding};
    auto found = find_rigid_subframework(fw, 4, opts.tol, opts.caps);
    if (!found) continue;
    const auto& vs = found->vertices;

    std::vector<int> colors(in.graph.n, 1);
    for (int u : in.u_side) colors[u] = 0;
    SmallGraph sg;
    sg.n = static_cast<int>(vs.size());
    std::vector<int> local(in.graph.n, -1);
    for (std::size_t t = 0; t < vs.size(); ++t) local[vs[t]] = static_cast<int>(t);
    for (auto [x, y] : found->subgraph.edges)
      sg.edges.emplace_back(std::min(local[x], local[y]), std::max(local[x], local[y]));
    sg.normalize_edges();
    sg.colors.resize(sg.n);
    for (std::size_t t = 0; t < vs.size(); ++t) sg.colors[t] = colors[vs[t]];

    CanonicalForm cf = canonical_form(sg);
    Witness w;
    w.input = static_cast<int>(gi);
    w.iso_key = cf.key();
    if (!cf.exact) rep.grouping_exact = false;
    // reorder into canonical positions
    w.shape.n = sg.n;
    w.shape.edges = cf.edges;
    w.shape.colors = cf.colors;
    w.embedding.resize(sg.n, Point::real(0, 0));
    w.gids.resize(sg.n, -1);
    for (int v = 0; v < sg.n; ++v) {
      w.embedding[cf.labeling[v]] = in.embedding[vs[v]];
      w.gids[cf.labeling[v]] = in.global_ids.empty() ? vs[v] : in.global_ids[vs[v]];
    }
    auto [autos, complete] = automorphisms(w.shape);
    w.autos = std::move(autos);
    w.autos_complete = complete;
    if (!complete) rep.grouping_exact = false;
    witnesses.push_back(std::move(w));
  }
  rep.witnesses = witnesses.size();
  if (witnesses.empty()) {
    rep.note = "no certified rigid subframeworks; counting chain vacuous";
    rep.two_index_claim_holds = true;
    rep.bound_satisfied = true;
    return rep;
  }

  // isomorphism groups
  std::map<std::string, std::vector<int>> groups;
  for (std::size_t i = 0; i < witnesses.size(); ++i)
    groups[witnesses[i].iso_key].push_back(static_cast<int>(i));
  rep.iso_groups = groups.size();
  const std::vector<int>* largest = nullptr;
  for (const auto& [key, members] : groups)
    if (!largest || members.size() > largest->size()) largest = &members;
  rep.largest_iso_group = largest->size();

  // congruence classes inside the largest group, minimizing keys over the
  // automorphisms of the shared shape
  struct Placed {
    int witness;
    std::vector<int> pos_to_vertex;  // after the key-minimizing automorphism
  };
  std::map<std::string, std::vector<Placed>> classes;
  for (int wi : *largest) {
    const Witness& w = witnesses[wi];
    std::string best_key;
    std::vector<int> best_perm;
    const std::vector<std::vector<int>> identity{[&] {
      std::vector<int> id(w.shape.n);
      std::iota(id.begin(), id.end(), 0);
      return id;
    }()};
    const auto& perms = w.autos.empty() ? identity : w.autos;
    for (const auto& perm : perms) {
      Framework cand;
      cand.graph = Graph{w.shape.n, w.shape.edges};
      cand.realization.resize(w.shape.n, Point::real(0, 0));
      for (int t = 0; t < w.shape.n; ++t) cand.realization[t] = w.embedding[perm[t]];
      CongruenceKey k = congruence_key(cand, opts.q_tol);
      if (best_key.empty() || k.primary < best_key) {
        best_key = k.primary;
        best_perm = perm;
      }
    }
    classes[best_key].push_back({wi, best_perm});
  }
  rep.congruence_classes_in_group = classes.size();
  const std::vector<Placed>* big_class = nullptr;
  for (const auto& [key, members] : classes)
    if (!big_class || members.size() > big_class->size()) big_class = &members;
  rep.largest_class = big_class->size();

  // two canonical positions on the V side
  const Witness& w0 = witnesses[(*big_class)[0].witness];
  int v1 = -1, v2 = -1;
  for (int t = 0; t < w0.shape.n; ++t)
    if (w0.shape.colors[t] == 1) {
      if (v1 < 0) v1 = t;
      else if (v2 < 0) {
        v2 = t;
        break;
      }
    }
  if (v2 < 0) {
    rep.note = "largest class has fewer than two V-side vertices";
    rep.two_index_claim_holds = true;
    rep.bound_satisfied = true;
    return rep;
  }

  std::map<std::pair<long long, long long>, std::vector<int>> pair_counts;
  for (const auto& placed : *big_class) {
    const Witness& w = witnesses[placed.witness];
    long long g1 = w.gids[placed.pos_to_vertex[v1]];
    long long g2 = w.gids[placed.pos_to_vertex[v2]];
    pair_counts[{g1, g2}].push_back(w.input);
  }
  rep.two_index_claim_holds = true;
  for (const auto& [pq, inputs] : pair_counts)
    if (inputs.size() > 2) {
      rep.two_index_claim_holds = false;
      rep.violations.push_back({pq.first, pq.second, inputs});
    }

  {
    const auto& placed0 = (*big_class)[0];
    const Witness& w = witnesses[placed0.witness];
    Scalar d2 = squared_distance(w.embedding[placed0.pos_to_vertex[v1]],
                                 w.embedding[placed0.pos_to_vertex[v2]]);
    rep.distance_sq = d2.approx();
    std::size_t members = big_class->size();
    rep.derived_lower_bound = (members + 3) / 4;
    Scalar probe = p_prime.mode() == NumericMode::Exact
                       ? (d2.mode() == NumericMode::Exact ? d2 : Scalar(Rational(d2.approx())))
                       : Scalar(d2.approx());
    rep.direct_count = repeated_distance_count(p_prime, probe);
    rep.bound_satisfied = rep.direct_count >= rep.derived_lower_bound;
  }

  // paper chain value (usually vanishing at desk scale): k/(4 * 2^{h^12} * 9^{2 h^6})
  double h6 = std::pow(h, 6), h12 = h6 * h6;
  double log2chain = std::log2(static_cast<double>(graphs.size())) - 2.0 - h12 -
                     2.0 * h6 * std::log2(9.0);
  rep.chain_value = log2chain < -300 ? 0.0 : std::exp2(log2chain);
  return rep;
}

}  // namespace udr
