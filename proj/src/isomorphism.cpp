#include "udr/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "udr/numeric.hpp"

namespace udr {

void SmallGraph::normalize_edges() {
  for (auto& e : edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

namespace {

struct Refiner {
  int n;
  std::vector<std::vector<int>> adj;
  std::vector<int> base_colors;

  // iterated refinement: new color = (old color, sorted neighbor colors)
  std::vector<int> refine(std::vector<int> colors) const {
    for (;;) {
      std::vector<std::pair<std::vector<int>, int>> sig(n);
      for (int v = 0; v < n; ++v) {
        std::vector<int> s;
        s.reserve(adj[v].size() + 1);
        s.push_back(colors[v]);
        std::vector<int> nb;
        nb.reserve(adj[v].size());
        for (int w : adj[v]) nb.push_back(colors[w]);
        std::sort(nb.begin(), nb.end());
        s.insert(s.end(), nb.begin(), nb.end());
        sig[v] = {std::move(s), v};
      }
      std::map<std::vector<int>, int> dense;
      for (const auto& [s, v] : sig) dense.emplace(s, 0);
      int next = 0;
      for (auto& [s, id] : dense) id = next++;
      std::vector<int> out(n);
      for (const auto& [s, v] : sig) out[v] = dense[s];
      if (out == colors) return out;
      colors = std::move(out);
    }
  }
};

struct CanonSearch {
  const Refiner& ref;
  long budget;
  bool exact = true;

  // best leaf so far: (colors-in-canonical-order, edge list)
  bool have_best = false;
  std::vector<int> best_perm;  // position -> vertex
  std::vector<int> best_colors;
  std::vector<std::pair<int, int>> best_edges;
  std::vector<std::vector<int>>* collect_autos = nullptr;
  std::size_t autos_cap = 0;
  bool autos_complete = true;

  void leaf(const std::vector<int>& colors) {
    // all classes singleton: canonical position = color
    int n = ref.n;
    std::vector<int> perm(n);  // position -> vertex
    for (int v = 0; v < n; ++v) perm[colors[v]] = v;
    std::vector<int> pos(n);
    for (int v = 0; v < n; ++v) pos[v] = colors[v];
    std::vector<int> lc(n);
    for (int v = 0; v < n; ++v) lc[pos[v]] = ref.base_colors.empty() ? 0 : ref.base_colors[v];
    std::vector<std::pair<int, int>> edges;
    edges.reserve(ref.adj.size());
    for (int v = 0; v < n; ++v)
      for (int w : ref.adj[v])
        if (v < w) {
          int a = pos[v], b = pos[w];
          edges.emplace_back(std::min(a, b), std::max(a, b));
        }
    std::sort(edges.begin(), edges.end());

    int cmp = 0;
    if (have_best) {
      if (lc != best_colors) cmp = lc < best_colors ? -1 : 1;
      else if (edges != best_edges) cmp = edges < best_edges ? -1 : 1;
    } else {
      cmp = -1;
    }
    if (cmp < 0) {
      have_best = true;
      best_perm = perm;
      best_colors = std::move(lc);
      best_edges = std::move(edges);
      if (collect_autos) {
        collect_autos->clear();
        autos_complete = true;
      }
    }
    if (cmp <= 0 && collect_autos) {
      if (collect_autos->size() < autos_cap) {
        std::vector<int> p(n);
        for (int v = 0; v < n; ++v) p[v] = pos[v];
        collect_autos->push_back(std::move(p));
      } else {
        autos_complete = false;
      }
    }
  }

  void search(std::vector<int> colors) {
    if (--budget < 0) {
      exact = false;
      return;
    }
    colors = ref.refine(std::move(colors));
    // first non-singleton class
    int n = ref.n;
    std::vector<int> count(n, 0);
    for (int v = 0; v < n; ++v) ++count[colors[v]];
    int target = -1;
    for (int v = 0; v < n; ++v)
      if (count[colors[v]] > 1 && (target < 0 || colors[v] < colors[target])) target = v;
    if (target < 0) {
      leaf(colors);
      return;
    }
    int tc = colors[target];
    for (int v = 0; v < n && budget >= 0; ++v) {
      if (colors[v] != tc) continue;
      std::vector<int> next = colors;
      // individualize v: give it a fresh color below its class
      for (int w = 0; w < n; ++w)
        if (next[w] > tc || (next[w] == tc && w != v)) next[w] += 1;
      search(std::move(next));
    }
  }
};

Refiner make_refiner(const SmallGraph& g) {
  Refiner ref;
  ref.n = g.n;
  ref.adj.assign(g.n, {});
  for (auto [a, b] : g.edges) {
    if (a < 0 || b < 0 || a >= g.n || b >= g.n || a == b)
      throw Error(Errc::InvalidInput, "bad edge in graph");
    ref.adj[a].push_back(b);
    ref.adj[b].push_back(a);
  }
  ref.base_colors = g.colors;
  if (!ref.base_colors.empty() && static_cast<int>(ref.base_colors.size()) != g.n)
    throw Error(Errc::InvalidInput, "color list size mismatch");
  return ref;
}

}  // namespace

CanonicalForm canonical_form(const SmallGraph& g, long budget) {
  Refiner ref = make_refiner(g);
  std::vector<int> init(g.n, 0);
  if (!g.colors.empty()) init = g.colors;
  CanonSearch cs{ref, budget};
  cs.search(init);
  CanonicalForm out;
  out.exact = cs.exact;
  if (!cs.have_best) {
    // budget hit before any leaf: fall back to refinement order
    std::vector<int> colors = ref.refine(init);
    std::vector<std::pair<int, int>> order;
    for (int v = 0; v < g.n; ++v) order.emplace_back(colors[v], v);
    std::sort(order.begin(), order.end());
    out.labeling.assign(g.n, 0);
    for (int i = 0; i < g.n; ++i) out.labeling[order[i].second] = i;
    out.exact = false;
  } else {
    out.labeling.assign(g.n, 0);
    for (int i = 0; i < g.n; ++i) out.labeling[cs.best_perm[i]] = i;
  }
  out.colors.assign(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    out.colors[out.labeling[v]] = g.colors.empty() ? 0 : g.colors[v];
  for (auto [a, b] : g.edges) {
    int x = out.labeling[a], y = out.labeling[b];
    out.edges.emplace_back(std::min(x, y), std::max(x, y));
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

std::string CanonicalForm::key() const {
  std::ostringstream os;
  os << labeling.size() << ";";
  for (int c : colors) os << c << ",";
  os << ";";
  for (auto [a, b] : edges) os << a << "-" << b << ",";
  if (!exact) os << ";~";
  return os.str();
}

bool are_isomorphic(const SmallGraph& a, const SmallGraph& b, long budget) {
  if (a.n != b.n || a.edges.size() != b.edges.size()) return false;
  return canonical_form(a, budget).key() == canonical_form(b, budget).key();
}

std::pair<std::vector<std::vector<int>>, bool> automorphisms(const SmallGraph& g, std::size_t cap,
                                                             long budget) {
  Refiner ref = make_refiner(g);
  std::vector<int> init(g.n, 0);
  if (!g.colors.empty()) init = g.colors;
  std::vector<std::vector<int>> labelings;
  CanonSearch cs{ref, budget};
  cs.collect_autos = &labelings;
  cs.autos_cap = cap;
  cs.search(init);
  bool complete = cs.exact && cs.autos_complete;
  // turn optimal labelings into automorphisms relative to the first
  std::vector<std::vector<int>> autos;
  if (!labelings.empty()) {
    const auto& l0 = labelings[0];
    std::vector<int> inv0(g.n);
    for (int v = 0; v < g.n; ++v) inv0[l0[v]] = v;
    for (const auto& l : labelings) {
      std::vector<int> perm(g.n);
      for (int v = 0; v < g.n; ++v) perm[v] = inv0[l[v]];
      autos.push_back(std::move(perm));
    }
  }
  return {autos, complete};
}

}  // namespace udr
