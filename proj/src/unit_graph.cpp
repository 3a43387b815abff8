#include "udr/unit_graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "udr/spatial_hash.hpp"

#include <nlohmann/json.hpp>

namespace udr {

namespace {

using nlohmann::json;

bool unit_pair(const PointSet& ps, const Point& a, const Point& b) {
  return ps.is_unit_sq(squared_distance(a, b));
}

// Fast candidate filter in double arithmetic: anything farther apart than the
// unit by a clearly-safe margin cannot satisfy the exact predicate.
inline bool plausible(const std::array<double, 2>& a, const std::array<double, 2>& b,
                      double unit_sq_d, double slack) {
  double dx = a[0] - b[0], dy = a[1] - b[1];
  return std::abs(dx * dx + dy * dy - unit_sq_d) <= slack;
}

}  // namespace

UnitDistanceGraph build_unit_graph(const PointSet& ps) {
  UnitDistanceGraph g;
  g.n = static_cast<int>(ps.size());
  const auto& pts = ps.float_view();
  double unit_sq_d = ps.unit_sq().approx();
  double unit_len = std::sqrt(std::max(unit_sq_d, 0.0));
  if (unit_len <= 0) return g;
  // float slack: generous; candidates are confirmed by the real predicate
  double slack = (ps.mode() == NumericMode::Float) ? 4.0 * ps.tol() + 1e-7 * (1.0 + unit_sq_d)
                                                   : 1e-6 * (1.0 + unit_sq_d);
  BucketGrid grid(pts, unit_len);
  for (int i = 0; i < g.n; ++i) {
    grid.for_candidates(pts[i][0], pts[i][1], [&](int j) {
      if (j >= i) return;
      if (!plausible(pts[i], pts[j], unit_sq_d, slack)) return;
      if (unit_pair(ps, ps[i], ps[j])) g.edges.emplace_back(j, i);
    });
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

UnitDistanceGraph build_unit_graph_oracle(const PointSet& ps) {
  UnitDistanceGraph g;
  g.n = static_cast<int>(ps.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (unit_pair(ps, ps[i], ps[j])) g.edges.emplace_back(i, j);
  return g;
}

std::size_t count_unit_distances(const PointSet& ps) { return build_unit_graph(ps).edges.size(); }

std::size_t count_unit_distances_oracle(const PointSet& ps) {
  return build_unit_graph_oracle(ps).edges.size();
}

IncidenceStructure incidences(const PointSet& points, const PointSet& centers) {
  if (points.mode() != centers.mode())
    throw Error(Errc::ModeMismatch, "incidences across numeric modes");
  IncidenceStructure inc;
  inc.num_points = static_cast<int>(points.size());
  inc.num_centers = static_cast<int>(centers.size());
  const auto& ppts = points.float_view();
  const auto& cpts = centers.float_view();
  double unit_sq_d = points.unit_sq().approx();
  double unit_len = std::sqrt(std::max(unit_sq_d, 0.0));
  if (unit_len <= 0) return inc;
  double slack = (points.mode() == NumericMode::Float)
                     ? 4.0 * points.tol() + 1e-7 * (1.0 + unit_sq_d)
                     : 1e-6 * (1.0 + unit_sq_d);
  BucketGrid grid(ppts, unit_len);
  for (int c = 0; c < inc.num_centers; ++c) {
    grid.for_candidates(cpts[c][0], cpts[c][1], [&](int p) {
      if (!plausible(ppts[p], cpts[c], unit_sq_d, slack)) return;
      if (points.is_unit_sq(squared_distance(points[p], centers[c]))) inc.pairs.emplace_back(p, c);
    });
  }
  std::sort(inc.pairs.begin(), inc.pairs.end());
  return inc;
}

IncidenceStructure incidences_oracle(const PointSet& points, const PointSet& centers) {
  if (points.mode() != centers.mode())
    throw Error(Errc::ModeMismatch, "incidences across numeric modes");
  IncidenceStructure inc;
  inc.num_points = static_cast<int>(points.size());
  inc.num_centers = static_cast<int>(centers.size());
  for (int p = 0; p < inc.num_points; ++p)
    for (int c = 0; c < inc.num_centers; ++c)
      if (points.is_unit_sq(squared_distance(points[p], centers[c]))) inc.pairs.emplace_back(p, c);
  return inc;
}

StBoundReport st_bound_check(std::size_t m_points, std::size_t n_curves,
                             std::size_t incidence_count, double constant) {
  StBoundReport r;
  double m = static_cast<double>(m_points), n = static_cast<double>(n_curves);
  r.bound = constant * (std::pow(m, 2.0 / 3.0) * std::pow(n, 2.0 / 3.0) + m + n);
  r.ratio = (r.bound > 0) ? static_cast<double>(incidence_count) / r.bound : 0.0;
  r.pass = static_cast<double>(incidence_count) <= r.bound;
  return r;
}

std::string UnitDistanceGraph::to_json() const {
  json j;
  j["n"] = n;
  auto arr = json::array();
  for (const auto& e : edges) arr.push_back({e.first, e.second});
  j["edges"] = arr;
  return j.dump();
}

std::string UnitDistanceGraph::to_tsv() const {
  std::ostringstream out;
  for (const auto& e : edges) out << e.first << "\t" << e.second << "\n";
  return out.str();
}

std::string IncidenceStructure::to_json() const {
  json j;
  j["num_points"] = num_points;
  j["num_centers"] = num_centers;
  auto arr = json::array();
  for (const auto& e : pairs) arr.push_back({e.first, e.second});
  j["pairs"] = arr;
  return j.dump();
}

}  // namespace udr
