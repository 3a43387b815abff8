#include "udr/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "udr/rng.hpp"
#include "udr/unit_graph.hpp"

namespace udr {

namespace {

// one rasterization pass: label nodes by flood fill over equal nonzero sign
// vectors, assign points through their own sign vectors
struct RasterRun {
  std::vector<Cell> cells;
  CellRaster raster;
  std::vector<int> point_cell;
  bool ok = true;  // every off-band point found a matching node
};

RasterRun rasterize(const BivariatePoly& f, const BBox& bbox, int res,
                    const std::vector<std::array<double, 2>>* points,
                    const std::vector<std::vector<std::int8_t>>* point_signs) {
  RasterRun run;
  int nodes = res + 1;
  run.raster.bbox = bbox;
  run.raster.resolution = res;
  run.raster.step_x = bbox.width() / res;
  run.raster.step_y = bbox.height() / res;
  std::size_t nf = f.factors.size();

  // per-node sign vectors, flattened
  std::vector<std::int8_t> signs(static_cast<std::size_t>(nodes) * nodes * nf);
  std::vector<bool> on_band(static_cast<std::size_t>(nodes) * nodes, false);
  for (int j = 0; j < nodes; ++j) {
    double y = bbox.ymin + j * run.raster.step_y;
    for (int i = 0; i < nodes; ++i) {
      double x = bbox.xmin + i * run.raster.step_x;
      std::size_t node = static_cast<std::size_t>(j) * nodes + i;
      for (std::size_t k = 0; k < nf; ++k) {
        int s = f.factors[k].sign_at(x, y);
        signs[node * nf + k] = static_cast<std::int8_t>(s);
        if (s == 0) on_band[node] = true;
      }
    }
  }

  run.raster.cell_of_node.assign(static_cast<std::size_t>(nodes) * nodes, -1);
  auto same_signs = [&](std::size_t a, std::size_t b) {
    for (std::size_t k = 0; k < nf; ++k)
      if (signs[a * nf + k] != signs[b * nf + k]) return false;
    return true;
  };

  // flood fill in scan order so ids are deterministic
  std::vector<std::size_t> stack;
  int next_id = 0;
  for (std::size_t start = 0; start < on_band.size(); ++start) {
    if (on_band[start] || run.raster.cell_of_node[start] >= 0) continue;
    int id = next_id++;
    Cell cell;
    cell.id = id;
    int si = static_cast<int>(start % nodes), sj = static_cast<int>(start / nodes);
    cell.sample = {bbox.xmin + si * run.raster.step_x, bbox.ymin + sj * run.raster.step_y};
    cell.signs.assign(&signs[start * nf], &signs[start * nf] + nf);
    cell.bbox = {cell.sample[0], cell.sample[1], cell.sample[0], cell.sample[1]};
    stack.assign(1, start);
    run.raster.cell_of_node[start] = id;
    while (!stack.empty()) {
      std::size_t node = stack.back();
      stack.pop_back();
      int i = static_cast<int>(node % nodes), j = static_cast<int>(node / nodes);
      double x = bbox.xmin + i * run.raster.step_x;
      double y = bbox.ymin + j * run.raster.step_y;
      cell.bbox.xmin = std::min(cell.bbox.xmin, x);
      cell.bbox.xmax = std::max(cell.bbox.xmax, x);
      cell.bbox.ymin = std::min(cell.bbox.ymin, y);
      cell.bbox.ymax = std::max(cell.bbox.ymax, y);
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        int ni = i + di[d], nj = j + dj[d];
        if (ni < 0 || nj < 0 || ni >= nodes || nj >= nodes) continue;
        std::size_t nn = static_cast<std::size_t>(nj) * nodes + ni;
        if (on_band[nn] || run.raster.cell_of_node[nn] >= 0) continue;
        if (!same_signs(start, nn)) continue;
        run.raster.cell_of_node[nn] = id;
        stack.push_back(nn);
      }
    }
    run.cells.push_back(std::move(cell));
  }

  if (points) {
    run.point_cell.assign(points->size(), -1);
    for (std::size_t p = 0; p < points->size(); ++p) {
      const auto& sv = (*point_signs)[p];
      bool zero = std::any_of(sv.begin(), sv.end(), [](std::int8_t s) { return s == 0; });
      if (zero) continue;
      int id = run.raster.locate((*points)[p][0], (*points)[p][1], sv, run.cells);
      if (id < 0) {
        run.ok = false;
        continue;
      }
      run.point_cell[p] = id;
      run.cells[id].members.push_back(static_cast<int>(p));
    }
  }
  return run;
}

std::vector<std::vector<int>> grouping_of(const std::vector<int>& point_cell) {
  // canonical grouping: classes ordered by smallest member
  std::vector<std::vector<int>> groups;
  std::vector<int> group_of_cell;
  int max_id = -1;
  for (int c : point_cell) max_id = std::max(max_id, c);
  group_of_cell.assign(static_cast<std::size_t>(max_id + 1), -1);
  for (std::size_t p = 0; p < point_cell.size(); ++p) {
    int c = point_cell[p];
    if (c < 0) continue;
    if (group_of_cell[c] < 0) {
      group_of_cell[c] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[group_of_cell[c]].push_back(static_cast<int>(p));
  }
  return groups;
}

}  // namespace

int CellRaster::locate(double x, double y, const std::vector<std::int8_t>& signs,
                       const std::vector<Cell>& cells) const {
  if (!bbox.contains(x, y)) return -1;
  int nodes = resolution + 1;
  int i0 = static_cast<int>(std::floor((x - bbox.xmin) / step_x));
  int j0 = static_cast<int>(std::floor((y - bbox.ymin) / step_y));
  i0 = std::clamp(i0, 0, resolution);
  j0 = std::clamp(j0, 0, resolution);
  int best = -1;
  double best_d2 = 0;
  // search the 4 surrounding nodes, then one ring out if none match
  for (int ring = 0; ring <= 1 && best < 0; ++ring) {
    for (int dj = -ring; dj <= 1 + ring; ++dj)
      for (int di = -ring; di <= 1 + ring; ++di) {
        int i = i0 + di, j = j0 + dj;
        if (i < 0 || j < 0 || i >= nodes || j >= nodes) continue;
        std::int32_t id = cell_of_node[static_cast<std::size_t>(j) * nodes + i];
        if (id < 0) continue;
        if (cells[id].signs != signs) continue;
        double nx = bbox.xmin + i * step_x, ny = bbox.ymin + j * step_y;
        double d2 = (nx - x) * (nx - x) + (ny - y) * (ny - y);
        if (best < 0 || d2 < best_d2) {
          best = id;
          best_d2 = d2;
        }
      }
  }
  return best;
}

ComplementCells cells_of_complement(const BivariatePoly& f, BBox bbox, int resolution,
                                    int max_refinements,
                                    const std::vector<std::array<double, 2>>* points) {
  if (resolution < 64) throw Error(Errc::InvalidInput, "raster resolution must be >= 64");
  if (f.factors.empty()) throw Error(Errc::InvalidInput, "empty partitioning polynomial");

  std::vector<std::vector<std::int8_t>> point_signs;
  if (points) {
    point_signs.resize(points->size());
    for (std::size_t p = 0; p < points->size(); ++p)
      f.sign_vector((*points)[p][0], (*points)[p][1], point_signs[p]);
  }

  int res = resolution;
  int agreements = 0;
  std::optional<RasterRun> prev;
  std::vector<std::vector<int>> prev_grouping;
  for (int step = 0; step <= max_refinements; ++step, res *= 2) {
    RasterRun run = rasterize(f, bbox, res, points, points ? &point_signs : nullptr);
    bool comparable = prev.has_value();
    if (comparable) {
      bool same = run.ok && prev->ok && run.cells.size() == prev->cells.size();
      if (same && points) same = grouping_of(run.point_cell) == prev_grouping;
      agreements = same ? agreements + 1 : 0;
    }
    if (points) prev_grouping = grouping_of(run.point_cell);
    prev = std::move(run);
    if (agreements >= 2) break;
  }
  if (agreements < 2) {
    std::ostringstream msg;
    msg << "cell identification did not stabilize within " << max_refinements
        << " refinements (last resolution " << prev->raster.resolution << ")";
    if (points) {
      msg << "; last assignment sizes";
      for (const auto& g : prev_grouping) msg << " " << g.size();
    }
    throw Error(Errc::UnstableCells, msg.str());
  }

  ComplementCells out;
  out.cells = std::move(prev->cells);
  out.raster = std::move(prev->raster);
  out.point_cell = std::move(prev->point_cell);
  out.refinements_used = static_cast<int>(std::log2(double(out.raster.resolution) / resolution));
  return out;
}

PartitionResult partition_points(const PointSet& ps, int degree, const PartitionOptions& opts) {
  if (degree < 1) throw Error(Errc::InvalidInput, "partition degree must be >= 1");
  const auto& pts = ps.float_view();
  std::size_t n = pts.size();
  double target = opts.c_occ * static_cast<double>(n) / (static_cast<double>(degree) * degree);

  PartitionResult result;
  result.stats.requested_degree = degree;
  result.stats.num_points = n;
  result.stats.occupancy_bound = target;

  // classes: current parts of the iterated halving; points in the band of any
  // factor drop out into the zero set
  std::vector<std::vector<int>> classes(1);
  classes[0].resize(n);
  std::iota(classes[0].begin(), classes[0].end(), 0);

  int remaining = degree;
  int stage = 0;
  while (remaining > 0) {
    std::vector<int> overfull;
    for (std::size_t c = 0; c < classes.size(); ++c)
      if (static_cast<double>(classes[c].size()) > target) overfull.push_back(static_cast<int>(c));
    if (overfull.empty() && !result.poly.factors.empty()) break;

    // largest classes first; deterministic tie-break by smallest member index
    std::sort(overfull.begin(), overfull.end(), [&](int a, int b) {
      if (classes[a].size() != classes[b].size()) return classes[a].size() > classes[b].size();
      return classes[a].front() < classes[b].front();
    });

    int d_needed = 1;
    while (veronese_dim(d_needed) < static_cast<int>(overfull.size())) ++d_needed;
    int d_stage = std::min(d_needed, remaining);
    if (opts.max_stage_degree > 0) d_stage = std::min(d_stage, opts.max_stage_degree);
    std::size_t capacity = static_cast<std::size_t>(veronese_dim(d_stage));

    // a few alternative registration windows over the overfull list; the
    // factor splitting the family best (smallest worst piece) wins
    std::optional<HamSandwichResult> best;
    int tries = std::max(1, opts.stage_candidates);
    for (int cand = 0; cand < tries; ++cand) {
      std::size_t offset = static_cast<std::size_t>(cand);
      if (!overfull.empty() && offset + 1 > overfull.size()) break;
      std::vector<std::vector<int>> registered;
      for (std::size_t k = 0; k < capacity && k < overfull.size(); ++k) {
        std::size_t pick = (k == 0) ? 0 : k + offset;  // keep the largest, shift the rest
        if (pick >= overfull.size()) pick = k;
        registered.push_back(classes[overfull[pick]]);
      }
      if (registered.empty())
        registered.push_back(classes.empty() ? std::vector<int>{} : classes[0]);

      HamSandwichOptions hs = opts.search;
      hs.tol = opts.tol;
      hs.seed = Rng::derive(opts.seed, 0x736861 + static_cast<std::uint64_t>(stage) * 17 +
                                           static_cast<std::uint64_t>(cand));
      hs.steer_cells = &classes;
      HamSandwichResult hsr = polynomial_ham_sandwich(pts, registered, d_stage, hs);
      if (!best || hsr.max_piece < best->max_piece) best = std::move(hsr);
      if (overfull.size() <= capacity) break;  // no alternative windows exist
    }
    result.certificates.push_back(best->certificate);
    const PolyFactor factor = best->factor;
    result.poly.factors.push_back(factor);

    // split every class by the new factor's banded sign
    std::vector<std::vector<int>> next;
    next.reserve(classes.size() * 2);
    for (auto& cls : classes) {
      std::vector<int> plus, minus;
      for (int p : cls) {
        int s = factor.sign_at(pts[p][0], pts[p][1]);
        if (s > 0) plus.push_back(p);
        else if (s < 0) minus.push_back(p);
        // band-zero points leave the iteration: they belong to Z(f)
      }
      if (!plus.empty()) next.push_back(std::move(plus));
      if (!minus.empty()) next.push_back(std::move(minus));
    }
    classes = std::move(next);
    remaining -= d_stage;
    ++stage;
  }

  if (result.poly.factors.empty()) {
    // zero-budget-consumed corner (tiny n): a single median line keeps the
    // polynomial nonzero of degree >= 1
    std::vector<std::vector<int>> all(1);
    all[0].resize(n);
    std::iota(all[0].begin(), all[0].end(), 0);
    HamSandwichOptions hs = opts.search;
    hs.tol = opts.tol;
    hs.seed = Rng::derive(opts.seed, 0x736800);
    HamSandwichResult hsr = polynomial_ham_sandwich(pts, all, 1, hs);
    result.certificates.push_back(hsr.certificate);
    result.poly.factors.push_back(hsr.factor);
  }

  BBox bbox = bounding_box(pts).padded(opts.bbox_pad + 1e-3);
  ComplementCells cc = cells_of_complement(result.poly, bbox, opts.resolution,
                                           opts.max_refinements, &pts);
  result.cells = std::move(cc.cells);
  result.raster = std::move(cc.raster);
  for (std::size_t p = 0; p < n; ++p)
    if (cc.point_cell[p] < 0) result.zero_set.push_back(static_cast<int>(p));

  result.stats.total_degree = result.poly.total_degree();
  result.stats.num_cells = result.cells.size();
  result.stats.zero_set_size = result.zero_set.size();
  result.stats.final_resolution = result.raster.resolution;
  std::size_t max_occ = 0;
  for (const auto& c : result.cells) max_occ = std::max(max_occ, c.members.size());
  result.stats.max_occupancy = max_occ;
  result.stats.occupancy_met = static_cast<double>(max_occ) <= target;
  result.stats.measured_c_occ =
      n > 0 ? static_cast<double>(max_occ) * degree * degree / static_cast<double>(n) : 0.0;
  result.stats.crossing_bound = opts.c_cross * degree;
  return result;
}

CircleCrossings circles_crossing_cell(const std::vector<std::array<double, 2>>& centers,
                                      double radius, PartitionResult& partition) {
  CircleCrossings out;
  out.cells_of_circle.resize(centers.size());
  out.unstable.assign(centers.size(), false);
  int degree = std::max(1, partition.poly.total_degree());
  std::vector<std::int8_t> sv;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    int k = std::max(64, 16 * degree);
    const int cap = 4096;
    std::vector<int> prev_cells;
    int agreements = 0;
    for (; k <= cap; k *= 2) {
      std::vector<int> hit;
      for (int t = 0; t < k; ++t) {
        double ang = (t + 0.5) * (2.0 * 3.141592653589793 / k);
        double x = centers[c][0] + radius * std::cos(ang);
        double y = centers[c][1] + radius * std::sin(ang);
        partition.poly.sign_vector(x, y, sv);
        if (std::any_of(sv.begin(), sv.end(), [](std::int8_t s) { return s == 0; })) continue;
        int id = partition.raster.locate(x, y, sv, partition.cells);
        if (id >= 0) hit.push_back(id);
      }
      std::sort(hit.begin(), hit.end());
      hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
      agreements = (hit == prev_cells) ? agreements + 1 : 0;
      prev_cells = std::move(hit);
      if (agreements >= 1 && k >= 256) break;
    }
    out.unstable[c] = agreements < 1;
    out.cells_of_circle[c] = std::move(prev_cells);
    out.max_crossings = std::max(out.max_crossings, out.cells_of_circle[c].size());
    for (int id : out.cells_of_circle[c]) partition.cells[id].crossing.push_back(static_cast<int>(c));
  }
  partition.stats.max_circle_crossings = out.max_crossings;
  partition.stats.crossing_met =
      static_cast<double>(out.max_crossings) <= partition.stats.crossing_bound;
  return out;
}

ZeroSetIncidenceReport incidences_on_zero_set(const PointSet& points, const PointSet& centers,
                                              const BivariatePoly& f) {
  ZeroSetIncidenceReport rep;
  IncidenceStructure inc = incidences(points, centers);
  rep.total_incidences = inc.pairs.size();
  const auto& pv = points.float_view();
  std::vector<bool> on_zero(points.size(), false);
  for (std::size_t p = 0; p < points.size(); ++p)
    on_zero[p] = f.in_zero_band(pv[p][0], pv[p][1]);
  for (const auto& pr : inc.pairs)
    if (on_zero[pr.first]) ++rep.incidences_on_zero;
  double deg = f.total_degree();
  rep.budget = static_cast<double>(centers.size()) * deg + static_cast<double>(points.size()) +
               deg * deg;
  rep.within_budget = static_cast<double>(rep.incidences_on_zero) <= rep.budget;
  rep.below_half = 2 * rep.incidences_on_zero < rep.total_incidences ||
                   (rep.total_incidences == 0 && rep.incidences_on_zero == 0);
  return rep;
}

std::string PartitionResult::to_json() const {
  nlohmann::json j;
  j["polynomial"] = nlohmann::json::parse(poly.to_json());
  auto jc = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json e;
    e["id"] = c.id;
    e["sample"] = {c.sample[0], c.sample[1]};
    e["bbox"] = {c.bbox.xmin, c.bbox.ymin, c.bbox.xmax, c.bbox.ymax};
    e["members"] = c.members;
    e["crossing"] = c.crossing;
    std::string sg;
    for (auto s : c.signs) sg += (s > 0 ? '+' : (s < 0 ? '-' : '0'));
    e["signs"] = sg;
    jc.push_back(e);
  }
  j["cells"] = jc;
  j["zero_set"] = zero_set;
  auto jcert = nlohmann::json::array();
  for (const auto& ct : certificates) {
    nlohmann::json e;
    e["set_sizes"] = ct.set_sizes;
    e["pos"] = ct.pos;
    e["neg"] = ct.neg;
    e["zero"] = ct.zero;
    e["holds"] = ct.holds;
    jcert.push_back(e);
  }
  j["certificates"] = jcert;
  j["stats"] = {{"requested_degree", stats.requested_degree},
                {"total_degree", stats.total_degree},
                {"num_cells", stats.num_cells},
                {"num_points", stats.num_points},
                {"zero_set_size", stats.zero_set_size},
                {"max_occupancy", stats.max_occupancy},
                {"occupancy_bound", stats.occupancy_bound},
                {"occupancy_met", stats.occupancy_met},
                {"measured_c_occ", stats.measured_c_occ},
                {"final_resolution", stats.final_resolution},
                {"max_circle_crossings", stats.max_circle_crossings},
                {"crossing_bound", stats.crossing_bound},
                {"crossing_met", stats.crossing_met}};
  return j.dump(2);
}

}  // namespace udr
