#include "udr/pointset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace udr {

namespace {

void check_distinct_exact(const std::vector<Point>& pts) {
  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts[a].x.rat() != pts[b].x.rat()) return pts[a].x.rat() < pts[b].x.rat();
    return pts[a].y.rat() < pts[b].y.rat();
  });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (pts[order[i - 1]] == pts[order[i]])
      throw Error(Errc::DuplicatePoints,
                  "duplicate point at indices " + std::to_string(order[i - 1]) + "," +
                      std::to_string(order[i]));
}

void check_distinct_float(const std::vector<std::array<double, 2>>& pts, double tol) {
  if (tol <= 0) throw Error(Errc::InvalidInput, "tol must be positive in float mode");
  std::unordered_map<std::uint64_t, std::vector<int>> buckets;
  auto key = [tol](double x, double y) {
    auto ix = static_cast<std::int64_t>(std::floor(x / tol));
    auto iy = static_cast<std::int64_t>(std::floor(y / tol));
    return (static_cast<std::uint64_t>(ix) * 0x9e3779b97f4a7c15ULL) ^
           (static_cast<std::uint64_t>(iy) + 0x7f4a7c15ULL);
  };
  double tol2 = tol * tol;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    auto ix = static_cast<std::int64_t>(std::floor(pts[i][0] / tol));
    auto iy = static_cast<std::int64_t>(std::floor(pts[i][1] / tol));
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find((static_cast<std::uint64_t>(ix + dx) * 0x9e3779b97f4a7c15ULL) ^
                               (static_cast<std::uint64_t>(iy + dy) + 0x7f4a7c15ULL));
        if (it == buckets.end()) continue;
        for (int j : it->second) {
          double ddx = pts[i][0] - pts[j][0], ddy = pts[i][1] - pts[j][1];
          if (ddx * ddx + ddy * ddy <= tol2)
            throw Error(Errc::DuplicatePoints, "points " + std::to_string(j) + "," +
                                                   std::to_string(i) + " coincide within tol");
        }
      }
    buckets[key(pts[i][0], pts[i][1])].push_back(i);
  }
}

}  // namespace

PointSet::PointSet(std::vector<Point> points, NumericMode mode, Scalar unit_sq, double tol)
    : points_(std::move(points)), mode_(mode), unit_sq_(std::move(unit_sq)), tol_(tol) {
  for (const auto& p : points_)
    if (p.mode() != mode_) throw Error(Errc::ModeMismatch, "point mode differs from set mode");
  if (unit_sq_.mode() != mode_) throw Error(Errc::ModeMismatch, "unit_sq mode differs from set mode");
  approx_.reserve(points_.size());
  for (const auto& p : points_) approx_.push_back(p.approx());
  if (mode_ == NumericMode::Exact)
    check_distinct_exact(points_);
  else
    check_distinct_float(approx_, tol_);
}

PointSet PointSet::exact(std::vector<Point> points, Scalar unit_sq) {
  return PointSet(std::move(points), NumericMode::Exact, std::move(unit_sq));
}

PointSet PointSet::real(std::vector<Point> points, double unit_sq, double tol) {
  return PointSet(std::move(points), NumericMode::Float, Scalar(unit_sq), tol);
}

bool PointSet::is_unit_sq(const Scalar& d2) const {
  if (mode_ == NumericMode::Exact) return d2.rat() == unit_sq_.rat();
  return std::abs(d2.dbl() - unit_sq_.dbl()) <= 2.0 * tol_;
}

PointSet PointSet::subset(const std::vector<int>& indices) const {
  std::vector<Point> pts;
  pts.reserve(indices.size());
  for (int i : indices) pts.push_back(points_.at(static_cast<std::size_t>(i)));
  return PointSet(std::move(pts), mode_, unit_sq_, tol_);
}

std::string PointSet::to_text() const {
  std::ostringstream out;
  out << "# udr points\n";
  out << "# mode " << (mode_ == NumericMode::Exact ? "exact" : "float") << "\n";
  out << "# unit_sq " << unit_sq_.str() << "\n";
  if (mode_ == NumericMode::Float) out << "# tol " << format_double(tol_) << "\n";
  for (const auto& p : points_) out << p.x.str() << " " << p.y.str() << "\n";
  return out.str();
}

PointSet PointSet::from_text(std::istream& in) {
  NumericMode mode = NumericMode::Exact;
  std::string unit_text = "1";
  double tol = kDefaultTol;
  std::vector<std::array<std::string, 2>> raw;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a)) continue;
    if (a == "#") {
      std::string k, v;
      if (ls >> k >> v) {
        if (k == "mode") mode = (v == "float") ? NumericMode::Float : NumericMode::Exact;
        if (k == "unit_sq") unit_text = v;
        if (k == "tol") tol = std::stod(v);
      }
      continue;
    }
    if (a[0] == '#') continue;
    if (!(ls >> b)) throw Error(Errc::Io, "point line with a single coordinate: " + line);
    raw.push_back({a, b});
  }
  std::vector<Point> pts;
  pts.reserve(raw.size());
  for (const auto& r : raw) pts.emplace_back(Scalar::parse(r[0], mode), Scalar::parse(r[1], mode));
  return PointSet(std::move(pts), mode, Scalar::parse(unit_text, mode), tol);
}

PointSet PointSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open point file: " + path);
  return from_text(in);
}

void PointSet::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write point file: " + path);
  out << to_text();
}

}  // namespace udr
