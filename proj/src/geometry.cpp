#include "udr/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace udr {

Scalar squared_distance(const Point& p, const Point& q) {
  if (p.mode() != q.mode()) throw Error(Errc::ModeMismatch, "squared_distance across modes");
  Scalar dx = p.x - q.x;
  Scalar dy = p.y - q.y;
  return dx * dx + dy * dy;
}

Point Isometry::apply(const Point& p) const {
  return Point(m[0] * p.x + m[1] * p.y + t[0], m[2] * p.x + m[3] * p.y + t[1]);
}

Isometry Isometry::rotation(double angle, NumericMode mode) {
  if (mode == NumericMode::Exact)
    throw Error(Errc::InvalidInput, "exact rotations must be built from rational cos/sin pairs");
  double c = std::cos(angle), s = std::sin(angle);
  return Isometry{{Scalar(c), Scalar(-s), Scalar(s), Scalar(c)}, {Scalar(0.0), Scalar(0.0)}};
}

Isometry Isometry::translation(const Scalar& tx, const Scalar& ty) {
  NumericMode mode = tx.mode();
  Scalar one = Scalar::from_int(1, mode), zero = Scalar::from_int(0, mode);
  return Isometry{{one, zero, zero, one}, {tx, ty}};
}

Isometry Isometry::reflection_x(NumericMode mode) {
  Scalar one = Scalar::from_int(1, mode), zero = Scalar::from_int(0, mode);
  return Isometry{{one, zero, zero, -one}, {zero, zero}};
}

Isometry Isometry::then(const Isometry& next) const {
  Isometry r;
  r.m = {next.m[0] * m[0] + next.m[1] * m[2], next.m[0] * m[1] + next.m[1] * m[3],
         next.m[2] * m[0] + next.m[3] * m[2], next.m[2] * m[1] + next.m[3] * m[3]};
  r.t = {next.m[0] * t[0] + next.m[1] * t[1] + next.t[0],
         next.m[2] * t[0] + next.m[3] * t[1] + next.t[1]};
  return r;
}

namespace {

std::vector<Point> canonical_pose_float(std::vector<std::array<double, 2>> pts,
                                        std::array<int, 3> anchors, double tol) {
  auto [i, j, k] = anchors;
  double ox = pts[i][0], oy = pts[i][1];
  for (auto& p : pts) {
    p[0] -= ox;
    p[1] -= oy;
  }
  double dx = pts[j][0], dy = pts[j][1];
  double r = std::hypot(dx, dy);
  if (r == 0.0) throw Error(Errc::DegenerateAnchor, "anchor points i and j coincide");
  double c = dx / r, s = dy / r;
  for (auto& p : pts) {
    double nx = c * p[0] + s * p[1];
    double ny = -s * p[0] + c * p[1];
    p = {nx, ny};
  }
  (void)tol;
  if (pts[k][1] < 0.0)
    for (auto& p : pts) p[1] = -p[1];
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(Point::real(p[0], p[1]));
  return out;
}

}  // namespace

std::vector<Point> canonical_pose(const std::vector<Point>& points, std::array<int, 3> anchors,
                                  double tol) {
  auto [i, j, k] = anchors;
  int n = static_cast<int>(points.size());
  if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n)
    throw Error(Errc::InvalidInput, "anchor index out of range");
  if (points[i] == points[j]) throw Error(Errc::DegenerateAnchor, "anchor points i and j coincide");

  if (points[0].mode() == NumericMode::Float) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.push_back(p.approx());
    return canonical_pose_float(std::move(pts), anchors, tol);
  }

  // Exact path: the rotation is rational iff |p_j - p_i| is rational.
  Rational dx = (points[j].x - points[i].x).rat();
  Rational dy = (points[j].y - points[i].y).rat();
  Rational r2 = dx * dx + dy * dy;
  Rational r;
  if (!exact_sqrt(r2, r)) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.push_back(p.approx());
    return canonical_pose_float(std::move(pts), anchors, tol);
  }
  Rational c = dx / r, s = dy / r;
  std::vector<Point> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    Rational px = p.x.rat() - points[i].x.rat();
    Rational py = p.y.rat() - points[i].y.rat();
    out.emplace_back(Scalar(Rational(c * px + s * py)), Scalar(Rational(-s * px + c * py)));
  }
  if (out[k].y.rat() < 0)
    for (auto& p : out) p.y = -p.y;
  return out;
}

bool are_collinear(const std::vector<Point>& points, double tol) {
  std::size_t n = points.size();
  if (n <= 2) return true;

  if (points[0].mode() == NumericMode::Exact) {
    // Fix the first pair of distinct points; every other point must sit on
    // their line.
    std::size_t b = 1;
    while (b < n && points[b] == points[0]) ++b;
    if (b == n) return true;
    Rational ax = points[0].x.rat(), ay = points[0].y.rat();
    Rational ux = points[b].x.rat() - ax, uy = points[b].y.rat() - ay;
    for (std::size_t t = 1; t < n; ++t) {
      Rational vx = points[t].x.rat() - ax, vy = points[t].y.rat() - ay;
      if (ux * vy - uy * vx != 0) return false;
    }
    return true;
  }

  std::vector<std::array<double, 2>> pts;
  pts.reserve(n);
  for (const auto& p : points) pts.push_back(p.approx());
  std::size_t b = 1, best = 1;
  double bestd = -1;
  for (std::size_t t = 1; t < n; ++t) {
    double d = std::hypot(pts[t][0] - pts[0][0], pts[t][1] - pts[0][1]);
    if (d > bestd) {
      bestd = d;
      best = t;
    }
  }
  b = best;
  if (bestd == 0.0) return true;
  for (std::size_t t = 1; t < n; ++t) {
    double ux = pts[b][0] - pts[0][0], uy = pts[b][1] - pts[0][1];
    double vx = pts[t][0] - pts[0][0], vy = pts[t][1] - pts[0][1];
    double det = ux * vy - uy * vx;
    // scale-relative verdict: compare against tol * squared diameter of the triple
    double diam2 = std::max({ux * ux + uy * uy, vx * vx + vy * vy,
                             (ux - vx) * (ux - vx) + (uy - vy) * (uy - vy)});
    if (std::abs(det) > tol * diam2) return false;
  }
  return true;
}

BBox bounding_box(const std::vector<std::array<double, 2>>& pts) {
  BBox b;
  if (pts.empty()) return b;
  b = {pts[0][0], pts[0][1], pts[0][0], pts[0][1]};
  for (const auto& p : pts) {
    b.xmin = std::min(b.xmin, p[0]);
    b.xmax = std::max(b.xmax, p[0]);
    b.ymin = std::min(b.ymin, p[1]);
    b.ymax = std::max(b.ymax, p[1]);
  }
  return b;
}

}  // namespace udr
