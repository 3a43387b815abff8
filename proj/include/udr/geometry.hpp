#pragma once

#include <array>
#include <vector>

#include "udr/numeric.hpp"

namespace udr {

struct Point {
  Scalar x, y;

  Point() = default;
  Point(Scalar px, Scalar py) : x(std::move(px)), y(std::move(py)) {
    if (x.mode() != y.mode()) throw Error(Errc::ModeMismatch, "point coordinates with mixed modes");
  }
  static Point exact(long long px, long long py) {
    return Point(Scalar(Rational(px)), Scalar(Rational(py)));
  }
  static Point real(double px, double py) { return Point(Scalar(px), Scalar(py)); }

  NumericMode mode() const { return x.mode(); }
  std::array<double, 2> approx() const { return {x.approx(), y.approx()}; }

  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
};

/// Squared Euclidean distance; exact in exact mode.
Scalar squared_distance(const Point& p, const Point& q);

/// Planar isometry x -> M x + t with M orthogonal, det = +-1.
struct Isometry {
  // row-major 2x2
  std::array<Scalar, 4> m;
  std::array<Scalar, 2> t;

  Point apply(const Point& p) const;
  static Isometry rotation(double angle, NumericMode mode);
  static Isometry translation(const Scalar& tx, const Scalar& ty);
  static Isometry reflection_x(NumericMode mode);
  Isometry then(const Isometry& next) const;
};

/// Moves points[i] to the origin and points[j] onto the positive x axis; if
/// points[k] then lies strictly below the axis the whole set is reflected so
/// it has y >= 0. Pairwise distances are preserved.
///
/// In exact mode the required rotation is rational only when |p_j - p_i| is
/// rational; otherwise the result is produced in float mode (algebraic
/// coordinates are out of scope).
std::vector<Point> canonical_pose(const std::vector<Point>& points, std::array<int, 3> anchors,
                                  double tol = kDefaultTol);

/// True iff all points lie on one line (<= 2 points are always collinear).
/// Exact mode decides by exact determinant signs; float mode compares the
/// determinant against tol * squared diameter of each triple.
bool are_collinear(const std::vector<Point>& points, double tol = kDefaultTol);

struct BBox {
  double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  BBox padded(double pad) const { return {xmin - pad, ymin - pad, xmax + pad, ymax + pad}; }
  bool contains(double x, double y) const {
    return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
  }
};

BBox bounding_box(const std::vector<std::array<double, 2>>& pts);

}  // namespace udr
