#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "udr/geometry.hpp"

namespace udr {

/// Finite planar point set. Points are pairwise distinct: exactly in exact
/// mode, up to tol in float mode (construction throws otherwise). unit_sq is
/// the squared length counted as "unit" by all predicates (default 1).
class PointSet {
 public:
  PointSet(std::vector<Point> points, NumericMode mode, Scalar unit_sq, double tol = kDefaultTol);
  static PointSet exact(std::vector<Point> points, Scalar unit_sq = Scalar(Rational(1)));
  static PointSet real(std::vector<Point> points, double unit_sq = 1.0, double tol = kDefaultTol);

  NumericMode mode() const { return mode_; }
  double tol() const { return tol_; }
  const Scalar& unit_sq() const { return unit_sq_; }
  std::size_t size() const { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }

  /// Double approximation of the coordinates (identical to the stored values
  /// in float mode); used by partitioning and hashing.
  const std::vector<std::array<double, 2>>& float_view() const { return approx_; }

  /// True iff the squared distance d2 counts as the unit: exact equality in
  /// exact mode, |d2 - unit_sq| <= 2*tol in float mode.
  bool is_unit_sq(const Scalar& d2) const;

  /// Subset by index list (preserves mode/unit/tol; indices must be valid).
  PointSet subset(const std::vector<int>& indices) const;

  std::string to_text() const;
  static PointSet from_text(std::istream& in);
  static PointSet load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::vector<Point> points_;
  NumericMode mode_;
  Scalar unit_sq_;
  double tol_;
  std::vector<std::array<double, 2>> approx_;
};

}  // namespace udr
