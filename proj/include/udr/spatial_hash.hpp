#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace udr {

/// Uniform bucket grid for fixed-radius candidate generation. Bucket side is
/// the query radius (inflated by a hair so rounding can never push two
/// radius-distant points out of adjacent buckets); all pairs at distance
/// <= radius are found inside the 3x3 bucket neighborhood.
class BucketGrid {
 public:
  BucketGrid(const std::vector<std::array<double, 2>>& pts, double radius)
      : side_(radius * (1.0 + 1e-12) + 1e-300) {
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
      cells_[cell_key(coord(pts[i][0]), coord(pts[i][1]))].push_back(i);
  }

  /// Indices in the 3x3 neighborhood of (x, y), invoked as cb(index).
  template <typename Fn>
  void for_candidates(double x, double y, Fn&& cb) const {
    std::int64_t cx = coord(x), cy = coord(y);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find(cell_key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (int j : it->second) cb(j);
      }
  }

  std::int64_t coord(double v) const { return static_cast<std::int64_t>(std::floor(v / side_)); }

 private:
  static std::uint64_t cell_key(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ULL) ^
           (static_cast<std::uint64_t>(y) * 0xc2b2ae3d27d4eb4fULL + 0x165667b19e3779f9ULL);
  }

  double side_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace udr
