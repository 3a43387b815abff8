#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "udr/polynomial.hpp"

namespace udr {

/// Discrete-bisection certificate for one factor: for every registered set S,
/// at most ceil(|S|/2) points are strictly positive and at most ceil(|S|/2)
/// strictly negative (zero-band points count as neither).
struct BisectionCertificate {
  std::vector<int> set_sizes;
  std::vector<int> pos;
  std::vector<int> neg;
  std::vector<int> zero;
  bool holds = false;

  int imbalance() const {
    int total = 0;
    for (std::size_t i = 0; i < set_sizes.size(); ++i) {
      int cap = (set_sizes[i] + 1) / 2;
      total += std::max(0, pos[i] - cap) + std::max(0, neg[i] - cap);
    }
    return total;
  }
};

struct HamSandwichOptions {
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  int restarts = 24;
  int iters = 240;
  /// Optional steering family: after the certificate holds, keep polishing to
  /// minimize the largest piece any of these cells is split into.
  const std::vector<std::vector<int>>* steer_cells = nullptr;
  int steer_iters = 120;
  /// With steering on, keep searching over this many certified restarts and
  /// return the best split found.
  int keep_best_restarts = 2;
};

struct HamSandwichResult {
  PolyFactor factor;
  BisectionCertificate certificate;
  /// Largest side of the split of any steering cell (if steering was on).
  int max_piece = 0;
};

/// Finds a polynomial of degree <= degree_budget that discretely bisects every
/// set (given as index lists into points): seeded randomized hyperplane search
/// in the lifted (Veronese) coefficient space, with line sweeps along random
/// directions and explicit certificate verification.
///
/// Throws Errc::InfeasibleBudget when sets.size() exceeds the Veronese
/// dimension of the budget, Errc::SearchFailure (message carries the best
/// achieved imbalance) when no certified factor is found.
HamSandwichResult polynomial_ham_sandwich(const std::vector<std::array<double, 2>>& points,
                                          const std::vector<std::vector<int>>& sets,
                                          int degree_budget, const HamSandwichOptions& opts = {});

/// Convenience overload: each set given by value.
HamSandwichResult polynomial_ham_sandwich(const std::vector<std::vector<std::array<double, 2>>>& sets,
                                          int degree_budget, const HamSandwichOptions& opts = {});

/// Recounts the certificate of `factor` against the given sets (band rules).
BisectionCertificate verify_bisection(const PolyFactor& factor,
                                      const std::vector<std::array<double, 2>>& points,
                                      const std::vector<std::vector<int>>& sets);

}  // namespace udr
