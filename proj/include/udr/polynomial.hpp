#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "udr/numeric.hpp"

namespace udr {

/// Dense bivariate polynomial in graded-lex coefficient order: the monomial
/// x^a y^b with t = a+b sits at index t(t+1)/2 + b. Factors are normalized to
/// max |coeff| = 1; |f(p)| <= zero_band counts as "on the zero set".
struct PolyFactor {
  int degree = 0;
  std::vector<double> coeffs;
  double zero_band = 0.0;

  static std::size_t index_of(int a, int b) {
    int t = a + b;
    return static_cast<std::size_t>(t) * (t + 1) / 2 + static_cast<std::size_t>(b);
  }
  static std::size_t coeff_count(int degree) {
    return static_cast<std::size_t>(degree + 1) * (degree + 2) / 2;
  }

  double eval(double x, double y) const;
  /// -1 / 0 / +1 with the zero band.
  int sign_at(double x, double y) const {
    double v = eval(x, y);
    if (v > zero_band) return 1;
    if (v < -zero_band) return -1;
    return 0;
  }
  /// Rescales so max |coeff| = 1 and sets zero_band = tol * (1 + ||coeffs||_2).
  void normalize(double tol);
};

/// Partitioning polynomial kept in factored form (product of the bisecting
/// factors), which makes sign vectors cheap and mirrors the construction.
struct BivariatePoly {
  std::vector<PolyFactor> factors;

  int total_degree() const {
    int d = 0;
    for (const auto& f : factors) d += f.degree;
    return d;
  }
  bool in_zero_band(double x, double y) const {
    for (const auto& f : factors)
      if (f.sign_at(x, y) == 0) return true;
    return false;
  }
  void sign_vector(double x, double y, std::vector<std::int8_t>& out) const {
    out.resize(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i)
      out[i] = static_cast<std::int8_t>(factors[i].sign_at(x, y));
  }

  std::string to_json() const;
};

/// Number of non-constant monomials of degree <= d (the Veronese dimension
/// that bounds how many sets one degree-d polynomial can bisect).
inline int veronese_dim(int degree) { return degree * (degree + 3) / 2; }

/// Composes f with the affine map x -> sx*(x - cx), y -> sy*(y - cy), i.e.
/// returns g with g(x, y) = f(sx*(x-cx), sy*(y-cy)).
PolyFactor compose_affine(const PolyFactor& f, double cx, double cy, double sx, double sy);

}  // namespace udr
