#include "udr/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace udr {

double PolyFactor::eval(double x, double y) const {
  // powers up to degree, then one pass over graded-lex coefficients
  double xp[64], yp[64];
  xp[0] = yp[0] = 1.0;
  for (int i = 1; i <= degree; ++i) {
    xp[i] = xp[i - 1] * x;
    yp[i] = yp[i - 1] * y;
  }
  double acc = 0.0;
  std::size_t idx = 0;
  for (int t = 0; t <= degree; ++t)
    for (int b = 0; b <= t; ++b, ++idx) acc += coeffs[idx] * xp[t - b] * yp[b];
  return acc;
}

void PolyFactor::normalize(double tol) {
  double amax = 0.0;
  for (double c : coeffs) amax = std::max(amax, std::abs(c));
  if (amax <= 0.0) throw Error(Errc::InvalidInput, "identically zero polynomial factor");
  double norm2 = 0.0;
  for (double& c : coeffs) {
    c /= amax;
    norm2 += c * c;
  }
  zero_band = tol * (1.0 + std::sqrt(norm2));
}

PolyFactor compose_affine(const PolyFactor& f, double cx, double cy, double sx, double sy) {
  int d = f.degree;
  PolyFactor out;
  out.degree = d;
  out.coeffs.assign(PolyFactor::coeff_count(d), 0.0);
  out.zero_band = f.zero_band;

  // binomial table
  std::vector<std::vector<double>> binom(d + 1, std::vector<double>(d + 1, 0.0));
  for (int i = 0; i <= d; ++i) {
    binom[i][0] = 1.0;
    for (int j = 1; j <= i; ++j)
      binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0.0);
  }

  double tx = -sx * cx, ty = -sy * cy;
  std::size_t idx = 0;
  for (int t = 0; t <= d; ++t)
    for (int b = 0; b <= t; ++b, ++idx) {
      double c = f.coeffs[idx];
      if (c == 0.0) continue;
      int a = t - b;
      // (sx x + tx)^a (sy y + ty)^b
      for (int i = 0; i <= a; ++i) {
        double xi = binom[a][i] * std::pow(sx, i) * std::pow(tx, a - i);
        for (int j = 0; j <= b; ++j) {
          double yj = binom[b][j] * std::pow(sy, j) * std::pow(ty, b - j);
          out.coeffs[PolyFactor::index_of(i, j)] += c * xi * yj;
        }
      }
    }
  return out;
}

std::string BivariatePoly::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& f : factors) {
    nlohmann::json jf;
    jf["degree"] = f.degree;
    jf["coeffs"] = f.coeffs;
    jf["zero_band"] = f.zero_band;
    jf["order"] = "graded-lex: x^a y^b at index (a+b)(a+b+1)/2 + b";
    j.push_back(jf);
  }
  return j.dump();
}

}  // namespace udr
