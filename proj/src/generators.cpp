#include "udr/generators.hpp"

#include <cmath>

#include "udr/rng.hpp"

namespace udr {

GeneratorKind generator_kind_from_string(const std::string& s) {
  if (s == "integer_grid") return GeneratorKind::IntegerGrid;
  if (s == "scaled_grid_unit") return GeneratorKind::ScaledGridUnit;
  if (s == "random_disk") return GeneratorKind::RandomDisk;
  if (s == "pseudo_generic") return GeneratorKind::PseudoGeneric;
  throw Error(Errc::InvalidInput, "unknown generator kind: " + s);
}

std::string generator_kind_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::IntegerGrid: return "integer_grid";
    case GeneratorKind::ScaledGridUnit: return "scaled_grid_unit";
    case GeneratorKind::RandomDisk: return "random_disk";
    case GeneratorKind::PseudoGeneric: return "pseudo_generic";
  }
  return "?";
}

PointSet integer_grid(int m) {
  if (m < 1) throw Error(Errc::InvalidInput, "grid side must be >= 1");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(m) * m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) pts.push_back(Point::exact(x, y));
  return PointSet::exact(std::move(pts));
}

std::pair<long long, std::size_t> best_popular_square_distance(int m) {
  if (m < 2) throw Error(Errc::InvalidInput, "need m >= 2");
  // histogram over all pairs, indexed by the integer squared distance
  std::size_t maxd = static_cast<std::size_t>(2) * (m - 1) * (m - 1);
  std::vector<std::size_t> hist(maxd + 1, 0);
  // pair (dx, dy) with dx in [0, m), dy in (-m, m) counted once per direction;
  // multiplicity = number of grid translates
  for (int dx = 0; dx < m; ++dx)
    for (int dy = (dx == 0 ? 1 : -(m - 1)); dy < m; ++dy) {
      if (dx == 0 && dy <= 0) continue;
      long long d2 = static_cast<long long>(dx) * dx + static_cast<long long>(dy) * dy;
      std::size_t mult = static_cast<std::size_t>(m - dx) * (m - std::abs(dy));
      hist[static_cast<std::size_t>(d2)] += mult;
    }
  long long best = 1;
  std::size_t best_count = 0;
  for (std::size_t d = 1; d < hist.size(); ++d)
    if (hist[d] > best_count) {
      best_count = hist[d];
      best = static_cast<long long>(d);
    }
  return {best, best_count};
}

ScaledGridResult scaled_grid_unit(int m, long long d, NumericMode mode, double tol) {
  if (m < 1) throw Error(Errc::InvalidInput, "grid side must be >= 1");
  if (d < 1) throw Error(Errc::InvalidInput, "squared distance must be >= 1");
  ScaledGridResult res{integer_grid(m), is_sum_of_two_squares(d)};
  if (mode == NumericMode::Exact) {
    std::vector<Point> pts = res.points.points();
    res.points = PointSet(std::move(pts), NumericMode::Exact, Scalar(Rational(d)), tol);
    return res;
  }
  double inv = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(m) * m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) pts.push_back(Point::real(x * inv, y * inv));
  res.points = PointSet::real(std::move(pts), 1.0, tol);
  return res;
}

PointSet random_disk(int m, std::uint64_t seed, double tol) {
  if (m < 1) throw Error(Errc::InvalidInput, "need m >= 1 points");
  Rng rng(seed);
  double radius = m / 2.0;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(m));
  while (static_cast<int>(pts.size()) < m) {
    double x = rng.uniform(-radius, radius), y = rng.uniform(-radius, radius);
    if (x * x + y * y <= radius * radius) pts.push_back(Point::real(x, y));
  }
  return PointSet::real(std::move(pts), 1.0, tol);
}

std::vector<Point> pseudo_generic_realization(int num_vertices, std::uint64_t seed,
                                              double coordinate_range) {
  if (num_vertices < 1) throw Error(Errc::InvalidInput, "graph must be nonempty");
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(num_vertices));
  for (int i = 0; i < num_vertices; ++i)
    pts.push_back(
        Point::real(rng.uniform(-coordinate_range, coordinate_range),
                    rng.uniform(-coordinate_range, coordinate_range)));
  return pts;
}

PointSet perturb(const PointSet& ps, double epsilon, std::uint64_t seed) {
  if (epsilon < 0) throw Error(Errc::InvalidInput, "epsilon must be >= 0");
  if (epsilon == 0) return ps;
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(ps.size());
  if (ps.mode() == NumericMode::Exact) {
    // dyadic offsets keep the set exact: eps * k / 2^52, k in [-2^52, 2^52]
    Rational eps_r(epsilon);  // binary64 -> exact rational
    boost::multiprecision::cpp_int two52 = boost::multiprecision::cpp_int(1) << 52;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      auto draw = [&]() {
        boost::multiprecision::cpp_int k(rng.next_u64() >> 12);  // 52 bits
        Rational f(k * 2 - two52, two52);
        return Rational(eps_r * f);
      };
      Rational ox = draw();
      Rational oy = draw();
      pts.emplace_back(Scalar(Rational(ps[i].x.rat() + ox)), Scalar(Rational(ps[i].y.rat() + oy)));
    }
    return PointSet(std::move(pts), NumericMode::Exact, ps.unit_sq(), ps.tol());
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    double dx = rng.uniform(-epsilon, epsilon);
    double dy = rng.uniform(-epsilon, epsilon);
    pts.push_back(Point::real(ps[i].x.dbl() + dx, ps[i].y.dbl() + dy));
  }
  return PointSet(std::move(pts), NumericMode::Float, ps.unit_sq(), ps.tol());
}

PointSet generate(const GeneratorSpec& spec) {
  PointSet out = [&] {
    switch (spec.kind) {
      case GeneratorKind::IntegerGrid: return integer_grid(spec.m);
      case GeneratorKind::ScaledGridUnit: return scaled_grid_unit(spec.m, spec.d, spec.mode, spec.tol).points;
      case GeneratorKind::RandomDisk: return random_disk(spec.m, spec.seed, spec.tol);
      case GeneratorKind::PseudoGeneric: {
        auto pts = pseudo_generic_realization(spec.m, spec.seed);
        return PointSet::real(std::move(pts), 1.0, spec.tol);
      }
    }
    throw Error(Errc::InvalidInput, "unknown generator kind");
  }();
  if (spec.epsilon > 0) out = perturb(out, spec.epsilon, Rng::derive(spec.seed, 0x70657274));
  return out;
}

}  // namespace udr
