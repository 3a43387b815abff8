#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "udr/generators.hpp"
#include "udr/geometry.hpp"
#include "udr/pointset.hpp"
#include "udr/rng.hpp"
#include "udr/unit_graph.hpp"

using namespace udr;

TEST_CASE("scalar arithmetic and parsing") {
  Scalar a = Scalar::parse("5/4", NumericMode::Exact);
  Scalar b = Scalar::parse("1.25", NumericMode::Exact);
  CHECK(a == b);
  CHECK(a.str() == "5/4");
  Scalar f = Scalar::parse("1.25", NumericMode::Float);
  CHECK(f.dbl() == doctest::Approx(1.25));
  CHECK_THROWS_AS((void)(a + f), Error);
  CHECK(Scalar::parse("-3/6", NumericMode::Exact).str() == "-1/2");
  CHECK(Scalar::parse("2e3", NumericMode::Exact).str() == "2000");
}

TEST_CASE("squared_distance basics") {
  CHECK(squared_distance(Point::exact(0, 0), Point::exact(0, 0)).rat() == 0);
  CHECK(squared_distance(Point::exact(0, 0), Point::exact(1, 0)).rat() == 1);
  // (0,0) to (3/5, 4/5) is exactly unit in rational mode
  Point p(Scalar(Rational(0)), Scalar(Rational(0)));
  Point q(Scalar(Rational(3, 5)), Scalar(Rational(4, 5)));
  CHECK(squared_distance(p, q).rat() == 1);
  // symmetry and zero-iff-coincident
  CHECK(squared_distance(q, p) == squared_distance(p, q));
  CHECK(squared_distance(q, q).rat() == 0);
}

TEST_CASE("canonical_pose fixes translation, rotation, reflection") {
  std::vector<Point> tri = {Point::real(0, 0), Point::real(1, 0), Point::real(0.5, 0.7)};
  auto posed = canonical_pose(tri, {0, 1, 2});
  for (std::size_t i = 0; i < tri.size(); ++i) {
    CHECK(posed[i].x.dbl() == doctest::Approx(tri[i].x.dbl()));
    CHECK(posed[i].y.dbl() == doctest::Approx(tri[i].y.dbl()));
  }

  std::vector<Point> moved;
  for (const auto& p : tri) moved.push_back(Point::real(p.x.dbl() + 5, p.y.dbl() + 7));
  auto posed2 = canonical_pose(moved, {0, 1, 2});
  for (std::size_t i = 0; i < tri.size(); ++i)
    CHECK(posed2[i].y.dbl() == doctest::Approx(tri[i].y.dbl()));

  std::vector<Point> reflected;
  for (const auto& p : tri) reflected.push_back(Point::real(p.x.dbl(), -p.y.dbl()));
  auto posed3 = canonical_pose(reflected, {0, 1, 2});
  // pairwise squared distances agree with the original
  for (std::size_t i = 0; i < tri.size(); ++i)
    for (std::size_t j = i + 1; j < tri.size(); ++j)
      CHECK(squared_distance(posed3[i], posed3[j]).dbl() ==
            doctest::Approx(squared_distance(tri[i], tri[j]).dbl()));

  CHECK_THROWS_AS(canonical_pose({Point::real(1, 1), Point::real(1, 1)}, {0, 1, 1}), Error);
}

TEST_CASE("canonical_pose is isometry-invariant (property)") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Point> pts;
    int n = 3 + static_cast<int>(rng.below(5));
    for (int i = 0; i < n; ++i) pts.push_back(Point::real(rng.uniform(-5, 5), rng.uniform(-5, 5)));
    double ang = rng.uniform(0, 6.28);
    Isometry iso = Isometry::rotation(ang, NumericMode::Float);
    std::vector<Point> moved;
    for (const auto& p : pts) {
      Point q = iso.apply(p);
      moved.push_back(Point::real(q.x.dbl() + 3.5, q.y.dbl() - 1.25));
    }
    auto a = canonical_pose(pts, {0, 1, 2});
    auto b = canonical_pose(moved, {0, 1, 2});
    for (int i = 0; i < n; ++i) {
      CHECK(a[i].x.dbl() == doctest::Approx(b[i].x.dbl()).epsilon(1e-8));
      CHECK(std::abs(a[i].y.dbl()) == doctest::Approx(std::abs(b[i].y.dbl())).epsilon(1e-8));
    }
  }
}

TEST_CASE("are_collinear") {
  CHECK(are_collinear({Point::exact(0, 0), Point::exact(1, 1), Point::exact(2, 2)}));
  CHECK_FALSE(are_collinear({Point::exact(0, 0), Point::exact(1, 0), Point::exact(0, 1)}));
  CHECK(are_collinear({Point::exact(3, 4)}));
  CHECK(are_collinear({Point::exact(3, 4), Point::exact(5, 6)}));
  // float mode, scale-invariance: verdict unchanged under uniform scaling
  std::vector<Point> nearly = {Point::real(0, 0), Point::real(1, 1e-12), Point::real(2, 0)};
  CHECK(are_collinear(nearly, 1e-9));
  std::vector<Point> scaled;
  for (const auto& p : nearly) scaled.push_back(Point::real(1e6 * p.x.dbl(), 1e6 * p.y.dbl()));
  CHECK(are_collinear(scaled, 1e-9));
  CHECK_FALSE(are_collinear({Point::real(0, 0), Point::real(1, 0.1), Point::real(2, 0)}, 1e-9));
}

TEST_CASE("pointset rejects duplicates and serializes") {
  CHECK_THROWS_AS(PointSet::exact({Point::exact(1, 2), Point::exact(1, 2)}), Error);
  CHECK_THROWS_AS(PointSet::real({Point::real(0, 0), Point::real(0, 5e-10)}), Error);
  PointSet ps = PointSet::exact({Point::exact(0, 0), Point(Scalar(Rational(1, 3)), Scalar(Rational(2)))});
  std::istringstream in(ps.to_text());
  PointSet back = PointSet::from_text(in);
  CHECK(back.size() == 2);
  CHECK(back.mode() == NumericMode::Exact);
  CHECK(back[1].x.rat() == Rational(1, 3));
}

TEST_CASE("integer grid and unit counts") {
  CHECK(integer_grid(1).size() == 1);
  CHECK(integer_grid(2).size() == 4);
  PointSet g3 = integer_grid(3);
  CHECK(g3.size() == 9);
  CHECK(count_unit_distances_oracle(g3) == 12);
  CHECK(count_unit_distances(g3) == 12);
  // m x m axis-adjacent pairs
  for (int m : {2, 5, 8}) {
    PointSet g = integer_grid(m);
    CHECK(count_unit_distances_oracle(g) == static_cast<std::size_t>(2 * m * (m - 1)));
  }
}

TEST_CASE("best_popular_square_distance (frozen brute-force values)") {
  CHECK(best_popular_square_distance(2) == std::pair<long long, std::size_t>{1, 4});
  CHECK(best_popular_square_distance(3) == std::pair<long long, std::size_t>{1, 12});
  // recorded with the O(m^4) pair-enumeration oracle before the build
  CHECK(best_popular_square_distance(10) == std::pair<long long, std::size_t>{5, 288});
  CHECK(best_popular_square_distance(12) == std::pair<long long, std::size_t>{25, 456});
}

TEST_CASE("best popular distance agrees with naive histogram up to m = 12") {
  for (int m = 2; m <= 12; ++m) {
    PointSet g = integer_grid(m);
    std::map<long long, std::size_t> hist;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        long long d2 = static_cast<long long>(squared_distance(g[i], g[j]).rat());
        ++hist[d2];
      }
    auto [d, count] = best_popular_square_distance(m);
    std::size_t best = 0;
    for (auto [k, v] : hist) best = std::max(best, v);
    CHECK(count == best);
    CHECK(hist[d] == count);
  }
}

TEST_CASE("scaled_grid_unit") {
  auto r = scaled_grid_unit(2, 1, NumericMode::Exact);
  CHECK(count_unit_distances(r.points) == 4);
  auto r2 = scaled_grid_unit(3, 2, NumericMode::Exact);
  CHECK(r2.has_unit_pairs);
  CHECK(count_unit_distances(r2.points) == 8);  // diagonal pairs of the 3x3 grid
  // frozen value: 10x10 grid, squared distance 25
  auto r3 = scaled_grid_unit(10, 25, NumericMode::Exact);
  CHECK(count_unit_distances_oracle(r3.points) == 268);
  CHECK(count_unit_distances(r3.points) == 268);
  // float mode divides by sqrt(d)
  auto rf = scaled_grid_unit(10, 25, NumericMode::Float);
  CHECK(count_unit_distances(rf.points) == 268);
  // 3 is not a sum of two squares
  CHECK_FALSE(scaled_grid_unit(3, 3, NumericMode::Exact).has_unit_pairs);
  CHECK(count_unit_distances(scaled_grid_unit(3, 3, NumericMode::Exact).points) == 0);
}

TEST_CASE("pseudo generic realization determinism") {
  auto a = pseudo_generic_realization(6, 42);
  auto b = pseudo_generic_realization(6, 42);
  auto c = pseudo_generic_realization(6, 43);
  REQUIRE(a.size() == 6);
  bool same = true, diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i].x.dbl() == b[i].x.dbl() && a[i].y.dbl() == b[i].y.dbl();
    diff = diff || a[i].x.dbl() != c[i].x.dbl();
  }
  CHECK(same);
  CHECK(diff);
}

TEST_CASE("perturb") {
  PointSet g3 = integer_grid(3);
  PointSet same = perturb(g3, 0.0, 5);
  CHECK(count_unit_distances(same) == 12);
  PointSet moved = perturb(g3, 0.01, 5);
  CHECK(moved.mode() == NumericMode::Exact);
  CHECK(count_unit_distances(moved) == 0);  // exact predicate: perturbation kills all units
  PointSet moved2 = perturb(g3, 0.01, 5);
  bool identical = true;
  for (std::size_t i = 0; i < moved.size(); ++i)
    identical = identical && moved[i] == moved2[i];
  CHECK(identical);
}

TEST_CASE("moser spindle has 11 unit pairs (float)") {
  auto rot = [](std::array<double, 2> p, double th) {
    return std::array<double, 2>{std::cos(th) * p[0] - std::sin(th) * p[1],
                                 std::sin(th) * p[0] + std::cos(th) * p[1]};
  };
  std::array<double, 2> a{0, 0}, b{1, 0}, c{0.5, std::sqrt(3.0) / 2};
  std::array<double, 2> t1{b[0] + c[0], b[1] + c[1]};
  double th = 2 * std::asin(1 / (2 * std::sqrt(3.0)));
  std::vector<Point> pts;
  for (auto p : {a, b, c, t1, rot(b, th), rot(c, th), rot(t1, th)})
    pts.push_back(Point::real(p[0], p[1]));
  PointSet spindle = PointSet::real(std::move(pts));
  CHECK(count_unit_distances_oracle(spindle) == 11);
  CHECK(count_unit_distances(spindle) == 11);
}

TEST_CASE("unit graph equals oracle on random float sets (property)") {
  for (std::uint64_t seed : {11u, 22u, 33u, 44u}) {
    Rng rng(seed);
    std::vector<Point> pts;
    int n = 150 + static_cast<int>(rng.below(150));
    for (int i = 0; i < n; ++i)
      pts.push_back(Point::real(rng.uniform(0, 12), rng.uniform(0, 12)));
    PointSet ps = PointSet::real(std::move(pts));
    auto fast = build_unit_graph(ps);
    auto slow = build_unit_graph_oracle(ps);
    CHECK(fast.edges == slow.edges);
  }
}

TEST_CASE("unit graph edges are sound and deduplicated (exact grids)") {
  for (int m : {4, 7, 12}) {
    auto r = scaled_grid_unit(m, 5, NumericMode::Exact);
    auto g = build_unit_graph(r.points);
    std::set<std::pair<int, int>> uniq(g.edges.begin(), g.edges.end());
    CHECK(uniq.size() == g.edges.size());
    for (auto [i, j] : g.edges) {
      CHECK(i < j);
      CHECK(squared_distance(r.points[i], r.points[j]).rat() == 5);
    }
    CHECK(g.edges == build_unit_graph_oracle(r.points).edges);
  }
}

TEST_CASE("u(P) is isometry invariant (exact)") {
  PointSet g = integer_grid(4);
  // rational rotation by (3/5, 4/5) plus translation
  Isometry iso{{Scalar(Rational(3, 5)), Scalar(Rational(-4, 5)), Scalar(Rational(4, 5)),
                Scalar(Rational(3, 5))},
               {Scalar(Rational(7)), Scalar(Rational(-2, 3))}};
  std::vector<Point> moved;
  for (std::size_t i = 0; i < g.size(); ++i) moved.push_back(iso.apply(g[i]));
  PointSet mg = PointSet::exact(std::move(moved));
  CHECK(count_unit_distances_oracle(mg) == count_unit_distances_oracle(g));
  CHECK(count_unit_distances(mg) == count_unit_distances(g));
}

TEST_CASE("incidences") {
  // C = P = unit triangle: |I| = 2 u = 6
  std::vector<Point> tri = {Point::real(0, 0), Point::real(1, 0),
                            Point::real(0.5, std::sqrt(3.0) / 2)};
  PointSet ps = PointSet::real(tri);
  auto inc = incidences(ps, ps);
  CHECK(inc.pairs.size() == 6);
  CHECK(inc.pairs.size() == 2 * count_unit_distances(ps));

  PointSet p0 = PointSet::real({Point::real(0, 0)});
  PointSet c0 = PointSet::real({Point::real(1, 0)});
  CHECK(incidences(p0, c0).pairs.size() == 1);

  // random disjoint sets vs oracle
  Rng rng(3141);
  std::vector<Point> pa, pb;
  for (int i = 0; i < 200; ++i) {
    pa.push_back(Point::real(rng.uniform(0, 10), rng.uniform(0, 10)));
    pb.push_back(Point::real(rng.uniform(0, 10), rng.uniform(0, 10)));
  }
  PointSet A = PointSet::real(std::move(pa));
  PointSet B = PointSet::real(std::move(pb));
  CHECK(incidences(A, B).pairs == incidences_oracle(A, B).pairs);
}

TEST_CASE("st bound check") {
  auto r = st_bound_check(100, 100, 0, 1.0);
  CHECK(r.pass);
  CHECK(r.ratio == 0.0);
  // m = n, I = n^{4/3}: the ratio approaches 1 as the lower-order terms fade
  std::size_t n = 1000000000;
  auto I = static_cast<std::size_t>(std::pow(double(n), 4.0 / 3.0));
  auto r2 = st_bound_check(n, n, I, 1.0);
  CHECK(r2.ratio > 0.99);
  CHECK(r2.ratio <= 1.01);
  auto r3 = st_bound_check(10, 10, 1000, 1.0);
  CHECK_FALSE(r3.pass);
}

TEST_CASE("pointset subset and file round trip") {
  PointSet g = integer_grid(3);
  PointSet sub = g.subset({0, 4, 8});
  CHECK(sub.size() == 3);
  CHECK(sub.unit_sq().rat() == 1);
  CHECK(sub[1] == g[4]);
}
