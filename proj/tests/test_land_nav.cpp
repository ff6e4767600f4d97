#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "binoloc/angles.hpp"
#include "binoloc/land_nav.hpp"
#include "binoloc/map_io.hpp"
#include "oracles.hpp"

using namespace binoloc;

namespace {

// Straightforward transcription of the DP generation loop, used as a reference.
std::vector<Vec2> reference_dps(const std::vector<Vec2>& xs, double L_min, double e_max)
{
  std::vector<Vec2> dps{xs[0]};
  std::vector<Vec2> S{xs[0]};
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const Vec2 x = xs[i];
    if (std::hypot(x.x - dps.back().x, x.y - dps.back().y) < L_min) {
      S.push_back(x);
      continue;
    }
    std::vector<Vec2> T = S;
    T.push_back(x);
    double e = 0.0;
    for (std::size_t k = 1; k + 1 < T.size(); ++k) {
      const Vec2 a = T.front(), b = T.back();
      e += std::fabs((b.x - a.x) * (T[k].y - a.y) - (b.y - a.y) * (T[k].x - a.x)) / std::hypot(b.x - a.x, b.y - a.y);
    }
    if (T.size() > 2) e /= static_cast<double>(T.size() - 2);
    if (e < e_max) {
      S = T;
    } else {
      dps.push_back(S.back());
      S = {S.back(), x};
    }
  }
  return dps;
}

DominantPointTrack feed(const std::vector<Vec2>& xs, const LandNavParams& p, double max_length = INFINITY)
{
  DominantPointTrack t(xs[0], max_length);
  for (std::size_t i = 1; i < xs.size(); ++i) t.update(xs[i], p);
  return t;
}

// Asymmetric pentagon: every corner has a distinct neighbourhood.
PolygonMap pentagon() { return PolygonMap({{0, 0}, {4, 0}, {5, 2}, {2, 4}, {-1, 2.5}}); }

}  // namespace

TEST_SUITE("land_nav")
{
  TEST_CASE("line_fit_error examples")
  {
    const std::vector<Vec2> a{{0, 0}, {1, 0}, {2, 0}};
    CHECK(line_fit_error(a) == 0.0);
    const std::vector<Vec2> b{{0, 0}, {1, 0.1}, {2, 0}};
    CHECK(line_fit_error(b) == doctest::Approx(0.1));
    const std::vector<Vec2> c{{0, 0}, {1, 0.1}, {1, -0.1}, {2, 0}};
    CHECK(line_fit_error(c) == doctest::Approx(0.1));
    const std::vector<Vec2> d{{0, 0}, {1, 1}};
    CHECK(line_fit_error(d) == 0.0);
  }

  TEST_CASE("line_fit_error matches a point-to-line oracle")
  {
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
      std::vector<Vec2> pts(3 + static_cast<std::size_t>(uniform(rng, 0, 8)));
      for (auto& p : pts) p = {uniform(rng, -3, 3), uniform(rng, -3, 3)};
      const Vec2 a = pts.front(), b = pts.back();
      double sum = 0.0;
      for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        // Distance from the foot of the perpendicular on the infinite line.
        const Vec2 d = b - a;
        const double t = dot(pts[k] - a, d) / dot(d, d);
        sum += distance(pts[k], a + t * d);
      }
      CHECK(line_fit_error(pts) == doctest::Approx(sum / static_cast<double>(pts.size() - 2)).epsilon(1e-9));
    }
  }

  TEST_CASE("first point starts the DP list")
  {
    DominantPointTrack t;
    CHECK_FALSE(t.started());
    CHECK_FALSE(t.update({1, 2}, {}).has_value());
    REQUIRE(t.dominant_points().size() == 1);
    CHECK(t.dominant_points()[0] == Vec2{1, 2});
  }

  TEST_CASE("straight line emits no DP")
  {
    std::vector<Vec2> xs;
    for (int i = 0; i <= 100; ++i) xs.push_back({0.1 * i, 0.0});
    const auto t = feed(xs, {});
    CHECK(t.dominant_points().size() == 1);
    CHECK(t.accumulated_length() == 0.0);
  }

  TEST_CASE("L-shaped path emits one DP at the corner")
  {
    std::vector<Vec2> xs;
    for (int i = 0; i <= 20; ++i) xs.push_back({0.1 * i, 0.0});
    for (int i = 1; i <= 20; ++i) xs.push_back({2.0, 0.1 * i});
    const LandNavParams p;
    const auto t = feed(xs, p);
    const auto ref = reference_dps(xs, p.L_min, p.e_max);
    REQUIRE(t.dominant_points().size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(t.dominant_points()[i] == ref[i]);
    REQUIRE(t.dominant_points().size() == 2);
    CHECK(distance(t.dominant_points()[1], {2.0, 0.0}) <= 0.2);
  }

  TEST_CASE("DP generation agrees with the reference on noisy random walks")
  {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Vec2> xs{{0, 0}};
      double h = 0.0;
      for (int i = 0; i < 2000; ++i) {
        h += gaussian(rng, 0.05) + (i % 300 == 0 ? 1.0 : 0.0);
        xs.push_back(xs.back() + Vec2{0.015 * std::cos(h), 0.015 * std::sin(h)});
      }
      const LandNavParams p;
      const auto t = feed(xs, p);
      const auto ref = reference_dps(xs, p.L_min, p.e_max);
      REQUIRE(t.dominant_points().size() == ref.size());
      double len = 0.0;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(t.dominant_points()[i] == ref[i]);
        if (i > 0) len += distance(ref[i - 1], ref[i]);
      }
      CHECK(t.accumulated_length() == doctest::Approx(len));
    }
  }

  TEST_CASE("DP generation is equivariant under rigid motions")
  {
    Rng rng(5);
    std::vector<Vec2> xs{{0, 0}};
    double h = 0.0;
    for (int i = 0; i < 1500; ++i) {
      h += gaussian(rng, 0.08);
      xs.push_back(xs.back() + Vec2{0.015 * std::cos(h), 0.015 * std::sin(h)});
    }
    const double a = 0.7;
    const Vec2 shift{3.0, -2.0};
    std::vector<Vec2> moved;
    for (const Vec2& x : xs) moved.push_back(Vec2{std::cos(a) * x.x - std::sin(a) * x.y, std::sin(a) * x.x + std::cos(a) * x.y} + shift);
    const LandNavParams p;
    const auto t1 = feed(xs, p), t2 = feed(moved, p);
    REQUIRE(t1.dominant_points().size() == t2.dominant_points().size());
    REQUIRE(t1.dominant_points().size() > 3);
    for (std::size_t i = 0; i < t1.dominant_points().size(); ++i) {
      const Vec2 x = t1.dominant_points()[i];
      const Vec2 y = Vec2{std::cos(a) * x.x - std::sin(a) * x.y, std::sin(a) * x.x + std::cos(a) * x.y} + shift;
      CHECK(distance(y, t2.dominant_points()[i]) < 1e-9);
    }
  }

  TEST_CASE("stored track is capped at the given length")
  {
    std::vector<Vec2> xs;
    const auto sq = PolygonMap({{0, 0}, {3, 0}, {3, 3}, {0, 3}});
    for (int lap = 0; lap < 3; ++lap)
      for (std::size_t e = 0; e < 4; ++e)
        for (int k = 0; k < 30; ++k) {
          const Vec2 a = sq.vertex(e), b = sq.vertex(e + 1);
          xs.push_back(a + (k / 30.0) * (b - a));
        }
    const auto t = feed(xs, {}, 12.0);
    CHECK(t.accumulated_length() <= 12.0);
    CHECK(t.accumulated_length() >= 9.0);
  }

  TEST_CASE("path profile examples")
  {
    auto t = feed({{0, 0}, {0.3, 0}, {0.6, 0}, {0.9, 0}, {1.0, 0}, {1.0, 0.3}, {1, 0.6}}, {});
    REQUIRE(t.dominant_points().size() == 2);
    auto prof = path_orientation_profile(t);
    CHECK(prof.value_at(0.5) == doctest::Approx(0.0));

    const auto p = OrientationProfile::from_polyline({{0, 0}, {1, 0}, {1, 1}});
    CHECK(p.value_at(0.5) == doctest::Approx(0.0));
    CHECK(p.value_at(1.5) == doctest::Approx(kPi / 2));
    const double a = 1.2;
    auto rot = [&](Vec2 v) { return Vec2{std::cos(a) * v.x - std::sin(a) * v.y, std::sin(a) * v.x + std::cos(a) * v.y}; };
    const auto q = OrientationProfile::from_polyline({rot({0, 0}), rot({1, 0}), rot({1, 1})});
    // Both profiles start at zero, so the rotation constant is already gone.
    CHECK(q.value_at(1.5) - q.value_at(0.5) == doctest::Approx(p.value_at(1.5) - p.value_at(0.5)));

    CHECK_THROWS_AS(path_orientation_profile(DominantPointTrack({0, 0})), std::invalid_argument);
  }

  TEST_CASE("correlation_errors matches the dense reference")
  {
    Rng rng(2024);
    for (int i = 0; i < 40; ++i) {
      const auto poly = oracle::random_star_polygon(rng, 3 + static_cast<std::size_t>(uniform(rng, 0, 10)));
      PolygonMap map(poly);
      auto path = oracle::random_path(rng, 2 + static_cast<std::size_t>(uniform(rng, 0, 11)));
      const auto prof = OrientationProfile::from_polyline(path);
      const double scale = uniform(rng, 0.1, 1.0) * map.circumference() / prof.total_length();
      for (auto& p : path) p = scale * p;
      const auto scaled = OrientationProfile::from_polyline(path);
      const auto got = correlation_errors(build_orientation_profile(map), map.size(), scaled, scaled.total_length(), 257);
      const auto want = oracle::naive_correlation(map.vertices(), path, 257);
      REQUIRE(got.size() == want.size());
      for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-9));
    }
  }

  TEST_CASE("correlation is invariant to rotating and translating the path")
  {
    const auto map = builtin_map("map1");
    const auto boundary = build_orientation_profile(map);
    const std::vector<Vec2> path{{0, 0}, {2, 0.5}, {3, 2.5}, {2.2, 4}, {4, 6}, {7, 6.5}};
    const auto a = OrientationProfile::from_polyline(path);
    std::vector<Vec2> moved;
    for (const Vec2& p : path) moved.push_back(Vec2{-p.y, p.x} + Vec2{10, -4});
    const auto b = OrientationProfile::from_polyline(moved);
    const auto ca = correlation_errors(boundary, map.size(), a, a.total_length(), 512);
    const auto cb = correlation_errors(boundary, map.size(), b, b.total_length(), 512);
    for (std::size_t i = 0; i < ca.size(); ++i) CHECK(ca[i] == doctest::Approx(cb[i]).epsilon(1e-12));
  }

  TEST_CASE("a path identical to the boundary window correlates to zero")
  {
    const auto map = pentagon();
    const auto boundary = build_orientation_profile(map);
    // Vertices 3, 4, 0, 1 end at vertex 1.
    const std::vector<Vec2> path{map.vertex(3), map.vertex(4), map.vertex(0), map.vertex(1)};
    const auto prof = OrientationProfile::from_polyline(path);
    const auto c = correlation_errors(boundary, map.size(), prof, prof.total_length(), 512);
    CHECK(c[1] < 1e-12);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (i != 1) CHECK(c[i] > 0.1);
  }

  TEST_CASE("square symmetry makes every corner an equally good match")
  {
    // A two-edge path fits all four corners of a square; uniqueness needs an
    // asymmetric map (see the pentagon case above).
    const auto sq = builtin_map("square");
    const auto prof = OrientationProfile::from_polyline({{0, 0}, {1, 0}, {1, 1}});
    const auto c = correlation_errors(build_orientation_profile(sq), 4, prof, 2.0, 200);
    for (double e : c) CHECK(e < 1e-12);
    // A path that turns the wrong way fits nowhere.
    const auto wrong = OrientationProfile::from_polyline({{0, 0}, {1, 0}, {1, -1}});
    for (double e : correlation_errors(build_orientation_profile(sq), 4, wrong, 2.0, 200)) CHECK(e >= kPi / 4);
  }

  TEST_CASE("correlation rejects paths that are empty or longer than the circumference")
  {
    const auto sq = builtin_map("square");
    const auto b = build_orientation_profile(sq);
    const auto prof = OrientationProfile::from_polyline({{0, 0}, {5, 0}});
    CHECK_THROWS_AS(correlation_errors(b, 4, prof, 5.0, 100), std::domain_error);
    CHECK_THROWS_AS(correlation_errors(b, 4, prof, 0.0, 100), std::domain_error);
    CHECK_THROWS_AS(correlation_errors(b, 5, prof, 1.0, 100), std::invalid_argument);
  }

  TEST_CASE("noise-free boundary replay matches every vertex exactly")
  {
    for (const char* name : {"map1", "map2"}) {
      const auto map = builtin_map(name);
      const auto params = land_nav_preset(name);
      const auto boundary = build_orientation_profile(map);
      for (std::size_t v = 0; v < map.size(); ++v) {
        const auto xs = oracle::boundary_replay(map, v, 0.25);
        const auto t = feed(xs, params, map.circumference());
        REQUIRE(t.dominant_points().back() == map.vertex(v));
        const auto est = try_match(t, map, boundary, params);
        REQUIRE(est);
        CHECK(est->vertex_index == v);
        CHECK(est->c_err < 1e-9);
        CHECK(est->position == map.vertex(v));
        CHECK(est->heading == doctest::Approx(heading_of(map.vertex(v) - map.vertex(v + map.size() - 1))));
      }
    }
  }

  TEST_CASE("only the replayed vertex falls below the threshold on map1")
  {
    const auto map = builtin_map("map1");
    const auto params = land_nav_preset("map1");
    const auto t = feed(oracle::boundary_replay(map, 6, 0.25), params, map.circumference());
    const auto prof = path_orientation_profile(t);
    const auto c = correlation_errors(build_orientation_profile(map), map.size(), prof, t.accumulated_length(), 512);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK((c[i] < params.c_min) == (i == 6));
  }

  TEST_CASE("try_match waits for enough path and a good enough correlation")
  {
    const auto map = builtin_map("map1");
    const auto params = land_nav_preset("map1");
    // Too short: a quarter of the circumference.
    std::vector<Vec2> xs;
    for (std::size_t e = 0; e < 3; ++e)
      for (int k = 0; k < 40; ++k) xs.push_back(map.vertex(e) + (k / 40.0) * (map.vertex(e + 1) - map.vertex(e)));
    xs.push_back(map.vertex(3));
    CHECK_FALSE(try_match(feed(xs, params), map, params));

    // Long enough but shaped like nothing on the map: a zigzag.
    std::vector<Vec2> zig{{0, 0}};
    for (int i = 0; i < 600; ++i) {
      const double h = (i / 40) % 2 ? 1.2 : -1.2;
      zig.push_back(zig.back() + Vec2{0.05 * std::cos(h), 0.05 * std::sin(h)});
    }
    const auto t = feed(zig, params);
    REQUIRE(t.accumulated_length() >= params.U_min * map.circumference());
    REQUIRE(t.accumulated_length() <= map.circumference());
    CHECK_FALSE(try_match(t, map, params));
  }

  TEST_CASE("heading estimate is the incoming edge direction")
  {
    const PolygonMap m({{0, 0}, {4, 0}, {5, 2}, {2, 4}, {-1, 2.5}});
    const LandNavParams p{0.5, 0.01, 0.2, 0.5, 512};
    const auto t = feed(oracle::boundary_replay(m, 1, 0.25), p, m.circumference());
    const auto est = try_match(t, m, p);
    REQUIRE(est);
    CHECK(est->vertex_index == 1);
    CHECK(est->heading == doctest::Approx(0.0));
  }

  TEST_CASE("parameters and presets")
  {
    const auto m1 = land_nav_preset("map1");
    CHECK(m1.L_min == 0.5);
    CHECK(m1.e_max == 0.01);
    CHECK(m1.c_min == 0.2);
    CHECK(m1.U_min == 0.5);
    const auto m2 = land_nav_preset("map2");
    CHECK(m2.c_min == 0.3);
    CHECK(m2.U_min == 0.4);
    CHECK_THROWS(land_nav_preset("map3"));
    LandNavParams bad;
    bad.U_min = 1.5;
    CHECK_THROWS(bad.validate());
  }
}
