#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "tsurf/error.hpp"
#include "tsurf/geo.hpp"

using namespace tsurf;

namespace {

GeoPoint at(double lat, double lon) { return GeoPoint{lat, lon, std::nullopt, std::nullopt}; }

double planar_distance(const PlanarPoint& a, const PlanarPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

TEST_CASE("haversine closed forms") {
  CHECK(haversine_m(at(12.5, -3.0), at(12.5, -3.0)) == 0.0);
  // R * pi / 180 = 111195.0797...
  CHECK(std::abs(haversine_m(at(0, 0), at(0, 1)) - 111195.08) < 1.0);
  CHECK(std::abs(haversine_m(at(0, 0), at(0, 1)) - kEarthRadiusM * std::numbers::pi / 180.0) < 1.0);
  CHECK(std::abs(haversine_m(at(0, 0), at(0, 180)) - kEarthRadiusM * std::numbers::pi) < 1.0);
}

TEST_CASE("haversine is symmetric and obeys the triangle inequality") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> lat(-89.0, 89.0), lon(-179.0, 179.0);
  for (int i = 0; i < 500; ++i) {
    const auto a = at(lat(rng), lon(rng));
    const auto b = at(lat(rng), lon(rng));
    const auto c = at(lat(rng), lon(rng));
    const double ab = haversine_m(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab == doctest::Approx(haversine_m(b, a)).epsilon(1e-12));
    CHECK(ab <= (haversine_m(a, c) + haversine_m(c, b)) * (1.0 + 1e-6));
  }
}

TEST_CASE("project_track small cases") {
  SUBCASE("identical points collapse to the origin") {
    const std::vector<GeoPoint> pts{at(45, 7), at(45, 7)};
    const auto p = project_track(pts);
    CHECK(p[0].x == 0.0);
    CHECK(p[0].y == 0.0);
    CHECK(p[1].x == 0.0);
    CHECK(p[1].s == 0.0);
  }
  SUBCASE("a thousandth of a degree along the equator") {
    const std::vector<GeoPoint> pts{at(0, 0), at(0, 0.001)};
    const auto p = project_track(pts);
    const double expected = kEarthRadiusM * 0.001 * std::numbers::pi / 180.0;  // 111.195 m
    CHECK(p[1].x - p[0].x == doctest::Approx(expected).epsilon(1e-12));
    CHECK(p[1].y == 0.0);
    CHECK(p[0].s == 0.0);
    CHECK(p[1].s == doctest::Approx(expected).epsilon(1e-12));
    // the frame is centred on the mean longitude
    CHECK(p[0].x == doctest::Approx(-expected / 2).epsilon(1e-12));
  }
  SUBCASE("equally spaced collinear points step evenly") {
    const std::vector<GeoPoint> pts{at(10, 20), at(10.001, 20.001), at(10.002, 20.002)};
    const auto p = project_track(pts);
    CHECK(std::abs((p[2].s - p[1].s) - (p[1].s - p[0].s)) < 1e-6);
    CHECK(p[1].s > 0.0);
  }
  CHECK_THROWS_AS(project_track(std::vector<GeoPoint>{at(0, 0)}), Error);
}

TEST_CASE("projected distances agree with haversine within 1 percent") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> base_lat(-70, 70), base_lon(-170, 170), off(-0.25, 0.25);
  for (int trial = 0; trial < 50; ++trial) {
    const double lat0 = base_lat(rng), lon0 = base_lon(rng);
    std::vector<GeoPoint> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(at(lat0 + off(rng), lon0 + off(rng)));
    const auto p = project_track(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double h = haversine_m(pts[i], pts[j]);
        CHECK(std::abs(planar_distance(p[i], p[j]) - h) <= 0.01 * h);
      }
    }
  }
}

TEST_CASE("local frame inverse undoes forward") {
  const LocalFrame f(47.3, 8.5);
  double x = 0, y = 0, lat = 0, lon = 0;
  f.forward(47.31, 8.52, x, y);
  f.inverse(x, y, lat, lon);
  CHECK(lat == doctest::Approx(47.31).epsilon(1e-14));
  CHECK(lon == doctest::Approx(8.52).epsilon(1e-14));
}

TEST_CASE("chord_align examples") {
  SUBCASE("collinear points have no lateral offset") {
    const std::vector<double> xs{0, 1, 2.5, 4}, ys{0, 2, 5, 8};
    for (const auto& c : chord_align(oracle::polyline(xs, ys))) CHECK(std::abs(c.v) < 1e-9);
  }
  SUBCASE("semicircle peak equals the radius") {
    const double r = 17.0;
    std::vector<double> xs, ys;
    for (int k = 4; k >= 0; --k) {
      const double th = std::numbers::pi * k / 4.0;
      xs.push_back(r * std::cos(th));
      ys.push_back(r * std::sin(th));
    }
    double peak = 0.0;
    for (const auto& c : chord_align(oracle::polyline(xs, ys))) peak = std::max(peak, std::abs(c.v));
    CHECK(std::abs(peak - r) < 1e-6);
  }
  SUBCASE("degenerate chord") {
    const std::vector<double> xs{0, 1, 0}, ys{0, 1, 0};
    CHECK_THROWS_WITH_AS(chord_align(oracle::polyline(xs, ys)), doctest::Contains("DegenerateChord"),
                         Error);
  }
}

TEST_CASE("chord_align is a rigid motion and rotation invariant") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi), shift(-1e4, 1e4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto base = oracle::random_path(rng, 15);
    const auto moved = oracle::rigid(base, angle(rng), shift(rng), shift(rng));
    const auto a = chord_align(base);
    const auto b = chord_align(moved);
    CHECK(a.front().v == 0.0);
    CHECK(a.back().v == 0.0);
    CHECK(a.back().u > 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::abs(a[i].u - b[i].u) < 1e-9 * (1 + std::abs(a[i].u)) + 1e-9);
      CHECK(std::abs(a[i].v - b[i].v) < 1e-9 * (1 + std::abs(a[i].u)) + 1e-9);
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        const double before = planar_distance(base[i], base[j]);
        const double after = std::hypot(a[i].u - a[j].u, a[i].v - a[j].v);
        CHECK(std::abs(after - before) <= 1e-9 * before);
      }
    }
  }
}
