#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tsurf/error.hpp"
#include "tsurf/segmentation.hpp"

using namespace tsurf;

namespace {

std::vector<PlanarPoint> straight(std::size_t n, double step) {
  std::vector<double> xs, ys(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) xs.push_back(static_cast<double>(i) * step);
  return oracle::polyline(xs, ys);
}

}  // namespace

TEST_CASE("1000 m at 10 m spacing is too sparse") {
  const auto segs = segment_track(straight(101, 10.0));
  REQUIRE(segs.size() == kSegmentsPerTrack);
  for (const auto& seg : segs) {
    CHECK(seg.points.size() == 2);
    CHECK_FALSE(seg.valid);
    CHECK(seg.length() == doctest::Approx(10.0));
  }
}

TEST_CASE("1000 m at 1 m spacing") {
  const auto segs = segment_track(straight(1001, 1.0));
  REQUIRE(segs.size() == kSegmentsPerTrack);
  for (std::size_t k = 0; k < segs.size(); ++k) {
    CHECK(segs[k].index == k);
    CHECK(segs[k].points.size() >= 10);
    CHECK(segs[k].points.size() <= 11);
    CHECK(segs[k].valid);
  }
}

TEST_CASE("zero length track") {
  const std::vector<PlanarPoint> pts{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  try {
    segment_track(pts);
    FAIL("expected ZeroLengthTrack");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroLengthTrack);
  }
}

TEST_CASE("segments tile the track") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> step(0.2, 6.0), turn(-0.5, 0.5);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> xs{0.0}, ys{0.0};
    double heading = 0.0;
    const std::size_t n = 200 + rng() % 400;
    for (std::size_t i = 1; i < n; ++i) {
      heading += turn(rng);
      const double d = step(rng);
      xs.push_back(xs.back() + d * std::cos(heading));
      ys.push_back(ys.back() + d * std::sin(heading));
    }
    const auto pts = oracle::polyline(xs, ys);
    const double total = pts.back().s;
    const auto segs = segment_track(pts);
    REQUIRE(segs.size() == kSegmentsPerTrack);

    CHECK(segs.front().s_start == 0.0);
    CHECK(segs.back().s_end == total);
    double sum = 0.0;
    for (std::size_t k = 0; k < segs.size(); ++k) {
      sum += segs[k].length();
      if (k > 0) CHECK(segs[k].s_start == segs[k - 1].s_end);
      for (const auto& p : segs[k].points) {
        CHECK(p.s >= segs[k].s_start);
        CHECK(p.s <= segs[k].s_end);
      }
      CHECK(segs[k].valid == (segs[k].points.size() >= kMinSegmentPoints));
    }
    CHECK(std::abs(sum - total) <= 1e-6 * total);

    for (const auto& p : pts) {
      int seen = 0;
      bool on_boundary = false;
      for (const auto& seg : segs) {
        for (const auto& q : seg.points) {
          if (q.x == p.x && q.y == p.y && q.s == p.s) ++seen;
        }
        if (p.s == seg.s_start && seg.index > 0) on_boundary = true;
      }
      CHECK(seen >= 1);
      if (!on_boundary) CHECK(seen == 1);
    }
  }
}
