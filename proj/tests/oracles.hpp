#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "tsurf/geo.hpp"
#include "tsurf/segmentation.hpp"
#include "tsurf/track.hpp"

namespace oracle {

/// Fraction of (positive, negative) pairs ordered correctly, ties count 1/2.
inline double mann_whitney_auc(std::span<const tsurf::Label> truth,
                               std::span<const double> scores) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] != tsurf::Label::Squiggly) continue;
    for (std::size_t j = 0; j < truth.size(); ++j) {
      if (truth[j] != tsurf::Label::Straight) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

/// Planar polyline through (x, y) with cumulative Euclidean arc length.
inline std::vector<tsurf::PlanarPoint> polyline(std::span<const double> xs,
                                                std::span<const double> ys) {
  std::vector<tsurf::PlanarPoint> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    tsurf::PlanarPoint p{xs[i], ys[i], 0.0};
    if (i > 0) p.s = pts.back().s + std::hypot(xs[i] - xs[i - 1], ys[i] - ys[i - 1]);
    pts.push_back(p);
  }
  return pts;
}

inline tsurf::Segment make_segment(std::vector<tsurf::PlanarPoint> pts, std::size_t index = 0) {
  tsurf::Segment seg;
  seg.index = index;
  seg.s_start = pts.empty() ? 0.0 : pts.front().s;
  seg.s_end = pts.empty() ? 0.0 : pts.back().s;
  seg.valid = pts.size() >= tsurf::kMinSegmentPoints;
  seg.points = std::move(pts);
  return seg;
}

/// v = amplitude * sin(2 pi u / wavelength) for u = 0, du, ..., n-1 samples.
inline tsurf::Segment sine_segment(std::size_t n, double du, double amplitude,
                                   double wavelength) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) * du;
    xs.push_back(u);
    ys.push_back(amplitude * std::sin(2.0 * std::numbers::pi * u / wavelength));
  }
  return make_segment(polyline(xs, ys));
}

/// Rotate by theta and translate, recomputing arc length from scratch.
inline std::vector<tsurf::PlanarPoint> rigid(std::span<const tsurf::PlanarPoint> pts,
                                             double theta, double tx, double ty) {
  std::vector<double> xs, ys;
  const double c = std::cos(theta), s = std::sin(theta);
  for (const auto& p : pts) {
    xs.push_back(c * p.x - s * p.y + tx);
    ys.push_back(s * p.x + c * p.y + ty);
  }
  return polyline(xs, ys);
}

inline std::vector<tsurf::PlanarPoint> reversed(std::span<const tsurf::PlanarPoint> pts) {
  std::vector<double> xs, ys;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    xs.push_back(it->x);
    ys.push_back(it->y);
  }
  return polyline(xs, ys);
}

/// Jittered wiggly segment for property tests.
inline std::vector<tsurf::PlanarPoint> random_path(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> noise(0.0, 2.0);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(3.0 * static_cast<double>(i));
    ys.push_back(5.0 * std::sin(0.7 * static_cast<double>(i)) + noise(rng));
  }
  return polyline(xs, ys);
}

}  // namespace oracle
