#include "tsurf/segmentation.hpp"

#include "tsurf/error.hpp"

namespace tsurf {

std::vector<Segment> segment_track(std::span<const PlanarPoint> points) {
  if (points.empty() || !(points.back().s > 0.0)) {
    throw Error(Errc::ZeroLengthTrack, "track has zero arc length");
  }
  const double total = points.back().s;

  std::vector<double> bounds(kSegmentsPerTrack + 1);
  for (std::size_t k = 0; k <= kSegmentsPerTrack; ++k) {
    bounds[k] = total * static_cast<double>(k) / static_cast<double>(kSegmentsPerTrack);
  }
  bounds.back() = total;

  std::vector<Segment> segments(kSegmentsPerTrack);
  for (std::size_t k = 0; k < kSegmentsPerTrack; ++k) {
    segments[k].index = k;
    segments[k].s_start = bounds[k];
    segments[k].s_end = bounds[k + 1];
  }

  std::size_t current = 0;
  for (const auto& p : points) {
    while (current + 1 < kSegmentsPerTrack && p.s >= bounds[current + 1]) ++current;
    if (current > 0 && p.s == bounds[current]) {
      segments[current - 1].points.push_back(p);
    }
    segments[current].points.push_back(p);
  }

  for (auto& seg : segments) seg.valid = seg.points.size() >= kMinSegmentPoints;
  return segments;
}

}  // namespace tsurf
