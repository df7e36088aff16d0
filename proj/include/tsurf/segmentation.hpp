#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsurf/geo.hpp"

namespace tsurf {

inline constexpr std::size_t kSegmentsPerTrack = 100;
inline constexpr std::size_t kMinSegmentPoints = 4;

/// One arc-length window of a track, [s_start, s_end].
struct Segment {
  std::size_t index = 0;
  std::vector<PlanarPoint> points;
  double s_start = 0.0;
  double s_end = 0.0;
  bool valid = false;  ///< at least kMinSegmentPoints points fell in the window

  double length() const noexcept { return s_end - s_start; }
};

/// Cuts a projected track into kSegmentsPerTrack windows of equal arc length.
/// Boundaries sit at k*L/100. A point lying exactly on an interior boundary
/// opens the later window and is also copied to close the earlier one; the
/// final point closes the last window. Throws Errc::ZeroLengthTrack.
std::vector<Segment> segment_track(std::span<const PlanarPoint> points);

}  // namespace tsurf
