#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsurf/geo.hpp"

namespace tsurf::detail {

/// Timestamps must be on every point or none, and strictly increasing.
/// `locations` maps point index to the source line/row used in the error.
void validate_timestamps(std::span<const GeoPoint> points,
                         std::span<const std::size_t> locations);

}  // namespace tsurf::detail
