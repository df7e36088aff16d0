#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsurf/eval.hpp"
#include "tsurf/features.hpp"
#include "tsurf/ml.hpp"
#include "tsurf/segmentation.hpp"
#include "tsurf/track.hpp"

namespace tsurf {

/// Granularity of classifier rows: one per valid segment, or one per ride
/// (summary statistics over its valid segments).
enum class Level { Segment, Ride };

std::string_view to_string(Level level) noexcept;
Level parse_level(std::string_view text);

/// A cleaned track taken through projection, segmentation and features.
struct TrackAnalysis {
  std::string track_id;
  std::vector<PlanarPoint> planar;
  std::vector<Segment> segments;
  std::vector<SegmentFeatures> features;

  double length_m() const noexcept { return planar.empty() ? 0.0 : planar.back().s; }
  std::vector<FeatureRow> rows() const;
};

TrackAnalysis analyze_track(const Track& cleaned);

/// Feature names for a method/level pair, e.g. "m2_rmse" or "m2_rmse_p90".
std::vector<std::string> feature_names(Method method, Level level);
/// Reverses feature_names. Throws Errc::DimMismatch for unknown layouts.
std::pair<Method, Level> infer_layout(std::span<const std::string> names);

/// Segment rows are keyed "<track_id>#<segment_index>".
std::string segment_row_id(const std::string& track_id, std::size_t index);
std::string track_of_row(const std::string& row_id);

struct BuiltDataset {
  Dataset data;
  /// Rides dropped at ride level for having too few valid segments.
  std::vector<std::string> rejected_tracks;
};

/// Rows for every track in `table`, restricted to `tracks` when given.
/// Throws Errc::IdMismatch listing every track without a label.
BuiltDataset build_dataset(std::span<const FeatureRow> table,
                           const std::map<std::string, Label>& labels, Method method,
                           Level level,
                           const std::optional<std::vector<std::string>>& tracks = std::nullopt);

/// Rows for one analysed track with unknown label (used for prediction).
Dataset track_dataset(const TrackAnalysis& analysis, Method method, Level level);

/// Points-per-segment over the valid segments of the listed tracks.
PointsPerSegmentStats points_per_segment(std::span<const FeatureRow> table,
                                         const std::optional<std::vector<std::string>>& tracks =
                                             std::nullopt);

/// Worker count: TRAIL_SURFACE_THREADS when set to a positive integer,
/// otherwise the hardware concurrency.
std::size_t thread_count();

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Results keep index
/// order; if any call throws, the exception from the lowest index is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, std::size_t threads,
                            const std::function<T(std::size_t)>& fn);

}  // namespace tsurf

#include "tsurf/detail/parallel_map.hpp"
