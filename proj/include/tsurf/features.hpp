#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsurf/geo.hpp"
#include "tsurf/segmentation.hpp"

namespace tsurf {

/// Lateral differences at or below this magnitude (meters) carry no sign.
/// Keeps floating-point residue of an exactly straight chord from
/// registering as direction changes.
inline constexpr double kFlatToleranceM = 1e-6;

/// Minimum valid segments before a ride gets ride-level statistics.
inline constexpr std::size_t kMinValidSegments = 10;

/// The three per-segment squiggliness measures.
enum class Method { M1, M2, M3 };

std::string_view to_string(Method method) noexcept;
/// "m1" / "m2" / "m3" (case-insensitive).
Method parse_method(std::string_view text);
/// Column name of the per-segment scalar a method contributes.
std::string_view scalar_name(Method method) noexcept;

/// Number of sign changes in `values`, where entries within `tolerance` of
/// zero take the sign of the last nonzero entry (leading zeros are skipped).
std::size_t count_sign_changes(std::span<const double> values, double tolerance);

struct SlopeChanges {
  std::size_t count = 0;
  double freq = 0.0;  ///< count / (n - 2), 0 when n < 3
};

/// Method 1: sign changes of successive lateral steps in the chord frame.
/// Throws Errc::InvalidSegment, Errc::DegenerateChord.
SlopeChanges slope_direction_changes(const Segment& seg);

/// Method 2: hold-out RMSE of a least-squares line. Even-indexed points fit,
/// odd-indexed points test. Throws Errc::InvalidSegment, Errc::SingularFit,
/// Errc::DegenerateChord.
double segment_fit_rmse(const Segment& seg);

/// Method 3: sign changes of the central-difference derivative of lateral
/// deviation with respect to arc length. Throws Errc::InvalidSegment,
/// Errc::NonMonotonicU (arc length not strictly increasing),
/// Errc::DegenerateChord.
std::size_t derivative_zero_crossings(const Segment& seg);

struct SegmentFeatures {
  std::size_t index = 0;
  std::size_t n_points = 0;
  bool valid = false;
  std::size_t m1_count = 0;
  double m1_freq = 0.0;
  double m2_rmse = 0.0;
  std::size_t m3_crossings = 0;
};

/// All three measures for one segment. Never throws for geometry problems:
/// segments that are too sparse, degenerate or non-monotonic come back with
/// valid == false and zeroed measures.
SegmentFeatures segment_features(const Segment& seg);
std::vector<SegmentFeatures> segment_features(std::span<const Segment> segments);

/// The scalar a method reads from a segment (m1_freq, m2_rmse, m3_crossings).
double method_scalar(const SegmentFeatures& f, Method method) noexcept;

struct SummaryStats {
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;  ///< population
  double max = 0.0;
  double p90 = 0.0;     ///< nearest rank
};

inline constexpr std::size_t kSummaryStatCount = 5;
inline constexpr std::string_view kSummaryStatNames[kSummaryStatCount] = {
    "mean", "median", "stddev", "max", "p90"};

/// Throws Errc::EmptyDataset on an empty input.
SummaryStats summarize(std::span<const double> values);

struct RideFeatures {
  std::string track_id;
  Method method = Method::M1;
  SummaryStats stats;
  std::size_t n_valid_segments = 0;

  /// Stats in kSummaryStatNames order.
  std::vector<double> as_vector() const;
};

/// Throws Errc::TooFewValidSegments below kMinValidSegments.
RideFeatures ride_features(std::string track_id, std::span<const SegmentFeatures> segments,
                           Method method);

/// One line of the feature table interchange file.
struct FeatureRow {
  std::string track_id;
  SegmentFeatures features;
};

/// Header: track_id,segment_index,m1_count,m1_freq,m2_rmse,m3_crossings,valid,n_points
std::string write_feature_table(std::span<const FeatureRow> rows);
/// Accepts the table with or without the trailing n_points column.
/// Throws Errc::MissingHeader, Errc::RowParseError.
std::vector<FeatureRow> read_feature_table(std::string_view bytes);

}  // namespace tsurf
