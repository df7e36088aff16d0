#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsurf/geo.hpp"

namespace tsurf {

/// Ground-truth surface class. Squiggly (dirt) is the positive class.
enum class Label : std::uint8_t { Straight = 0, Squiggly = 1 };

std::string_view to_string(Label label) noexcept;
/// Case-insensitive "squiggly" / "straight". Throws Errc::UnknownLabel.
Label parse_label(std::string_view text);

enum class TrackSource { Gpx, Csv, Synthetic };

struct Track {
  std::string id;
  std::vector<GeoPoint> points;
  TrackSource source = TrackSource::Gpx;
};

struct LabeledTrack {
  Track track;
  Label label = Label::Straight;
};

inline constexpr std::size_t kMinTrackPoints = 20;
inline constexpr double kMaxGapM = 200.0;

/// GPX 1.1 trk/trkseg/trkpt subset. All segments are concatenated in
/// document order. Errors carry the 1-based source line.
Track parse_gpx(std::string_view bytes, std::string id);
std::string write_gpx(const Track& track);

/// Track CSV with header naming lat, lon and optionally alt and t.
/// RowParseError locations are 1-based data row indices.
Track parse_track_csv(std::string_view bytes, std::string id);
std::string write_track_csv(const Track& track);

/// Drops consecutive fixes with identical lat/lon, then enforces the minimum
/// length and maximum gap. Throws Errc::TooShort, Errc::GapTooLarge.
Track clean(Track track);

/// CSV `id,label`. Throws Errc::MissingHeader, Errc::UnknownLabel,
/// Errc::DuplicateId.
std::map<std::string, Label> load_labels(std::string_view bytes);
std::string write_labels(const std::map<std::string, Label>& labels);

/// ISO 8601 UTC timestamp <-> seconds since the epoch.
std::optional<double> parse_iso8601(std::string_view text);
std::string format_iso8601(double seconds);

}  // namespace tsurf
