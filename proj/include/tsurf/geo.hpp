#pragma once

#include <optional>
#include <span>
#include <vector>

namespace tsurf {

/// IUGG mean Earth radius in meters.
inline constexpr double kEarthRadiusM = 6'371'008.8;

/// A raw WGS84 fix. Parsers validate ranges before constructing tracks.
struct GeoPoint {
  double lat = 0.0;  ///< degrees, [-90, 90]
  double lon = 0.0;  ///< degrees, [-180, 180]
  std::optional<double> alt;  ///< meters
  std::optional<double> t;    ///< seconds since the Unix epoch

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool is_valid_coordinate(double lat, double lon) noexcept;

/// A projected sample: meters east/north of the frame origin plus cumulative
/// planar arc length from the start of the track.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
  double s = 0.0;
};

/// A point in a chord-aligned segment frame: distance along the chord and
/// signed lateral offset (positive to the left of the direction of travel).
struct ChordPoint {
  double u = 0.0;
  double v = 0.0;
};

/// Great-circle distance on the mean-radius sphere.
double haversine_m(const GeoPoint& a, const GeoPoint& b) noexcept;

/// Equirectangular projection about a fixed reference latitude/longitude.
/// Accurate to well under 1% for extents below half a degree.
class LocalFrame {
 public:
  LocalFrame(double lat0_deg, double lon0_deg) noexcept;

  /// Frame centred on the mean latitude/longitude of the points.
  static LocalFrame centred_on(std::span<const GeoPoint> points);

  double lat0() const noexcept { return lat0_; }
  double lon0() const noexcept { return lon0_; }

  void forward(double lat, double lon, double& x, double& y) const noexcept;
  void inverse(double x, double y, double& lat, double& lon) const noexcept;

 private:
  double lat0_;
  double lon0_;
  double cos_lat0_;
};

/// Projects a track about its mean position and accumulates arc length.
/// Throws Errc::FewerThanTwoPoints.
std::vector<PlanarPoint> project_track(std::span<const GeoPoint> points);

/// Rigid transform putting the first point at the origin and the last on the
/// positive u axis. Throws Errc::FewerThanTwoPoints, Errc::DegenerateChord.
std::vector<ChordPoint> chord_align(std::span<const PlanarPoint> points);

}  // namespace tsurf
