#include "tsurf/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tsurf/error.hpp"

namespace tsurf {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kDegenerateChordM = 1e-9;

}  // namespace

bool is_valid_coordinate(double lat, double lon) noexcept {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 &&
         lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) noexcept {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double sin_dphi = std::sin(dphi / 2.0);
  const double sin_dlambda = std::sin(dlambda / 2.0);
  double h = sin_dphi * sin_dphi +
             std::cos(phi1) * std::cos(phi2) * sin_dlambda * sin_dlambda;
  h = std::min(1.0, std::max(0.0, h));
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

LocalFrame::LocalFrame(double lat0_deg, double lon0_deg) noexcept
    : lat0_(lat0_deg), lon0_(lon0_deg), cos_lat0_(std::cos(lat0_deg * kDegToRad)) {}

LocalFrame LocalFrame::centred_on(std::span<const GeoPoint> points) {
  if (points.empty()) {
    throw Error(Errc::FewerThanTwoPoints, "cannot centre a frame on no points");
  }
  double lat_sum = 0.0;
  double lon_sum = 0.0;
  for (const auto& p : points) {
    lat_sum += p.lat;
    lon_sum += p.lon;
  }
  const auto n = static_cast<double>(points.size());
  return LocalFrame(lat_sum / n, lon_sum / n);
}

void LocalFrame::forward(double lat, double lon, double& x, double& y) const noexcept {
  x = kEarthRadiusM * (lon - lon0_) * cos_lat0_ * kDegToRad;
  y = kEarthRadiusM * (lat - lat0_) * kDegToRad;
}

void LocalFrame::inverse(double x, double y, double& lat, double& lon) const noexcept {
  lat = lat0_ + y / (kEarthRadiusM * kDegToRad);
  lon = lon0_ + x / (kEarthRadiusM * cos_lat0_ * kDegToRad);
}

std::vector<PlanarPoint> project_track(std::span<const GeoPoint> points) {
  if (points.size() < 2) {
    throw Error(Errc::FewerThanTwoPoints, "projection needs at least two points");
  }
  const LocalFrame frame = LocalFrame::centred_on(points);
  std::vector<PlanarPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    PlanarPoint q;
    frame.forward(p.lat, p.lon, q.x, q.y);
    if (!out.empty()) {
      const auto& prev = out.back();
      q.s = prev.s + std::hypot(q.x - prev.x, q.y - prev.y);
    }
    out.push_back(q);
  }
  return out;
}

std::vector<ChordPoint> chord_align(std::span<const PlanarPoint> points) {
  if (points.size() < 2) {
    throw Error(Errc::FewerThanTwoPoints, "chord alignment needs at least two points");
  }
  const auto& first = points.front();
  const auto& last = points.back();
  const double dx = last.x - first.x;
  const double dy = last.y - first.y;
  const double chord = std::hypot(dx, dy);
  if (chord <= kDegenerateChordM) {
    throw Error(Errc::DegenerateChord, "segment start and end coincide");
  }
  const double ex = dx / chord;
  const double ey = dy / chord;

  std::vector<ChordPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const double rx = p.x - first.x;
    const double ry = p.y - first.y;
    out.push_back({rx * ex + ry * ey, ex * ry - ey * rx});
  }
  // endpoints are on the chord by construction; pin them to kill rounding
  out.front() = {0.0, 0.0};
  out.back() = {chord, 0.0};
  return out;
}

}  // namespace tsurf
