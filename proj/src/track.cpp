#include <cmath>
#include <cstdio>
#include <sstream>

#include "text_util.hpp"
#include "track_internal.hpp"
#include "tsurf/error.hpp"
#include "tsurf/track.hpp"

namespace tsurf {
namespace {

// Howard Hinnant's days_from_civil / civil_from_days.
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

void civil_from_days(long long z, long long& y, unsigned& m, unsigned& d) {
  z += 719468;
  const long long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<long long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

}  // namespace

std::string_view to_string(Label label) noexcept {
  return label == Label::Squiggly ? "squiggly" : "straight";
}

Label parse_label(std::string_view text) {
  const std::string lower = detail::to_lower(detail::trim(text));
  if (lower == "squiggly") return Label::Squiggly;
  if (lower == "straight") return Label::Straight;
  throw Error(Errc::UnknownLabel, "unknown label '" + std::string(text) +
                                      "' (expected squiggly or straight)");
}

std::optional<double> parse_iso8601(std::string_view text) {
  text = detail::trim(text);
  int year = 0;
  unsigned month = 0, day = 0, hour = 0, minute = 0;
  int consumed = 0;
  const std::string buf(text);
  if (std::sscanf(buf.c_str(), "%4d-%2u-%2uT%2u:%2u:%n", &year, &month, &day, &hour,
                  &minute, &consumed) != 5 ||
      consumed == 0) {
    return std::nullopt;
  }
  std::string_view rest = text.substr(static_cast<std::size_t>(consumed));
  // seconds run up to the zone designator
  std::size_t zone_pos = rest.find_first_of("Z+-");
  const auto seconds = detail::parse_double(rest.substr(0, zone_pos));
  if (!seconds || *seconds < 0.0 || *seconds >= 61.0 || month < 1 || month > 12 ||
      day < 1 || day > 31 || hour > 23 || minute > 59) {
    return std::nullopt;
  }
  double offset = 0.0;
  if (zone_pos != std::string_view::npos) {
    std::string_view zone = rest.substr(zone_pos);
    if (zone != "Z") {
      unsigned oh = 0, om = 0;
      const std::string zbuf(zone.substr(1));
      if (std::sscanf(zbuf.c_str(), "%2u:%2u", &oh, &om) != 2) return std::nullopt;
      offset = (zone.front() == '-' ? -1.0 : 1.0) * (oh * 3600.0 + om * 60.0);
    }
  }
  const long long days = days_from_civil(year, month, day);
  return static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 +
         *seconds - offset;
}

std::string format_iso8601(double seconds) {
  const double whole = std::floor(seconds);
  long long millis = std::llround((seconds - whole) * 1000.0);
  long long total = static_cast<long long>(whole);
  if (millis == 1000) {
    millis = 0;
    ++total;
  }
  long long days = total / 86400;
  long long secs = total % 86400;
  if (secs < 0) {
    secs += 86400;
    --days;
  }
  long long y = 0;
  unsigned m = 0, d = 0;
  civil_from_days(days, y, m, d);
  char buf[40];
  if (millis == 0) {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d,
                  secs / 3600, (secs / 60) % 60, secs % 60);
  } else {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", y, m,
                  d, secs / 3600, (secs / 60) % 60, secs % 60, millis);
  }
  return buf;
}

namespace detail {

void validate_timestamps(std::span<const GeoPoint> points,
                         std::span<const std::size_t> locations) {
  if (points.empty()) return;
  const bool timed = points.front().t.has_value();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].t.has_value() != timed) {
      throw Error(Errc::InvalidTimestamp,
                  "timestamps must be present on all points or none (line/row " +
                      std::to_string(locations[i]) + ")",
                  locations[i]);
    }
    if (timed && i > 0 && !(*points[i].t > *points[i - 1].t)) {
      throw Error(Errc::InvalidTimestamp,
                  "timestamps not strictly increasing at line/row " +
                      std::to_string(locations[i]),
                  locations[i]);
    }
  }
}

}  // namespace detail

Track parse_track_csv(std::string_view bytes, std::string id) {
  const auto lines = detail::split_lines(bytes);
  if (lines.empty() || detail::trim(lines.front()).empty()) {
    throw Error(Errc::MissingHeader, "track CSV has no header row");
  }
  int lat_col = -1, lon_col = -1, alt_col = -1, t_col = -1;
  const auto header = detail::split_fields(lines.front());
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = detail::to_lower(detail::trim(header[i]));
    int* slot = name == "lat"   ? &lat_col
                : name == "lon" ? &lon_col
                : name == "alt" ? &alt_col
                : name == "t"   ? &t_col
                                : nullptr;
    if (slot == nullptr || *slot != -1) {
      throw Error(Errc::MissingHeader,
                  "unexpected column '" + std::string(header[i]) +
                      "' (header must be lat,lon[,alt][,t])");
    }
    *slot = static_cast<int>(i);
  }
  if (lat_col < 0 || lon_col < 0) {
    throw Error(Errc::MissingHeader, "track CSV header lacks lat and lon columns");
  }

  Track track{std::move(id), {}, TrackSource::Csv};
  std::vector<std::size_t> rows;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (detail::trim(lines[li]).empty()) continue;
    const std::size_t row = li;  // data rows are numbered from 1
    const auto fields = detail::split_fields(lines[li]);
    const auto fail = [&](const std::string& what) {
      throw Error(Errc::RowParseError,
                  "row " + std::to_string(row) + ": " + what, row);
    };
    if (fields.size() != header.size()) fail("expected " + std::to_string(header.size()) + " fields");
    GeoPoint p;
    const auto lat = detail::parse_double(fields[static_cast<std::size_t>(lat_col)]);
    const auto lon = detail::parse_double(fields[static_cast<std::size_t>(lon_col)]);
    if (!lat) fail("lat is not a number");
    if (!lon) fail("lon is not a number");
    p.lat = *lat;
    p.lon = *lon;
    if (!is_valid_coordinate(p.lat, p.lon)) {
      throw Error(Errc::InvalidCoordinate,
                  "row " + std::to_string(row) + ": coordinate out of range", row);
    }
    if (alt_col >= 0) {
      const auto text = detail::trim(fields[static_cast<std::size_t>(alt_col)]);
      if (!text.empty()) {
        const auto alt = detail::parse_double(text);
        if (!alt) fail("alt is not a number");
        p.alt = *alt;
      }
    }
    if (t_col >= 0) {
      const auto text = detail::trim(fields[static_cast<std::size_t>(t_col)]);
      if (!text.empty()) {
        auto t = detail::parse_double(text);
        if (!t) t = parse_iso8601(text);
        if (!t) fail("t is neither seconds nor an ISO 8601 time");
        p.t = *t;
      }
    }
    track.points.push_back(p);
    rows.push_back(row);
  }
  if (track.points.empty()) {
    throw Error(Errc::NoTrackPoints, "track CSV '" + track.id + "' has no data rows");
  }
  detail::validate_timestamps(track.points, rows);
  return track;
}

std::string write_track_csv(const Track& track) {
  std::string out = "lat,lon,alt,t\n";
  for (const auto& p : track.points) {
    out += detail::format_double(p.lat);
    out += ',';
    out += detail::format_double(p.lon);
    out += ',';
    if (p.alt) out += detail::format_double(*p.alt);
    out += ',';
    if (p.t) out += detail::format_double(*p.t);
    out += '\n';
  }
  return out;
}

Track clean(Track track) {
  std::vector<GeoPoint> kept;
  kept.reserve(track.points.size());
  for (const auto& p : track.points) {
    if (!kept.empty() && kept.back().lat == p.lat && kept.back().lon == p.lon) continue;
    kept.push_back(p);
  }
  for (std::size_t i = 1; i < kept.size(); ++i) {
    const double gap = haversine_m(kept[i - 1], kept[i]);
    if (gap > kMaxGapM) {
      std::ostringstream msg;
      msg << "track '" << track.id << "': gap of " << gap << " m before point " << i;
      throw Error(Errc::GapTooLarge, msg.str(), i);
    }
  }
  if (kept.size() < kMinTrackPoints) {
    throw Error(Errc::TooShort, "track '" + track.id + "' has " +
                                    std::to_string(kept.size()) +
                                    " distinct points (minimum " +
                                    std::to_string(kMinTrackPoints) + ")");
  }
  track.points = std::move(kept);
  return track;
}

std::map<std::string, Label> load_labels(std::string_view bytes) {
  const auto lines = detail::split_lines(bytes);
  if (lines.empty()) throw Error(Errc::MissingHeader, "label file is empty");
  const auto header = detail::split_fields(lines.front());
  if (header.size() != 2 || detail::to_lower(detail::trim(header[0])) != "id" ||
      detail::to_lower(detail::trim(header[1])) != "label") {
    throw Error(Errc::MissingHeader, "label file header must be id,label");
  }
  std::map<std::string, Label> labels;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (detail::trim(lines[row]).empty()) continue;
    const auto fields = detail::split_fields(lines[row]);
    if (fields.size() != 2) {
      throw Error(Errc::RowParseError,
                  "label row " + std::to_string(row) + ": expected id,label", row);
    }
    std::string id(detail::trim(fields[0]));
    Label label;
    try {
      label = parse_label(fields[1]);
    } catch (const Error&) {
      throw Error(Errc::UnknownLabel,
                  "label row " + std::to_string(row) + ": unknown label '" +
                      std::string(detail::trim(fields[1])) + "'",
                  row);
    }
    if (!labels.emplace(id, label).second) {
      throw Error(Errc::DuplicateId,
                  "label row " + std::to_string(row) + ": duplicate id '" + id + "'", row);
    }
  }
  return labels;
}

std::string write_labels(const std::map<std::string, Label>& labels) {
  std::string out = "id,label\n";
  for (const auto& [id, label] : labels) {
    out += id;
    out += ',';
    out += to_string(label);
    out += '\n';
  }
  return out;
}

}  // namespace tsurf
