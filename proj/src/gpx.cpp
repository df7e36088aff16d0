#include <expat.h>

#include <memory>
#include <string>

#include "text_util.hpp"
#include "track_internal.hpp"
#include "tsurf/error.hpp"
#include "tsurf/track.hpp"

namespace tsurf {
namespace {

std::string_view local_name(const XML_Char* name) {
  std::string_view full(name);
  const auto colon = full.rfind(':');
  return colon == std::string_view::npos ? full : full.substr(colon + 1);
}

struct GpxState {
  XML_Parser parser = nullptr;
  std::vector<GeoPoint> points;
  std::vector<std::size_t> lines;
  int trk_depth = 0;
  int trkseg_depth = 0;
  bool in_point = false;
  std::string text;
  bool collecting = false;
  std::optional<Error> error;

  std::size_t line() const {
    return static_cast<std::size_t>(XML_GetCurrentLineNumber(parser));
  }

  void fail(Error e) {
    if (!error) error = std::move(e);
    XML_StopParser(parser, XML_FALSE);
  }
};

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto& st = *static_cast<GpxState*>(data);
  const auto tag = local_name(name);
  if (tag == "trk") {
    ++st.trk_depth;
  } else if (tag == "trkseg" && st.trk_depth > 0) {
    ++st.trkseg_depth;
  } else if (tag == "trkpt" && st.trkseg_depth > 0) {
    const std::size_t line = st.line();
    std::optional<double> lat, lon;
    for (int i = 0; attrs[i] != nullptr; i += 2) {
      const auto attr = local_name(attrs[i]);
      if (attr == "lat") lat = detail::parse_double(attrs[i + 1]);
      if (attr == "lon") lon = detail::parse_double(attrs[i + 1]);
    }
    if (!lat || !lon || !is_valid_coordinate(*lat, *lon)) {
      st.fail(Error(Errc::InvalidCoordinate,
                    "line " + std::to_string(line) +
                        ": trkpt lat/lon missing, non-numeric or out of range",
                    line));
      return;
    }
    GeoPoint p;
    p.lat = *lat;
    p.lon = *lon;
    st.points.push_back(p);
    st.lines.push_back(line);
    st.in_point = true;
  } else if (st.in_point && (tag == "ele" || tag == "time")) {
    st.collecting = true;
    st.text.clear();
  }
}

void XMLCALL on_end(void* data, const XML_Char* name) {
  auto& st = *static_cast<GpxState*>(data);
  const auto tag = local_name(name);
  if (tag == "trk") {
    --st.trk_depth;
  } else if (tag == "trkseg" && st.trk_depth > 0) {
    --st.trkseg_depth;
  } else if (tag == "trkpt" && st.in_point) {
    st.in_point = false;
  } else if (st.collecting && (tag == "ele" || tag == "time")) {
    st.collecting = false;
    auto& p = st.points.back();
    if (tag == "ele") {
      const auto ele = detail::parse_double(st.text);
      if (!ele) {
        st.fail(Error(Errc::InvalidCoordinate,
                      "line " + std::to_string(st.line()) + ": <ele> is not a number",
                      st.line()));
        return;
      }
      p.alt = *ele;
    } else {
      const auto t = parse_iso8601(st.text);
      if (!t) {
        st.fail(Error(Errc::InvalidTimestamp,
                      "line " + std::to_string(st.line()) + ": unparseable <time>",
                      st.line()));
        return;
      }
      p.t = *t;
    }
  }
}

void XMLCALL on_text(void* data, const XML_Char* s, int len) {
  auto& st = *static_cast<GpxState*>(data);
  if (st.collecting) st.text.append(s, static_cast<std::size_t>(len));
}

void escape_into(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
}

}  // namespace

Track parse_gpx(std::string_view bytes, std::string id) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate(nullptr), &XML_ParserFree);
  GpxState st;
  st.parser = parser.get();
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);

  const auto status = XML_Parse(parser.get(), bytes.data(), static_cast<int>(bytes.size()),
                                XML_TRUE);
  if (st.error) throw *st.error;
  if (status != XML_STATUS_OK) {
    const auto line = static_cast<std::size_t>(XML_GetCurrentLineNumber(parser.get()));
    throw Error(Errc::MalformedXml,
                "line " + std::to_string(line) + ": " +
                    XML_ErrorString(XML_GetErrorCode(parser.get())),
                line);
  }
  if (st.points.empty()) {
    throw Error(Errc::NoTrackPoints, "GPX '" + id + "' contains no <trkpt>");
  }
  detail::validate_timestamps(st.points, st.lines);
  return Track{std::move(id), std::move(st.points), TrackSource::Gpx};
}

std::string write_gpx(const Track& track) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<gpx version=\"1.1\" creator=\"trail-surface\" "
      "xmlns=\"http://www.topografix.com/GPX/1/1\">\n"
      "  <trk>\n    <name>";
  escape_into(out, track.id);
  out += "</name>\n    <trkseg>\n";
  for (const auto& p : track.points) {
    out += "      <trkpt lat=\"";
    out += detail::format_double(p.lat);
    out += "\" lon=\"";
    out += detail::format_double(p.lon);
    out += '"';
    if (!p.alt && !p.t) {
      out += "/>\n";
      continue;
    }
    out += '>';
    if (p.alt) {
      out += "<ele>";
      out += detail::format_double(*p.alt);
      out += "</ele>";
    }
    if (p.t) {
      out += "<time>";
      out += format_iso8601(*p.t);
      out += "</time>";
    }
    out += "</trkpt>\n";
  }
  out += "    </trkseg>\n  </trk>\n</gpx>\n";
  return out;
}

}  // namespace tsurf
