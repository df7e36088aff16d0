#include <array>

#include "text_util.hpp"
#include "tsurf/error.hpp"
#include "tsurf/features.hpp"

namespace tsurf {
namespace {

constexpr std::array<std::string_view, 8> kColumns = {
    "track_id", "segment_index", "m1_count", "m1_freq",
    "m2_rmse",  "m3_crossings",  "valid",    "n_points"};
constexpr std::size_t kRequiredColumns = 7;

}  // namespace

std::string write_feature_table(std::span<const FeatureRow> rows) {
  std::string out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (i) out += ',';
    out += kColumns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    const auto& f = row.features;
    if (row.track_id.empty() || row.track_id.find_first_of(",\r\n") != std::string::npos) {
      throw Error(Errc::RowParseError, "track id '" + row.track_id + "' cannot be stored in CSV");
    }
    out += row.track_id;
    out += ',' + std::to_string(f.index);
    out += ',' + std::to_string(f.m1_count);
    out += ',' + detail::format_double(f.m1_freq);
    out += ',' + detail::format_double(f.m2_rmse);
    out += ',' + std::to_string(f.m3_crossings);
    out += f.valid ? ",1" : ",0";
    out += ',' + std::to_string(f.n_points);
    out += '\n';
  }
  return out;
}

std::vector<FeatureRow> read_feature_table(std::string_view bytes) {
  const auto lines = detail::split_lines(bytes);
  if (lines.empty()) throw Error(Errc::MissingHeader, "feature table is empty");
  const auto header = detail::split_fields(lines.front());
  if (header.size() < kRequiredColumns || header.size() > kColumns.size()) {
    throw Error(Errc::MissingHeader, "feature table header has wrong column count");
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (detail::trim(header[i]) != kColumns[i]) {
      throw Error(Errc::MissingHeader, "feature table column " + std::to_string(i + 1) +
                                           " should be '" + std::string(kColumns[i]) + "'");
    }
  }
  const bool has_points = header.size() == kColumns.size();

  std::vector<FeatureRow> rows;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (detail::trim(lines[r]).empty()) continue;
    const auto fields = detail::split_fields(lines[r]);
    const auto fail = [&](std::string_view what) {
      throw Error(Errc::RowParseError,
                  "feature row " + std::to_string(r) + ": " + std::string(what), r);
    };
    if (fields.size() != header.size()) fail("wrong number of fields");
    FeatureRow row;
    row.track_id = std::string(detail::trim(fields[0]));
    if (row.track_id.empty()) fail("empty track_id");
    const auto index = detail::parse_int<std::size_t>(fields[1]);
    const auto m1_count = detail::parse_int<std::size_t>(fields[2]);
    const auto m1_freq = detail::parse_double(fields[3]);
    const auto m2 = detail::parse_double(fields[4]);
    const auto m3 = detail::parse_int<std::size_t>(fields[5]);
    const auto valid = detail::parse_int<int>(fields[6]);
    if (!index || !m1_count || !m1_freq || !m2 || !m3 || !valid || (*valid != 0 && *valid != 1)) {
      fail("unparseable value");
    }
    row.features.index = *index;
    row.features.m1_count = *m1_count;
    row.features.m1_freq = *m1_freq;
    row.features.m2_rmse = *m2;
    row.features.m3_crossings = *m3;
    row.features.valid = *valid == 1;
    if (has_points) {
      const auto n = detail::parse_int<std::size_t>(fields[7]);
      if (!n) fail("unparseable n_points");
      row.features.n_points = *n;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace tsurf
