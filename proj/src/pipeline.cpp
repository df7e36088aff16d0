#include "tsurf/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <thread>

#include "text_util.hpp"
#include "tsurf/error.hpp"

namespace tsurf {

std::string_view to_string(Level level) noexcept {
  return level == Level::Segment ? "segment" : "ride";
}

Level parse_level(std::string_view text) {
  const std::string lower = detail::to_lower(detail::trim(text));
  if (lower == "segment") return Level::Segment;
  if (lower == "ride") return Level::Ride;
  throw Error(Errc::SpecInvalid, "unknown level '" + std::string(text) + "'");
}

std::vector<FeatureRow> TrackAnalysis::rows() const {
  std::vector<FeatureRow> out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back({track_id, f});
  return out;
}

TrackAnalysis analyze_track(const Track& cleaned) {
  TrackAnalysis a;
  a.track_id = cleaned.id;
  a.planar = project_track(cleaned.points);
  a.segments = segment_track(a.planar);
  a.features = segment_features(a.segments);
  return a;
}

std::vector<std::string> feature_names(Method method, Level level) {
  const std::string base(scalar_name(method));
  if (level == Level::Segment) return {base};
  std::vector<std::string> names;
  for (auto stat : kSummaryStatNames) names.push_back(base + "_" + std::string(stat));
  return names;
}

std::pair<Method, Level> infer_layout(std::span<const std::string> names) {
  for (Method m : {Method::M1, Method::M2, Method::M3}) {
    for (Level l : {Level::Segment, Level::Ride}) {
      const auto expected = feature_names(m, l);
      if (std::equal(expected.begin(), expected.end(), names.begin(), names.end())) {
        return {m, l};
      }
    }
  }
  throw Error(Errc::DimMismatch, "model features do not match any method/level layout");
}

std::string segment_row_id(const std::string& track_id, std::size_t index) {
  return track_id + "#" + std::to_string(index);
}

std::string track_of_row(const std::string& row_id) {
  const auto hash = row_id.rfind('#');
  return hash == std::string::npos ? row_id : row_id.substr(0, hash);
}

namespace {

// Table rows grouped by track, tracks in sorted order, rows in table order.
std::map<std::string, std::vector<SegmentFeatures>> group_by_track(
    std::span<const FeatureRow> table) {
  std::map<std::string, std::vector<SegmentFeatures>> grouped;
  for (const auto& row : table) grouped[row.track_id].push_back(row.features);
  return grouped;
}

}  // namespace

BuiltDataset build_dataset(std::span<const FeatureRow> table,
                           const std::map<std::string, Label>& labels, Method method,
                           Level level,
                           const std::optional<std::vector<std::string>>& tracks) {
  auto grouped = group_by_track(table);
  if (tracks) {
    const std::set<std::string> wanted(tracks->begin(), tracks->end());
    std::erase_if(grouped, [&](const auto& kv) { return !wanted.count(kv.first); });
  }
  std::string missing;
  for (const auto& [id, rows] : grouped) {
    if (!labels.count(id)) missing += (missing.empty() ? "" : ", ") + id;
  }
  if (!missing.empty()) throw Error(Errc::IdMismatch, "no label for track ids: " + missing);

  BuiltDataset built;
  built.data.feature_names = feature_names(method, level);
  for (const auto& [id, rows] : grouped) {
    const Label label = labels.at(id);
    if (level == Level::Segment) {
      for (const auto& f : rows) {
        if (f.valid) built.data.rows.push_back({{method_scalar(f, method)}, label,
                                                segment_row_id(id, f.index)});
      }
      continue;
    }
    try {
      const auto ride = ride_features(id, rows, method);
      built.data.rows.push_back({ride.as_vector(), label, id});
    } catch (const Error& e) {
      if (e.code() != Errc::TooFewValidSegments) throw;
      built.rejected_tracks.push_back(id);
    }
  }
  return built;
}

Dataset track_dataset(const TrackAnalysis& analysis, Method method, Level level) {
  Dataset data;
  data.feature_names = feature_names(method, level);
  if (level == Level::Segment) {
    for (const auto& f : analysis.features) {
      if (f.valid) {
        data.rows.push_back({{method_scalar(f, method)}, Label::Straight,
                             segment_row_id(analysis.track_id, f.index)});
      }
    }
  } else {
    const auto ride = ride_features(analysis.track_id, analysis.features, method);
    data.rows.push_back({ride.as_vector(), Label::Straight, analysis.track_id});
  }
  return data;
}

PointsPerSegmentStats points_per_segment(std::span<const FeatureRow> table,
                                         const std::optional<std::vector<std::string>>& tracks) {
  std::set<std::string> wanted;
  if (tracks) wanted.insert(tracks->begin(), tracks->end());
  std::vector<double> counts;
  for (const auto& row : table) {
    if (row.features.valid && (!tracks || wanted.count(row.track_id))) {
      counts.push_back(static_cast<double>(row.features.n_points));
    }
  }
  PointsPerSegmentStats out;
  if (counts.empty()) return out;
  const auto s = summarize(counts);
  out.mean = s.mean;
  out.median = s.median;
  out.max = s.max;
  out.min = *std::min_element(counts.begin(), counts.end());
  return out;
}

std::size_t thread_count() {
  if (const char* env = std::getenv("TRAIL_SURFACE_THREADS")) {
    if (const auto n = detail::parse_int<std::size_t>(env); n && *n > 0) return *n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace tsurf
