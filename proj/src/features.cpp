#include "tsurf/features.hpp"

#include <algorithm>
#include <cmath>

#include "text_util.hpp"
#include "tsurf/error.hpp"

namespace tsurf {
namespace {

void require_valid(const Segment& seg) {
  if (!seg.valid || seg.points.size() < kMinSegmentPoints) {
    throw Error(Errc::InvalidSegment,
                "segment " + std::to_string(seg.index) + " has " +
                    std::to_string(seg.points.size()) + " points",
                seg.index);
  }
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::M1: return "m1";
    case Method::M2: return "m2";
    case Method::M3: return "m3";
  }
  return "m1";
}

Method parse_method(std::string_view text) {
  const std::string lower = detail::to_lower(detail::trim(text));
  if (lower == "m1") return Method::M1;
  if (lower == "m2") return Method::M2;
  if (lower == "m3") return Method::M3;
  throw Error(Errc::SpecInvalid, "unknown method '" + std::string(text) + "'");
}

std::string_view scalar_name(Method method) noexcept {
  switch (method) {
    case Method::M1: return "m1_freq";
    case Method::M2: return "m2_rmse";
    case Method::M3: return "m3_crossings";
  }
  return "m1_freq";
}

std::size_t count_sign_changes(std::span<const double> values, double tolerance) {
  int last = 0;
  std::size_t changes = 0;
  for (double value : values) {
    int sign = value > tolerance ? 1 : (value < -tolerance ? -1 : 0);
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++changes;
    last = sign;
  }
  return changes;
}

SlopeChanges slope_direction_changes(const Segment& seg) {
  require_valid(seg);
  const auto aligned = chord_align(seg.points);
  const std::size_t n = aligned.size();
  std::vector<double> steps(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) steps[i] = aligned[i + 1].v - aligned[i].v;
  SlopeChanges out;
  out.count = count_sign_changes(steps, kFlatToleranceM);
  out.freq = n < 3 ? 0.0 : static_cast<double>(out.count) / static_cast<double>(n - 2);
  return out;
}

double segment_fit_rmse(const Segment& seg) {
  require_valid(seg);
  const auto aligned = chord_align(seg.points);

  double sum_u = 0.0, sum_v = 0.0, min_u = aligned[0].u, max_u = aligned[0].u;
  std::size_t n_fit = 0;
  for (std::size_t i = 0; i < aligned.size(); i += 2) {
    sum_u += aligned[i].u;
    sum_v += aligned[i].v;
    min_u = std::min(min_u, aligned[i].u);
    max_u = std::max(max_u, aligned[i].u);
    ++n_fit;
  }
  if (max_u - min_u <= 1e-9) {
    throw Error(Errc::SingularFit,
                "segment " + std::to_string(seg.index) + ": fit points share one u",
                seg.index);
  }
  const double mean_u = sum_u / static_cast<double>(n_fit);
  const double mean_v = sum_v / static_cast<double>(n_fit);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < aligned.size(); i += 2) {
    const double du = aligned[i].u - mean_u;
    sxx += du * du;
    sxy += du * (aligned[i].v - mean_v);
  }
  const double slope = sxy / sxx;
  const double intercept = mean_v - slope * mean_u;

  double sq = 0.0;
  std::size_t n_test = 0;
  for (std::size_t i = 1; i < aligned.size(); i += 2) {
    const double r = aligned[i].v - (slope * aligned[i].u + intercept);
    sq += r * r;
    ++n_test;
  }
  return std::sqrt(sq / static_cast<double>(n_test));
}

std::size_t derivative_zero_crossings(const Segment& seg) {
  require_valid(seg);
  const auto aligned = chord_align(seg.points);
  const std::size_t n = aligned.size();
  std::vector<double> slopes;
  slopes.reserve(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ds = seg.points[i + 1].s - seg.points[i - 1].s;
    if (!(ds > 0.0)) {
      throw Error(Errc::NonMonotonicU,
                  "segment " + std::to_string(seg.index) +
                      ": arc length not strictly increasing at point " + std::to_string(i),
                  seg.index);
    }
    const double dv = aligned[i + 1].v - aligned[i - 1].v;
    // a flat step is an exact zero so it carries the previous sign
    slopes.push_back(std::abs(dv) <= kFlatToleranceM ? 0.0 : dv / ds);
  }
  return count_sign_changes(slopes, 0.0);
}

SegmentFeatures segment_features(const Segment& seg) {
  SegmentFeatures f;
  f.index = seg.index;
  f.n_points = seg.points.size();
  if (!seg.valid || seg.points.size() < kMinSegmentPoints) return f;
  try {
    const auto m1 = slope_direction_changes(seg);
    const double m2 = segment_fit_rmse(seg);
    const std::size_t m3 = derivative_zero_crossings(seg);
    f.m1_count = m1.count;
    f.m1_freq = m1.freq;
    f.m2_rmse = m2;
    f.m3_crossings = m3;
    f.valid = std::isfinite(m1.freq) && std::isfinite(m2);
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::DegenerateChord:
      case Errc::SingularFit:
      case Errc::NonMonotonicU:
      case Errc::InvalidSegment:
        return f;
      default:
        throw;
    }
  }
  if (!f.valid) {
    f = SegmentFeatures{};
    f.index = seg.index;
    f.n_points = seg.points.size();
  }
  return f;
}

std::vector<SegmentFeatures> segment_features(std::span<const Segment> segments) {
  std::vector<SegmentFeatures> out;
  out.reserve(segments.size());
  for (const auto& seg : segments) out.push_back(segment_features(seg));
  return out;
}

double method_scalar(const SegmentFeatures& f, Method method) noexcept {
  switch (method) {
    case Method::M1: return f.m1_freq;
    case Method::M2: return f.m2_rmse;
    case Method::M3: return static_cast<double>(f.m3_crossings);
  }
  return 0.0;
}

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyDataset, "no values to summarize");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  SummaryStats s;
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (double v : sorted) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(n));
  s.median = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  s.max = sorted.back();
  const std::size_t rank = (90 * n + 99) / 100;  // ceil(0.9 n), at least 1
  s.p90 = sorted[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

std::vector<double> RideFeatures::as_vector() const {
  return {stats.mean, stats.median, stats.stddev, stats.max, stats.p90};
}

RideFeatures ride_features(std::string track_id, std::span<const SegmentFeatures> segments,
                           Method method) {
  std::vector<double> values;
  for (const auto& f : segments) {
    if (f.valid) values.push_back(method_scalar(f, method));
  }
  if (values.size() < kMinValidSegments) {
    throw Error(Errc::TooFewValidSegments,
                "ride '" + track_id + "' has " + std::to_string(values.size()) +
                    " valid segments (minimum " + std::to_string(kMinValidSegments) + ")");
  }
  RideFeatures r;
  r.track_id = std::move(track_id);
  r.method = method;
  r.stats = summarize(values);
  r.n_valid_segments = values.size();
  return r;
}

}  // namespace tsurf
