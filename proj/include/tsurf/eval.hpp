#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsurf/ml.hpp"
#include "tsurf/track.hpp"

namespace tsurf {

struct Split {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  double ratio = 0.5;
  std::uint64_t seed = 0;
};

/// Stratified seeded split. Within each class the ids are sorted, shuffled,
/// and the smaller side (train when ratio <= 0.5, test otherwise) takes the
/// leading round(min(ratio, 1 - ratio) * n) ids, rounding halves down. So
/// make_split(r).train == make_split(1 - r).test for the same seed.
/// Throws Errc::TooFewPerClass (< 2 per class), Errc::BadRatio.
Split make_split(std::span<const std::pair<std::string, Label>> ids, double ratio,
                 std::uint64_t seed);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

/// Accuracy plus macro-averaged (over both classes) precision and recall.
/// A class never predicted has precision 0; a class absent from the truth
/// has recall 0; each such case is noted in `flags`.
struct ClassificationReport {
  Confusion confusion;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::vector<std::string> flags;
};

/// Throws Errc::IdMismatch unless predictions cover exactly the truth ids.
ClassificationReport classification_report(const std::map<std::string, Label>& truth,
                                           std::span<const Prediction> predictions);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// One vertex per distinct score (descending), framed by (0,0) and (1,1);
/// trapezoidal area. Throws Errc::SingleClassTruth.
RocCurve roc_curve(std::span<const Label> truth, std::span<const double> scores);

/// Maximal oxygen uptake (ml/kg/min) from sustained power and body mass.
/// Throws Errc::NonpositiveWeight, Errc::SpecInvalid for negative power.
double vo2max(double power_w, double weight_kg);

struct PointsPerSegmentStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
};

struct EvalReport {
  std::string model;
  std::string method;
  std::string level;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  ClassificationReport classification;
  RocCurve roc;
  PointsPerSegmentStats points_per_segment;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

/// Pretty-printed JSON with a fixed key order and a trailing newline.
std::string report_to_json(const EvalReport& report);
std::string roc_to_csv(const RocCurve& roc);

}  // namespace tsurf
