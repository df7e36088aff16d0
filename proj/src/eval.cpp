#include "tsurf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "tsurf/error.hpp"
#include "tsurf/random.hpp"

namespace tsurf {
namespace {

// round(x) with exact halves going down
std::size_t round_half_down(double x) {
  return static_cast<std::size_t>(std::ceil(x - 0.5));
}

}  // namespace

Split make_split(std::span<const std::pair<std::string, Label>> ids, double ratio,
                 std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(Errc::BadRatio, "split ratio must lie strictly between 0 and 1");
  }
  std::vector<std::string> by_class[2];
  std::set<std::string> seen;
  for (const auto& [id, label] : ids) {
    if (!seen.insert(id).second) throw Error(Errc::DuplicateId, "duplicate id '" + id + "'");
    by_class[static_cast<int>(label)].push_back(id);
  }
  for (const auto& members : by_class) {
    if (members.size() < 2) {
      throw Error(Errc::TooFewPerClass, "each class needs at least two ids to split");
    }
  }

  Split split;
  split.ratio = ratio;
  split.seed = seed;
  const bool train_is_minor = ratio <= 0.5;
  const double minor_ratio = train_is_minor ? ratio : 1.0 - ratio;
  Rng rng(seed);
  // Straight first, then Squiggly, so the RNG stream is fixed per seed.
  for (auto& members : by_class) {
    std::sort(members.begin(), members.end());
    rng.shuffle(std::span<std::string>(members));
    const std::size_t minor =
        round_half_down(minor_ratio * static_cast<double>(members.size()));
    auto& minor_side = train_is_minor ? split.train_ids : split.test_ids;
    auto& major_side = train_is_minor ? split.test_ids : split.train_ids;
    for (std::size_t i = 0; i < members.size(); ++i) {
      (i < minor ? minor_side : major_side).push_back(members[i]);
    }
  }
  std::sort(split.train_ids.begin(), split.train_ids.end());
  std::sort(split.test_ids.begin(), split.test_ids.end());
  return split;
}

ClassificationReport classification_report(const std::map<std::string, Label>& truth,
                                           std::span<const Prediction> predictions) {
  std::set<std::string> predicted;
  ClassificationReport rep;
  auto& c = rep.confusion;
  for (const auto& p : predictions) {
    const auto it = truth.find(p.id);
    if (it == truth.end()) throw Error(Errc::IdMismatch, "no truth label for id '" + p.id + "'");
    if (!predicted.insert(p.id).second) {
      throw Error(Errc::IdMismatch, "id '" + p.id + "' predicted twice");
    }
    const bool actual = it->second == Label::Squiggly;
    const bool guess = p.label == Label::Squiggly;
    if (actual && guess) ++c.tp;
    else if (!actual && guess) ++c.fp;
    else if (!actual && !guess) ++c.tn;
    else ++c.fn;
  }
  if (predicted.size() != truth.size()) {
    std::string missing;
    for (const auto& [id, label] : truth) {
      if (!predicted.count(id)) missing += (missing.empty() ? "" : ", ") + id;
    }
    throw Error(Errc::IdMismatch, "no prediction for ids: " + missing);
  }
  const double n = static_cast<double>(c.total());
  rep.accuracy = n > 0 ? static_cast<double>(c.tp + c.tn) / n : 0.0;

  const auto ratio = [&](std::size_t num, std::size_t den, const char* flag) {
    if (den == 0) {
      rep.flags.emplace_back(flag);
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  const double prec_pos = ratio(c.tp, c.tp + c.fp, "no_predicted_squiggly");
  const double prec_neg = ratio(c.tn, c.tn + c.fn, "no_predicted_straight");
  const double rec_pos = ratio(c.tp, c.tp + c.fn, "no_actual_squiggly");
  const double rec_neg = ratio(c.tn, c.tn + c.fp, "no_actual_straight");
  rep.precision = (prec_pos + prec_neg) / 2.0;
  rep.recall = (rec_pos + rec_neg) / 2.0;
  return rep;
}

RocCurve roc_curve(std::span<const Label> truth, std::span<const double> scores) {
  if (truth.size() != scores.size()) {
    throw Error(Errc::IdMismatch, "truth and score vectors differ in length");
  }
  std::size_t positives = 0;
  for (auto l : truth) positives += l == Label::Squiggly ? 1 : 0;
  const std::size_t negatives = truth.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(Errc::SingleClassTruth, "ROC needs both classes in the truth");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double score = scores[order[i]];
    while (i < order.size() && scores[order[i]] == score) {
      (truth[order[i]] == Label::Squiggly ? tp : fp) += 1;
      ++i;
    }
    roc.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                          static_cast<double>(tp) / static_cast<double>(positives)});
  }
  // the last group already lands on (1,1); keep the closing vertex explicit
  if (roc.points.back().fpr != 1.0 || roc.points.back().tpr != 1.0) {
    roc.points.push_back({1.0, 1.0});
  }
  double area = 0.0;
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    const auto& a = roc.points[i - 1];
    const auto& b = roc.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  roc.auc = area;
  return roc;
}

double vo2max(double power_w, double weight_kg) {
  if (!(weight_kg > 0.0)) throw Error(Errc::NonpositiveWeight, "body mass must be positive");
  if (!(power_w >= 0.0)) throw Error(Errc::SpecInvalid, "power must be non-negative");
  return 10.8 * power_w / weight_kg + 7.0;
}

}  // namespace tsurf
