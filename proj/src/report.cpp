#include <json.hpp>

#include "text_util.hpp"
#include "tsurf/eval.hpp"

namespace tsurf {

std::string report_to_json(const EvalReport& report) {
  using nlohmann::ordered_json;
  const auto& cls = report.classification;
  ordered_json j;
  j["model"] = report.model;
  j["method"] = report.method;
  j["level"] = report.level;
  j["split"] = {{"ratio", report.ratio}, {"seed", report.seed}};
  j["n_train"] = report.n_train;
  j["n_test"] = report.n_test;
  j["confusion"] = {{"tp", cls.confusion.tp},
                    {"fp", cls.confusion.fp},
                    {"tn", cls.confusion.tn},
                    {"fn", cls.confusion.fn}};
  j["accuracy"] = cls.accuracy;
  j["precision"] = cls.precision;
  j["recall"] = cls.recall;
  j["averaging"] = "macro";
  j["flags"] = cls.flags;
  j["auc"] = report.roc.auc;
  auto roc = ordered_json::array();
  for (const auto& p : report.roc.points) roc.push_back({p.fpr, p.tpr});
  j["roc"] = std::move(roc);
  const auto& pps = report.points_per_segment;
  j["points_per_segment_stats"] = {
      {"mean", pps.mean}, {"min", pps.min}, {"max", pps.max}, {"median", pps.median}};
  return j.dump(2) + "\n";
}

std::string roc_to_csv(const RocCurve& roc) {
  std::string out = "fpr,tpr\n";
  for (const auto& p : roc.points) {
    out += detail::format_double(p.fpr);
    out += ',';
    out += detail::format_double(p.tpr);
    out += '\n';
  }
  return out;
}

}  // namespace tsurf
