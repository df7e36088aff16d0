#include <algorithm>

#include "tsurf/error.hpp"
#include "tsurf/ml.hpp"

namespace tsurf {

std::size_t Dataset::count(Label label) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [label](const Sample& s) { return s.label == label; }));
}

void Dataset::validate() const {
  if (rows.empty()) throw Error(Errc::EmptyDataset, "dataset has no rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].features.size() != feature_names.size()) {
      throw Error(Errc::DimMismatch,
                  "row " + std::to_string(i) + " has " +
                      std::to_string(rows[i].features.size()) + " features, expected " +
                      std::to_string(feature_names.size()),
                  i);
    }
  }
}

MinMaxScaler::MinMaxScaler(std::vector<double> mins, std::vector<double> maxs)
    : mins_(std::move(mins)), maxs_(std::move(maxs)) {}

MinMaxScaler MinMaxScaler::fit(const Dataset& data) {
  data.validate();
  std::vector<double> mins = data.rows.front().features;
  std::vector<double> maxs = mins;
  for (const auto& row : data.rows) {
    for (std::size_t j = 0; j < mins.size(); ++j) {
      mins[j] = std::min(mins[j], row.features[j]);
      maxs[j] = std::max(maxs[j], row.features[j]);
    }
  }
  return MinMaxScaler(std::move(mins), std::move(maxs));
}

std::vector<double> MinMaxScaler::transform(std::span<const double> x) const {
  if (x.size() != mins_.size()) {
    throw Error(Errc::DimMismatch, "expected " + std::to_string(mins_.size()) +
                                       " features, got " + std::to_string(x.size()));
  }
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double range = maxs_[j] - mins_[j];
    out[j] = range > 0.0 ? (x[j] - mins_[j]) / range : 0.0;
  }
  return out;
}

std::string_view TrainedModel::kind() const noexcept {
  switch (params.index()) {
    case 0: return "knn";
    case 1: return "tree";
    default: return "svm";
  }
}

Prediction predict(const TrainedModel& model, std::span<const double> x, std::string id) {
  switch (model.params.index()) {
    case 0: return knn_predict(model, x, std::move(id));
    case 1: return tree_predict(model, x, std::move(id));
    default: return svm_predict(model, x, std::move(id));
  }
}

std::vector<Prediction> predict_all(const TrainedModel& model, const Dataset& data) {
  std::vector<Prediction> out;
  out.reserve(data.rows.size());
  for (const auto& row : data.rows) out.push_back(predict(model, row.features, row.id));
  return out;
}

}  // namespace tsurf
