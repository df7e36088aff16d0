#include <algorithm>
#include <numeric>

#include "tsurf/error.hpp"
#include "tsurf/ml.hpp"

namespace tsurf {

TrainedModel knn_train(const Dataset& data, int k) {
  if (data.rows.empty()) throw Error(Errc::EmptyDataset, "cannot fit KNN on no rows");
  if (k < 1 || k % 2 == 0 || static_cast<std::size_t>(k) > data.rows.size()) {
    throw Error(Errc::BadK, "k=" + std::to_string(k) + " must be odd and in [1, " +
                                std::to_string(data.rows.size()) + "]");
  }
  KnnModel m;
  m.k = k;
  m.scaler = MinMaxScaler::fit(data);
  m.points.reserve(data.rows.size());
  for (const auto& row : data.rows) {
    m.points.push_back(m.scaler.transform(row.features));
    m.labels.push_back(row.label);
  }
  return TrainedModel{data.feature_names, std::move(m)};
}

Prediction knn_predict(const TrainedModel& model, std::span<const double> x, std::string id) {
  const auto& m = std::get<KnnModel>(model.params);
  if (x.size() != model.dims()) {
    throw Error(Errc::DimMismatch, "model expects " + std::to_string(model.dims()) +
                                       " features, got " + std::to_string(x.size()));
  }
  const auto q = m.scaler.transform(x);
  std::vector<double> dist(m.points.size());
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double diff = m.points[i][j] - q[j];
      d += diff * diff;
    }
    dist[i] = d;
  }
  std::vector<std::size_t> order(m.points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto k = static_cast<std::size_t>(m.k);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                    });
  std::size_t positives = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (m.labels[order[i]] == Label::Squiggly) ++positives;
  }
  Prediction p;
  p.id = std::move(id);
  p.score = static_cast<double>(positives) / static_cast<double>(k);
  p.label = p.score >= 0.5 ? Label::Squiggly : Label::Straight;
  return p;
}

}  // namespace tsurf
