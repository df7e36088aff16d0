#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsurf/error.hpp"
#include "tsurf/ml.hpp"
#include "tsurf/random.hpp"

namespace tsurf {
namespace {

double margin(const std::vector<double>& w, double b, std::span<const double> x) {
  double s = b;
  for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
  return s;
}

}  // namespace

// Pegasos-style stochastic subgradient descent. With lambda = 1 / (C n) the
// per-sample objective lambda/2 |w|^2 + mean hinge has the same minimiser as
// 1/2 |w|^2 + C sum hinge. The bias is folded in as a weight on a constant
// feature so it shrinks with the same 1/(lambda t) schedule.
TrainedModel svm_train(const Dataset& data, const SvmOptions& options) {
  data.validate();
  if (data.count(Label::Squiggly) == 0 || data.count(Label::Straight) == 0) {
    throw Error(Errc::SingleClass, "SVM training needs both classes");
  }
  if (!(options.c > 0.0) || options.epochs == 0) {
    throw Error(Errc::SpecInvalid, "SVM needs C > 0 and at least one epoch");
  }
  SvmModel m;
  m.scaler = MinMaxScaler::fit(data);
  const std::size_t n = data.rows.size();
  const std::size_t d = data.dims();

  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  xs.reserve(n);
  for (const auto& row : data.rows) {
    xs.push_back(m.scaler.transform(row.features));
    ys.push_back(row.label == Label::Squiggly ? 1.0 : -1.0);
  }

  const double lambda = 1.0 / (options.c * static_cast<double>(n));
  std::vector<double> w(d, 0.0);
  double b = 0.0;
  Rng rng(options.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double shrink = 1.0 - eta * lambda;
      const bool violated = ys[i] * margin(w, b, xs[i]) < 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        w[j] = shrink * w[j] + (violated ? eta * ys[i] * xs[i][j] : 0.0);
      }
      b = shrink * b + (violated ? eta * ys[i] : 0.0);
    }
  }
  m.weights = std::move(w);
  m.bias = b;
  return TrainedModel{data.feature_names, std::move(m)};
}

Prediction svm_predict(const TrainedModel& model, std::span<const double> x, std::string id) {
  const auto& m = std::get<SvmModel>(model.params);
  if (x.size() != model.dims()) {
    throw Error(Errc::DimMismatch, "model expects " + std::to_string(model.dims()) +
                                       " features, got " + std::to_string(x.size()));
  }
  const auto q = m.scaler.transform(x);
  Prediction p;
  p.id = std::move(id);
  p.score = margin(m.weights, m.bias, q);
  p.label = p.score >= 0.0 ? Label::Squiggly : Label::Straight;
  return p;
}

double svm_objective(const TrainedModel& model, const Dataset& data, double c) {
  const auto& m = std::get<SvmModel>(model.params);
  double reg = m.bias * m.bias;
  for (double wj : m.weights) reg += wj * wj;
  double hinge = 0.0;
  for (const auto& row : data.rows) {
    const double y = row.label == Label::Squiggly ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - y * margin(m.weights, m.bias, m.scaler.transform(row.features)));
  }
  return 0.5 * reg + c * hinge;
}

}  // namespace tsurf
