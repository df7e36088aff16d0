#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tsurf/track.hpp"

namespace tsurf {

struct Sample {
  std::vector<double> features;
  Label label = Label::Straight;
  std::string id;
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<Sample> rows;

  std::size_t dims() const noexcept { return feature_names.size(); }
  std::size_t count(Label label) const noexcept;
  /// Throws Errc::DimMismatch if any row disagrees with feature_names, or
  /// Errc::EmptyDataset if there are no rows.
  void validate() const;
};

/// Per-feature min-max map onto [0, 1]. Constant columns map to 0.
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  MinMaxScaler(std::vector<double> mins, std::vector<double> maxs);

  static MinMaxScaler fit(const Dataset& data);

  std::vector<double> transform(std::span<const double> x) const;
  const std::vector<double>& mins() const noexcept { return mins_; }
  const std::vector<double>& maxs() const noexcept { return maxs_; }
  std::size_t dims() const noexcept { return mins_.size(); }

 private:
  std::vector<double> mins_;
  std::vector<double> maxs_;
};

struct KnnModel {
  int k = 3;
  MinMaxScaler scaler;
  std::vector<std::vector<double>> points;  ///< scaled training rows
  std::vector<Label> labels;
};

struct TreeNode {
  static constexpr std::uint32_t kNoChild = 0xFFFFFFFFu;

  std::uint32_t feature = 0;
  double threshold = 0.0;
  std::uint32_t left = kNoChild;   ///< taken iff x[feature] < threshold
  std::uint32_t right = kNoChild;
  double positive_fraction = 0.0;  ///< leaves only

  bool is_leaf() const noexcept { return left == kNoChild; }
};

/// Nodes in pre-order; nodes[0] is the root.
struct TreeModel {
  std::vector<TreeNode> nodes;
};

struct SvmModel {
  MinMaxScaler scaler;
  std::vector<double> weights;
  double bias = 0.0;
};

struct TrainedModel {
  std::vector<std::string> feature_names;
  std::variant<KnnModel, TreeModel, SvmModel> params;

  std::size_t dims() const noexcept { return feature_names.size(); }
  std::string_view kind() const noexcept;
};

struct Prediction {
  std::string id;
  double score = 0.0;  ///< higher is more squiggly
  Label label = Label::Straight;
};

/// Throws Errc::BadK (k even, < 1 or larger than the dataset),
/// Errc::EmptyDataset.
TrainedModel knn_train(const Dataset& data, int k = 3);
/// Score = fraction of the k nearest (scaled Euclidean) that are squiggly;
/// distance ties go to the lower training row index.
Prediction knn_predict(const TrainedModel& model, std::span<const double> x,
                       std::string id = {});

struct TreeOptions {
  std::optional<std::size_t> max_depth;  ///< unlimited when empty
  std::size_t min_leaf = 1;
};

/// CART with Gini impurity. Throws Errc::EmptyDataset.
TrainedModel tree_train(const Dataset& data, const TreeOptions& options = {});
Prediction tree_predict(const TrainedModel& model, std::span<const double> x,
                        std::string id = {});

struct SvmOptions {
  double c = 1.0;
  std::size_t epochs = 200;
  std::uint64_t seed = 0;
};

/// Linear soft-margin SVM by stochastic subgradient descent on min-max scaled
/// features. Throws Errc::SingleClass, Errc::EmptyDataset.
TrainedModel svm_train(const Dataset& data, const SvmOptions& options);
/// Score is the signed margin w.x + b; squiggly iff score >= 0.
Prediction svm_predict(const TrainedModel& model, std::span<const double> x,
                       std::string id = {});

/// 1/2 (|w|^2 + b^2) + C sum hinge, the quantity svm_train minimises.
double svm_objective(const TrainedModel& model, const Dataset& data, double c);

/// Dispatches on the model variant. Throws Errc::DimMismatch.
Prediction predict(const TrainedModel& model, std::span<const double> x, std::string id = {});
std::vector<Prediction> predict_all(const TrainedModel& model, const Dataset& data);

/// Binary container: "TSURF", format version, variant tag, feature names,
/// parameters; all numbers little-endian, doubles stored as raw IEEE-754 bits.
inline constexpr std::uint8_t kModelFormatVersion = 1;
std::vector<std::uint8_t> save_model(const TrainedModel& model);
/// Throws Errc::CorruptModel.
TrainedModel load_model(std::span<const std::uint8_t> bytes);

}  // namespace tsurf
