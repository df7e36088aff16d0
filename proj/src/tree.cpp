#include <algorithm>
#include <numeric>

#include "tsurf/error.hpp"
#include "tsurf/ml.hpp"

namespace tsurf {
namespace {

struct SplitChoice {
  bool found = false;
  std::uint32_t feature = 0;
  double threshold = 0.0;
  double impurity = 0.0;  ///< n_left * gini_left + n_right * gini_right
};

// n * gini for a two-class node, from integer counts.
double weighted_gini(std::size_t pos, std::size_t total) {
  if (total == 0) return 0.0;
  const auto p = static_cast<double>(pos);
  const auto q = static_cast<double>(total - pos);
  return 2.0 * p * q / static_cast<double>(total);
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const TreeOptions& options)
      : data_(data), options_(options) {}

  std::uint32_t build(std::vector<std::size_t>& idx, std::size_t depth) {
    const auto node_id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    std::size_t pos = 0;
    for (auto i : idx) pos += data_.rows[i].label == Label::Squiggly ? 1 : 0;
    nodes_[node_id].positive_fraction =
        static_cast<double>(pos) / static_cast<double>(idx.size());

    const bool pure = pos == 0 || pos == idx.size();
    const bool depth_capped = options_.max_depth && depth >= *options_.max_depth;
    if (pure || depth_capped || idx.size() < 2 * options_.min_leaf) return node_id;

    const SplitChoice best = find_split(idx);
    if (!best.found) return node_id;

    std::vector<std::size_t> left, right;
    for (auto i : idx) {
      (data_.rows[i].features[best.feature] < best.threshold ? left : right).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();

    nodes_[node_id].feature = best.feature;
    nodes_[node_id].threshold = best.threshold;
    const auto l = build(left, depth + 1);
    const auto r = build(right, depth + 1);
    nodes_[node_id].left = l;
    nodes_[node_id].right = r;
    return node_id;
  }

  std::vector<TreeNode> take() { return std::move(nodes_); }

 private:
  SplitChoice find_split(const std::vector<std::size_t>& idx) const {
    SplitChoice best;
    std::size_t total_pos = 0;
    for (auto i : idx) total_pos += data_.rows[i].label == Label::Squiggly ? 1 : 0;
    const std::size_t n = idx.size();

    std::vector<std::size_t> order(idx);
    for (std::uint32_t f = 0; f < data_.dims(); ++f) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return data_.rows[a].features[f] < data_.rows[b].features[f];
      });
      std::size_t left_pos = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_pos += data_.rows[order[i]].label == Label::Squiggly ? 1 : 0;
        const double lo = data_.rows[order[i]].features[f];
        const double hi = data_.rows[order[i + 1]].features[f];
        if (!(lo < hi)) continue;
        const std::size_t n_left = i + 1;
        if (n_left < options_.min_leaf || n - n_left < options_.min_leaf) continue;
        const double impurity =
            weighted_gini(left_pos, n_left) + weighted_gini(total_pos - left_pos, n - n_left);
        // strict comparison keeps the lowest feature, then lowest threshold
        if (!best.found || impurity < best.impurity) {
          double threshold = lo + (hi - lo) / 2.0;
          if (!(threshold > lo)) threshold = hi;
          best = {true, f, threshold, impurity};
        }
      }
    }
    return best;
  }

  const Dataset& data_;
  const TreeOptions& options_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

TrainedModel tree_train(const Dataset& data, const TreeOptions& options) {
  data.validate();
  TreeOptions opts = options;
  opts.min_leaf = std::max<std::size_t>(opts.min_leaf, 1);
  std::vector<std::size_t> idx(data.rows.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  TreeBuilder builder(data, opts);
  builder.build(idx, 0);
  return TrainedModel{data.feature_names, TreeModel{builder.take()}};
}

Prediction tree_predict(const TrainedModel& model, std::span<const double> x, std::string id) {
  const auto& tree = std::get<TreeModel>(model.params);
  if (x.size() != model.dims()) {
    throw Error(Errc::DimMismatch, "model expects " + std::to_string(model.dims()) +
                                       " features, got " + std::to_string(x.size()));
  }
  std::uint32_t node = 0;
  while (!tree.nodes[node].is_leaf()) {
    const auto& n = tree.nodes[node];
    node = x[n.feature] < n.threshold ? n.left : n.right;
  }
  Prediction p;
  p.id = std::move(id);
  p.score = tree.nodes[node].positive_fraction;
  p.label = p.score >= 0.5 ? Label::Squiggly : Label::Straight;
  return p;
}

}  // namespace tsurf
