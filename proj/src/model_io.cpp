#include <bit>
#include <cmath>
#include <cstring>

#include "tsurf/error.hpp"
#include "tsurf/ml.hpp"

namespace tsurf {
namespace {

constexpr char kMagic[5] = {'T', 'S', 'U', 'R', 'F'};
enum Tag : std::uint8_t { kKnn = 1, kTree = 2, kSvm = 3 };

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void scaler(const MinMaxScaler& s) {
    for (std::size_t j = 0; j < s.dims(); ++j) {
      f64(s.mins()[j]);
      f64(s.maxs()[j]);
    }
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t len = u32();
    need(len);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
    pos_ += len;
    return s;
  }
  MinMaxScaler scaler(std::size_t dims) {
    std::vector<double> mins(dims), maxs(dims);
    for (std::size_t j = 0; j < dims; ++j) {
      mins[j] = f64();
      maxs[j] = f64();
    }
    return MinMaxScaler(std::move(mins), std::move(maxs));
  }
  /// Guards element counts against the bytes actually left.
  std::size_t count(std::size_t min_bytes_each) {
    const std::uint32_t n = u32();
    if (min_bytes_each > 0 && n > remaining() / min_bytes_each) corrupt("count exceeds data");
    return n;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  bool done() const { return pos_ == bytes_.size(); }

  [[noreturn]] static void corrupt(const std::string& why) {
    throw Error(Errc::CorruptModel, why);
  }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) corrupt("truncated model file");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> save_model(const TrainedModel& model) {
  Writer w;
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u8(kModelFormatVersion);
  const std::size_t d = model.dims();

  if (const auto* knn = std::get_if<KnnModel>(&model.params)) {
    w.u8(kKnn);
    w.u32(static_cast<std::uint32_t>(d));
    for (const auto& name : model.feature_names) w.str(name);
    w.u32(static_cast<std::uint32_t>(knn->k));
    w.scaler(knn->scaler);
    w.u32(static_cast<std::uint32_t>(knn->points.size()));
    for (std::size_t i = 0; i < knn->points.size(); ++i) {
      for (double v : knn->points[i]) w.f64(v);
      w.u8(static_cast<std::uint8_t>(knn->labels[i]));
    }
  } else if (const auto* tree = std::get_if<TreeModel>(&model.params)) {
    w.u8(kTree);
    w.u32(static_cast<std::uint32_t>(d));
    for (const auto& name : model.feature_names) w.str(name);
    w.u32(static_cast<std::uint32_t>(tree->nodes.size()));
    for (const auto& node : tree->nodes) {
      if (node.is_leaf()) {
        w.u8(1);
        w.f64(node.positive_fraction);
      } else {
        w.u8(0);
        w.u32(node.feature);
        w.f64(node.threshold);
        w.u32(node.left);
        w.u32(node.right);
        w.f64(node.positive_fraction);
      }
    }
  } else {
    const auto& svm = std::get<SvmModel>(model.params);
    w.u8(kSvm);
    w.u32(static_cast<std::uint32_t>(d));
    for (const auto& name : model.feature_names) w.str(name);
    w.scaler(svm.scaler);
    for (double v : svm.weights) w.f64(v);
    w.f64(svm.bias);
  }
  return w.take();
}

TrainedModel load_model(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  for (char c : kMagic) {
    if (r.remaining() == 0 || r.u8() != static_cast<std::uint8_t>(c)) {
      Reader::corrupt("bad magic (not a TSURF model)");
    }
  }
  const std::uint8_t version = r.u8();
  if (version != kModelFormatVersion) {
    Reader::corrupt("unsupported model format version " + std::to_string(version) +
                    " (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  const std::uint8_t tag = r.u8();
  TrainedModel model;
  const std::size_t d = r.count(4);
  for (std::size_t j = 0; j < d; ++j) model.feature_names.push_back(r.str());

  switch (tag) {
    case kKnn: {
      KnnModel m;
      m.k = static_cast<int>(r.u32());
      m.scaler = r.scaler(d);
      const std::size_t n = r.count(8 * d + 1);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> p(d);
        for (auto& v : p) v = r.f64();
        const std::uint8_t label = r.u8();
        if (label > 1) Reader::corrupt("bad label byte");
        m.points.push_back(std::move(p));
        m.labels.push_back(static_cast<Label>(label));
      }
      if (m.k < 1 || m.k % 2 == 0 || static_cast<std::size_t>(m.k) > n) {
        Reader::corrupt("invalid k");
      }
      model.params = std::move(m);
      break;
    }
    case kTree: {
      TreeModel t;
      const std::size_t n = r.count(9);
      if (n == 0) Reader::corrupt("tree has no nodes");
      for (std::size_t i = 0; i < n; ++i) {
        TreeNode node;
        const std::uint8_t leaf = r.u8();
        if (leaf > 1) Reader::corrupt("bad node flag");
        if (leaf == 0) {
          node.feature = r.u32();
          node.threshold = r.f64();
          node.left = r.u32();
          node.right = r.u32();
          // children come after their parent in pre-order, which also rules out cycles
          if (node.feature >= d || node.left <= i || node.right <= i || node.left >= n ||
              node.right >= n) {
            Reader::corrupt("bad tree node " + std::to_string(i));
          }
        }
        node.positive_fraction = r.f64();
        if (!(node.positive_fraction >= 0.0 && node.positive_fraction <= 1.0)) {
          Reader::corrupt("leaf fraction out of range");
        }
        t.nodes.push_back(node);
      }
      model.params = std::move(t);
      break;
    }
    case kSvm: {
      SvmModel m;
      m.scaler = r.scaler(d);
      m.weights.resize(d);
      for (auto& v : m.weights) v = r.f64();
      m.bias = r.f64();
      model.params = std::move(m);
      break;
    }
    default:
      Reader::corrupt("unknown model variant tag " + std::to_string(tag));
  }
  if (!r.done()) Reader::corrupt("trailing bytes after model");
  return model;
}

}  // namespace tsurf
