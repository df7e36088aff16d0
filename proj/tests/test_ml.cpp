#include <doctest.h>

#include <cstring>
#include <random>

#include "tsurf/error.hpp"
#include "tsurf/ml.hpp"

using namespace tsurf;

namespace {

template <class F>
Errc code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::SpecInvalid;
}

Dataset make_data(std::size_t dims) {
  Dataset d;
  for (std::size_t j = 0; j < dims; ++j) d.feature_names.push_back("f" + std::to_string(j));
  return d;
}

void add(Dataset& d, std::vector<double> x, Label label) {
  d.rows.push_back({std::move(x), label, "r" + std::to_string(d.rows.size())});
}

/// Random rows with distinct feature vectors; label from a noisy rule.
Dataset noisy_rows(std::mt19937_64& rng, std::size_t n, std::size_t dims) {
  Dataset d = make_data(dims);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::bernoulli_distribution flip(0.2);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x;
    for (std::size_t j = 0; j < dims; ++j) x.push_back(u(rng));
    const bool pos = (x[0] + (dims > 1 ? x[1] : 0.0) > 0.0) != flip(rng);
    add(d, x, pos ? Label::Squiggly : Label::Straight);
  }
  if (d.count(Label::Squiggly) == 0) d.rows[0].label = Label::Squiggly;
  if (d.count(Label::Straight) == 0) d.rows[0].label = Label::Straight;
  return d;
}

Dataset clusters(std::mt19937_64& rng, std::size_t per_class, double gap) {
  Dataset d = make_data(2);
  std::normal_distribution<double> spread(0.0, 0.5);
  for (std::size_t i = 0; i < per_class; ++i) {
    add(d, {spread(rng), spread(rng)}, Label::Straight);
    add(d, {gap + spread(rng), gap + spread(rng)}, Label::Squiggly);
  }
  return d;
}

double train_accuracy(const TrainedModel& m, const Dataset& d) {
  std::size_t hits = 0;
  for (const auto& row : d.rows) hits += predict(m, row.features).label == row.label;
  return static_cast<double>(hits) / static_cast<double>(d.rows.size());
}

Label flipped(Label l) { return l == Label::Squiggly ? Label::Straight : Label::Squiggly; }

}  // namespace

TEST_CASE("dataset validation and scaling") {
  Dataset d = make_data(2);
  CHECK(code_of([&] { d.validate(); }) == Errc::EmptyDataset);
  add(d, {1, 2}, Label::Straight);
  add(d, {1, 2, 3}, Label::Squiggly);
  CHECK(code_of([&] { d.validate(); }) == Errc::DimMismatch);

  Dataset s = make_data(2);
  add(s, {0, 5}, Label::Straight);
  add(s, {4, 5}, Label::Squiggly);
  add(s, {2, 5}, Label::Squiggly);
  const auto scaler = MinMaxScaler::fit(s);
  CHECK(scaler.transform(std::vector<double>{2, 5}) == std::vector<double>{0.5, 0.0});
  CHECK(scaler.transform(std::vector<double>{8, 9}) == std::vector<double>{2.0, 0.0});
}

TEST_CASE("knn") {
  SUBCASE("bad k") {
    Dataset d = make_data(1);
    add(d, {0}, Label::Straight);
    add(d, {1}, Label::Squiggly);
    CHECK(code_of([&] { knn_train(d, 3); }) == Errc::BadK);
    add(d, {2}, Label::Squiggly);
    CHECK(code_of([&] { knn_train(d, 2); }) == Errc::BadK);
    CHECK(code_of([&] { knn_train(d, 0); }) == Errc::BadK);
    CHECK(code_of([&] { knn_train(d, -1); }) == Errc::BadK);
    CHECK_NOTHROW(knn_train(d, 3));
  }
  SUBCASE("k = 1 memorizes") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
      const auto d = noisy_rows(rng, 60, 3);
      const auto m = knn_train(d, 1);
      for (const auto& row : d.rows) {
        const auto p = knn_predict(m, row.features);
        CHECK(p.label == row.label);
        CHECK(p.score == (row.label == Label::Squiggly ? 1.0 : 0.0));
      }
    }
  }
  SUBCASE("two of three neighbours") {
    Dataset d = make_data(1);
    add(d, {0}, Label::Squiggly);
    add(d, {1}, Label::Squiggly);
    add(d, {2}, Label::Straight);
    add(d, {10}, Label::Straight);
    const auto p = knn_predict(knn_train(d, 3), std::vector<double>{0.0});
    CHECK(p.score == doctest::Approx(2.0 / 3.0));
    CHECK(p.label == Label::Squiggly);
  }
  SUBCASE("distance ties go to lower rows") {
    Dataset d = make_data(2);
    add(d, {1, 0}, Label::Squiggly);
    add(d, {0, 1}, Label::Squiggly);
    add(d, {-1, 0}, Label::Squiggly);
    add(d, {0, -1}, Label::Straight);
    const auto p = knn_predict(knn_train(d, 3), std::vector<double>{0.0, 0.0});
    CHECK(p.score == 1.0);
  }
}

TEST_CASE("tree") {
  SUBCASE("single class is one leaf") {
    Dataset d = make_data(1);
    for (int i = 0; i < 5; ++i) add(d, {double(i)}, Label::Squiggly);
    const auto m = tree_train(d);
    const auto& t = std::get<TreeModel>(m.params);
    REQUIRE(t.nodes.size() == 1);
    CHECK(t.nodes[0].positive_fraction == 1.0);
    CHECK(tree_predict(m, std::vector<double>{-100.0}).score == 1.0);
  }
  SUBCASE("1-D split at the midpoint") {
    Dataset d = make_data(1);
    for (int i = 1; i <= 8; ++i) add(d, {double(i)}, i < 5 ? Label::Straight : Label::Squiggly);
    const auto m = tree_train(d);
    const auto& t = std::get<TreeModel>(m.params);
    REQUIRE(t.nodes.size() == 3);
    CHECK(t.nodes[0].feature == 0);
    CHECK(t.nodes[0].threshold == 4.5);
    CHECK(train_accuracy(m, d) == 1.0);
    CHECK(tree_predict(m, std::vector<double>{4.5}).label == Label::Squiggly);
    CHECK(tree_predict(m, std::vector<double>{std::nextafter(4.5, 0.0)}).label == Label::Straight);
  }
  SUBCASE("unsplittable rows") {
    Dataset d = make_data(2);
    add(d, {1, 1}, Label::Straight);
    add(d, {1, 1}, Label::Squiggly);
    const auto m = tree_train(d);
    REQUIRE(std::get<TreeModel>(m.params).nodes.size() == 1);
    const auto p = tree_predict(m, std::vector<double>{0.0, 0.0});
    CHECK(p.score == 0.5);
    CHECK(p.label == Label::Squiggly);
  }
  SUBCASE("unlimited depth fits collision-free data") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
      const auto d = noisy_rows(rng, 80, 2 + trial % 3);
      CHECK(train_accuracy(tree_train(d), d) == 1.0);
    }
  }
  SUBCASE("depth and leaf limits") {
    std::mt19937_64 rng(3);
    const auto d = noisy_rows(rng, 100, 2);
    const auto shallow = tree_train(d, {1, 1});
    CHECK(std::get<TreeModel>(shallow.params).nodes.size() <= 3);
    const auto stump = tree_train(d, {0, 1});
    CHECK(std::get<TreeModel>(stump.params).nodes.size() == 1);
    const auto coarse = tree_train(d, {std::nullopt, 20});
    CHECK(std::get<TreeModel>(coarse.params).nodes.size() <= 2 * (100 / 20) - 1);
  }
}

TEST_CASE("svm") {
  std::mt19937_64 rng(4);
  const auto d = clusters(rng, 50, 10.0);
  SUBCASE("separable clusters") {
    const auto m = svm_train(d, {1.0, 200, 7});
    CHECK(train_accuracy(m, d) == 1.0);
    CHECK(svm_predict(m, std::vector<double>{10.0, 10.0}).score > 1.0);
    CHECK(svm_predict(m, std::vector<double>{0.0, 0.0}).score < -1.0);
  }
  SUBCASE("same seed, same weights") {
    const auto a = std::get<SvmModel>(svm_train(d, {1.0, 50, 9}).params);
    const auto b = std::get<SvmModel>(svm_train(d, {1.0, 50, 9}).params);
    REQUIRE(a.weights.size() == b.weights.size());
    CHECK(std::memcmp(a.weights.data(), b.weights.data(), a.weights.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(&a.bias, &b.bias, sizeof(double)) == 0);
  }
  SUBCASE("single class") {
    Dataset one = make_data(1);
    add(one, {1}, Label::Straight);
    add(one, {2}, Label::Straight);
    CHECK(code_of([&] { svm_train(one, {}); }) == Errc::SingleClass);
  }
  SUBCASE("hyperplane and zero weights") {
    TrainedModel m{{"a", "b"}, SvmModel{MinMaxScaler({0, 0}, {1, 1}), {1.0, -1.0}, 0.0}};
    const auto on_plane = svm_predict(m, std::vector<double>{0.3, 0.3});
    CHECK(on_plane.score == 0.0);
    CHECK(on_plane.label == Label::Squiggly);
    TrainedModel zero{{"a", "b"}, SvmModel{MinMaxScaler({0, 0}, {1, 1}), {0.0, 0.0}, 0.0}};
    CHECK(svm_predict(zero, std::vector<double>{5.0, -2.0}).score == 0.0);
  }
  SUBCASE("200 epochs come within 1% of the long-run objective") {
    std::mt19937_64 noisy_rng(5);
    const auto hard = noisy_rows(noisy_rng, 120, 2);
    for (double c : {0.1, 1.0, 10.0}) {
      const double short_run = svm_objective(svm_train(hard, {c, 200, 3}), hard, c);
      const double long_run = svm_objective(svm_train(hard, {c, 4000, 3}), hard, c);
      CHECK(short_run <= long_run * 1.01);
    }
  }
}

TEST_CASE("scores stay in range") {
  std::mt19937_64 rng(6);
  const auto d = noisy_rows(rng, 50, 3);
  const auto knn = knn_train(d, 5);
  const auto tree = tree_train(d, {3, 2});
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> x{u(rng), u(rng), u(rng)};
    for (const auto* m : {&knn, &tree}) {
      const auto p = predict(*m, x);
      CHECK(p.score >= 0.0);
      CHECK(p.score <= 1.0);
      CHECK((p.label == Label::Squiggly) == (p.score >= 0.5));
    }
  }
  CHECK(code_of([&] { predict(knn, std::vector<double>{1.0}); }) == Errc::DimMismatch);
}

TEST_CASE("positive rescaling of a column leaves labels unchanged") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> factor(0.01, 100.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = noisy_rows(rng, 60, 3);
    const std::vector<double> c{factor(rng), factor(rng), factor(rng)};
    Dataset scaled = d;
    for (auto& row : scaled.rows) {
      for (std::size_t j = 0; j < 3; ++j) row.features[j] *= c[j];
    }
    const auto pairs = std::vector<std::pair<TrainedModel, TrainedModel>>{
        {knn_train(d, 3), knn_train(scaled, 3)},
        {tree_train(d), tree_train(scaled)},
        {svm_train(d, {1.0, 200, 1}), svm_train(scaled, {1.0, 200, 1})}};
    std::uniform_real_distribution<double> u(-3, 3);
    for (int q = 0; q < 100; ++q) {
      std::vector<double> x{u(rng), u(rng), u(rng)}, xs = x;
      for (std::size_t j = 0; j < 3; ++j) xs[j] *= c[j];
      for (const auto& [plain, rescaled] : pairs) {
        const auto a = predict(plain, x);
        const auto b = predict(rescaled, xs);
        // svm margins agree only to rounding, so skip queries on the hyperplane
        if (plain.kind() == "svm" && std::abs(a.score) < 1e-9) continue;
        CHECK(a.label == b.label);
      }
    }
  }
}

TEST_CASE("swapping class labels mirrors predictions") {
  std::mt19937_64 rng(10);
  const auto d = noisy_rows(rng, 70, 2);
  Dataset swapped = d;
  for (auto& row : swapped.rows) row.label = flipped(row.label);
  const auto knn_a = knn_train(d, 3), knn_b = knn_train(swapped, 3);
  const auto tree_a = tree_train(d), tree_b = tree_train(swapped);
  const auto svm_a = svm_train(d, {1.0, 100, 4}), svm_b = svm_train(swapped, {1.0, 100, 4});
  std::uniform_real_distribution<double> u(-3, 3);
  for (int q = 0; q < 200; ++q) {
    const std::vector<double> x{u(rng), u(rng)};
    CHECK(predict(knn_b, x).score == doctest::Approx(1.0 - predict(knn_a, x).score));
    CHECK(predict(knn_b, x).label == flipped(predict(knn_a, x).label));
    const auto ta = predict(tree_a, x), tb = predict(tree_b, x);
    CHECK(tb.score == 1.0 - ta.score);
    if (ta.score != 0.5) CHECK(tb.label == flipped(ta.label));
    const auto sa = predict(svm_a, x), sb = predict(svm_b, x);
    CHECK(sb.score == -sa.score);
    if (sa.score != 0.0) CHECK(sb.label == flipped(sa.label));
  }
}

TEST_CASE("model files") {
  std::mt19937_64 rng(12);
  const auto d = noisy_rows(rng, 40, 3);
  const std::vector<TrainedModel> models{knn_train(d, 3), tree_train(d), svm_train(d, {0.5, 60, 2})};
  std::uniform_real_distribution<double> u(-4, 4);
  for (const auto& m : models) {
    CAPTURE(m.kind());
    const auto bytes = save_model(m);
    REQUIRE(bytes.size() > 6);
    CHECK(std::string(bytes.begin(), bytes.begin() + 5) == "TSURF");
    const auto back = load_model(bytes);
    CHECK(back.feature_names == m.feature_names);
    CHECK(back.kind() == m.kind());
    CHECK(save_model(back) == bytes);
    for (int q = 0; q < 50; ++q) {
      const std::vector<double> x{u(rng), u(rng), u(rng)};
      const double a = predict(m, x).score, b = predict(back, x).score;
      CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
    for (std::size_t len = 0; len < bytes.size(); ++len) {
      const std::span<const std::uint8_t> prefix(bytes.data(), len);
      CHECK(code_of([&] { load_model(prefix); }) == Errc::CorruptModel);
    }
    auto extra = bytes;
    extra.push_back(0);
    CHECK(code_of([&] { load_model(extra); }) == Errc::CorruptModel);

    auto bumped = bytes;
    bumped[5] = kModelFormatVersion + 1;
    try {
      load_model(bumped);
      FAIL("expected CorruptModel");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::CorruptModel);
      CHECK(std::string(e.what()).find("version") != std::string::npos);
    }
    auto magic = bytes;
    magic[0] = 'X';
    CHECK(code_of([&] { load_model(magic); }) == Errc::CorruptModel);
  }
}
