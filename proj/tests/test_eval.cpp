#include <gtest/gtest.h>

#include <limits>

#include <json.hpp>

#include "homcount/errors.hpp"
#include "homcount/evaluation.hpp"
#include "homcount/forest.hpp"
#include "homcount/rng.hpp"

using namespace homcount;

namespace {

// Two Gaussian-ish blobs on feature 0 plus pure-noise columns.
struct Toy {
  EmbeddingMatrix x;
  std::vector<int> y;
};

Toy make_toy(std::size_t n, double separation, std::size_t noise_cols, std::uint64_t seed) {
  Rng rng(seed);
  Toy t;
  t.x.values = DenseMatrix(n, 1 + noise_cols);
  t.x.labels.push_back("signal");
  for (std::size_t j = 0; j < noise_cols; ++j) t.x.labels.push_back("noise" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    t.y.push_back(label);
    t.x.values(i, 0) = label * separation + rng.uniform01();
    for (std::size_t j = 0; j < noise_cols; ++j) t.x.values(i, 1 + j) = rng.uniform01();
  }
  return t;
}

}  // namespace

TEST(Metrics, Accuracy) {
  const std::vector<int> truth{0, 0, 1, 1, 1, 2};
  const std::vector<int> pred{0, 1, 1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(accuracy(pred, truth), 3.0 / 6.0);
  EXPECT_DOUBLE_EQ(weighted_accuracy(pred, truth, 3), (0.5 + 2.0 / 3.0 + 0.0) / 3.0);
  // Class 3 never appears in the truth and is left out of the mean.
  EXPECT_DOUBLE_EQ(weighted_accuracy(pred, truth, 4), (0.5 + 2.0 / 3.0 + 0.0) / 3.0);
  const std::vector<int> short_pred{0};
  EXPECT_THROW(accuracy(short_pred, truth), std::invalid_argument);
}

TEST(Metrics, MajorityClassScoresChance) {
  std::vector<int> truth(100, 0), pred(100, 0);
  for (int i = 0; i < 10; ++i) truth[i] = 1;
  EXPECT_DOUBLE_EQ(accuracy(pred, truth), 0.9);
  EXPECT_DOUBLE_EQ(weighted_accuracy(pred, truth, 2), 0.5);
}

TEST(Folds, StratifiedAndComplete) {
  std::vector<int> labels;
  for (int i = 0; i < 53; ++i) labels.push_back(i % 3 == 0 ? 1 : (i % 7 == 0 ? 2 : 0));
  const auto folds = stratified_folds(labels, 5, 9);
  ASSERT_EQ(folds.size(), 5u);
  std::vector<int> seen(labels.size(), 0);
  std::vector<std::vector<int>> per_class(3, std::vector<int>(5, 0));
  for (std::size_t f = 0; f < 5; ++f)
    for (auto i : folds[f]) {
      ++seen[i];
      ++per_class[labels[i]][f];
    }
  for (int s : seen) EXPECT_EQ(s, 1);
  for (const auto& counts : per_class) {
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    EXPECT_LE(*hi - *lo, 1);
  }
  std::size_t max_size = 0, min_size = labels.size();
  for (const auto& f : folds) {
    max_size = std::max(max_size, f.size());
    min_size = std::min(min_size, f.size());
  }
  EXPECT_LE(max_size - min_size, 1u);
  EXPECT_EQ(stratified_folds(labels, 5, 9), folds);
  const std::vector<int> tiny{0, 0, 1};
  EXPECT_THROW(stratified_folds(tiny, 2, 0), std::invalid_argument);
  EXPECT_THROW(stratified_folds(labels, 1, 0), std::invalid_argument);
}

TEST(Forest, SeparableDataIsPerfect) {
  const auto t = make_toy(200, 5.0, 0, 1);
  ForestConfig cfg;
  cfg.num_trees = 20;
  const auto report = stratified_cv(t.x, t.y, 5, cfg);
  EXPECT_DOUBLE_EQ(report.accuracy_mean, 1.0);
  EXPECT_DOUBLE_EQ(report.weighted_accuracy_mean, 1.0);
  EXPECT_DOUBLE_EQ(report.accuracy_std, 0.0);
}

TEST(Forest, ImportanceFindsSignal) {
  const auto t = make_toy(300, 0.6, 4, 2);
  ForestConfig cfg;
  cfg.num_trees = 50;
  cfg.seed = 3;
  const auto forest = train_forest(t.x.values, t.y, cfg);
  const auto imp = forest.importances();
  double sum = 0;
  for (double v : imp) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(std::max_element(imp.begin(), imp.end()) - imp.begin(), 0);
  const auto named = feature_importance(forest, t.x.labels);
  EXPECT_EQ(named.size(), 5u);
  EXPECT_GT(named.at("signal"), named.at("noise0"));
  EXPECT_THROW(feature_importance(Forest{}, t.x.labels), std::logic_error);
}

TEST(Forest, DeterministicAcrossThreadCounts) {
  const auto t = make_toy(150, 0.5, 3, 4);
  ForestConfig a;
  a.num_trees = 16;
  a.seed = 11;
  ForestConfig b = a;
  b.threads = 4;
  const auto fa = train_forest(t.x.values, t.y, a);
  const auto fb = train_forest(t.x.values, t.y, b);
  EXPECT_EQ(fa.predict(t.x.values), fb.predict(t.x.values));
  EXPECT_EQ(fa.importances(), fb.importances());
  EXPECT_EQ(fa.bootstrap_sample(3), fb.bootstrap_sample(3));
}

TEST(Forest, TreeDepthAndLeafLimits) {
  const auto t = make_toy(120, 0.3, 2, 5);
  ForestConfig cfg;
  cfg.num_trees = 5;
  cfg.max_depth = 2;
  const auto f = train_forest(t.x.values, t.y, cfg);
  for (const auto& tree : f.trees()) EXPECT_LE(tree.depth(), 2u);
  EXPECT_GT(f.mean_tree_oob_accuracy(t.x.values, t.y), 0.4);
  EXPECT_EQ(cfg.resolved_features_per_split(9), 3u);
  EXPECT_EQ(cfg.resolved_features_per_split(2), 1u);
}

TEST(Forest, BadInputs) {
  ForestConfig cfg;
  DenseMatrix one(1, 2);
  const std::vector<int> y1{0};
  EXPECT_THROW(train_forest(one, y1, cfg), std::invalid_argument);
  DenseMatrix two(2, 1);
  two(0, 0) = std::numeric_limits<double>::quiet_NaN();
  const std::vector<int> y2{0, 1};
  EXPECT_THROW(train_forest(two, y2, cfg), DataError);
  const std::vector<int> neg{0, -1};
  DenseMatrix ok(2, 1);
  EXPECT_THROW(train_forest(ok, neg, cfg), std::invalid_argument);
  cfg.num_trees = 0;
  EXPECT_ANY_THROW(train_forest(ok, y2, cfg));
}

TEST(Report, JsonShape) {
  const auto t = make_toy(60, 2.0, 1, 6);
  ForestConfig cfg;
  cfg.num_trees = 5;
  const auto report = stratified_cv(t.x, t.y, 3, cfg, 2);
  EXPECT_EQ(report.per_fold.size(), 6u);
  const auto j = nlohmann::json::parse(report.to_json());
  for (const char* key : {"accuracy_mean", "accuracy_std", "weighted_accuracy_mean", "weighted_accuracy_std", "folds",
                          "repetitions", "per_fold", "importances"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["folds"], 3);
  EXPECT_EQ(j["repetitions"], 2);
  EXPECT_TRUE(j["importances"].contains("signal"));
  EXPECT_EQ(stratified_cv(t.x, t.y, 3, cfg, 2).to_json(), report.to_json());
}
