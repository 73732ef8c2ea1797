#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homcount/matrix.hpp"

namespace homcount {

/// Random forest settings; defaults follow the usual library defaults
/// (100 trees, Gini, unlimited depth, sqrt(D) features per split, bootstrap).
struct ForestConfig {
  std::size_t num_trees = 100;
  /// 0 means unlimited.
  std::size_t max_depth = 0;
  /// Defaults to floor(sqrt(D)).
  std::optional<std::size_t> features_per_split;
  std::size_t min_samples_leaf = 1;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  /// Worker threads for tree training; 0 means available parallelism.
  std::size_t threads = 1;

  std::size_t resolved_features_per_split(std::size_t num_features) const;
  void validate(std::size_t num_features) const;
};

/// CART classification tree grown on Gini impurity.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  ///< -1 for leaves
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    int label = 0;  ///< majority class at this node
  };

  int predict(std::span<const double> row) const;
  std::size_t depth() const;
  const std::vector<Node>& nodes() const { return nodes_; }
  /// Total weighted impurity decrease per feature (unnormalised).
  const std::vector<double>& impurity_decrease() const { return impurity_decrease_; }

 private:
  friend class TreeBuilder;
  std::vector<Node> nodes_;
  std::vector<double> impurity_decrease_;
};

class Forest {
 public:
  bool trained() const { return !trees_.empty(); }
  std::size_t num_features() const { return num_features_; }
  std::size_t num_classes() const { return num_classes_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }
  const ForestConfig& config() const { return config_; }

  /// Majority vote over trees; ties go to the smallest class id.
  int predict(std::span<const double> row) const;
  std::vector<int> predict(const DenseMatrix& x) const;

  /// Mean impurity decrease per feature, normalised to sum to 1.
  std::vector<double> importances() const;

  /// Rows drawn (with multiplicity) for tree t's bootstrap sample.
  std::vector<std::size_t> bootstrap_sample(std::size_t tree) const;
  /// Mean over trees of each tree's accuracy on its out-of-bag rows.
  double mean_tree_oob_accuracy(const DenseMatrix& x, std::span<const int> y) const;

 private:
  friend Forest train_forest(const DenseMatrix&, std::span<const int>, const ForestConfig&);
  std::vector<DecisionTree> trees_;
  ForestConfig config_;
  std::size_t num_features_ = 0;
  std::size_t num_classes_ = 0;
  std::size_t num_samples_ = 0;
};

/// Trains a forest. Throws std::invalid_argument for fewer than 2 samples or
/// mismatched sizes, DataError for non-finite feature values.
Forest train_forest(const DenseMatrix& x, std::span<const int> y, const ForestConfig& config);

/// Forest importances keyed by column label. Throws std::logic_error for an
/// untrained forest.
std::map<std::string, double> feature_importance(const Forest& forest,
                                                 std::span<const std::string> labels);

}  // namespace homcount
