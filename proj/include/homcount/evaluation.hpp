#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "homcount/embedding.hpp"
#include "homcount/forest.hpp"

namespace homcount {

struct FoldResult {
  std::size_t repetition = 0;
  std::size_t fold = 0;
  double accuracy = 0.0;
  double weighted_accuracy = 0.0;
};

struct EvalReport {
  std::size_t folds = 0;
  std::size_t repetitions = 0;
  std::vector<FoldResult> per_fold;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;
  double weighted_accuracy_mean = 0.0;
  double weighted_accuracy_std = 0.0;
  /// Column label -> importance, in column order; sums to 1.
  std::vector<std::pair<std::string, double>> importances;

  /// {accuracy_mean, accuracy_std, weighted_accuracy_mean,
  ///  weighted_accuracy_std, folds, repetitions, per_fold, importances}
  std::string to_json() const;
};

double accuracy(std::span<const int> predicted, std::span<const int> truth);

/// Mean per-class recall over the classes present in `truth`.
double weighted_accuracy(std::span<const int> predicted, std::span<const int> truth,
                         std::size_t num_classes);

/// Assigns every index to one of k folds so that each class is spread
/// evenly (per-class fold counts differ by at most one). Throws
/// std::invalid_argument if k < 2 or some class has fewer than k members.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k,
                                                       std::uint64_t seed);

/// Repeated stratified k-fold cross-validation of a random forest.
EvalReport stratified_cv(const EmbeddingMatrix& x, std::span<const int> labels, std::size_t k,
                         const ForestConfig& config, std::size_t repetitions = 1);

}  // namespace homcount
