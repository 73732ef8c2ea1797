#include "homcount/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "homcount/rng.hpp"

namespace homcount {

namespace {

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

DenseMatrix take_rows(const DenseMatrix& x, const std::vector<std::size_t>& rows) {
  DenseMatrix out(rows.size(), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = x.row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("prediction and truth lengths differ");
  if (truth.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i];
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double weighted_accuracy(std::span<const int> predicted, std::span<const int> truth, std::size_t num_classes) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("prediction and truth lengths differ");
  std::vector<std::size_t> support(num_classes, 0), hits(num_classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto c = static_cast<std::size_t>(truth[i]);
    if (truth[i] < 0 || c >= num_classes) throw std::invalid_argument("truth label outside [0, c)");
    ++support[c];
    hits[c] += predicted[i] == truth[i];
  }
  double total = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (support[c] == 0) continue;
    total += static_cast<double>(hits[c]) / static_cast<double>(support[c]);
    ++present;
  }
  return present ? total / static_cast<double>(present) : 0.0;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k,
                                                       std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  for (const auto& [c, members] : by_class)
    if (members.size() < k)
      throw std::invalid_argument("class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                                  " members, fewer than the " + std::to_string(k) + " folds");
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (auto& [c, members] : by_class) {
    rng.shuffle(std::span(members));
    for (std::size_t i : members) {
      folds[next].push_back(i);
      next = (next + 1) % k;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

EvalReport stratified_cv(const EmbeddingMatrix& x, std::span<const int> labels, std::size_t k,
                         const ForestConfig& config, std::size_t repetitions) {
  if (x.rows() != labels.size()) throw std::invalid_argument("embedding rows and labels differ in length");
  if (repetitions < 1) throw std::invalid_argument("need at least one repetition");
  const std::size_t num_classes =
      labels.empty() ? 0 : static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;

  EvalReport report;
  report.folds = k;
  report.repetitions = repetitions;
  std::vector<double> importance_sum(x.cols(), 0.0);
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    const auto folds = stratified_folds(labels, k, splitmix64(config.seed ^ (0xf01dULL + rep)));
    for (std::size_t f = 0; f < k; ++f) {
      std::vector<bool> held_out(labels.size(), false);
      for (std::size_t i : folds[f]) held_out[i] = true;
      std::vector<std::size_t> train;
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (!held_out[i]) train.push_back(i);
      std::vector<int> y_train, y_test;
      for (std::size_t i : train) y_train.push_back(labels[i]);
      for (std::size_t i : folds[f]) y_test.push_back(labels[i]);

      ForestConfig fold_config = config;
      fold_config.seed = splitmix64(config.seed + 1000003ULL * (rep + 1) + f);
      const Forest forest = train_forest(take_rows(x.values, train), y_train, fold_config);
      const auto predicted = forest.predict(take_rows(x.values, folds[f]));
      report.per_fold.push_back({rep, f, accuracy(predicted, y_test),
                                 weighted_accuracy(predicted, y_test, num_classes)});
      const auto imp = forest.importances();
      for (std::size_t c = 0; c < imp.size(); ++c) importance_sum[c] += imp[c];
    }
  }

  std::vector<double> acc, wacc;
  for (const auto& r : report.per_fold) {
    acc.push_back(r.accuracy);
    wacc.push_back(r.weighted_accuracy);
  }
  report.accuracy_mean = mean(acc);
  report.accuracy_std = population_std(acc);
  report.weighted_accuracy_mean = mean(wacc);
  report.weighted_accuracy_std = population_std(wacc);
  const double total = std::accumulate(importance_sum.begin(), importance_sum.end(), 0.0);
  for (std::size_t c = 0; c < x.cols(); ++c)
    report.importances.emplace_back(x.labels[c], total > 0.0 ? importance_sum[c] / total : 0.0);
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["accuracy_mean"] = accuracy_mean;
  j["accuracy_std"] = accuracy_std;
  j["weighted_accuracy_mean"] = weighted_accuracy_mean;
  j["weighted_accuracy_std"] = weighted_accuracy_std;
  j["folds"] = folds;
  j["repetitions"] = repetitions;
  j["per_fold"] = nlohmann::ordered_json::array();
  for (const auto& r : per_fold)
    j["per_fold"].push_back({{"repetition", r.repetition},
                             {"fold", r.fold},
                             {"accuracy", r.accuracy},
                             {"weighted_accuracy", r.weighted_accuracy}});
  j["importances"] = nlohmann::ordered_json::object();
  for (const auto& [label, score] : importances) j["importances"][label] = score;
  return j.dump(2) + "\n";
}

}  // namespace homcount
