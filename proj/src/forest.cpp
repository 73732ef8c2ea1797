#include "homcount/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "homcount/errors.hpp"
#include "homcount/parallel.hpp"
#include "homcount/rng.hpp"

namespace homcount {

namespace {

int argmax_smallest(const std::vector<std::size_t>& counts) {
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

std::vector<std::size_t> draw_bootstrap(Rng& rng, std::size_t n, bool bootstrap) {
  std::vector<std::size_t> rows(n);
  if (bootstrap) {
    for (auto& r : rows) r = rng.below(n);
  } else {
    std::iota(rows.begin(), rows.end(), 0);
  }
  return rows;
}

}  // namespace

class TreeBuilder {
 public:
  TreeBuilder(const DenseMatrix& x, std::span<const int> y, std::size_t classes,
              const ForestConfig& config, std::size_t mtry, Rng& rng)
      : x_(x), y_(y), classes_(classes), config_(config), mtry_(mtry), rng_(rng),
        feature_order_(x.cols()) {
    std::iota(feature_order_.begin(), feature_order_.end(), 0);
  }

  DecisionTree build(std::vector<std::size_t> samples) {
    samples_ = std::move(samples);
    DecisionTree tree;
    tree.impurity_decrease_.assign(x_.cols(), 0.0);
    tree.nodes_.emplace_back();
    struct Frame {
      std::int32_t node;
      std::size_t lo, hi, depth;
    };
    std::vector<Frame> stack{{0, 0, samples_.size(), 0}};
    std::vector<std::size_t> counts(classes_);
    while (!stack.empty()) {
      const Frame frame = stack.back();
      stack.pop_back();
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t i = frame.lo; i < frame.hi; ++i) ++counts[static_cast<std::size_t>(y_[samples_[i]])];
      const std::size_t n = frame.hi - frame.lo;
      double sum_sq = 0.0;
      for (std::size_t c : counts) sum_sq += static_cast<double>(c) * static_cast<double>(c);
      const double node_impurity = static_cast<double>(n) - sum_sq / static_cast<double>(n);  // n * gini
      tree.nodes_[static_cast<std::size_t>(frame.node)].label = argmax_smallest(counts);

      const bool depth_limited = config_.max_depth != 0 && frame.depth >= config_.max_depth;
      if (node_impurity <= 1e-12 || n < 2 * config_.min_samples_leaf || depth_limited) continue;
      const auto split = find_split(frame.lo, frame.hi, counts);
      if (!split) continue;

      auto mid_it = std::partition(samples_.begin() + static_cast<std::ptrdiff_t>(frame.lo),
                                   samples_.begin() + static_cast<std::ptrdiff_t>(frame.hi),
                                   [&](std::size_t s) { return x_(s, split->feature) <= split->threshold; });
      const auto mid = static_cast<std::size_t>(mid_it - samples_.begin());
      tree.impurity_decrease_[split->feature] += node_impurity - split->weighted_impurity;

      const auto left = static_cast<std::int32_t>(tree.nodes_.size());
      tree.nodes_.emplace_back();
      tree.nodes_.emplace_back();
      auto& node = tree.nodes_[static_cast<std::size_t>(frame.node)];
      node.feature = static_cast<int>(split->feature);
      node.threshold = split->threshold;
      node.left = left;
      node.right = left + 1;
      stack.push_back({left + 1, mid, frame.hi, frame.depth + 1});
      stack.push_back({left, frame.lo, mid, frame.depth + 1});
    }
    return tree;
  }

 private:
  struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double weighted_impurity = 0.0;  // n_left * gini_left + n_right * gini_right
  };

  // Visits mtry random features, and more if none of them admits a split.
  std::optional<Split> find_split(std::size_t lo, std::size_t hi, const std::vector<std::size_t>& counts) {
    std::optional<Split> best;
    const std::size_t d = feature_order_.size();
    for (std::size_t visited = 0; visited < d && (visited < mtry_ || !best); ++visited) {
      std::swap(feature_order_[visited], feature_order_[visited + rng_.below(d - visited)]);
      const std::size_t f = feature_order_[visited];
      if (auto s = best_split_on(f, lo, hi, counts); s && (!best || s->weighted_impurity < best->weighted_impurity))
        best = s;
    }
    return best;
  }

  std::optional<Split> best_split_on(std::size_t f, std::size_t lo, std::size_t hi,
                                     const std::vector<std::size_t>& counts) {
    buffer_.clear();
    for (std::size_t i = lo; i < hi; ++i) buffer_.emplace_back(x_(samples_[i], f), y_[samples_[i]]);
    std::sort(buffer_.begin(), buffer_.end());
    if (buffer_.front().first == buffer_.back().first) return std::nullopt;

    const std::size_t n = buffer_.size();
    left_.assign(classes_, 0);
    right_ = counts;
    double left_sq = 0.0, right_sq = 0.0;
    for (std::size_t c : counts) right_sq += static_cast<double>(c) * static_cast<double>(c);

    std::optional<Split> best;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto c = static_cast<std::size_t>(buffer_[i].second);
      left_sq += 2.0 * static_cast<double>(left_[c]) + 1.0;
      right_sq -= 2.0 * static_cast<double>(right_[c]) - 1.0;
      ++left_[c];
      --right_[c];
      if (buffer_[i].first == buffer_[i + 1].first) continue;
      const std::size_t nl = i + 1, nr = n - nl;
      if (nl < config_.min_samples_leaf || nr < config_.min_samples_leaf) continue;
      const double impurity = static_cast<double>(nl) - left_sq / static_cast<double>(nl) +
                              static_cast<double>(nr) - right_sq / static_cast<double>(nr);
      if (!best || impurity < best->weighted_impurity) {
        const double a = buffer_[i].first, b = buffer_[i + 1].first;
        double threshold = a + (b - a) / 2.0;
        if (!(threshold < b)) threshold = a;
        best = Split{f, threshold, impurity};
      }
    }
    return best;
  }

  const DenseMatrix& x_;
  std::span<const int> y_;
  std::size_t classes_;
  const ForestConfig& config_;
  std::size_t mtry_;
  Rng& rng_;
  std::vector<std::size_t> feature_order_;
  std::vector<std::size_t> samples_;
  std::vector<std::pair<double, int>> buffer_;
  std::vector<std::size_t> left_, right_;
};

std::size_t ForestConfig::resolved_features_per_split(std::size_t num_features) const {
  if (features_per_split) return *features_per_split;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(num_features)))));
}

void ForestConfig::validate(std::size_t num_features) const {
  if (num_trees < 1) throw std::invalid_argument("num_trees must be at least 1");
  if (min_samples_leaf < 1) throw std::invalid_argument("min_samples_leaf must be at least 1");
  const std::size_t mtry = resolved_features_per_split(num_features);
  if (mtry < 1 || mtry > num_features)
    throw std::invalid_argument("features_per_split must lie in [1, " + std::to_string(num_features) + "]");
}

int DecisionTree::predict(std::span<const double> row) const {
  std::size_t i = 0;
  while (nodes_[i].feature >= 0) {
    const Node& n = nodes_[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes_[i].label;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t deepest = 0;
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (nodes_[i].feature >= 0) {
      stack.emplace_back(static_cast<std::size_t>(nodes_[i].left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(nodes_[i].right), d + 1);
    }
  }
  return deepest;
}

int Forest::predict(std::span<const double> row) const {
  if (!trained()) throw std::logic_error("forest is not trained");
  std::vector<std::size_t> votes(num_classes_, 0);
  for (const auto& t : trees_) ++votes[static_cast<std::size_t>(t.predict(row))];
  return argmax_smallest(votes);
}

std::vector<int> Forest::predict(const DenseMatrix& x) const {
  std::vector<int> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict(x.row(r));
  return out;
}

std::vector<double> Forest::importances() const {
  if (!trained()) throw std::logic_error("forest is not trained");
  std::vector<double> total(num_features_, 0.0);
  for (const auto& t : trees_) {
    const auto& dec = t.impurity_decrease();
    const double sum = std::accumulate(dec.begin(), dec.end(), 0.0);
    if (sum <= 0.0) continue;
    for (std::size_t f = 0; f < num_features_; ++f) total[f] += dec[f] / sum;
  }
  const double sum = std::accumulate(total.begin(), total.end(), 0.0);
  // A forest without a single split spreads importance evenly.
  if (sum <= 0.0) return std::vector<double>(num_features_, 1.0 / static_cast<double>(num_features_));
  for (double& v : total) v /= sum;
  return total;
}

std::vector<std::size_t> Forest::bootstrap_sample(std::size_t tree) const {
  Rng rng = Rng::substream(config_.seed, tree);
  return draw_bootstrap(rng, num_samples_, config_.bootstrap);
}

double Forest::mean_tree_oob_accuracy(const DenseMatrix& x, std::span<const int> y) const {
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    std::vector<bool> in_bag(num_samples_, false);
    for (std::size_t r : bootstrap_sample(t)) in_bag[r] = true;
    std::size_t seen = 0, correct = 0;
    for (std::size_t r = 0; r < num_samples_; ++r) {
      if (in_bag[r]) continue;
      ++seen;
      if (trees_[t].predict(x.row(r)) == y[r]) ++correct;
    }
    if (seen == 0) continue;
    total += static_cast<double>(correct) / static_cast<double>(seen);
    ++counted;
  }
  return counted ? total / static_cast<double>(counted) : 0.0;
}

Forest train_forest(const DenseMatrix& x, std::span<const int> y, const ForestConfig& config) {
  if (x.rows() != y.size()) throw std::invalid_argument("feature rows and labels differ in length");
  if (x.rows() == 0) throw std::invalid_argument("cannot train on empty data");
  if (x.rows() < 2) throw std::invalid_argument("cannot train on a single sample");
  if (x.cols() == 0) throw std::invalid_argument("cannot train without features");
  config.validate(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c)
      if (!std::isfinite(x(r, c)))
        throw DataError("non-finite feature value at row " + std::to_string(r) + ", column " + std::to_string(c));
  int max_label = 0;
  for (int label : y) {
    if (label < 0) throw std::invalid_argument("class labels must be non-negative");
    max_label = std::max(max_label, label);
  }

  Forest forest;
  forest.config_ = config;
  forest.num_features_ = x.cols();
  forest.num_classes_ = static_cast<std::size_t>(max_label) + 1;
  forest.num_samples_ = x.rows();
  forest.trees_.resize(config.num_trees);
  const std::size_t mtry = config.resolved_features_per_split(x.cols());
  parallel_for(config.num_trees, config.threads, [&](std::size_t t) {
    Rng rng = Rng::substream(config.seed, t);
    auto samples = draw_bootstrap(rng, x.rows(), config.bootstrap);
    TreeBuilder builder(x, y, forest.num_classes_, config, mtry, rng);
    forest.trees_[t] = builder.build(std::move(samples));
  });
  return forest;
}

std::map<std::string, double> feature_importance(const Forest& forest, std::span<const std::string> labels) {
  if (!forest.trained()) throw std::logic_error("forest is not trained");
  if (labels.size() != forest.num_features())
    throw std::invalid_argument("expected " + std::to_string(forest.num_features()) + " labels");
  const auto imp = forest.importances();
  std::map<std::string, double> out;
  for (std::size_t f = 0; f < labels.size(); ++f) out[labels[f]] += imp[f];
  return out;
}

}  // namespace homcount
