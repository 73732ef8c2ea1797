#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "homcount/graph.hpp"
#include "homcount/hom.hpp"
#include "homcount/matrix.hpp"
#include "homcount/patterns.hpp"

namespace homcount {

/// |V| x D node embedding with one provenance label per column.
///
/// Labels are `<pattern>:ch<i>` for counts, optionally prefixed by transform
/// tags (`log:`, `dens:`), or `rawfeat:<j>` for appended input features.
struct EmbeddingMatrix {
  DenseMatrix values;
  std::vector<std::string> labels;
  std::string source;
  /// Set when a deadline stopped the computation before every column was done.
  bool partial = false;

  std::size_t rows() const { return values.rows(); }
  std::size_t cols() const { return values.cols(); }
  bool operator==(const EmbeddingMatrix& o) const {
    return values == o.values && labels == o.labels;
  }
};

struct EmbedOptions {
  std::size_t threads = 1;
  CountOptions count;
  /// Columns whose computation has not started by this time are skipped.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

EmbeddingMatrix embed_plain(const FeaturedGraph& g, const PatternFamily& family,
                            const EmbedOptions& options = {});
EmbeddingMatrix embed_tensor(const FeaturedGraph& g, const PatternFamily& family,
                             const EmbedOptions& options = {});

/// Embeds several graphs with one family; rows are stacked in graph order.
EmbeddingMatrix embed_graphs(std::span<const FeaturedGraph> graphs, const PatternFamily& family,
                             bool tensor, const EmbedOptions& options = {});

EmbeddingMatrix append_raw_features(const EmbeddingMatrix& e, const FeaturedGraph& g);
EmbeddingMatrix append_raw_features(const EmbeddingMatrix& e, std::span<const FeaturedGraph> graphs);

/// Column-wise concatenation; rejects row-count mismatches and duplicate labels.
EmbeddingMatrix concat_ensemble(std::span<const EmbeddingMatrix> parts);

/// x -> sign(x) ln(1 + |x|), labels gain `log:`.
EmbeddingMatrix log_scale(const EmbeddingMatrix& e);

/// Divides each count by |V(G)|^(|V(H)|-1), labels gain `dens:`. Every
/// column must be an untransformed pattern column.
EmbeddingMatrix density(const EmbeddingMatrix& e, const FeaturedGraph& g, const PatternFamily& family);
EmbeddingMatrix density(const EmbeddingMatrix& e, std::span<const FeaturedGraph> graphs,
                        const PatternFamily& family);

struct ColumnLabel {
  /// Outermost transform first, e.g. {"log", "dens"} for `log:dens:C3:ch0`.
  std::vector<std::string> transforms;
  std::string pattern;
  std::size_t channel = 0;
  /// Set for `rawfeat:<j>` columns (then `pattern` is empty).
  std::optional<std::size_t> raw_feature;
};

ColumnLabel parse_column_label(std::string_view label);
std::string format_column_label(const ColumnLabel& label);

/// Recomputes a single column from its label alone. The pattern is looked up
/// in `family` first, then rebuilt from its canonical name.
std::vector<double> recompute_column(std::string_view label, const FeaturedGraph& g,
                                     const PatternFamily& family, const CountOptions& options = {});

}  // namespace homcount
