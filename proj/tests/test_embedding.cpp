#include <gtest/gtest.h>

#include <bit>
#include <sstream>

#include "homcount/embedding.hpp"
#include "homcount/embedding_io.hpp"
#include "homcount/errors.hpp"
#include "support.hpp"

using namespace homcount;
using namespace homcount::testing;

namespace {

bool bitwise_equal(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  if (a.labels != b.labels || a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (std::bit_cast<std::uint64_t>(a.values(r, c)) != std::bit_cast<std::uint64_t>(b.values(r, c)))
        return false;
  return true;
}

}  // namespace

TEST(Embed, PlainShapeAndLabels) {
  const auto family = enumerate_cycles(5);
  const auto e = embed_plain(fig2_graph(), family);
  EXPECT_EQ(e.rows(), 7u);
  EXPECT_EQ(e.cols(), 3u);
  EXPECT_EQ(e.labels, (std::vector<std::string>{"C3:ch0", "C4:ch0", "C5:ch0"}));
  EXPECT_EQ(e.values(0, 0), 2.0);
  EXPECT_FALSE(e.partial);
}

TEST(Embed, TensorBlocksEqualSingleChannelEmbeddings) {
  const auto g = random_features(random_graph(10, 0.4, 1), 3, -1.0, 2.0, 2);
  auto family = enumerate_trees(5);
  for (auto& p : enumerate_cycles(6).patterns) family.patterns.push_back(p);
  const auto t = embed_tensor(g, family);
  ASSERT_EQ(t.cols(), family.size() * 3);
  for (std::size_t ch = 0; ch < 3; ++ch) {
    const auto e = embed_plain(g.single_channel(ch), family);
    for (std::size_t j = 0; j < family.size(); ++j) {
      const std::size_t col = ch * family.size() + j;
      EXPECT_EQ(t.labels[col], family.patterns[j].name + ":ch" + std::to_string(ch));
      for (std::size_t v = 0; v < 10; ++v)
        EXPECT_EQ(std::bit_cast<std::uint64_t>(t.values(v, col)), std::bit_cast<std::uint64_t>(e.values(v, j)));
    }
  }
}

TEST(Embed, PlainUsesFirstChannelWeights) {
  const auto g = with_weights(fig2_graph(), {2, 1, 1, 1, 1, 1, 1});
  const auto e = embed_plain(g, enumerate_paths(1));
  EXPECT_EQ(e.values(0, 0), 2.0);
}

TEST(Embed, ThreadCountDoesNotChangeOutput) {
  std::vector<FeaturedGraph> graphs;
  for (std::uint64_t s = 0; s < 4; ++s) graphs.push_back(random_features(random_graph(12, 0.3, s), 2, 0.1, 2.0, s));
  auto family = enumerate_trees(6);
  for (auto& p : enumerate_cycles(6).patterns) family.patterns.push_back(p);
  for (auto& p : enumerate_paths(4).patterns) family.patterns.push_back(p);
  EmbedOptions one, many;
  many.threads = 4;
  EXPECT_TRUE(bitwise_equal(embed_graphs(graphs, family, true, one), embed_graphs(graphs, family, true, many)));
}

TEST(Embed, StacksGraphsInOrder) {
  std::vector<FeaturedGraph> graphs{fig2_graph(), complete_graph(3)};
  const auto e = embed_graphs(graphs, enumerate_cycles(3), false);
  ASSERT_EQ(e.rows(), 10u);
  EXPECT_EQ(e.values(0, 0), 2.0);
  EXPECT_EQ(e.values(7, 0), 2.0);
  EXPECT_EQ(e.values(5, 0), 0.0);
}

TEST(Embed, DeadlineMarksPartial) {
  EmbedOptions opts;
  opts.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  const auto e = embed_plain(fig2_graph(), enumerate_trees(6), opts);
  EXPECT_TRUE(e.partial);
  EXPECT_LT(e.cols(), enumerate_trees(6).size());
  EXPECT_EQ(e.labels.size(), e.cols());
}

TEST(Embed, Errors) {
  PatternFamily empty;
  EXPECT_THROW(embed_plain(fig2_graph(), empty), std::invalid_argument);
  std::vector<FeaturedGraph> mixed{random_features(fig2_graph(), 2, 0, 1, 1), fig2_graph()};
  EXPECT_THROW(embed_graphs(mixed, enumerate_cycles(3), true), std::invalid_argument);
}

TEST(Transforms, LogScale) {
  auto e = embed_plain(random_features(fig2_graph(), 1, -2.0, 2.0, 3), enumerate_paths(3));
  const auto l = log_scale(e);
  EXPECT_EQ(l.labels[0], "log:P1:ch0");
  for (std::size_t r = 0; r < e.rows(); ++r)
    for (std::size_t c = 0; c < e.cols(); ++c) {
      const double x = e.values(r, c);
      EXPECT_DOUBLE_EQ(l.values(r, c), (x < 0 ? -1.0 : 1.0) * std::log1p(std::abs(x)));
    }
}

TEST(Transforms, DensityFig2) {
  const auto g = fig2_graph();
  const auto family = enumerate_cycles(4);
  const auto d = density(embed_plain(g, family), g, family);
  EXPECT_EQ(d.labels[0], "dens:C3:ch0");
  EXPECT_DOUBLE_EQ(d.values(0, 0), 2.0 / 49.0);
  EXPECT_DOUBLE_EQ(d.values(1, 1), 30.0 / 343.0);
  EXPECT_THROW(density(log_scale(embed_plain(g, family)), g, family), std::invalid_argument);
}

TEST(Transforms, DensityOnCompleteGraphAtMostOne) {
  const auto g = complete_graph(6);
  const auto family = enumerate_trees(6);
  const auto d = density(embed_plain(g, family), g, family);
  for (double x : d.values.data()) {
    EXPECT_GT(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
}

TEST(Transforms, AppendRawFeatures) {
  const auto g = random_features(fig2_graph(), 2, 0.0, 1.0, 8);
  const auto e = append_raw_features(embed_plain(g, enumerate_cycles(3)), g);
  ASSERT_EQ(e.cols(), 3u);
  EXPECT_EQ(e.labels[1], "rawfeat:0");
  EXPECT_EQ(e.labels[2], "rawfeat:1");
  EXPECT_EQ(e.values(4, 2), g.feature(4, 1));
}

TEST(Transforms, ConcatEnsemble) {
  const auto g = fig2_graph();
  const std::vector<EmbeddingMatrix> parts{embed_plain(g, enumerate_cycles(4)), embed_plain(g, enumerate_paths(2)),
                                           EmbeddingMatrix{}};
  const auto e = concat_ensemble(parts);
  EXPECT_EQ(e.cols(), 4u);
  EXPECT_EQ(e.labels[2], "P1:ch0");
  const std::vector<EmbeddingMatrix> dup{parts[0], parts[0]};
  EXPECT_THROW(concat_ensemble(dup), std::invalid_argument);
  const std::vector<EmbeddingMatrix> rows{parts[0], embed_plain(complete_graph(3), enumerate_paths(2))};
  EXPECT_THROW(concat_ensemble(rows), std::invalid_argument);
}

TEST(Labels, ParseFormatRoundTrip) {
  for (std::string s : {"C3:ch0", "log:dens:tree5:01211:ch2", "rawfeat:3", "log:rawfeat:0", "btree3:011:ch10"}) {
    EXPECT_EQ(format_column_label(parse_column_label(s)), s);
  }
  const auto l = parse_column_label("log:dens:tree5:01211:ch2");
  EXPECT_EQ(l.transforms, (std::vector<std::string>{"log", "dens"}));
  EXPECT_EQ(l.pattern, "tree5:01211");
  EXPECT_EQ(l.channel, 2u);
  EXPECT_THROW(parse_column_label("C3"), std::invalid_argument);
  EXPECT_THROW(parse_column_label("C3:chx"), std::invalid_argument);
}

TEST(Labels, RecomputeColumnFromLabelAlone) {
  const auto g = random_features(random_graph(9, 0.4, 12), 2, 0.1, 3.0, 4);
  const auto family = enumerate_trees(5);
  const auto tensor = embed_tensor(g, family);
  const auto d = log_scale(density(tensor, g, family));
  const PatternFamily none;
  for (std::size_t c = 0; c < d.cols(); ++c) {
    const auto col = recompute_column(d.labels[c], g, none);
    for (std::size_t v = 0; v < 9; ++v) EXPECT_DOUBLE_EQ(col[v], d.values(v, c)) << d.labels[c];
  }
  const auto raw = append_raw_features(tensor, g);
  EXPECT_EQ(recompute_column("rawfeat:1", g, family), g.channel(1));
}

TEST(Io, CsvRoundTripIsExact) {
  const auto g = random_features(random_graph(10, 0.4, 3), 2, -3.0, 3.0, 5);
  const auto e = log_scale(embed_tensor(g, enumerate_cycles(7)));
  for (bool node_id : {false, true}) {
    std::stringstream s;
    write_embedding_csv(e, s, node_id);
    if (node_id) EXPECT_EQ(s.str().rfind("node_id,", 0), 0u);
    EXPECT_TRUE(bitwise_equal(read_embedding_csv(s), e));
  }
}

TEST(Io, BinaryRoundTripIsExact) {
  const auto g = random_features(random_graph(10, 0.4, 3), 2, -3.0, 3.0, 5);
  const auto e = embed_tensor(g, enumerate_trees(6));
  std::stringstream s;
  write_embedding_binary(e, s);
  EXPECT_EQ(s.str().substr(0, 7), "HOMEMB1");
  EXPECT_TRUE(bitwise_equal(read_embedding_binary(s), e));
}

TEST(Io, FileDispatchAndErrors) {
  TempDir dir("emb");
  const auto e = embed_plain(fig2_graph(), enumerate_paths(4));
  save_embedding(e, dir / "e.bin");
  save_embedding(e, dir / "e.csv");
  EXPECT_TRUE(bitwise_equal(load_embedding(dir / "e.bin"), e));
  EXPECT_TRUE(bitwise_equal(load_embedding(dir / "e.csv"), e));
  std::stringstream bad_magic("NOTEMB1xxxxxxxx");
  EXPECT_THROW(read_embedding_binary(bad_magic), DataError);
  std::stringstream ragged("a,b\n1,2\n3\n");
  EXPECT_THROW(read_embedding_csv(ragged), DataError);
  std::stringstream text("a\nfoo\n");
  EXPECT_THROW(read_embedding_csv(text), DataError);
  EXPECT_THROW(load_embedding(dir / "missing.csv"), DataError);
}

TEST(Io, FormatDouble) {
  for (double x : {0.1, 1e-300, 12345678901234567.0, -2.5, 0.0}) EXPECT_EQ(parse_double(format_double(x)), x);
  EXPECT_EQ(format_double(3.0), "3");
  EXPECT_THROW(parse_double("abc"), DataError);
}
