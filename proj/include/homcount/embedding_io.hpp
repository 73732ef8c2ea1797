#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "homcount/embedding.hpp"

namespace homcount {

/// CSV: header row of column labels, one row per node, optionally led by a
/// `node_id` column. Values use the shortest round-trip representation.
void write_embedding_csv(const EmbeddingMatrix& e, std::ostream& out, bool node_id = false);
EmbeddingMatrix read_embedding_csv(std::istream& in);

/// Binary: magic "HOMEMB1", u64 n, u64 D, D labels (u64 byte length + bytes),
/// then n*D row-major f64; all integers and floats little-endian.
void write_embedding_binary(const EmbeddingMatrix& e, std::ostream& out);
EmbeddingMatrix read_embedding_binary(std::istream& in);

/// Picks the format from the extension: `.bin` is binary, anything else CSV.
void save_embedding(const EmbeddingMatrix& e, const std::filesystem::path& path, bool node_id = false);
EmbeddingMatrix load_embedding(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);
double parse_double(std::string_view text);

}  // namespace homcount
