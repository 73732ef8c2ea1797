#include "homcount/embedding_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "homcount/errors.hpp"

namespace homcount {

namespace {

constexpr std::string_view kMagic = "HOMEMB1";

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename U>
U to_little(U x) {
  if constexpr (std::endian::native == std::endian::little) return x;
  U out = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) out = (out << 8) | ((x >> (8 * i)) & 0xff);
  return out;
}

void put_u64(std::ostream& out, std::uint64_t x) {
  x = to_little(x);
  out.write(reinterpret_cast<const char*>(&x), sizeof x);
}

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t x = 0;
  if (!in.read(reinterpret_cast<char*>(&x), sizeof x)) throw DataError("truncated embedding file");
  return to_little(x);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(std::move(cell));
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw std::runtime_error("cannot format number");
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw DataError("not a number: '" + std::string(text) + "'");
  return x;
}

void write_embedding_csv(const EmbeddingMatrix& e, std::ostream& out, bool node_id) {
  bool first = true;
  if (node_id) {
    out << "node_id";
    first = false;
  }
  for (const auto& l : e.labels) {
    if (!first) out << ',';
    out << csv_escape(l);
    first = false;
  }
  out << '\n';
  for (std::size_t r = 0; r < e.rows(); ++r) {
    first = true;
    if (node_id) {
      out << r;
      first = false;
    }
    for (std::size_t c = 0; c < e.cols(); ++c) {
      if (!first) out << ',';
      out << format_double(e.values(r, c));
      first = false;
    }
    out << '\n';
  }
}

EmbeddingMatrix read_embedding_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty embedding CSV");
  auto header = split_csv_line(line);
  const bool node_id = !header.empty() && header.front() == "node_id";
  if (node_id) header.erase(header.begin());
  EmbeddingMatrix e;
  e.labels = std::move(header);
  std::vector<double> data;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (node_id && !cells.empty()) cells.erase(cells.begin());
    if (cells.size() != e.labels.size())
      throw DataError("embedding CSV row " + std::to_string(rows + 1) + " has " +
                      std::to_string(cells.size()) + " values, expected " + std::to_string(e.labels.size()));
    for (const auto& c : cells) data.push_back(parse_double(c));
    ++rows;
  }
  e.values = DenseMatrix(rows, e.labels.size(), std::move(data));
  return e;
}

void write_embedding_binary(const EmbeddingMatrix& e, std::ostream& out) {
  out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  put_u64(out, e.rows());
  put_u64(out, e.cols());
  for (const auto& l : e.labels) {
    put_u64(out, l.size());
    out.write(l.data(), static_cast<std::streamsize>(l.size()));
  }
  for (double x : e.values.data()) put_u64(out, std::bit_cast<std::uint64_t>(x));
}

EmbeddingMatrix read_embedding_binary(std::istream& in) {
  std::array<char, kMagic.size()> magic{};
  if (!in.read(magic.data(), magic.size()) || std::string_view(magic.data(), magic.size()) != kMagic)
    throw DataError("not a HOMEMB1 embedding file");
  const std::uint64_t rows = get_u64(in);
  const std::uint64_t cols = get_u64(in);
  EmbeddingMatrix e;
  for (std::uint64_t c = 0; c < cols; ++c) {
    const std::uint64_t len = get_u64(in);
    if (len > (1u << 20)) throw DataError("implausible label length in embedding file");
    std::string label(len, '\0');
    if (!in.read(label.data(), static_cast<std::streamsize>(len))) throw DataError("truncated embedding file");
    e.labels.push_back(std::move(label));
  }
  std::vector<double> data(rows * cols);
  for (double& x : data) x = std::bit_cast<double>(get_u64(in));
  e.values = DenseMatrix(rows, cols, std::move(data));
  return e;
}

void save_embedding(const EmbeddingMatrix& e, const std::filesystem::path& path, bool node_id) {
  const bool binary = path.extension() == ".bin";
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw DataError("cannot write " + path.string());
  if (binary)
    write_embedding_binary(e, out);
  else
    write_embedding_csv(e, out, node_id);
  if (!out) throw DataError("error while writing " + path.string());
}

EmbeddingMatrix load_embedding(const std::filesystem::path& path) {
  const bool binary = path.extension() == ".bin";
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw DataError("cannot open " + path.string());
  auto e = binary ? read_embedding_binary(in) : read_embedding_csv(in);
  e.source = path.filename().string();
  return e;
}

}  // namespace homcount
