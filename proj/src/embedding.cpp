#include "biasweat/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace biasweat {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

EmbeddingTable::EmbeddingTable(std::size_t dimension, std::vector<std::string> tokens,
                               std::vector<double> matrix, std::string source_meta,
                               bool lowercased, std::size_t dropped_duplicates)
    : dimension_(dimension),
      tokens_(std::move(tokens)),
      matrix_(std::move(matrix)),
      source_meta_(std::move(source_meta)),
      lowercased_(lowercased),
      dropped_duplicates_(dropped_duplicates) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
}

std::optional<std::span<const double>> EmbeddingTable::lookup(std::string_view token) const {
  auto it = lowercased_ ? index_.find(to_lower(token)) : index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

namespace {

struct ParsedLine {
  std::string token;
  std::vector<double> values;
};

bool parse_line(const std::string& line, std::size_t line_no, ParsedLine& out) {
  out.values.clear();
  std::size_t pos = line.find(' ');
  if (pos == std::string::npos || pos == 0) return false;
  out.token = line.substr(0, pos);
  const char* p = line.data() + pos + 1;
  const char* end = line.data() + line.size();
  while (p < end) {
    while (p < end && *p == ' ') ++p;
    if (p >= end) break;
    double v;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc()) {
      throw Error(Errc::NonFiniteValue, "line " + std::to_string(line_no) +
                                            ": unparseable numeric field");
    }
    if (!std::isfinite(v)) {
      throw Error(Errc::NonFiniteValue,
                  "line " + std::to_string(line_no) + ": non-finite value");
    }
    out.values.push_back(v);
    p = next;
  }
  return !out.values.empty();
}

EmbeddingTable load_text(const std::string& path, const LoadOptions& options,
                         bool word2vec_header) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path);

  std::string line;
  std::size_t line_no = 0;
  std::size_t declared_count = 0, declared_dim = 0;

  if (word2vec_header) {
    if (!std::getline(in, line)) throw Error(Errc::EmptyFile, path + " is empty");
    ++line_no;
    std::istringstream hs(line);
    if (!(hs >> declared_count >> declared_dim) || declared_count == 0 || declared_dim == 0)
      throw Error(Errc::HeaderMismatch, "bad word2vec header: " + line);
  }

  std::vector<std::string> tokens;
  std::vector<double> matrix;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t dimension = 0;
  std::size_t dropped = 0;
  ParsedLine parsed;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!parse_line(line, line_no, parsed)) {
      throw Error(Errc::RaggedRow,
                  "line " + std::to_string(line_no) + ": no numeric fields");
    }
    if (dimension == 0) {
      dimension = word2vec_header ? declared_dim : parsed.values.size();
    }
    if (parsed.values.size() != dimension) {
      throw Error(Errc::RaggedRow, "line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(dimension) + " fields, got " +
                                       std::to_string(parsed.values.size()));
    }
    std::string token = options.lowercase ? to_lower(parsed.token) : parsed.token;
    auto [it, inserted] = seen.emplace(token, tokens.size());
    if (!inserted) {
      if (options.on_duplicate == OnDuplicate::error) {
        throw Error(Errc::DuplicateToken,
                    "line " + std::to_string(line_no) + ": duplicate token '" + token + "'");
      }
      ++dropped;
      continue;
    }
    tokens.push_back(std::move(token));
    matrix.insert(matrix.end(), parsed.values.begin(), parsed.values.end());
  }

  if (tokens.empty()) throw Error(Errc::EmptyFile, path + " has no records");
  if (word2vec_header && tokens.size() + dropped != declared_count) {
    throw Error(Errc::HeaderMismatch,
                "header declares " + std::to_string(declared_count) + " rows, found " +
                    std::to_string(tokens.size() + dropped));
  }

  std::string meta = path + " format=" + (word2vec_header ? "word2vec" : "glove") +
                     " lowercase=" + (options.lowercase ? "1" : "0") +
                     " dropped_duplicates=" + std::to_string(dropped);
  return EmbeddingTable(dimension, std::move(tokens), std::move(matrix), std::move(meta),
                        options.lowercase, dropped);
}

}  // namespace

EmbeddingTable load_glove_text(const std::string& path, const LoadOptions& options) {
  return load_text(path, options, false);
}

EmbeddingTable load_word2vec_text(const std::string& path, const LoadOptions& options) {
  return load_text(path, options, true);
}

void save_glove_text(const EmbeddingTable& table, const std::string& path) {
  if (table.size() == 0) throw Error(Errc::EmptyTable, "refusing to save empty table");
  for (const auto& t : table.tokens()) {
    if (t.find(' ') != std::string::npos || t.find('\t') != std::string::npos ||
        t.find('\n') != std::string::npos) {
      throw Error(Errc::TokenUnencodable, "token '" + t + "' contains whitespace");
    }
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoFailure, "cannot write " + path);
  char buf[64];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.tokens()[i];
    for (double v : table.row(i)) {
      std::snprintf(buf, sizeof(buf), " %.17g", v);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw Error(Errc::IoFailure, "write failure on " + path);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw Error(Errc::DimensionMismatch, "cosine: dimensions " + std::to_string(u.size()) +
                                             " vs " + std::to_string(v.size()));
  double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw Error(Errc::ZeroVector, "cosine of zero-norm vector");
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

}  // namespace biasweat
