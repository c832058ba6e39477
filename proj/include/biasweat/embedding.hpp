#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "biasweat/errors.hpp"

namespace biasweat {

enum class OnDuplicate { error, keep_first };

struct LoadOptions {
  bool lowercase = false;
  OnDuplicate on_duplicate = OnDuplicate::error;
};

/// Immutable vocabulary-indexed dense vector matrix. All rows share one
/// dimension; token -> row is a bijection. Safe for concurrent reads.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t dimension, std::vector<std::string> tokens,
                 std::vector<double> matrix, std::string source_meta,
                 bool lowercased = false, std::size_t dropped_duplicates = 0);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& source_meta() const { return source_meta_; }
  bool lowercased() const { return lowercased_; }
  std::size_t dropped_duplicates() const { return dropped_duplicates_; }

  std::span<const double> row(std::size_t i) const {
    return {matrix_.data() + i * dimension_, dimension_};
  }

  /// Row vector for `token`, applying the table's recorded case
  /// normalization first. Absent tokens yield nullopt, never a default.
  std::optional<std::span<const double>> lookup(std::string_view token) const;

  bool contains(std::string_view token) const { return lookup(token).has_value(); }

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> tokens_;
  std::vector<double> matrix_;  // row-major, size() * dimension()
  std::unordered_map<std::string, std::size_t> index_;
  std::string source_meta_;
  bool lowercased_ = false;
  std::size_t dropped_duplicates_ = 0;
};

EmbeddingTable load_glove_text(const std::string& path, const LoadOptions& options = {});

/// word2vec text format: `vocab_count dimension` header line, then GloVe-style rows.
EmbeddingTable load_word2vec_text(const std::string& path, const LoadOptions& options = {});

/// Writes GloVe text format with enough digits for exact double round-trip.
void save_glove_text(const EmbeddingTable& table, const std::string& path);

/// u.v / (|u||v|), clamped to [-1, 1] to absorb floating-point overshoot.
double cosine(std::span<const double> u, std::span<const double> v);

std::string to_lower(std::string_view s);

}  // namespace biasweat
