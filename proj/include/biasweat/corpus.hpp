#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "biasweat/errors.hpp"

namespace biasweat {

struct PreprocessRules {
  bool lowercase = true;
  bool strip_urls = true;
  bool keep_hashtags = true;
  bool keep_mentions = true;
  bool dedupe_exact = false;
  std::string text_field = "full_text";  // falls back to "text"
};

struct TokenizedCorpus {
  std::vector<std::vector<std::string>> documents;
  std::string rules_meta;
  std::vector<std::string> warnings;
};

std::vector<std::string> tokenize_tweet(const std::string& text, const PreprocessRules& rules);

/// Input is JSON-lines (records with a text field) or plain text, one tweet
/// per line; the format is sniffed from the first non-blank line.
TokenizedCorpus preprocess_tweets(const std::string& path, const PreprocessRules& rules = {});

/// Keeps exactly the documents containing at least one listed hashtag token.
TokenizedCorpus filter_by_hashtags(const TokenizedCorpus& corpus,
                                   const std::vector<std::string>& hashtags);

/// The builtin `anti_chinese_14` hashtag filter list.
const std::vector<std::string>& anti_chinese_14();

struct Vocabulary {
  std::vector<std::string> tokens;  // descending frequency, ties lexicographic
  std::vector<std::uint64_t> frequencies;
  std::unordered_map<std::string, std::size_t> index;
  std::uint64_t min_count = 1;
};

Vocabulary build_vocab(const TokenizedCorpus& corpus, std::uint64_t min_count);

enum class CooccurrenceWeighting { inverse_distance, flat };

struct CooccurrenceTable {
  std::size_t vocab_size = 0;
  // key = i * vocab_size + j; symmetric: counts(i,j) == counts(j,i)
  std::unordered_map<std::uint64_t, double> counts;

  double at(std::size_t i, std::size_t j) const {
    auto it = counts.find(static_cast<std::uint64_t>(i) * vocab_size + j);
    return it == counts.end() ? 0.0 : it->second;
  }
};

CooccurrenceTable count_cooccurrence(const TokenizedCorpus& corpus, const Vocabulary& vocab,
                                     std::size_t window,
                                     CooccurrenceWeighting weighting =
                                         CooccurrenceWeighting::inverse_distance);

}  // namespace biasweat
