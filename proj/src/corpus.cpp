#include "biasweat/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "biasweat/embedding.hpp"  // to_lower

namespace biasweat {

const std::vector<std::string>& anti_chinese_14() {
  static const std::vector<std::string> tags = {
      "#chinavirus",      "#wuhan",          "#wuhanvirus",     "#chinavirusoutbreak",
      "#wuhancoronavirus", "#wuhaninfluenza", "#wuhansars",      "#chinacoronavirus",
      "#wuhan2020",       "#chinaflu",       "#wuhanquarantine", "#chinesepneumonia",
      "#coronachina",     "#wohan"};
  return tags;
}

namespace {

bool is_url(const std::string& tok) {
  return tok.find("://") != std::string::npos || tok.rfind("www.", 0) == 0 ||
         tok.rfind("t.co/", 0) == 0;
}

bool is_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

// Trims punctuation at both ends but keeps a leading '#' or '@' marker.
std::string trim_token(const std::string& tok) {
  std::size_t begin = 0, end = tok.size();
  while (end > begin && is_punct(tok[end - 1])) --end;
  while (begin < end && is_punct(tok[begin]) && tok[begin] != '#' && tok[begin] != '@') ++begin;
  if (begin < end && (tok[begin] == '#' || tok[begin] == '@')) {
    // a bare marker with nothing after it is punctuation, not a token
    if (begin + 1 == end) return "";
  }
  return tok.substr(begin, end - begin);
}

}  // namespace

std::vector<std::string> tokenize_tweet(const std::string& text, const PreprocessRules& rules) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::string tok = text.substr(i, j - i);
      if (rules.lowercase) tok = to_lower(tok);
      if (!(rules.strip_urls && is_url(tok))) {
        tok = trim_token(tok);
        if (!tok.empty()) {
          if (tok[0] == '#' && !rules.keep_hashtags) tok = tok.substr(1);
          else if (tok[0] == '@' && !rules.keep_mentions) tok = tok.substr(1);
          if (!tok.empty()) out.push_back(std::move(tok));
        }
      }
    }
    i = j;
  }
  return out;
}

TokenizedCorpus preprocess_tweets(const std::string& path, const PreprocessRules& rules) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path);

  TokenizedCorpus corpus;
  corpus.rules_meta = std::string("lowercase=") + (rules.lowercase ? "1" : "0") +
                      " strip_urls=" + (rules.strip_urls ? "1" : "0") +
                      " keep_hashtags=" + (rules.keep_hashtags ? "1" : "0") +
                      " keep_mentions=" + (rules.keep_mentions ? "1" : "0") +
                      " dedupe_exact=" + (rules.dedupe_exact ? "1" : "0");

  std::unordered_set<std::string> seen_texts;
  std::string line;
  std::size_t line_no = 0;
  bool json_mode = false, sniffed = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (!sniffed) {
      json_mode = line[first] == '{';
      sniffed = true;
    }

    std::string text;
    if (json_mode) {
      auto rec = nlohmann::json::parse(line, nullptr, false);
      if (rec.is_discarded() || !rec.is_object())
        throw Error(Errc::MalformedRecord, "line " + std::to_string(line_no) + ": not a JSON object");
      if (rec.contains(rules.text_field) && rec[rules.text_field].is_string())
        text = rec[rules.text_field].get<std::string>();
      else if (rec.contains("text") && rec["text"].is_string())
        text = rec["text"].get<std::string>();
      else
        throw Error(Errc::MalformedRecord,
                    "line " + std::to_string(line_no) + ": no '" + rules.text_field +
                        "' or 'text' string field");
    } else {
      text = line;
    }

    if (rules.dedupe_exact && !seen_texts.insert(text).second) continue;
    auto tokens = tokenize_tweet(text, rules);
    if (!tokens.empty()) corpus.documents.push_back(std::move(tokens));
  }

  if (corpus.documents.empty()) throw Error(Errc::EmptyCorpus, path + " yielded no documents");
  return corpus;
}

TokenizedCorpus filter_by_hashtags(const TokenizedCorpus& corpus,
                                   const std::vector<std::string>& hashtags) {
  std::unordered_set<std::string> wanted(hashtags.begin(), hashtags.end());
  TokenizedCorpus out;
  out.rules_meta = corpus.rules_meta + " hashtag_filter=" + std::to_string(hashtags.size());
  for (const auto& doc : corpus.documents) {
    if (std::any_of(doc.begin(), doc.end(),
                    [&](const std::string& t) { return wanted.count(t) > 0; }))
      out.documents.push_back(doc);
  }
  if (out.documents.empty())
    out.warnings.push_back("hashtag filter matched no documents");
  return out;
}

Vocabulary build_vocab(const TokenizedCorpus& corpus, std::uint64_t min_count) {
  if (corpus.documents.empty()) throw Error(Errc::EmptyCorpus, "empty corpus");
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& doc : corpus.documents)
    for (const auto& tok : doc) ++freq[tok];

  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [tok, f] : freq)
    if (f >= min_count) kept.emplace_back(tok, f);
  if (kept.empty())
    throw Error(Errc::EmptyVocabulary,
                "no token reaches min_count " + std::to_string(min_count));
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  Vocabulary vocab;
  vocab.min_count = min_count;
  for (auto& [tok, f] : kept) {
    vocab.index.emplace(tok, vocab.tokens.size());
    vocab.tokens.push_back(tok);
    vocab.frequencies.push_back(f);
  }
  return vocab;
}

CooccurrenceTable count_cooccurrence(const TokenizedCorpus& corpus, const Vocabulary& vocab,
                                     std::size_t window, CooccurrenceWeighting weighting) {
  if (window < 1) throw Error(Errc::SchemaViolation, "window must be >= 1");
  CooccurrenceTable table;
  table.vocab_size = vocab.tokens.size();
  for (const auto& doc : corpus.documents) {
    std::vector<std::ptrdiff_t> ids(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
      auto it = vocab.index.find(doc[i]);
      ids[i] = it == vocab.index.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] < 0) continue;
      std::size_t lim = std::min(ids.size(), i + window + 1);
      for (std::size_t j = i + 1; j < lim; ++j) {
        if (ids[j] < 0) continue;
        double w = weighting == CooccurrenceWeighting::inverse_distance
                       ? 1.0 / static_cast<double>(j - i)
                       : 1.0;
        auto a = static_cast<std::uint64_t>(ids[i]);
        auto b = static_cast<std::uint64_t>(ids[j]);
        table.counts[a * table.vocab_size + b] += w;
        table.counts[b * table.vocab_size + a] += w;
      }
    }
  }
  return table;
}

}  // namespace biasweat
