#pragma once

// Synthetic tweet corpus with a planted association: group-P tokens co-occur
// with pleasant words, group-Q tokens with unpleasant words. Shared filler
// vocabulary keeps every vector in one space.

#include <random>
#include <string>
#include <vector>

#include "biasweat/corpus.hpp"
#include "biasweat/lexicon.hpp"

namespace planted {

inline const std::vector<std::string>& group_p() {
  static const std::vector<std::string> v{"norland", "norlish", "norlanders", "#norland"};
  return v;
}

inline const std::vector<std::string>& group_q() {
  static const std::vector<std::string> v{"sudland", "sudlish", "sudlanders", "#sudland"};
  return v;
}

inline biasweat::TokenizedCorpus make_corpus(std::size_t docs, std::uint64_t seed) {
  const auto& pleasant = biasweat::builtin_wordset("pleasant").tokens;
  const auto& unpleasant = biasweat::builtin_wordset("unpleasant").tokens;
  const std::vector<std::string> filler{"the", "today", "people", "news",  "big",
                                        "city", "world", "said",  "report", "new"};
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<std::string>& from) {
    std::uniform_int_distribution<std::size_t> d(0, from.size() - 1);
    return from[d(rng)];
  };

  biasweat::TokenizedCorpus corpus;
  corpus.rules_meta = "synthetic planted corpus";
  for (std::size_t i = 0; i < docs; ++i) {
    bool p_side = i % 2 == 0;
    const auto& group = p_side ? group_p() : group_q();
    const auto& attrs = p_side ? pleasant : unpleasant;
    std::vector<std::string> doc{pick(filler), pick(group), pick(attrs),
                                 pick(group), pick(attrs), pick(filler)};
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace planted
