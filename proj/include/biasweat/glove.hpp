#pragma once

#include <cstdint>
#include <vector>

#include "biasweat/corpus.hpp"
#include "biasweat/embedding.hpp"

namespace biasweat {

struct GloveConfig {
  std::size_t dimension = 50;  // desk-scale default
  std::size_t window = 10;     // symmetric
  double x_max = 100.0;
  double alpha = 0.75;
  double learning_rate = 0.05;
  std::size_t epochs = 25;
  std::uint64_t min_count = 5;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Weighted least squares on log co-occurrence counts with AdaGrad updates.
/// Output vectors are main + context sums. Deterministic given seed
/// (single-threaded). Per-epoch mean loss is appended to *epoch_losses.
EmbeddingTable train_glove(const CooccurrenceTable& coocc, const Vocabulary& vocab,
                           const GloveConfig& config,
                           std::vector<double>* epoch_losses = nullptr);

}  // namespace biasweat
