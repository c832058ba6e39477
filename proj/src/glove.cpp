#include "biasweat/glove.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace biasweat {

void GloveConfig::validate() const {
  if (dimension == 0 || window == 0 || epochs == 0 || x_max <= 0 || learning_rate <= 0 ||
      alpha <= 0 || alpha > 1)
    throw Error(Errc::SchemaViolation, "invalid GloVe configuration");
}

EmbeddingTable train_glove(const CooccurrenceTable& coocc, const Vocabulary& vocab,
                           const GloveConfig& config, std::vector<double>* epoch_losses) {
  config.validate();
  if (coocc.counts.empty()) throw Error(Errc::EmptyTable, "empty co-occurrence table");

  const std::size_t vocab_size = coocc.vocab_size;
  const std::size_t dim = config.dimension;

  struct Pair {
    std::uint32_t i, j;
    double log_count, weight;
  };
  std::vector<Pair> pairs;
  pairs.reserve(coocc.counts.size());
  for (const auto& [key, count] : coocc.counts) {
    auto i = static_cast<std::uint32_t>(key / vocab_size);
    auto j = static_cast<std::uint32_t>(key % vocab_size);
    double f = count < config.x_max ? std::pow(count / config.x_max, config.alpha) : 1.0;
    pairs.push_back({i, j, std::log(count), f});
  }
  // hash-map iteration order is not stable; sort for determinism
  std::sort(pairs.begin(), pairs.end(), [vocab_size](const Pair& a, const Pair& b) {
    return static_cast<std::uint64_t>(a.i) * vocab_size + a.j <
           static_cast<std::uint64_t>(b.i) * vocab_size + b.j;
  });

  std::mt19937_64 rng(config.seed);
  const double init = 0.5 / static_cast<double>(dim);
  std::uniform_real_distribution<double> uni(-init, init);

  std::vector<double> w_main(vocab_size * dim), w_ctx(vocab_size * dim);
  std::vector<double> b_main(vocab_size), b_ctx(vocab_size);
  for (auto& v : w_main) v = uni(rng);
  for (auto& v : w_ctx) v = uni(rng);
  for (auto& v : b_main) v = uni(rng);
  for (auto& v : b_ctx) v = uni(rng);

  std::vector<double> g_main(vocab_size * dim, 1.0), g_ctx(vocab_size * dim, 1.0);
  std::vector<double> gb_main(vocab_size, 1.0), gb_ctx(vocab_size, 1.0);

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);

  const double lr = config.learning_rate;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0;
    for (std::size_t k : order) {
      const Pair& p = pairs[k];
      double* wi = w_main.data() + static_cast<std::size_t>(p.i) * dim;
      double* wj = w_ctx.data() + static_cast<std::size_t>(p.j) * dim;
      double diff = b_main[p.i] + b_ctx[p.j] - p.log_count;
      for (std::size_t d = 0; d < dim; ++d) diff += wi[d] * wj[d];
      double wdiff = p.weight * diff;
      loss_sum += 0.5 * wdiff * diff;
      if (!std::isfinite(loss_sum))
        throw Error(Errc::NonFiniteLoss, "training diverged at epoch " +
                                             std::to_string(epoch + 1) +
                                             "; try a smaller learning_rate");

      double* gi = g_main.data() + static_cast<std::size_t>(p.i) * dim;
      double* gj = g_ctx.data() + static_cast<std::size_t>(p.j) * dim;
      for (std::size_t d = 0; d < dim; ++d) {
        double grad_i = wdiff * wj[d];
        double grad_j = wdiff * wi[d];
        wi[d] -= lr * grad_i / std::sqrt(gi[d]);
        wj[d] -= lr * grad_j / std::sqrt(gj[d]);
        gi[d] += grad_i * grad_i;
        gj[d] += grad_j * grad_j;
      }
      b_main[p.i] -= lr * wdiff / std::sqrt(gb_main[p.i]);
      b_ctx[p.j] -= lr * wdiff / std::sqrt(gb_ctx[p.j]);
      gb_main[p.i] += wdiff * wdiff;
      gb_ctx[p.j] += wdiff * wdiff;
    }
    if (epoch_losses)
      epoch_losses->push_back(loss_sum / static_cast<double>(pairs.size()));
  }

  std::vector<double> matrix(vocab_size * dim);
  for (std::size_t i = 0; i < vocab_size * dim; ++i) matrix[i] = w_main[i] + w_ctx[i];
  return EmbeddingTable(dim, vocab.tokens, std::move(matrix),
                        "trained: glove dim=" + std::to_string(dim) +
                            " epochs=" + std::to_string(config.epochs) +
                            " seed=" + std::to_string(config.seed),
                        /*lowercased=*/true);
}

}  // namespace biasweat
