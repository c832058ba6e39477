#include "biasweat/weat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace biasweat {

double association(std::span<const double> w, const Vectors& attrs_a, const Vectors& attrs_b) {
  if (attrs_a.empty() || attrs_a.size() != attrs_b.size())
    throw Error(Errc::UnequalSets, "association: |A| and |B| must be equal and nonzero");
  double s = 0;
  for (const auto& a : attrs_a) s += cosine(w, a);
  for (const auto& b : attrs_b) s -= cosine(w, b);
  return s;
}

namespace {

// Association score of every target in X followed by Y; the statistic for any
// equal split of the pooled scores reduces to sums over this array.
std::vector<double> pooled_scores(const Vectors& x, const Vectors& y, const Vectors& a,
                                  const Vectors& b) {
  if (x.empty() || x.size() != y.size())
    throw Error(Errc::UnequalSets, "|X| and |Y| must be equal and nonzero");
  std::vector<double> s;
  s.reserve(x.size() + y.size());
  for (const auto& w : x) s.push_back(association(w, a, b));
  for (const auto& w : y) s.push_back(association(w, a, b));
  return s;
}

// stat(S) = mean over S minus mean over complement, |S| = k, scores length 2k.
struct SplitStatistic {
  std::vector<double> scores;
  double total;
  double scale;  // 1/k for mean-difference statistics

  explicit SplitStatistic(std::vector<double> v, double scale_)
      : scores(std::move(v)),
        total(std::accumulate(scores.begin(), scores.end(), 0.0)),
        scale(scale_) {}

  double of_subset_sum(double subset_sum) const { return scale * (2.0 * subset_sum - total); }

  double observed() const {
    double s = 0;
    for (std::size_t i = 0; i < scores.size() / 2; ++i) s += scores[i];
    return of_subset_sum(s);
  }
};

// Tie guard: permutation statistics are sums taken in different orders, so a
// re-drawn observed partition can differ from `observed` by a few ulps.
bool passes(double stat, double observed, Comparator cmp) {
  double eps = 1e-9 * (1.0 + std::abs(observed));
  return cmp == Comparator::geq ? stat >= observed - eps : stat > observed + eps;
}

// Counts the k-subsets of the pooled scores whose statistic passes the
// comparator against the observed split.
std::uint64_t count_exact(const SplitStatistic& st, Comparator cmp, double observed) {
  const std::size_t k = st.scores.size() / 2;
  const std::size_t total_n = st.scores.size();
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::uint64_t hits = 0;
  for (;;) {
    double sum = 0;
    for (std::size_t i : idx) sum += st.scores[i];
    if (passes(st.of_subset_sum(sum), observed, cmp)) ++hits;
    // next combination in lexicographic order
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == total_n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return hits;
}

McPValue sample_mc(const SplitStatistic& st, Comparator cmp, double observed,
                   std::uint64_t draws, std::uint64_t seed) {
  const std::size_t k = st.scores.size() / 2;
  std::vector<std::size_t> idx(st.scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t d = 0; d < draws; ++d) {
    // partial Fisher-Yates: first k entries form a uniform k-subset
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    double sum = 0;
    for (std::size_t i = 0; i < k; ++i) sum += st.scores[idx[i]];
    if (passes(st.of_subset_sum(sum), observed, cmp)) ++hits;
  }
  double p = (1.0 + static_cast<double>(hits)) / (1.0 + static_cast<double>(draws));
  double se = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
  return {p, se};
}

double stddev(const std::vector<double>& v, StdConvention conv) {
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  std::size_t denom = conv == StdConvention::population ? v.size() : v.size() - 1;
  return std::sqrt(ss / static_cast<double>(denom));
}

}  // namespace

double differential(const Vectors& x, const Vectors& y, const Vectors& a, const Vectors& b) {
  SplitStatistic st(pooled_scores(x, y, a, b), 1.0 / static_cast<double>(x.size()));
  return st.observed();
}

double effect_size(const Vectors& x, const Vectors& y, const Vectors& a, const Vectors& b,
                   StdConvention convention) {
  if (x.size() < 2)
    throw Error(Errc::ResultTooSmall, "effect size needs m >= 2");
  SplitStatistic st(pooled_scores(x, y, a, b), 1.0 / static_cast<double>(x.size()));
  double sigma = stddev(st.scores, convention);
  if (sigma == 0.0)
    throw Error(Errc::DegenerateSpread, "all association scores identical; sigma = 0");
  return st.observed() / sigma;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (n >= 64) return UINT64_MAX;  // saturate; only compared against partition limits
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // stays exact for every count this library enumerates
    r = r * (n - k + i) / i;
  }
  return r;
}

std::pair<double, std::uint64_t> exact_p_value(const Vectors& x, const Vectors& y,
                                               const Vectors& a, const Vectors& b,
                                               Comparator comparator,
                                               std::uint64_t max_partitions) {
  SplitStatistic st(pooled_scores(x, y, a, b), 1.0 / static_cast<double>(x.size()));
  std::uint64_t total = binomial(2 * x.size(), x.size());
  if (total > max_partitions)
    throw Error(Errc::TooManyPartitions,
                std::to_string(total) + " partitions exceed limit; use Monte Carlo");
  std::uint64_t hits = count_exact(st, comparator, st.observed());
  return {static_cast<double>(hits) / static_cast<double>(total), total};
}

McPValue mc_p_value(const Vectors& x, const Vectors& y, const Vectors& a, const Vectors& b,
                    std::uint64_t draws, std::uint64_t seed, Comparator comparator) {
  if (draws < 1000)
    throw Error(Errc::SchemaViolation, "mc_p_value requires draws >= 1000");
  SplitStatistic st(pooled_scores(x, y, a, b), 1.0 / static_cast<double>(x.size()));
  return sample_mc(st, comparator, st.observed(), draws, seed);
}

WeatResult run_weat(const ResolvedTest& resolved, const PermutationPlan& plan,
                    StdConvention convention) {
  WeatResult result;
  result.m = resolved.m;
  result.n = resolved.n;
  result.seed = plan.seed;
  result.std_convention = convention;
  result.axis = plan.axis;
  result.comparator = plan.comparator;

  SplitStatistic target_stat(
      pooled_scores(resolved.x_vectors, resolved.y_vectors, resolved.a_vectors,
                    resolved.b_vectors),
      1.0 / static_cast<double>(resolved.m));

  for (std::size_t i = 0; i < resolved.m; ++i)
    result.per_word_scores.emplace_back(resolved.x_tokens[i], target_stat.scores[i]);
  for (std::size_t i = 0; i < resolved.m; ++i)
    result.per_word_scores.emplace_back(resolved.y_tokens[i], target_stat.scores[resolved.m + i]);

  result.statistic_observed = target_stat.observed();
  double sigma = stddev(target_stat.scores, convention);
  if (sigma == 0.0)
    throw Error(Errc::DegenerateSpread, "all association scores identical; sigma = 0");
  result.effect_size_d = result.statistic_observed / sigma;

  // The permutation distribution depends on the chosen axis. Either way the
  // statistic is linear in a pooled score array, so one enumerator serves both.
  SplitStatistic perm_stat = [&] {
    if (plan.axis == PermutationAxis::targets) return target_stat;
    // per-attribute contribution to the statistic: mean cos to X minus mean cos to Y
    std::vector<double> g;
    auto contribution = [&](const std::vector<double>& attr) {
      double cx = 0, cy = 0;
      for (const auto& xv : resolved.x_vectors) cx += cosine(xv, attr);
      for (const auto& yv : resolved.y_vectors) cy += cosine(yv, attr);
      return (cx - cy) / static_cast<double>(resolved.m);
    };
    for (const auto& a : resolved.a_vectors) g.push_back(contribution(a));
    for (const auto& b : resolved.b_vectors) g.push_back(contribution(b));
    return SplitStatistic(std::move(g), 1.0);
  }();

  std::uint64_t half = perm_stat.scores.size() / 2;
  std::uint64_t total = binomial(2 * half, half);
  bool exact = plan.mode == PermutationMode::exact ||
               (plan.mode == PermutationMode::auto_select && total <= plan.max_exact_partitions);
  double perm_observed = perm_stat.observed();
  if (exact) {
    if (total > plan.max_exact_partitions)
      throw Error(Errc::TooManyPartitions,
                  std::to_string(total) + " partitions exceed limit; use Monte Carlo");
    std::uint64_t hits = count_exact(perm_stat, plan.comparator, perm_observed);
    result.p_value = static_cast<double>(hits) / static_cast<double>(total);
    result.method = "exact";
    result.partitions_or_draws = total;
  } else {
    auto mc = sample_mc(perm_stat, plan.comparator, perm_observed, plan.draws, plan.seed);
    result.p_value = mc.p;
    result.mc_standard_error = mc.standard_error;
    result.method = "mc";
    result.partitions_or_draws = plan.draws;
  }

  result.notes = resolved.warnings;
  result.notes.push_back(
      plan.axis == PermutationAxis::targets
          ? "permutation axis: target partitions (attribute axis available via axis option)"
          : "permutation axis: attribute partitions (target axis is the default)");
  return result;
}

}  // namespace biasweat
