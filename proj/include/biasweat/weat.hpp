#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "biasweat/lexicon.hpp"

namespace biasweat {

enum class Comparator { geq, gt };
enum class PermutationMode { exact, mc, auto_select };
enum class PermutationAxis { targets, attributes };
enum class StdConvention { population, sample };

struct PermutationPlan {
  PermutationMode mode = PermutationMode::auto_select;
  PermutationAxis axis = PermutationAxis::targets;
  Comparator comparator = Comparator::geq;
  std::uint64_t draws = 100000;  // MC only
  std::uint64_t seed = 0;
  std::uint64_t max_exact_partitions = 1000000;
};

struct WeatResult {
  double effect_size_d = 0;
  double p_value = 1;
  double statistic_observed = 0;
  std::size_t m = 0, n = 0;
  std::string method;  // "exact" or "mc"
  std::uint64_t partitions_or_draws = 0;
  std::optional<double> mc_standard_error;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> per_word_scores;
  StdConvention std_convention = StdConvention::population;
  PermutationAxis axis = PermutationAxis::targets;
  Comparator comparator = Comparator::geq;
  std::vector<std::string> notes;
};

using Vectors = std::vector<std::vector<double>>;

/// s(w, A, B): sum of cosines to A minus sum of cosines to B.
double association(std::span<const double> w, const Vectors& attrs_a, const Vectors& attrs_b);

/// Mean association over X minus mean association over Y; the permutation statistic.
double differential(const Vectors& x, const Vectors& y, const Vectors& a, const Vectors& b);

/// differential / stddev of the 2m association scores of X u Y.
double effect_size(const Vectors& x, const Vectors& y, const Vectors& a, const Vectors& b,
                   StdConvention convention = StdConvention::population);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Enumerates all C(2m, m) equal-split partitions of X u Y.
std::pair<double, std::uint64_t> exact_p_value(const Vectors& x, const Vectors& y,
                                               const Vectors& a, const Vectors& b,
                                               Comparator comparator = Comparator::geq,
                                               std::uint64_t max_partitions = 1000000);

struct McPValue {
  double p;
  double standard_error;
};

/// Seeded uniform sampling of equal-split partitions, add-one smoothed:
/// p = (1 + hits) / (1 + draws).
McPValue mc_p_value(const Vectors& x, const Vectors& y, const Vectors& a, const Vectors& b,
                    std::uint64_t draws, std::uint64_t seed,
                    Comparator comparator = Comparator::geq);

WeatResult run_weat(const ResolvedTest& resolved, const PermutationPlan& plan = {},
                    StdConvention convention = StdConvention::population);

}  // namespace biasweat
