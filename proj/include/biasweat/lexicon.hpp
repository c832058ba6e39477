#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "biasweat/embedding.hpp"

namespace biasweat {

struct WordSet {
  std::string name;
  std::vector<std::string> tokens;  // distinct, lowercase, no whitespace
};

enum class BalancePolicy { error, truncate_seeded };

struct BiasTestSpec {
  std::string test_name;
  WordSet targets_x, targets_y, attrs_a, attrs_b;
  BalancePolicy balance_policy = BalancePolicy::truncate_seeded;
  std::size_t min_set_size = 2;
};

struct AuditEntry {
  std::string token;
  enum class Reason { oov, dropped_for_balance } reason;
  std::string which_set;
};

struct ResolvedTest {
  BiasTestSpec spec;
  std::vector<std::string> x_tokens, y_tokens, a_tokens, b_tokens;
  std::vector<std::vector<double>> x_vectors, y_vectors, a_vectors, b_vectors;
  std::size_t m = 0;  // |X| = |Y| after resolution
  std::size_t n = 0;  // |A| = |B| after resolution
  std::vector<AuditEntry> audit;
  std::vector<std::string> warnings;
};

/// Named word sets shipped with the library, keyed by lowercase id.
const std::map<std::string, WordSet>& builtin_wordsets();

/// Throws UnknownBuiltin if `name` is not registered.
const WordSet& builtin_wordset(const std::string& name);

void validate_wordset(const WordSet& set);
void validate_spec(const BiasTestSpec& spec);

struct BalanceResult {
  std::vector<std::string> p, q;
  std::vector<AuditEntry> audit;
};

/// Equalizes two resolved token lists. Under truncate_seeded the longer
/// list loses tokens by a seeded uniform draw without replacement; every
/// removal is audited. Never removes from the shorter list.
BalanceResult balance(const std::vector<std::string>& set_p, const std::vector<std::string>& set_q,
                      const std::string& p_name, const std::string& q_name, BalancePolicy policy,
                      std::uint64_t seed, std::size_t min_set_size);

/// OOV removal, then X/Y and A/B balancing. Deterministic in (spec, table, seed).
ResolvedTest resolve(const BiasTestSpec& spec, const EmbeddingTable& table, std::uint64_t seed);

}  // namespace biasweat
