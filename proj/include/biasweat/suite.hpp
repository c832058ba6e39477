#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biasweat/weat.hpp"

namespace biasweat {

struct EmbeddingRef {
  std::string name;
  std::string path;
  std::string format = "glove";  // or "word2vec"
  bool lowercase = true;
};

struct SuiteTest {
  BiasTestSpec spec;
  std::uint64_t seed = 1;
  std::vector<std::string> embeddings;  // empty = all
  struct Expected {
    std::string embedding;
    std::optional<double> d, p;
  };
  std::vector<Expected> expected;
};

struct SuiteConfig {
  std::vector<EmbeddingRef> embeddings;
  std::vector<SuiteTest> tests;
  PermutationPlan permutation;
  StdConvention std_convention = StdConvention::population;
};

/// Parses the JSON experiment schema; word sets may be builtin names or
/// inline token arrays. Schema errors carry the offending JSON path.
SuiteConfig parse_suite_config(const std::string& path);

BiasTestSpec parse_test_config_entry(const std::string& json_text);

struct SuiteRow {
  std::string embedding_name;
  std::string test_name;
  std::string status;  // "ok", "skipped: ...", or "error: ..."
  std::optional<WeatResult> result;
  std::string audit_summary;
  std::optional<double> expected_d, expected_p;
};

struct SuiteReport {
  std::vector<SuiteRow> rows;
  std::string format_meta;
};

SuiteReport run_suite(const SuiteConfig& config);

enum class Rounding { publication, full };

/// `publication` rounding truncates d toward zero at 2 decimals and rounds p up at
/// 3 decimals, rendering p < 0.01 as "<10^-2".
std::string format_d(double d, Rounding rounding);
std::string format_p(double p, Rounding rounding);

void emit_report_csv(const SuiteReport& report, const std::string& path, Rounding rounding);
void emit_report_json(const SuiteReport& report, const std::string& path, Rounding rounding);

/// JSON array of {embedding, test, d, p, significant} for external plotters;
/// significant means |d| >= 0.80 and p < 0.05.
void emit_plot_data(const SuiteReport& report, const std::string& path);

std::string report_to_csv(const SuiteReport& report, Rounding rounding);

}  // namespace biasweat
