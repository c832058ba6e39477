#include "biasweat/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace biasweat {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  throw Error(Errc::SchemaViolation, path + ": " + msg);
}

WordSet parse_wordset(const json& j, const std::string& jpath, const std::string& default_name) {
  if (j.is_string()) return builtin_wordset(j.get<std::string>());
  if (j.is_array()) {
    WordSet set{default_name, {}};
    for (const auto& t : j) {
      if (!t.is_string()) schema_error(jpath, "inline word set entries must be strings");
      set.tokens.push_back(t.get<std::string>());
    }
    validate_wordset(set);
    return set;
  }
  schema_error(jpath, "word set must be a builtin name or a token array");
}

BiasTestSpec parse_test(const json& j, const std::string& jpath) {
  if (!j.is_object()) schema_error(jpath, "test must be an object");
  BiasTestSpec spec;
  spec.test_name = j.value("name", "unnamed");
  for (const char* key : {"x", "y", "a", "b"}) {
    if (!j.contains(key)) schema_error(jpath, std::string("missing '") + key + "'");
  }
  spec.targets_x = parse_wordset(j["x"], jpath + ".x", spec.test_name + ":x");
  spec.targets_y = parse_wordset(j["y"], jpath + ".y", spec.test_name + ":y");
  spec.attrs_a = parse_wordset(j["a"], jpath + ".a", spec.test_name + ":a");
  spec.attrs_b = parse_wordset(j["b"], jpath + ".b", spec.test_name + ":b");
  std::string policy = j.value("balance_policy", "truncate_seeded");
  if (policy == "error")
    spec.balance_policy = BalancePolicy::error;
  else if (policy == "truncate_seeded")
    spec.balance_policy = BalancePolicy::truncate_seeded;
  else
    schema_error(jpath + ".balance_policy", "expected 'error' or 'truncate_seeded'");
  spec.min_set_size = j.value("min_set_size", 2u);
  validate_spec(spec);
  return spec;
}

PermutationPlan parse_permutation(const json& j, const std::string& jpath) {
  PermutationPlan plan;
  if (j.is_null()) return plan;
  if (!j.is_object()) schema_error(jpath, "permutation must be an object");
  std::string mode = j.value("mode", "auto");
  if (mode == "exact") plan.mode = PermutationMode::exact;
  else if (mode == "mc") plan.mode = PermutationMode::mc;
  else if (mode == "auto") plan.mode = PermutationMode::auto_select;
  else schema_error(jpath + ".mode", "expected exact|mc|auto");
  std::string cmp = j.value("comparator", "geq");
  if (cmp == "geq") plan.comparator = Comparator::geq;
  else if (cmp == "gt") plan.comparator = Comparator::gt;
  else schema_error(jpath + ".comparator", "expected geq|gt");
  std::string axis = j.value("axis", "targets");
  if (axis == "targets") plan.axis = PermutationAxis::targets;
  else if (axis == "attributes") plan.axis = PermutationAxis::attributes;
  else schema_error(jpath + ".axis", "expected targets|attributes");
  plan.draws = j.value("draws", std::uint64_t{100000});
  plan.max_exact_partitions = j.value("max_exact_partitions", std::uint64_t{1000000});
  return plan;
}

}  // namespace

BiasTestSpec parse_test_config_entry(const std::string& json_text) {
  auto j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::SchemaViolation, "invalid JSON test entry");
  return parse_test(j, "$");
}

SuiteConfig parse_suite_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::SchemaViolation, path + ": invalid JSON");

  SuiteConfig config;
  if (!j.contains("embeddings") || !j["embeddings"].is_array() || j["embeddings"].empty())
    schema_error("$.embeddings", "need a nonempty embedding array");
  for (std::size_t i = 0; i < j["embeddings"].size(); ++i) {
    const auto& e = j["embeddings"][i];
    std::string jpath = "$.embeddings[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("name") || !e.contains("path"))
      schema_error(jpath, "embedding needs 'name' and 'path'");
    EmbeddingRef ref;
    ref.name = e["name"].get<std::string>();
    ref.path = e["path"].get<std::string>();
    ref.format = e.value("format", "glove");
    if (ref.format != "glove" && ref.format != "word2vec")
      schema_error(jpath + ".format", "expected glove|word2vec");
    ref.lowercase = e.value("lowercase", true);
    config.embeddings.push_back(std::move(ref));
  }

  if (!j.contains("tests") || !j["tests"].is_array() || j["tests"].empty())
    throw Error(Errc::EmptySuite, path + ": no tests configured");
  for (std::size_t i = 0; i < j["tests"].size(); ++i) {
    const auto& t = j["tests"][i];
    std::string jpath = "$.tests[" + std::to_string(i) + "]";
    SuiteTest st;
    st.spec = parse_test(t, jpath);
    st.seed = t.value("seed", std::uint64_t{1});
    if (t.contains("embeddings")) {
      for (const auto& name : t["embeddings"]) st.embeddings.push_back(name.get<std::string>());
    }
    if (t.contains("expected")) {
      for (const auto& [emb, exp] : t["expected"].items()) {
        SuiteTest::Expected e;
        e.embedding = emb;
        if (exp.contains("d")) e.d = exp["d"].get<double>();
        if (exp.contains("p")) e.p = exp["p"].get<double>();
        st.expected.push_back(std::move(e));
      }
    }
    config.tests.push_back(std::move(st));
  }

  config.permutation = parse_permutation(j.value("permutation", json()), "$.permutation");
  std::string conv = j.value("std_convention", "population");
  if (conv == "population") config.std_convention = StdConvention::population;
  else if (conv == "sample") config.std_convention = StdConvention::sample;
  else schema_error("$.std_convention", "expected population|sample");
  return config;
}

namespace {

std::string summarize_audit(const ResolvedTest& rt) {
  if (rt.audit.empty()) return "";
  std::ostringstream os;
  for (std::size_t i = 0; i < rt.audit.size(); ++i) {
    if (i) os << "; ";
    const auto& e = rt.audit[i];
    os << e.token << ":"
       << (e.reason == AuditEntry::Reason::oov ? "oov" : "dropped_for_balance") << ":"
       << e.which_set;
  }
  return os.str();
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& config) {
  if (config.tests.empty()) throw Error(Errc::EmptySuite, "no tests configured");

  // load each available embedding once
  std::map<std::string, EmbeddingTable> tables;
  std::map<std::string, std::string> unavailable;
  for (const auto& ref : config.embeddings) {
    if (!std::filesystem::exists(ref.path)) {
      unavailable[ref.name] = "skipped: embedding unavailable (" + ref.path + ")";
      continue;
    }
    LoadOptions opts;
    opts.lowercase = ref.lowercase;
    tables.emplace(ref.name, ref.format == "word2vec" ? load_word2vec_text(ref.path, opts)
                                                      : load_glove_text(ref.path, opts));
  }

  SuiteReport report;
  report.format_meta = "rows=tests x embeddings, config order";
  for (const auto& test : config.tests) {
    for (const auto& ref : config.embeddings) {
      if (!test.embeddings.empty() &&
          std::find(test.embeddings.begin(), test.embeddings.end(), ref.name) ==
              test.embeddings.end())
        continue;
      SuiteRow row;
      row.embedding_name = ref.name;
      row.test_name = test.spec.test_name;
      for (const auto& e : test.expected) {
        if (e.embedding == ref.name) {
          row.expected_d = e.d;
          row.expected_p = e.p;
        }
      }
      if (auto it = unavailable.find(ref.name); it != unavailable.end()) {
        row.status = it->second;
        report.rows.push_back(std::move(row));
        continue;
      }
      try {
        const auto& table = tables.at(ref.name);
        ResolvedTest rt = resolve(test.spec, table, test.seed);
        PermutationPlan plan = config.permutation;
        plan.seed = test.seed;
        row.result = run_weat(rt, plan, config.std_convention);
        row.audit_summary = summarize_audit(rt);
        row.status = "ok";
      } catch (const Error& err) {
        row.status = std::string("error: ") + errc_name(err.code()) + ": " + err.what();
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string format_d(double d, Rounding rounding) {
  char buf[64];
  if (rounding == Rounding::full) {
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
  }
  // truncate toward zero at 2 decimals; epsilon keeps exact hundredths stable
  double scaled = d * 100.0 + (d >= 0 ? 1e-9 : -1e-9);
  std::snprintf(buf, sizeof(buf), "%.2f", std::trunc(scaled) / 100.0);
  return buf;
}

std::string format_p(double p, Rounding rounding) {
  char buf[64];
  if (rounding == Rounding::full) {
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    return buf;
  }
  if (p < 0.01) return "<10^-2";
  double up = std::ceil(p * 1000.0 - 1e-9) / 1000.0;
  std::snprintf(buf, sizeof(buf), "%.3f", up);
  return buf;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string report_to_csv(const SuiteReport& report, Rounding rounding) {
  std::ostringstream os;
  os << "embedding,test,d,p,m,n,method,seed,status,audit\n";
  for (const auto& row : report.rows) {
    os << csv_quote(row.embedding_name) << ',' << csv_quote(row.test_name) << ',';
    if (row.result) {
      const auto& r = *row.result;
      os << format_d(r.effect_size_d, rounding) << ',' << format_p(r.p_value, rounding) << ','
         << r.m << ',' << r.n << ',' << r.method << ',' << r.seed;
    } else {
      os << ",,,,,";
    }
    os << ',' << csv_quote(row.status) << ',' << csv_quote(row.audit_summary) << '\n';
  }
  return os.str();
}

void emit_report_csv(const SuiteReport& report, const std::string& path, Rounding rounding) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoFailure, "cannot write " + path);
  out << report_to_csv(report, rounding);
  if (!out) throw Error(Errc::IoFailure, "write failure on " + path);
}

namespace {

nlohmann::json result_to_json(const WeatResult& r) {
  nlohmann::json j;
  j["d"] = r.effect_size_d;
  j["p"] = r.p_value;
  j["statistic_observed"] = r.statistic_observed;
  j["m"] = r.m;
  j["n"] = r.n;
  j["method"] = r.method;
  j["partitions_or_draws"] = r.partitions_or_draws;
  if (r.mc_standard_error) j["mc_standard_error"] = *r.mc_standard_error;
  j["seed"] = r.seed;
  j["std_convention"] = r.std_convention == StdConvention::population ? "population" : "sample";
  j["axis"] = r.axis == PermutationAxis::targets ? "targets" : "attributes";
  j["comparator"] = r.comparator == Comparator::geq ? "geq" : "gt";
  j["per_word_scores"] = nlohmann::json::object();
  for (const auto& [tok, s] : r.per_word_scores) j["per_word_scores"][tok] = s;
  j["notes"] = r.notes;
  return j;
}

}  // namespace

void emit_report_json(const SuiteReport& report, const std::string& path, Rounding rounding) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json j;
    j["embedding"] = row.embedding_name;
    j["test"] = row.test_name;
    j["status"] = row.status;
    if (row.audit_summary.size()) j["audit"] = row.audit_summary;
    if (row.expected_d) j["expected_d"] = *row.expected_d;
    if (row.expected_p) j["expected_p"] = *row.expected_p;
    if (row.result) {
      j["result"] = result_to_json(*row.result);
      if (rounding == Rounding::publication) {
        j["d_rounded"] = format_d(row.result->effect_size_d, Rounding::publication);
        j["p_rounded"] = format_p(row.result->p_value, Rounding::publication);
      }
    }
    rows.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoFailure, "cannot write " + path);
  out << rows.dump(2) << '\n';
  if (!out) throw Error(Errc::IoFailure, "write failure on " + path);
}

void emit_plot_data(const SuiteReport& report, const std::string& path) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    if (!row.result) continue;
    const auto& r = *row.result;
    rows.push_back({{"embedding", row.embedding_name},
                    {"test", row.test_name},
                    {"d", r.effect_size_d},
                    {"p", r.p_value},
                    {"significant", std::abs(r.effect_size_d) >= 0.80 && r.p_value < 0.05}});
  }
  if (rows.empty()) throw Error(Errc::NoComputedRows, "no computed rows to plot");
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoFailure, "cannot write " + path);
  out << rows.dump(2) << '\n';
  if (!out) throw Error(Errc::IoFailure, "write failure on " + path);
}

}  // namespace biasweat
