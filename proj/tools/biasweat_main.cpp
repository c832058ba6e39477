#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "biasweat/glove.hpp"
#include "biasweat/suite.hpp"

namespace bw = biasweat;

namespace {

bw::WordSet set_ref(const std::string& ref, const std::string& fallback_name) {
  const auto& reg = bw::builtin_wordsets();
  if (reg.count(ref)) return reg.at(ref);
  if (ref.find(',') != std::string::npos) {
    bw::WordSet set{fallback_name, {}};
    std::size_t start = 0;
    while (start <= ref.size()) {
      std::size_t comma = ref.find(',', start);
      std::string tok = ref.substr(start, comma == std::string::npos ? comma : comma - start);
      if (!tok.empty()) set.tokens.push_back(tok);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    bw::validate_wordset(set);
    return set;
  }
  throw bw::Error(bw::Errc::UnknownBuiltin,
                  "'" + ref + "' is not a builtin word set; inline sets are comma-separated");
}

bw::EmbeddingTable load_table(const std::string& path, const std::string& format,
                              bool lowercase) {
  bw::LoadOptions opts;
  opts.lowercase = lowercase;
  return format == "word2vec" ? bw::load_word2vec_text(path, opts)
                              : bw::load_glove_text(path, opts);
}

void print_result(const bw::WeatResult& r, bool as_json) {
  if (as_json) {
    nlohmann::json j;
    j["d"] = r.effect_size_d;
    j["p"] = r.p_value;
    j["statistic"] = r.statistic_observed;
    j["m"] = r.m;
    j["n"] = r.n;
    j["method"] = r.method;
    j["partitions_or_draws"] = r.partitions_or_draws;
    if (r.mc_standard_error) j["mc_standard_error"] = *r.mc_standard_error;
    j["seed"] = r.seed;
    j["std_convention"] =
        r.std_convention == bw::StdConvention::population ? "population" : "sample";
    j["axis"] = r.axis == bw::PermutationAxis::targets ? "targets" : "attributes";
    j["comparator"] = r.comparator == bw::Comparator::geq ? "geq" : "gt";
    j["notes"] = r.notes;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "d       = " << r.effect_size_d << '\n'
              << "p       = " << r.p_value << "  (" << r.method << ", "
              << r.partitions_or_draws
              << (r.method == "exact" ? " partitions" : " draws") << ")\n"
              << "m, n    = " << r.m << ", " << r.n << '\n'
              << "seed    = " << r.seed << '\n';
    for (const auto& note : r.notes) std::cout << "note: " << note << '\n';
  }
}

int run(int argc, char** argv) {
  CLI::App app{"WEAT bias measurement for word embeddings"};
  app.require_subcommand(1);
  app.fallthrough();

  // Worker cap for suite cells and training. Execution is currently
  // sequential, which is the bit-deterministic path; the flag and the
  // BIASWEAT_THREADS env var bound any future parallelism.
  unsigned threads = 1;
  if (const char* env = std::getenv("BIASWEAT_THREADS")) threads = std::atoi(env);
  app.add_option("--threads", threads, "worker cap (1 = bit-deterministic)")
      ->check(CLI::PositiveNumber);

  // weat
  auto* weat = app.add_subcommand("weat", "run a single bias test");
  std::string emb_path, emb_format = "glove";
  bool lowercase = true, as_json = false;
  std::string x_ref, y_ref, a_ref, b_ref;
  std::string mode = "auto", comparator = "geq", axis = "targets", convention = "population";
  std::uint64_t draws = 100000, seed = 1, max_exact = 1000000;
  weat->add_option("--embeddings", emb_path, "embedding file")->required();
  weat->add_option("--format", emb_format, "glove|word2vec");
  weat->add_flag("--no-lowercase", [&](std::size_t) { lowercase = false; },
                 "keep token case as stored");
  weat->add_option("--x", x_ref, "target set X (builtin name or comma list)")->required();
  weat->add_option("--y", y_ref, "target set Y")->required();
  weat->add_option("--a", a_ref, "attribute set A")->required();
  weat->add_option("--b", b_ref, "attribute set B")->required();
  weat->add_option("--mode", mode, "exact|mc|auto");
  weat->add_option("--draws", draws, "Monte Carlo draws");
  weat->add_option("--comparator", comparator, "geq|gt");
  weat->add_option("--axis", axis, "targets|attributes");
  weat->add_option("--std", convention, "population|sample");
  weat->add_option("--seed", seed, "seed for balancing and sampling");
  weat->add_option("--max-exact-partitions", max_exact, "exact enumeration cap");
  weat->add_flag("--json", as_json, "emit JSON");

  // suite
  auto* suite = app.add_subcommand("suite", "run an experiment suite config");
  std::string config_path, out_path = "-", out_format = "csv", rounding = "full";
  std::string plot_path;
  suite->add_option("config", config_path, "suite config JSON")->required();
  suite->add_option("--out", out_path, "output file ('-' for stdout CSV)");
  suite->add_option("--format", out_format, "csv|json");
  suite->add_option("--rounding", rounding, "publication|full");
  suite->add_option("--plot-data", plot_path, "also write plot-data JSON here");

  // train
  auto* train = app.add_subcommand("train", "train GloVe embeddings from a tweet corpus");
  std::string corpus_path, train_out, hashtag_filter, text_field = "full_text";
  bw::GloveConfig gcfg;
  bool no_strip_urls = false, drop_hashtags = false, drop_mentions = false, dedupe = false;
  train->add_option("input", corpus_path, "JSON-lines or plain-text corpus")->required();
  train->add_option("--out", train_out, "output embedding file")->required();
  train->add_option("--dim", gcfg.dimension, "embedding dimension");
  train->add_option("--window", gcfg.window, "symmetric context window");
  train->add_option("--x-max", gcfg.x_max, "weighting cutoff");
  train->add_option("--alpha", gcfg.alpha, "weighting exponent");
  train->add_option("--lr", gcfg.learning_rate, "learning rate");
  train->add_option("--epochs", gcfg.epochs, "training epochs");
  train->add_option("--min-count", gcfg.min_count, "vocabulary frequency floor");
  train->add_option("--seed", gcfg.seed, "init and shuffle seed");
  train->add_option("--hashtag-filter", hashtag_filter,
                    "builtin filter list name (anti_chinese_14) or comma list");
  train->add_option("--text-field", text_field, "JSON-lines text field");
  train->add_flag("--no-strip-urls", no_strip_urls, "keep URL tokens");
  train->add_flag("--drop-hashtags", drop_hashtags, "strip '#' markers");
  train->add_flag("--drop-mentions", drop_mentions, "strip '@' markers");
  train->add_flag("--dedupe-exact", dedupe, "drop byte-identical texts");

  // preprocess
  auto* prep = app.add_subcommand("preprocess", "tokenize a corpus and print token lines");
  std::string prep_in, prep_out = "-", prep_filter, prep_field = "full_text";
  bool prep_no_urls = false;
  prep->add_option("input", prep_in, "corpus file")->required();
  prep->add_option("--out", prep_out, "output path ('-' for stdout)");
  prep->add_option("--hashtag-filter", prep_filter, "filter list name or comma list");
  prep->add_option("--text-field", prep_field, "JSON-lines text field");
  prep->add_flag("--no-strip-urls", prep_no_urls, "keep URL tokens");

  // inspect
  auto* inspect = app.add_subcommand("inspect", "print embedding stats");
  std::string insp_path, insp_format = "glove", check_set;
  bool insp_lower = true;
  inspect->add_option("embedding", insp_path, "embedding file")->required();
  inspect->add_option("--format", insp_format, "glove|word2vec");
  inspect->add_option("--check-wordset", check_set, "builtin set to check for coverage");
  inspect->add_flag("--no-lowercase", [&](std::size_t) { insp_lower = false; },
                    "keep token case as stored");

  CLI11_PARSE(app, argc, argv);

  auto parse_plan = [&] {
    bw::PermutationPlan plan;
    plan.mode = mode == "exact"  ? bw::PermutationMode::exact
                : mode == "mc"   ? bw::PermutationMode::mc
                                 : bw::PermutationMode::auto_select;
    plan.comparator = comparator == "gt" ? bw::Comparator::gt : bw::Comparator::geq;
    plan.axis =
        axis == "attributes" ? bw::PermutationAxis::attributes : bw::PermutationAxis::targets;
    plan.draws = draws;
    plan.seed = seed;
    plan.max_exact_partitions = max_exact;
    return plan;
  };

  if (weat->parsed()) {
    auto table = load_table(emb_path, emb_format, lowercase);
    bw::BiasTestSpec spec;
    spec.test_name = "cli";
    spec.targets_x = set_ref(x_ref, "x");
    spec.targets_y = set_ref(y_ref, "y");
    spec.attrs_a = set_ref(a_ref, "a");
    spec.attrs_b = set_ref(b_ref, "b");
    auto resolved = bw::resolve(spec, table, seed);
    auto result = bw::run_weat(resolved, parse_plan(),
                               convention == "sample" ? bw::StdConvention::sample
                                                      : bw::StdConvention::population);
    print_result(result, as_json);
    return 0;
  }

  if (suite->parsed()) {
    auto config = bw::parse_suite_config(config_path);
    auto report = bw::run_suite(config);
    bw::Rounding r = rounding == "publication" ? bw::Rounding::publication : bw::Rounding::full;
    if (out_path == "-") {
      std::cout << bw::report_to_csv(report, r);
    } else if (out_format == "json") {
      bw::emit_report_json(report, out_path, r);
    } else {
      bw::emit_report_csv(report, out_path, r);
    }
    if (!plot_path.empty()) bw::emit_plot_data(report, plot_path);
    return 0;
  }

  auto make_filter = [](const std::string& ref) -> std::vector<std::string> {
    if (ref == "anti_chinese_14") return bw::anti_chinese_14();
    std::vector<std::string> tags;
    std::size_t start = 0;
    while (start <= ref.size()) {
      std::size_t comma = ref.find(',', start);
      std::string t = ref.substr(start, comma == std::string::npos ? comma : comma - start);
      if (!t.empty()) tags.push_back(t);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return tags;
  };

  if (train->parsed()) {
    bw::PreprocessRules rules;
    rules.strip_urls = !no_strip_urls;
    rules.keep_hashtags = !drop_hashtags;
    rules.keep_mentions = !drop_mentions;
    rules.dedupe_exact = dedupe;
    rules.text_field = text_field;
    auto corpus = bw::preprocess_tweets(corpus_path, rules);
    if (!hashtag_filter.empty()) {
      corpus = bw::filter_by_hashtags(corpus, make_filter(hashtag_filter));
      if (corpus.documents.empty())
        throw bw::Error(bw::Errc::EmptyCorpus, "hashtag filter left no documents");
    }
    auto vocab = bw::build_vocab(corpus, gcfg.min_count);
    auto coocc = bw::count_cooccurrence(corpus, vocab, gcfg.window);
    std::vector<double> losses;
    auto table = bw::train_glove(coocc, vocab, gcfg, &losses);
    for (std::size_t e = 0; e < losses.size(); ++e)
      std::cout << "epoch " << e + 1 << " loss " << losses[e] << '\n';
    bw::save_glove_text(table, train_out);
    std::cout << "wrote " << table.size() << " vectors (dim " << table.dimension() << ") to "
              << train_out << '\n';
    return 0;
  }

  if (prep->parsed()) {
    bw::PreprocessRules rules;
    rules.strip_urls = !prep_no_urls;
    rules.text_field = prep_field;
    auto corpus = bw::preprocess_tweets(prep_in, rules);
    if (!prep_filter.empty()) corpus = bw::filter_by_hashtags(corpus, make_filter(prep_filter));
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (prep_out != "-") {
      file.open(prep_out);
      if (!file) throw bw::Error(bw::Errc::IoFailure, "cannot write " + prep_out);
      out = &file;
    }
    for (const auto& doc : corpus.documents) {
      for (std::size_t i = 0; i < doc.size(); ++i) *out << (i ? " " : "") << doc[i];
      *out << '\n';
    }
    for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << '\n';
    return 0;
  }

  if (inspect->parsed()) {
    auto table = load_table(insp_path, insp_format, insp_lower);
    std::cout << "tokens    " << table.size() << '\n'
              << "dimension " << table.dimension() << '\n';
    if (!check_set.empty()) {
      const auto& set = bw::builtin_wordset(check_set);
      std::size_t present = 0;
      std::vector<std::string> missing;
      for (const auto& t : set.tokens) {
        if (table.contains(t)) ++present;
        else missing.push_back(t);
      }
      std::cout << check_set << ": " << present << "/" << set.tokens.size() << " present\n";
      for (const auto& t : missing) std::cout << "  missing " << t << '\n';
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const bw::Error& e) {
    std::cerr << "error: " << bw::errc_name(e.code()) << ": " << e.what() << '\n';
    return bw::errc_exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
