#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "biasweat/glove.hpp"
#include "biasweat/suite.hpp"

namespace py = pybind11;
namespace bw = biasweat;

namespace {

bw::WordSet as_wordset(const py::object& ref, const std::string& fallback_name) {
  if (py::isinstance<py::str>(ref)) return bw::builtin_wordset(ref.cast<std::string>());
  bw::WordSet set{fallback_name, ref.cast<std::vector<std::string>>()};
  bw::validate_wordset(set);
  return set;
}

py::dict result_to_dict(const bw::WeatResult& r) {
  py::dict d;
  d["d"] = r.effect_size_d;
  d["p"] = r.p_value;
  d["statistic"] = r.statistic_observed;
  d["m"] = r.m;
  d["n"] = r.n;
  d["method"] = r.method;
  d["partitions_or_draws"] = r.partitions_or_draws;
  if (r.mc_standard_error) d["mc_standard_error"] = *r.mc_standard_error;
  d["seed"] = r.seed;
  d["std_convention"] =
      r.std_convention == bw::StdConvention::population ? "population" : "sample";
  d["axis"] = r.axis == bw::PermutationAxis::targets ? "targets" : "attributes";
  d["comparator"] = r.comparator == bw::Comparator::geq ? "geq" : "gt";
  py::dict scores;
  for (const auto& [tok, s] : r.per_word_scores) scores[py::str(tok)] = s;
  d["per_word_scores"] = scores;
  d["notes"] = r.notes;
  return d;
}

bw::PermutationPlan make_plan(const std::string& mode, const std::string& axis,
                              const std::string& comparator, std::uint64_t draws,
                              std::uint64_t seed, std::uint64_t max_exact_partitions) {
  bw::PermutationPlan plan;
  plan.mode = mode == "exact"  ? bw::PermutationMode::exact
              : mode == "mc"   ? bw::PermutationMode::mc
                               : bw::PermutationMode::auto_select;
  plan.axis = axis == "attributes" ? bw::PermutationAxis::attributes
                                   : bw::PermutationAxis::targets;
  plan.comparator = comparator == "gt" ? bw::Comparator::gt : bw::Comparator::geq;
  plan.draws = draws;
  plan.seed = seed;
  plan.max_exact_partitions = max_exact_partitions;
  return plan;
}

}  // namespace

PYBIND11_MODULE(_biasweat, m) {
  m.doc() = "WEAT bias measurement for word embeddings";

  py::register_exception<bw::Error>(m, "BiasweatError");

  py::class_<bw::EmbeddingTable>(m, "EmbeddingTable")
      .def_property_readonly("dimension", &bw::EmbeddingTable::dimension)
      .def_property_readonly("tokens", &bw::EmbeddingTable::tokens)
      .def_property_readonly("source_meta", &bw::EmbeddingTable::source_meta)
      .def("__len__", &bw::EmbeddingTable::size)
      .def("__contains__",
           [](const bw::EmbeddingTable& t, const std::string& tok) { return t.contains(tok); })
      .def("lookup", [](const bw::EmbeddingTable& t, const std::string& tok) -> py::object {
        auto v = t.lookup(tok);
        if (!v) return py::none();
        return py::cast(std::vector<double>(v->begin(), v->end()));
      });

  m.def(
      "load_glove_text",
      [](const std::string& path, bool lowercase, const std::string& on_duplicate) {
        bw::LoadOptions opts;
        opts.lowercase = lowercase;
        opts.on_duplicate =
            on_duplicate == "keep_first" ? bw::OnDuplicate::keep_first : bw::OnDuplicate::error;
        return bw::load_glove_text(path, opts);
      },
      py::arg("path"), py::arg("lowercase") = false, py::arg("on_duplicate") = "error");

  m.def(
      "load_word2vec_text",
      [](const std::string& path, bool lowercase, const std::string& on_duplicate) {
        bw::LoadOptions opts;
        opts.lowercase = lowercase;
        opts.on_duplicate =
            on_duplicate == "keep_first" ? bw::OnDuplicate::keep_first : bw::OnDuplicate::error;
        return bw::load_word2vec_text(path, opts);
      },
      py::arg("path"), py::arg("lowercase") = false, py::arg("on_duplicate") = "error");

  m.def("save_glove_text", &bw::save_glove_text, py::arg("table"), py::arg("path"));

  m.def(
      "cosine",
      [](const std::vector<double>& u, const std::vector<double>& v) {
        return bw::cosine(u, v);
      },
      py::arg("u"), py::arg("v"));

  m.def("builtin_wordsets", [] {
    py::dict d;
    for (const auto& [name, set] : bw::builtin_wordsets()) d[py::str(name)] = set.tokens;
    return d;
  });

  m.def("anti_chinese_14", [] { return bw::anti_chinese_14(); });

  m.def("association", &bw::association, py::arg("w"), py::arg("a"), py::arg("b"));
  m.def("differential", &bw::differential, py::arg("x"), py::arg("y"), py::arg("a"),
        py::arg("b"));
  m.def(
      "effect_size",
      [](const bw::Vectors& x, const bw::Vectors& y, const bw::Vectors& a, const bw::Vectors& b,
         const std::string& std_convention) {
        return bw::effect_size(x, y, a, b,
                               std_convention == "sample" ? bw::StdConvention::sample
                                                          : bw::StdConvention::population);
      },
      py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"),
      py::arg("std_convention") = "population");
  m.def(
      "exact_p_value",
      [](const bw::Vectors& x, const bw::Vectors& y, const bw::Vectors& a, const bw::Vectors& b,
         const std::string& comparator, std::uint64_t max_partitions) {
        auto [p, total] = bw::exact_p_value(
            x, y, a, b, comparator == "gt" ? bw::Comparator::gt : bw::Comparator::geq,
            max_partitions);
        return py::make_tuple(p, total);
      },
      py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"), py::arg("comparator") = "geq",
      py::arg("max_partitions") = 1000000);
  m.def(
      "mc_p_value",
      [](const bw::Vectors& x, const bw::Vectors& y, const bw::Vectors& a, const bw::Vectors& b,
         std::uint64_t draws, std::uint64_t seed, const std::string& comparator) {
        auto r = bw::mc_p_value(x, y, a, b, draws, seed,
                                comparator == "gt" ? bw::Comparator::gt : bw::Comparator::geq);
        return py::make_tuple(r.p, r.standard_error);
      },
      py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"), py::arg("draws") = 100000,
      py::arg("seed") = 1, py::arg("comparator") = "geq");

  m.def(
      "weat",
      [](const bw::EmbeddingTable& table, const py::object& x, const py::object& y,
         const py::object& a, const py::object& b, std::uint64_t seed, const std::string& mode,
         const std::string& axis, const std::string& comparator,
         const std::string& std_convention, std::uint64_t draws,
         std::uint64_t max_exact_partitions) {
        bw::BiasTestSpec spec;
        spec.test_name = "python";
        spec.targets_x = as_wordset(x, "x");
        spec.targets_y = as_wordset(y, "y");
        spec.attrs_a = as_wordset(a, "a");
        spec.attrs_b = as_wordset(b, "b");
        auto resolved = bw::resolve(spec, table, seed);
        auto result =
            bw::run_weat(resolved, make_plan(mode, axis, comparator, draws, seed,
                                             max_exact_partitions),
                         std_convention == "sample" ? bw::StdConvention::sample
                                                    : bw::StdConvention::population);
        return result_to_dict(result);
      },
      py::arg("table"), py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"),
      py::arg("seed") = 1, py::arg("mode") = "auto", py::arg("axis") = "targets",
      py::arg("comparator") = "geq", py::arg("std_convention") = "population",
      py::arg("draws") = 100000, py::arg("max_exact_partitions") = 1000000,
      "Resolve word sets against the table and run the bias test end to end.");

  m.def(
      "tokenize_tweet",
      [](const std::string& text, bool lowercase, bool strip_urls, bool keep_hashtags,
         bool keep_mentions) {
        bw::PreprocessRules rules;
        rules.lowercase = lowercase;
        rules.strip_urls = strip_urls;
        rules.keep_hashtags = keep_hashtags;
        rules.keep_mentions = keep_mentions;
        return bw::tokenize_tweet(text, rules);
      },
      py::arg("text"), py::arg("lowercase") = true, py::arg("strip_urls") = true,
      py::arg("keep_hashtags") = true, py::arg("keep_mentions") = true);

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
