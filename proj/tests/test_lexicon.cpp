#include <algorithm>
#include <functional>
#include <set>

#include "doctest.h"

#include "biasweat/lexicon.hpp"

using namespace biasweat;

namespace {

// tiny table containing all calm words except "tranquil", plus the panic words
EmbeddingTable make_table(const std::vector<std::string>& tokens) {
  std::vector<double> matrix;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    matrix.push_back(1.0 + static_cast<double>(i));
    matrix.push_back(0.5);
  }
  return EmbeddingTable(2, tokens, matrix, "fixture", /*lowercased=*/true);
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::IoFailure;
}

}  // namespace

TEST_CASE("builtin registry matches the published word sets") {
  const auto& reg = builtin_wordsets();
  CHECK(reg.at("calm").tokens ==
        std::vector<std::string>{"calm", "peaceful", "quiet", "relaxed", "tranquil"});
  CHECK(reg.at("pleasant").tokens ==
        std::vector<std::string>{"glorious", "happy", "joy", "laughter", "love", "pleasure",
                                 "peace", "wonderful"});
  CHECK(reg.at("russia_cities").tokens ==
        std::vector<std::string>{"moscow", "novosibirsk", "petersburg", "russia", "russian",
                                 "russians", "volgograd", "yekaterinburg"});

  CHECK(reg.at("pleasant").tokens.size() == 8);
  CHECK(reg.at("unpleasant").tokens.size() == 8);
  CHECK(reg.at("panic").tokens.size() == 5);
  CHECK(reg.at("trustworthy").tokens.size() == 7);
  CHECK(reg.at("untrustworthy").tokens.size() == 7);
  CHECK(reg.at("blacklivesmatter").tokens.size() == 5);
  CHECK(reg.at("police").tokens.size() == 5);
  for (const char* name : {"trump", "clinton", "obama", "sanders"})
    CHECK(reg.at(name).tokens.size() == 5);
  for (const char* name : {"russia", "china", "iran", "usa", "china_cities"})
    CHECK(reg.at(name).tokens.size() == 8);
  CHECK(reg.at("germany").tokens.size() == 7);  // as printed

  CHECK(code_of([] { builtin_wordset("nope"); }) == Errc::UnknownBuiltin);

  for (const auto& [name, set] : reg) {
    CAPTURE(name);
    validate_wordset(set);  // distinct, nonempty, whitespace-free
  }
}

TEST_CASE("spec validation rejects overlapping sets") {
  BiasTestSpec spec;
  spec.test_name = "t";
  spec.targets_x = {"x", {"a"}};
  spec.targets_y = {"y", {"a"}};
  spec.attrs_a = {"a", {"p"}};
  spec.attrs_b = {"b", {"q"}};
  CHECK(code_of([&] { validate_spec(spec); }) == Errc::OverlappingSets);
}

TEST_CASE("balance leaves already-equal sets untouched") {
  std::vector<std::string> p{"a", "b", "c"}, q{"d", "e", "f"};
  auto r = balance(p, q, "p", "q", BalancePolicy::truncate_seeded, 1, 2);
  CHECK(r.p == p);
  CHECK(r.q == q);
  CHECK(r.audit.empty());
}

TEST_CASE("balance truncates the longer list by a seeded draw") {
  std::vector<std::string> p{"a", "b", "c", "d"};
  std::vector<std::string> q{"v", "w", "x", "y", "z"};
  auto r = balance(p, q, "p", "q", BalancePolicy::truncate_seeded, 9, 2);
  CHECK(r.p == p);  // never removes from the shorter list
  CHECK(r.q.size() == 4);
  REQUIRE(r.audit.size() == 1);
  CHECK(r.audit[0].which_set == "q");
  CHECK(r.audit[0].reason == AuditEntry::Reason::dropped_for_balance);
  // dropped token is the one missing from the output
  CHECK(std::count(q.begin(), q.end(), r.audit[0].token) == 1);
  CHECK(std::count(r.q.begin(), r.q.end(), r.audit[0].token) == 0);

  auto r2 = balance(p, q, "p", "q", BalancePolicy::truncate_seeded, 9, 2);
  CHECK(r2.q == r.q);  // deterministic in the seed
}

TEST_CASE("balance error policy and minimum size") {
  std::vector<std::string> p{"a"}, q{"x", "y", "z"};
  CHECK(code_of([&] { balance(p, q, "p", "q", BalancePolicy::error, 1, 2); }) ==
        Errc::UnequalSets);
  CHECK(code_of([&] { balance(p, q, "p", "q", BalancePolicy::truncate_seeded, 1, 2); }) ==
        Errc::ResultTooSmall);
}

TEST_CASE("resolve drops OOV then balances, with a complete audit") {
  // mimics a vocabulary missing "tranquil": calm resolves to 4, panic must drop one
  std::vector<std::string> vocab{"calm",     "peaceful", "quiet",  "relaxed", "anxious",
                                 "fear",     "frightened", "panicked", "scared",  "left",
                                 "right",    "up",       "down"};
  auto table = make_table(vocab);

  BiasTestSpec spec;
  spec.test_name = "calm_panic";
  spec.targets_x = {"dir_x", {"left", "right"}};
  spec.targets_y = {"dir_y", {"up", "down"}};
  spec.attrs_a = builtin_wordset("calm");
  spec.attrs_b = builtin_wordset("panic");

  auto rt = resolve(spec, table, 3);
  CHECK(rt.m == 2);
  CHECK(rt.n == 4);
  REQUIRE(rt.audit.size() == 2);
  CHECK(rt.audit[0].token == "tranquil");
  CHECK(rt.audit[0].reason == AuditEntry::Reason::oov);
  CHECK(rt.audit[1].reason == AuditEntry::Reason::dropped_for_balance);
  CHECK(rt.audit[1].which_set == "panic");

  // token multiset conservation, per set
  std::multiset<std::string> resolved_plus_audit(rt.a_tokens.begin(), rt.a_tokens.end());
  resolved_plus_audit.insert("tranquil");
  std::multiset<std::string> original(spec.attrs_a.tokens.begin(), spec.attrs_a.tokens.end());
  CHECK(resolved_plus_audit == original);

  // pure function of (spec, table, seed)
  auto rt2 = resolve(spec, table, 3);
  CHECK(rt2.b_tokens == rt.b_tokens);
  CHECK(rt2.audit.size() == rt.audit.size());
  for (std::size_t i = 0; i < rt.audit.size(); ++i)
    CHECK(rt2.audit[i].token == rt.audit[i].token);
}

TEST_CASE("resolve rejects a fully OOV set") {
  auto table = make_table({"left", "right", "up", "down"});
  BiasTestSpec spec;
  spec.test_name = "t";
  spec.targets_x = {"x", {"absent1", "absent2"}};
  spec.targets_y = {"y", {"up", "down"}};
  spec.attrs_a = {"a", {"left", "right"}};
  spec.attrs_b = {"b", {"up2", "down2"}};
  CHECK(code_of([&] { resolve(spec, table, 1); }) == Errc::AllTokensOov);
}

TEST_CASE("target token shared with an attribute set warns but resolves") {
  auto table = make_table({"left", "right", "up", "down", "p1", "p2"});
  BiasTestSpec spec;
  spec.test_name = "t";
  spec.targets_x = {"x", {"left", "right"}};
  spec.targets_y = {"y", {"up", "down"}};
  spec.attrs_a = {"a", {"left", "p1"}};  // "left" also a target
  spec.attrs_b = {"b", {"p2", "up"}};
  auto rt = resolve(spec, table, 1);
  CHECK(!rt.warnings.empty());
}
