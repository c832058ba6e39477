#include "biasweat/lexicon.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace biasweat {

const std::map<std::string, WordSet>& builtin_wordsets() {
  static const std::map<std::string, WordSet> registry = {
      {"pleasant",
       {"pleasant",
        {"glorious", "happy", "joy", "laughter", "love", "pleasure", "peace", "wonderful"}}},
      {"unpleasant",
       {"unpleasant",
        {"agony", "awful", "evil", "failure", "horrible", "hurt", "nasty", "terrible"}}},
      {"calm", {"calm", {"calm", "peaceful", "quiet", "relaxed", "tranquil"}}},
      {"panic", {"panic", {"anxious", "fear", "frightened", "panicked", "scared"}}},
      {"trustworthy",
       {"trustworthy",
        {"friendly", "trustworthy", "warm", "sincere", "nice", "kind", "supportive"}}},
      {"untrustworthy",
       {"untrustworthy",
        {"selfish", "mean", "dishonest", "cold", "disloyal", "untrustworthy", "deceitful"}}},
      {"blacklivesmatter",
       {"blacklivesmatter",
        {"#blacklivesmatter", "#blm", "#ferguson", "#handsupdontshoot", "#icantbreathe"}}},
      {"police",
       {"police",
        {"#alllivesmatter", "#backtheblue", "#bluelivesmatter", "#policelivesmatter",
         "#thinblueline"}}},
      {"trump", {"trump", {"trump", "#trump", "#maga", "#trump2016", "@realdonaldtrump"}}},
      {"clinton",
       {"clinton", {"clinton", "#clinton", "#hillaryclinton", "#clinton2016", "@hillaryclinton"}}},
      {"obama", {"obama", {"obama", "#obama", "#barackobama", "#yeswecan", "@barackobama"}}},
      {"sanders",
       {"sanders", {"sanders", "#sanders", "@berniesanders", "#feelthebern", "#berniesanders"}}},
      {"russia",
       {"russia",
        {"moscow", "russia", "russian", "russians", "#moscow", "#russia", "#russian",
         "#russians"}}},
      {"china",
       {"china",
        {"beijing", "china", "chinese", "wuhan", "#beijing", "#china", "#chinese", "#wuhan"}}},
      {"germany",
       {"germany", {"berlin", "german", "germans", "germany", "#berlin", "#german", "#germany"}}},
      {"iran",
       {"iran",
        {"iran", "iranian", "iranians", "tehran", "#iran", "#iranian", "#iranians", "#tehran"}}},
      {"usa",
       {"usa",
        {"america", "american", "usa", "washington", "#america", "#american", "#usa",
         "#washington"}}},
      {"russia_cities",
       {"russia_cities",
        {"moscow", "novosibirsk", "petersburg", "russia", "russian", "russians", "volgograd",
         "yekaterinburg"}}},
      {"china_cities",
       {"china_cities",
        {"beijing", "chengdu", "china", "chinese", "shanghai", "shenzhen", "tianjin", "wuhan"}}},
  };
  return registry;
}

const WordSet& builtin_wordset(const std::string& name) {
  const auto& reg = builtin_wordsets();
  auto it = reg.find(name);
  if (it == reg.end()) throw Error(Errc::UnknownBuiltin, "no builtin word set '" + name + "'");
  return it->second;
}

void validate_wordset(const WordSet& set) {
  if (set.tokens.empty())
    throw Error(Errc::SchemaViolation, "word set '" + set.name + "' is empty");
  std::set<std::string> seen;
  for (const auto& t : set.tokens) {
    if (t.empty() || t.find(' ') != std::string::npos || t.find('\t') != std::string::npos)
      throw Error(Errc::SchemaViolation,
                  "word set '" + set.name + "': token '" + t + "' contains whitespace");
    if (!seen.insert(t).second)
      throw Error(Errc::SchemaViolation,
                  "word set '" + set.name + "': duplicate token '" + t + "'");
  }
}

namespace {

bool disjoint(const WordSet& a, const WordSet& b) {
  std::set<std::string> s(a.tokens.begin(), a.tokens.end());
  return std::none_of(b.tokens.begin(), b.tokens.end(),
                      [&](const std::string& t) { return s.count(t) > 0; });
}

}  // namespace

void validate_spec(const BiasTestSpec& spec) {
  validate_wordset(spec.targets_x);
  validate_wordset(spec.targets_y);
  validate_wordset(spec.attrs_a);
  validate_wordset(spec.attrs_b);
  if (!disjoint(spec.targets_x, spec.targets_y))
    throw Error(Errc::OverlappingSets, spec.test_name + ": target sets overlap");
  if (!disjoint(spec.attrs_a, spec.attrs_b))
    throw Error(Errc::OverlappingSets, spec.test_name + ": attribute sets overlap");
  if (spec.min_set_size < 1)
    throw Error(Errc::SchemaViolation, spec.test_name + ": min_set_size must be positive");
}

BalanceResult balance(const std::vector<std::string>& set_p, const std::vector<std::string>& set_q,
                      const std::string& p_name, const std::string& q_name, BalancePolicy policy,
                      std::uint64_t seed, std::size_t min_set_size) {
  if (set_p.empty() || set_q.empty())
    throw Error(Errc::AllTokensOov, "cannot balance against an empty set");

  BalanceResult out{set_p, set_q, {}};
  if (set_p.size() != set_q.size()) {
    if (policy == BalancePolicy::error) {
      throw Error(Errc::UnequalSets, p_name + " has " + std::to_string(set_p.size()) +
                                         " tokens, " + q_name + " has " +
                                         std::to_string(set_q.size()));
    }
    auto& longer = set_p.size() > set_q.size() ? out.p : out.q;
    const std::string& longer_name = set_p.size() > set_q.size() ? p_name : q_name;
    std::size_t target = std::min(set_p.size(), set_q.size());
    std::mt19937_64 rng(seed);
    while (longer.size() > target) {
      std::uniform_int_distribution<std::size_t> pick(0, longer.size() - 1);
      std::size_t i = pick(rng);
      out.audit.push_back({longer[i], AuditEntry::Reason::dropped_for_balance, longer_name});
      longer.erase(longer.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  if (out.p.size() < min_set_size) {
    throw Error(Errc::ResultTooSmall, p_name + "/" + q_name + " balanced to " +
                                          std::to_string(out.p.size()) + " < min_set_size " +
                                          std::to_string(min_set_size));
  }
  return out;
}

namespace {

std::vector<std::string> drop_oov(const WordSet& set, const EmbeddingTable& table,
                                  std::vector<AuditEntry>& audit) {
  std::vector<std::string> kept;
  for (const auto& t : set.tokens) {
    if (table.contains(t))
      kept.push_back(t);
    else
      audit.push_back({t, AuditEntry::Reason::oov, set.name});
  }
  if (kept.empty())
    throw Error(Errc::AllTokensOov, "every token of '" + set.name + "' is out of vocabulary");
  return kept;
}

std::vector<std::vector<double>> gather(const std::vector<std::string>& tokens,
                                        const EmbeddingTable& table) {
  std::vector<std::vector<double>> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto v = table.lookup(t);
    out.emplace_back(v->begin(), v->end());
  }
  return out;
}

}  // namespace

ResolvedTest resolve(const BiasTestSpec& spec, const EmbeddingTable& table, std::uint64_t seed) {
  validate_spec(spec);
  ResolvedTest rt;
  rt.spec = spec;

  auto x = drop_oov(spec.targets_x, table, rt.audit);
  auto y = drop_oov(spec.targets_y, table, rt.audit);
  auto a = drop_oov(spec.attrs_a, table, rt.audit);
  auto b = drop_oov(spec.attrs_b, table, rt.audit);

  // Independent sub-seeds so target balancing does not perturb attribute balancing.
  auto xy = balance(x, y, spec.targets_x.name, spec.targets_y.name, spec.balance_policy, seed,
                    spec.min_set_size);
  auto ab = balance(a, b, spec.attrs_a.name, spec.attrs_b.name, spec.balance_policy, seed + 1,
                    spec.min_set_size);
  rt.audit.insert(rt.audit.end(), xy.audit.begin(), xy.audit.end());
  rt.audit.insert(rt.audit.end(), ab.audit.begin(), ab.audit.end());

  rt.x_tokens = std::move(xy.p);
  rt.y_tokens = std::move(xy.q);
  rt.a_tokens = std::move(ab.p);
  rt.b_tokens = std::move(ab.q);
  rt.m = rt.x_tokens.size();
  rt.n = rt.a_tokens.size();

  for (const auto* s : {&rt.x_tokens, &rt.y_tokens, &rt.a_tokens, &rt.b_tokens}) {
    if (s->size() < 5) {
      rt.warnings.push_back("a resolved set has only " + std::to_string(s->size()) +
                            " tokens; small sets weaken significance");
      break;
    }
  }
  {
    std::set<std::string> targets(rt.x_tokens.begin(), rt.x_tokens.end());
    targets.insert(rt.y_tokens.begin(), rt.y_tokens.end());
    for (const auto* s : {&rt.a_tokens, &rt.b_tokens}) {
      for (const auto& t : *s) {
        if (targets.count(t)) {
          rt.warnings.push_back("token '" + t + "' appears in both a target and attribute set");
        }
      }
    }
  }

  rt.x_vectors = gather(rt.x_tokens, table);
  rt.y_vectors = gather(rt.y_tokens, table);
  rt.a_vectors = gather(rt.a_tokens, table);
  rt.b_vectors = gather(rt.b_tokens, table);
  return rt;
}

}  // namespace biasweat
