#include "matchadapt/core.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace matchadapt {

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error([&] {
        std::string msg = "invalid instance:";
        for (const auto& v : violations) msg += "\n  " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

ParseError::ParseError(int line, const std::string& message)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

std::string_view to_string(Kind kind) { return kind == Kind::roommates ? "sr" : "sm"; }

std::string_view to_string(Notion notion) {
  switch (notion) {
    case Notion::strict: return "strict";
    case Notion::weak: return "weak";
    case Notion::strong: return "strong";
  }
  return "?";
}

std::optional<Notion> parse_notion(std::string_view text) {
  if (text == "strict") return Notion::strict;
  if (text == "weak") return Notion::weak;
  if (text == "strong") return Notion::strong;
  return std::nullopt;
}

namespace {

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

}  // namespace

Instance validate_instance(const RawInstance& raw) {
  std::vector<std::string> violations;
  const int n = static_cast<int>(raw.names.size());
  auto label = [&](AgentId a) {
    return a >= 0 && a < n ? raw.names[a] : "#" + std::to_string(a);
  };

  if (static_cast<int>(raw.prefs.size()) != n) {
    violations.push_back("preference list count " + std::to_string(raw.prefs.size()) +
                         " does not match agent count " + std::to_string(n));
    throw ValidationError(std::move(violations));
  }
  const bool marriage = raw.kind == Kind::marriage;
  if (marriage && static_cast<int>(raw.side.size()) != n) {
    violations.push_back("marriage instance without a side for every agent");
    throw ValidationError(std::move(violations));
  }

  std::set<std::string> seen_names;
  for (AgentId a = 0; a < n; ++a) {
    if (!valid_name(raw.names[a])) violations.push_back("invalid agent name '" + raw.names[a] + "'");
    if (!seen_names.insert(raw.names[a]).second)
      violations.push_back("duplicate agent name '" + raw.names[a] + "'");
    if (marriage && raw.side[a] != 0 && raw.side[a] != 1)
      violations.push_back("agent " + label(a) + " has no valid side");
  }

  Instance inst;
  inst.kind_ = raw.kind;
  inst.names_ = raw.names;
  if (marriage) inst.side_ = raw.side;
  inst.prefs_ = raw.prefs;
  inst.order_.assign(n, {});
  inst.ranks_.assign(static_cast<std::size_t>(n) * n, -1);

  for (AgentId a = 0; a < n; ++a) {
    const PreferenceList& list = raw.prefs[a];
    for (std::size_t g = 0; g < list.size(); ++g) {
      if (list[g].empty()) violations.push_back("empty tie-group in the list of " + label(a));
      if (list[g].size() > 1) inst.strict_ = false;
      for (AgentId b : list[g]) {
        if (b < 0 || b >= n) {
          violations.push_back("list of " + label(a) + " references unknown agent " + label(b));
          continue;
        }
        if (b == a) {
          violations.push_back(label(a) + " lists itself");
          continue;
        }
        int& slot = inst.ranks_[static_cast<std::size_t>(a) * n + b];
        if (slot >= 0) {
          violations.push_back(label(a) + " lists " + label(b) + " more than once");
          continue;
        }
        if (marriage && raw.side[a] == raw.side[b])
          violations.push_back(label(a) + " lists " + label(b) + " from the same side");
        slot = static_cast<int>(g);
        inst.order_[a].push_back(b);
      }
    }
  }

  for (AgentId a = 0; a < n; ++a) {
    for (AgentId b : inst.order_[a]) {
      if (inst.rank_unchecked(b, a) < 0)
        violations.push_back("asymmetric acceptability: " + label(a) + " lists " + label(b) +
                             " but " + label(b) + " does not list " + label(a));
      else if (a < b)
        ++inst.num_pairs_;
    }
  }

  if (!violations.empty()) throw ValidationError(std::move(violations));
  return inst;
}

std::optional<AgentId> Instance::find(std::string_view name) const {
  for (AgentId a = 0; a < size(); ++a)
    if (names_[a] == name) return a;
  return std::nullopt;
}

int Instance::rank(AgentId a, AgentId b) const {
  int r = rank_unchecked(a, b);
  if (r < 0) throw NotAcceptable(name(b) + " is not acceptable to " + name(a));
  return r;
}

bool Instance::prefers(AgentId a, AgentId b, AgentId c) const {
  int rb = rank_unchecked(a, b);
  if (rb < 0) return false;
  if (c == kNoAgent) return true;
  return rb < rank_unchecked(a, c);
}

std::vector<Pair> Instance::pairs() const {
  std::vector<Pair> out;
  out.reserve(num_pairs_);
  for (AgentId a = 0; a < size(); ++a)
    for (AgentId b : order_[a])
      if (a < b) out.push_back({a, b});
  std::sort(out.begin(), out.end());
  return out;
}

RawInstance Instance::to_raw() const {
  RawInstance raw;
  raw.kind = kind_;
  raw.names = names_;
  raw.side = side_;
  raw.prefs = prefs_;
  return raw;
}

Matching::Matching(int num_agents, std::span<const Pair> pairs)
    : pairs_(pairs.begin(), pairs.end()), partner_(num_agents, kNoAgent) {
  for (Pair& p : pairs_) {
    p = Pair::of(p.first, p.second);
    if (p.first < 0 || p.second >= num_agents)
      throw std::invalid_argument("matching references an unknown agent");
    if (p.first == p.second) throw std::invalid_argument("matching pairs an agent with itself");
    if (partner_[p.first] != kNoAgent || partner_[p.second] != kNoAgent)
      throw std::invalid_argument("matching pairs overlap");
    partner_[p.first] = p.second;
    partner_[p.second] = p.first;
  }
  std::sort(pairs_.begin(), pairs_.end());
}

Matching Matching::on(const Instance& instance, std::span<const Pair> pairs) {
  Matching m(instance.size(), pairs);
  for (Pair p : m.pairs_)
    if (!instance.acceptable(p.first, p.second))
      throw std::invalid_argument("matching contains unacceptable pair " + format_pair(instance, p));
  return m;
}

std::vector<Pair> blocking_pairs(const Instance& instance, const Matching& matching, Notion notion) {
  if (notion == Notion::strict && !instance.is_strict())
    throw InvalidNotion("strict stability requires an instance without ties");
  std::vector<Pair> out;
  for (AgentId a = 0; a < instance.size(); ++a) {
    const AgentId ma = matching.partner(a);
    const int ra = ma == kNoAgent ? -1 : instance.rank_unchecked(a, ma);
    for (AgentId b : instance.order(a)) {
      if (b <= a || ma == b) continue;
      const AgentId mb = matching.partner(b);
      const int rab = instance.rank_unchecked(a, b);
      const int rba = instance.rank_unchecked(b, a);
      const int rb = mb == kNoAgent ? -1 : instance.rank_unchecked(b, mb);
      const bool a_strict = ma == kNoAgent || rab < ra;
      const bool b_strict = mb == kNoAgent || rba < rb;
      bool blocks;
      if (notion == Notion::strong) {
        const bool a_weak = ma == kNoAgent || rab <= ra;
        const bool b_weak = mb == kNoAgent || rba <= rb;
        blocks = (a_strict && b_weak) || (b_strict && a_weak);
      } else {
        blocks = a_strict && b_strict;
      }
      if (blocks) out.push_back({a, b});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_stable(const Instance& instance, const Matching& matching, Notion notion) {
  return blocking_pairs(instance, matching, notion).empty();
}

SymmetricDifference symmetric_difference(const Matching& x, const Matching& y) {
  SymmetricDifference out;
  std::set_symmetric_difference(x.pairs().begin(), x.pairs().end(), y.pairs().begin(),
                                y.pairs().end(), std::back_inserter(out.pairs));
  out.size = out.pairs.size();
  return out;
}

std::size_t distance(const Matching& x, const Matching& y) {
  std::size_t common = 0;
  auto i = x.pairs().begin();
  auto j = y.pairs().begin();
  while (i != x.pairs().end() && j != y.pairs().end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return x.size() + y.size() - 2 * common;
}

Completion complete_with_dummies(const Instance& instance, const Matching& m1) {
  Completion out;
  out.original_size = instance.size();
  std::vector<AgentId> unmatched;
  for (AgentId a = 0; a < instance.size(); ++a)
    if (!m1.matched(a)) unmatched.push_back(a);
  if (unmatched.empty()) {
    out.instance = instance;
    out.matching = m1;
    return out;
  }

  RawInstance raw = instance.to_raw();
  std::set<std::string> taken(raw.names.begin(), raw.names.end());
  std::vector<Pair> pairs = m1.pairs();
  for (AgentId b : unmatched) {
    std::string name = raw.names[b] + "_dummy";
    for (int i = 2; taken.count(name); ++i) name = raw.names[b] + "_dummy" + std::to_string(i);
    taken.insert(name);
    const AgentId dummy = static_cast<AgentId>(raw.names.size());
    raw.names.push_back(name);
    if (raw.kind == Kind::marriage) raw.side.push_back(1 - raw.side[b]);
    raw.prefs.push_back({{b}});
    raw.prefs[b].push_back({dummy});
    pairs.push_back({b, dummy});
  }
  out.instance = validate_instance(raw);
  out.matching = Matching(out.instance.size(), pairs);
  return out;
}

Matching restrict_to(const Matching& matching, int num_agents) {
  std::vector<Pair> kept;
  for (Pair p : matching.pairs())
    if (p.second < num_agents) kept.push_back(p);
  return Matching(num_agents, kept);
}

Pair pair_by_name(const Instance& instance, std::string_view a, std::string_view b) {
  auto x = instance.find(a);
  auto y = instance.find(b);
  if (!x) throw std::invalid_argument("unknown agent '" + std::string(a) + "'");
  if (!y) throw std::invalid_argument("unknown agent '" + std::string(b) + "'");
  if (*x == *y) throw std::invalid_argument("pair of an agent with itself");
  return Pair::of(*x, *y);
}

std::string format_pair(const Instance& instance, Pair p) {
  return "{" + instance.name(p.first) + "," + instance.name(p.second) + "}";
}

}  // namespace matchadapt
