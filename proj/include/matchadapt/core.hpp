#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "matchadapt/error.hpp"

namespace matchadapt {

/// Dense agent index, contiguous in 0..N-1 within an instance.
using AgentId = int;

inline constexpr AgentId kNoAgent = -1;

/// Ordered tie-groups, most preferred first. Strict lists have singleton groups.
using PreferenceList = std::vector<std::vector<AgentId>>;

enum class Kind { roommates, marriage };

enum class Notion { strict, weak, strong };

std::string_view to_string(Kind kind);
std::string_view to_string(Notion notion);
std::optional<Notion> parse_notion(std::string_view text);

/// Unordered agent pair, stored with first < second.
struct Pair {
  AgentId first = kNoAgent;
  AgentId second = kNoAgent;

  static Pair of(AgentId a, AgentId b) { return a < b ? Pair{a, b} : Pair{b, a}; }

  bool has(AgentId a) const { return first == a || second == a; }
  AgentId other(AgentId a) const { return a == first ? second : first; }

  friend auto operator<=>(const Pair&, const Pair&) = default;
};

/// Unvalidated instance description. Produced by the parser and by the
/// generators, consumed by validate_instance.
struct RawInstance {
  Kind kind = Kind::roommates;
  std::vector<std::string> names;
  std::vector<int> side;  // 0 = left, 1 = right; marriage only
  std::vector<PreferenceList> prefs;
};

/// Validated preference instance. Immutable after construction.
class Instance {
 public:
  Instance() = default;

  int size() const { return static_cast<int>(names_.size()); }
  std::size_t num_pairs() const { return num_pairs_; }
  Kind kind() const { return kind_; }
  bool is_strict() const { return strict_; }

  const std::string& name(AgentId a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<AgentId> find(std::string_view name) const;

  /// 0 = left (men), 1 = right (women); always 0 for roommates instances.
  int side(AgentId a) const { return side_.empty() ? 0 : side_[a]; }

  const PreferenceList& prefs(AgentId a) const { return prefs_[a]; }

  /// Agents of a's list in preference order with tie-groups flattened.
  const std::vector<AgentId>& order(AgentId a) const { return order_[a]; }

  bool acceptable(AgentId a, AgentId b) const { return rank_unchecked(a, b) >= 0; }

  /// Index of b's tie-group in a's list. Throws NotAcceptable.
  int rank(AgentId a, AgentId b) const;

  /// Like rank, but returns -1 for unacceptable pairs.
  int rank_unchecked(AgentId a, AgentId b) const {
    return ranks_[static_cast<std::size_t>(a) * names_.size() + b];
  }

  /// True iff a strictly prefers b to c. kNoAgent stands for being unmatched.
  bool prefers(AgentId a, AgentId b, AgentId c) const;

  /// All mutually acceptable pairs in ascending order.
  std::vector<Pair> pairs() const;

  RawInstance to_raw() const;

  friend bool operator==(const Instance& x, const Instance& y) {
    return x.kind_ == y.kind_ && x.names_ == y.names_ && x.side_ == y.side_ && x.prefs_ == y.prefs_;
  }

 private:
  friend Instance validate_instance(const RawInstance& raw);

  Kind kind_ = Kind::roommates;
  std::vector<std::string> names_;
  std::vector<int> side_;
  std::vector<PreferenceList> prefs_;
  std::vector<std::vector<AgentId>> order_;
  std::vector<int> ranks_;
  std::size_t num_pairs_ = 0;
  bool strict_ = true;
};

/// Checks every structural invariant of raw and builds the instance.
/// Malformed input is rejected with the full list of violations.
Instance validate_instance(const RawInstance& raw);

/// Set of disjoint pairs over a fixed agent universe. Keeps a sorted pair list
/// and a partner array in sync.
class Matching {
 public:
  Matching() = default;

  /// Throws std::invalid_argument when pairs share an agent or reference an
  /// agent outside 0..num_agents-1.
  Matching(int num_agents, std::span<const Pair> pairs);

  /// Same as the constructor, plus a mutual acceptability check.
  static Matching on(const Instance& instance, std::span<const Pair> pairs);

  int num_agents() const { return static_cast<int>(partner_.size()); }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  const std::vector<Pair>& pairs() const { return pairs_; }
  AgentId partner(AgentId a) const { return partner_[a]; }
  bool matched(AgentId a) const { return partner_[a] != kNoAgent; }
  bool contains(Pair p) const { return partner_[p.first] == p.second; }

  friend bool operator==(const Matching& x, const Matching& y) { return x.pairs_ == y.pairs_; }
  friend auto operator<=>(const Matching& x, const Matching& y) { return x.pairs_ <=> y.pairs_; }

 private:
  std::vector<Pair> pairs_;
  std::vector<AgentId> partner_;
};

/// Adaptation problem input: M1, forced pairs Q, forbidden pairs P and budget k.
struct AdaptQuery {
  Matching m1;
  std::vector<Pair> forced;
  std::vector<Pair> forbidden;
  long long k = 0;
};

/// All pairs blocking matching under the given notion, ascending. Strict is
/// only accepted on instances without ties (InvalidNotion otherwise).
std::vector<Pair> blocking_pairs(const Instance& instance, const Matching& matching, Notion notion);

bool is_stable(const Instance& instance, const Matching& matching, Notion notion);

struct SymmetricDifference {
  std::vector<Pair> pairs;
  std::size_t size = 0;
};

SymmetricDifference symmetric_difference(const Matching& x, const Matching& y);

/// Size of the symmetric difference without materializing it.
std::size_t distance(const Matching& x, const Matching& y);

struct Completion {
  Instance instance;
  Matching matching;
  int original_size = 0;  // agents with id >= original_size are dummies
};

/// Gives every agent left unmatched by m1 a private dummy partner ranked last,
/// so that m1 (extended by the dummy pairs) becomes complete.
Completion complete_with_dummies(const Instance& instance, const Matching& m1);

/// Restricts a matching of an augmented instance to its first num_agents agents.
Matching restrict_to(const Matching& matching, int num_agents);

/// Resolves a pair given by agent names. Throws std::invalid_argument.
Pair pair_by_name(const Instance& instance, std::string_view a, std::string_view b);

std::string format_pair(const Instance& instance, Pair p);

}  // namespace matchadapt
