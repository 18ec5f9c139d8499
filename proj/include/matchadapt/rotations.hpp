#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "matchadapt/core.hpp"

namespace matchadapt {

using RotationId = int;

/// (a_i, a_j): a_i ranks a_j first while the rotation is exposed.
using RotationPair = std::pair<AgentId, AgentId>;
using RotationCycle = std::vector<RotationPair>;

/// Rotates the cycle so that its smallest ordered pair leads.
RotationCycle canonicalize(RotationCycle cycle);

/// Cycle of the dual rotation, (a_{j_s}, a_{i_{s-1}}) for every s, canonicalized.
RotationCycle dual_cycle(const RotationCycle& cycle);

struct Rotation {
  RotationId id = -1;
  RotationCycle cycle;
  std::optional<RotationId> dual_id;
  bool singular = false;

  friend bool operator==(const Rotation& x, const Rotation& y) { return x.cycle == y.cycle; }
};

/// Reduced preference lists derived from the full lists of a strict instance.
/// Deletions are always symmetric.
class StableTable {
 public:
  /// The unreduced table of a strict instance. Throws InvalidNotion on ties.
  explicit StableTable(const Instance& instance);

  const Instance& instance() const { return *instance_; }
  int size() const { return instance_->size(); }

  bool contains(AgentId a, AgentId b) const {
    return (bits_[index(a, b)] & bit(b)) != 0;
  }
  std::vector<AgentId> list(AgentId a) const;
  std::size_t length(AgentId a) const;
  AgentId first(AgentId a) const;
  AgentId second(AgentId a) const;
  AgentId last(AgentId a) const;

  /// Removes b from a's list and a from b's list.
  void remove(AgentId a, AgentId b);

  /// Agents that must be matched: those with a non-empty list after phase 1.
  bool active(AgentId a) const { return (*active_)[a]; }

  /// Some active agent lost its whole list.
  bool infeasible() const;
  /// Every active agent is left with exactly one entry.
  bool terminal() const;
  /// The matching read off a terminal table.
  Matching matching() const;

  /// Ids of the rotations eliminated to reach this table, when known.
  const std::vector<RotationId>& eliminated() const { return eliminated_; }

  const std::vector<std::uint64_t>& bits() const { return bits_; }

  friend bool operator==(const StableTable& x, const StableTable& y) { return x.bits_ == y.bits_; }

 private:
  friend StableTable phase1(const Instance& instance);
  friend StableTable eliminate(const StableTable& table, const Rotation& rotation);

  std::size_t index(AgentId a, AgentId b) const {
    return static_cast<std::size_t>(a) * words_ + static_cast<std::size_t>(b) / 64;
  }
  static std::uint64_t bit(AgentId b) { return std::uint64_t{1} << (b % 64); }

  std::shared_ptr<const Instance> instance_;
  std::shared_ptr<const std::vector<bool>> active_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<RotationId> eliminated_;
};

/// Phase 1 of Irving's algorithm. Agents whose lists empty are unmatched in
/// every stable matching; an odd number of remaining agents means no stable
/// matching exists (NoStableMatching).
StableTable phase1(const Instance& instance);

/// All rotations exposed in the table, canonicalized, in ascending order.
std::vector<Rotation> exposed_rotations(const StableTable& table);

/// Eliminates an exposed rotation. Throws RotationNotExposed.
StableTable eliminate(const StableTable& table, const Rotation& rotation);

/// Set of rotation ids over a fixed poset.
class RotationSet {
 public:
  RotationSet() = default;
  explicit RotationSet(std::size_t universe) : bits_(universe, false) {}

  std::size_t universe() const { return bits_.size(); }
  bool contains(RotationId r) const { return bits_[r]; }
  void insert(RotationId r) { bits_[r] = true; }
  void erase(RotationId r) { bits_[r] = false; }
  std::size_t size() const;
  std::vector<RotationId> ids() const;

  friend bool operator==(const RotationSet&, const RotationSet&) = default;
  friend auto operator<=>(const RotationSet& x, const RotationSet& y) { return x.ids() <=> y.ids(); }

 private:
  std::vector<bool> bits_;
};

struct PosetOptions {
  /// Upper bound on distinct stable tables visited during exploration.
  std::size_t table_cap = 1'000'000;
};

/// All rotations of a strict instance with precedence, duals and the stable
/// pair structure. Immutable after construction.
class RotationPoset {
 public:
  const Instance& instance() const { return p0_->instance(); }
  const StableTable& p0() const { return *p0_; }

  std::size_t size() const { return rotations_.size(); }
  const std::vector<Rotation>& rotations() const { return rotations_; }
  const Rotation& rotation(RotationId r) const { return rotations_[r]; }
  std::optional<RotationId> find(const RotationCycle& cycle) const;

  /// phi must be eliminated before rho can be exposed.
  bool precedes(RotationId phi, RotationId rho) const { return precedes_[phi][rho]; }
  /// All (transitive) predecessors, ascending.
  const std::vector<RotationId>& predecessors(RotationId r) const { return predecessors_[r]; }
  /// All (transitive) successors, ascending.
  const std::vector<RotationId>& successors(RotationId r) const { return successors_[r]; }
  std::vector<std::pair<RotationId, RotationId>> precedence_edges() const;

  std::vector<RotationId> singular() const;
  std::vector<std::pair<RotationId, RotationId>> dual_pairs() const;

  /// Rotation containing the ordered pair (a, b), if any.
  std::optional<RotationId> containing(AgentId a, AgentId b) const;

  const std::vector<Pair>& stable_pairs() const { return stable_pairs_; }
  const std::vector<Pair>& fixed_pairs() const { return fixed_pairs_; }
  bool is_stable_pair(Pair p) const;
  bool is_fixed_pair(Pair p) const;
  /// Stable partners of a, most preferred first.
  const std::vector<AgentId>& stable_partners(AgentId a) const { return stable_partners_[a]; }

  std::size_t tables_explored() const { return tables_explored_; }

 private:
  friend RotationPoset build_rotation_poset(const Instance& instance, const PosetOptions& options);

  std::shared_ptr<const StableTable> p0_;
  std::vector<Rotation> rotations_;
  std::map<RotationCycle, RotationId> by_cycle_;
  std::vector<std::vector<bool>> precedes_;
  std::vector<std::vector<RotationId>> predecessors_;
  std::vector<std::vector<RotationId>> successors_;
  std::map<RotationPair, RotationId> pair_index_;
  std::vector<Pair> stable_pairs_;
  std::vector<Pair> fixed_pairs_;
  std::vector<std::vector<AgentId>> stable_partners_;
  std::size_t tables_explored_ = 0;
};

/// Explores every stable table reachable from P0, recording each exposure of a
/// rotation together with the rotations every path had eliminated before it.
/// Throws NoStableMatching, InvalidNotion on ties, ResourceExhausted past the
/// table cap.
RotationPoset build_rotation_poset(const Instance& instance, const PosetOptions& options = {});

bool is_closed(const RotationPoset& poset, const RotationSet& z);
bool is_complete(const RotationPoset& poset, const RotationSet& z);

/// Order in which the rotations of a closed complete z are eliminated from P0
/// (lowest exposed id first). Throws NotClosedComplete.
std::vector<RotationId> elimination_order(const RotationPoset& poset, const RotationSet& z);

/// The stable matching of a closed complete set. Throws NotClosedComplete.
Matching closed_set_to_matching(const RotationPoset& poset, const RotationSet& z);

/// The unique closed complete set of a stable matching. Throws NotStable.
RotationSet matching_to_closed_set(const RotationPoset& poset, const Matching& m);

const std::vector<Pair>& stable_pairs(const RotationPoset& poset);
const std::vector<Pair>& fixed_pairs(const RotationPoset& poset);

/// Dual of the rotation containing (a, b); absent when no rotation contains
/// the pair or that rotation is singular.
std::optional<RotationId> rho_of(const RotationPoset& poset, AgentId a, AgentId b);

}  // namespace matchadapt
