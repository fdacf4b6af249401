#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "worb/action.hpp"
#include "worb/bitset.hpp"
#include "worb/group.hpp"

namespace worb {

/// An equivalence relation on 0..size()-1, kept in canonical form: blocks
/// sorted internally and ordered by their smallest point.
class Partition {
 public:
  /// Throws InvalidPartition unless the blocks are disjoint, nonempty and
  /// cover 0..n-1.
  static Partition from_blocks(std::size_t n, std::vector<std::vector<Point>> const& blocks);
  /// Any labelling; equal labels mean same block.
  static Partition from_labels(std::vector<std::uint32_t> const& labels);
  static Partition discrete(std::size_t n);
  static Partition total(std::size_t n);

  std::size_t size() const noexcept { return block_of_.size(); }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  std::uint32_t block_of(Point x) const noexcept { return block_of_[x]; }
  std::vector<std::vector<Point>> const& blocks() const noexcept { return blocks_; }
  bool related(Point a, Point b) const noexcept { return block_of_[a] == block_of_[b]; }
  Bitset block_bits(Point x) const;

  friend bool operator==(Partition const& a, Partition const& b) { return a.block_of_ == b.block_of_; }

 private:
  Partition() = default;
  std::vector<std::uint32_t> block_of_;
  std::vector<std::vector<Point>> blocks_;
};

/// An arbitrary binary relation on 0..size()-1 (a boolean matrix).
class Relation {
 public:
  explicit Relation(std::size_t n = 0) : n_(n), rows_(n, Bitset(n)) {}
  static Relation from_partition(Partition const& p);
  static Relation from_pairs(std::size_t n, std::vector<std::pair<Point, Point>> const& pairs);

  std::size_t size() const noexcept { return n_; }
  bool contains(Point a, Point b) const noexcept { return rows_[a].test(b); }
  void insert(Point a, Point b) { rows_[a].set(b); }
  Bitset const& row(Point a) const noexcept { return rows_[a]; }
  Bitset& row(Point a) noexcept { return rows_[a]; }
  std::size_t pair_count() const;
  std::vector<std::pair<Point, Point>> pairs() const;
  bool is_subset_of(Relation const& other) const;

  /// The relation as a subset of X^2, pair (a,b) at index a*n+b.
  Bitset as_square_set() const;

  friend bool operator==(Relation const& a, Relation const& b) { return a.rows_ == b.rows_; }

 private:
  std::size_t n_;
  std::vector<Bitset> rows_;
};

/// Throws NotAnEquivalence if `r` is not reflexive, symmetric and transitive.
Partition partition_from_relation(Relation const& r);

/// A pair (H, X~) with flags recording which component is known maximal.
struct WitnessPair {
  Subgroup subgroup;
  Bitset witness_set;
  bool subgroup_maximal = false;
  bool set_maximal = false;

  friend bool operator==(WitnessPair const& a, WitnessPair const& b) {
    return a.subgroup == b.subgroup && a.witness_set == b.witness_set;
  }
};

// Invariance and the H_E / E_H correspondence ----------------------------------

bool is_invariant(GAction const& a, Partition const& e);

/// E_H: lying in the same H-orbit. Not necessarily invariant.
Partition orbit_relation(GAction const& a, Subgroup const& h);

/// H_E = {g : x E g.x for all x}. Throws NotInvariant.
Subgroup kernel_group(GAction const& a, Partition const& e);

struct OrbitalResult {
  bool orbital = false;
  std::optional<Subgroup> witness;  // H_E when orbital
};

/// E is orbital iff E = E_{H_E}. Throws NotInvariant.
OrbitalResult is_orbital(GAction const& a, Partition const& e);

// R_{H,X~} --------------------------------------------------------------------

/// {x : x0 R x} for R = R_{H,X~}, computed as the union of g^-1 H g . x0 over
/// the g with g.x0 in X~.
Bitset r_class(GAction const& a, Subgroup const& h, Bitset const& witness_set, Point x0);

/// The relation R_{H,X~} as an explicit pair set.
Relation r_relation(GAction const& a, Subgroup const& h, Bitset const& witness_set);

/// True iff R_{H,X~} equals the invariant equivalence relation E. Only one
/// class per G-orbit is compared, since both sides are invariant.
bool r_relation_equals(GAction const& a, Subgroup const& h, Bitset const& witness_set,
                       Partition const& e);

bool is_equivalence(Relation const& r);

// Maximal witnesses -----------------------------------------------------------

/// X~' = {x : x E h.x for all h in H}.
Bitset maximal_witness_set(GAction const& a, Partition const& e, Subgroup const& h);

/// H' = {g : x E g.x for all x in X~}. Throws EmptyWitnessSet for empty X~.
Subgroup maximal_witness_group(GAction const& a, Partition const& e, Bitset const& witness_set);

enum class MaximalOrder { SetFirst, GroupFirst };

/// Enlarges (H, X~) to a maximal pair of witnesses, applying the two
/// operators in the requested order. Verifies E = R_{H,X~} first (throws
/// WitnessMismatch) and that the result is a fixed point of both operators.
/// The two orders can produce different maximal pairs.
WitnessPair maximal_pair(GAction const& a, Partition const& e, Subgroup const& h,
                         Bitset const& witness_set, MaximalOrder order = MaximalOrder::SetFirst);

/// True iff (H, X~) is a fixed point of both maximal-witness operators.
bool is_maximal_pair(GAction const& a, Partition const& e, Subgroup const& h,
                     Bitset const& witness_set);

// Deciders --------------------------------------------------------------------

struct DeciderOptions {
  std::size_t max_group_order = 2000;
  /// Cap on subgroup classes when falling back to cyclic/2-generated search.
  std::size_t fallback_subgroup_cap = 5000;
  /// Stop after this many witnesses (1 for a plain decision).
  std::size_t max_witnesses = 1;
};

struct WeakOrbitalityResult {
  std::vector<WitnessPair> witnesses;  // in subgroup enumeration order
  std::size_t subgroups_examined = 0;
  bool exhaustive = true;  // false when the restricted fallback was used
};

/// Searches subgroups up to conjugacy for H with R_{H, X~_H} = E, where X~_H
/// is the maximal witness set for H. Throws NotInvariant, ClassCrossesOrbit.
WeakOrbitalityResult weak_orbitality_witnesses(GAction const& a, Partition const& e,
                                               DeciderOptions const& opts = {});

/// First witness in deterministic subgroup order, or nothing.
std::optional<WitnessPair> is_weakly_orbital(GAction const& a, Partition const& e,
                                             DeciderOptions const& opts = {});

/// (Stab{[x]_E}, {x}) for transitive actions; verified before return.
/// Throws NotTransitive, NotInvariant.
WitnessPair transitive_witness(GAction const& a, Partition const& e, Point x);

/// True iff E = R_{H,X} for some H. Throws NotInvariant.
bool orbital_via_full_witness(GAction const& a, Partition const& e);

/// Throws NotInvariant / ClassCrossesOrbit when the preconditions fail.
void require_invariant(GAction const& a, Partition const& e);
void require_within_orbits(GAction const& a, Partition const& e);

}  // namespace worb
