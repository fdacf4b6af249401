#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "worb/action.hpp"
#include "worb/bitset.hpp"
#include "worb/relations.hpp"

namespace worb {

/// A finite lattice of subsets of 0..universe_size()-1 containing the empty
/// and the full set. Finite lattices of sets are distributive, so the family
/// is stored through its join-irreducible members: every member is a union
/// of them, and membership, largest-member-below and union-preserving maps
/// only ever need to look at these.
class SetLattice {
 public:
  /// Validates that `sets` contains both bounds and is closed under pairwise
  /// union and intersection; throws InvalidLattice.
  static SetLattice from_sets(std::size_t n, std::vector<Bitset> const& sets);

  /// The family of all unions of `gens`. Throws InvalidLattice unless the
  /// full set is such a union and pairwise intersections stay in the family.
  static SetLattice from_union_generators(std::size_t n, std::vector<Bitset> const& gens);

  /// Unions of blocks of `atoms`.
  static SetLattice boolean(Partition const& atoms);
  static SetLattice discrete(std::size_t n);
  static SetLattice trivial(std::size_t n);

  std::size_t universe_size() const noexcept { return n_; }

  /// Join-irreducible members in canonical order.
  std::vector<Bitset> const& irreducibles() const noexcept { return irreducibles_; }

  bool contains(Bitset const& set) const;

  /// The union of all members contained in `set` (itself a member).
  Bitset largest_member_within(Bitset const& set) const;

  /// Every member in canonical order; throws ClosureBudgetExceeded past `cap`.
  std::vector<Bitset> members(std::size_t cap = std::size_t{1} << 20) const;

  friend bool operator==(SetLattice const& a, SetLattice const& b) {
    return a.n_ == b.n_ && a.irreducibles_ == b.irreducibles_;
  }

 private:
  SetLattice() = default;
  static SetLattice unchecked(std::size_t n, std::vector<Bitset> gens);
  friend SetLattice product_lattice(SetLattice const&, SetLattice const&, std::size_t);

  std::size_t n_ = 0;
  std::vector<Bitset> irreducibles_;
};

/// Smallest lattice containing `gens`, the empty set and the full set.
/// Throws ClosureBudgetExceeded when more than `cap` meet-generators arise.
SetLattice family_closure(std::size_t n, std::vector<Bitset> const& gens,
                          std::size_t cap = std::size_t{1} << 20);

/// Lattice on the product universe (a at index a*|B|+b) generated by all
/// rectangles A x B.
SetLattice product_lattice(SetLattice const& a, SetLattice const& b,
                           std::size_t cap = std::size_t{1} << 20);

bool is_pseudo_closed(SetLattice const& l, Bitset const& set);

// Agreeable structures ---------------------------------------------------------
//
// Product universes use row-major indices:
//   G x X:      g*|X| + x
//   X x X:      x1*|X| + x2
//   X x G:      x*|G| + g
//   (X^2)^2:    p1*|X|^2 + p2, with p1, p2 pair indices in X x X

struct AgreeableStructure {
  GAction action;
  SetLattice L_G;
  SetLattice L_X;
  SetLattice L_GxX;
  SetLattice L_XxX;
  SetLattice L_XxG;
  /// The (X^2)^2 data is quartic in |X| and only present for small domains
  /// or when supplied explicitly.
  std::optional<SetLattice> L_X2xX2;
  /// Pairs (p, p') of X^2 with p' = g.p for some g, as a subset of (X^2)^2.
  Bitset E_G_pairs;
};

/// Largest domain for which make_structure builds the default (X^2)^2 lattice.
inline constexpr std::size_t kQuarticDomainLimit = 6;

struct LatticeOverrides {
  std::optional<SetLattice> GxX, XxX, XxG, X2xX2;
};

/// Fills unspecified product lattices with product lattices (the (X^2)^2
/// default is the product of the final X x X lattice with itself, built
/// only up to kQuarticDomainLimit points). Throws InvalidLattice when a
/// lattice has the wrong universe size.
AgreeableStructure make_structure(GAction action, SetLattice L_G, SetLattice L_X,
                                  LatticeOverrides const& overrides = {});

/// Every lattice discrete.
AgreeableStructure discrete_structure(GAction action);

Bitset orbit_pairs(GAction const& a);

struct AxiomResult {
  int axiom = 0;
  bool evaluated = true;
  bool holds = true;
  /// On failure: which map or product failed, the source set and the set
  /// that should have been pseudo-closed.
  std::string detail;
  std::optional<Bitset> witness;
  std::optional<Bitset> offending;
};

struct AgreeabilityReport {
  std::array<AxiomResult, 6> axioms;
  bool agreeable() const;
  /// Index (1-6) of the first failing axiom, 0 if none failed.
  int first_failure() const;
};

struct AgreeableOptions {
  /// Axiom (5) lives on (X^2)^2; skip it above this domain size.
  std::size_t max_axiom5_domain = kQuarticDomainLimit;
};

AgreeabilityReport check_agreeable(AgreeableStructure const& s, AgreeableOptions const& opts = {});

/// Stab{[x]_E} in L_G, given [x]_E in L_X. Throws HypothesisNotMet.
bool stabilizer_pseudo_closed_check(AgreeableStructure const& s, Partition const& e, Point x);

/// {x : x E h.x} in L_X, given E in L_XxX. Throws HypothesisNotMet.
bool hfix_pseudo_closed_check(AgreeableStructure const& s, Relation const& e_pairs, Element h);

struct VerifierOptions {
  AgreeableOptions agreeable;
  std::size_t max_group_order = 2000;
};

struct TheoremReport {
  std::array<bool, 4> conditions{};
  bool agree = false;
  std::string note;
  /// Witness for condition (3) or (4) of the orbital theorem / (3) of the
  /// weakly orbital one, when found.
  std::optional<WitnessPair> witness;
  /// Weakly orbital theorem, condition (4): maximal witnesses that are not
  /// pseudo-closed.
  std::vector<Subgroup> unclosed_maximal_groups;
  std::vector<Bitset> unclosed_maximal_sets;
};

/// Evaluates the four conditions of the orbital meta-theorem. Throws
/// NotAgreeable, NotInvariant, NotOrbital.
TheoremReport verify_thm_orb(AgreeableStructure const& s, Partition const& e,
                             VerifierOptions const& opts = {});

/// Evaluates the four conditions of the weakly orbital meta-theorem. Throws
/// NotAgreeable, NotInvariant, ClassCrossesOrbit, NotWeaklyOrbital.
TheoremReport verify_thm_worb(AgreeableStructure const& s, Partition const& e,
                              VerifierOptions const& opts = {});

/// True iff E is R_{H,X~} for some subgroup H and pseudo-closed X~. When
/// `closed_group` is set, H must lie in L_G as well.
std::optional<WitnessPair> weakly_orbital_by_pseudo_closed(AgreeableStructure const& s,
                                                           Partition const& e, bool closed_group,
                                                           std::size_t max_group_order = 2000);

/// Any two distinct E-classes are separated by E-saturated pseudo-closed
/// F1, F2 with F1 u F2 = X, C1 n F1 = 0, C2 n F2 = 0.
bool quotient_separated(AgreeableStructure const& s, Partition const& e);

/// Every x has a pseudo-closed A with A n G.x = {x} and G.A = X.
bool cross_section_condition(AgreeableStructure const& s);

// Random structures and counterexample search ----------------------------------

struct SamplerOptions {
  std::size_t max_group_order = 6;
  std::size_t max_domain = 5;
  /// Allow X x X lattices that are strictly finer than the product lattice.
  bool non_product = false;
  std::size_t max_attempts = 200;
};

/// A random agreeable structure; throws std::runtime_error if none is found
/// within the attempt budget.
AgreeableStructure sample_agreeable_structure(std::mt19937_64& rng, SamplerOptions const& opts = {});

/// All invariant equivalence relations on the domain (|X| <= 10).
std::vector<Partition> invariant_partitions(GAction const& a);

/// Seed for task `index` of a run, independent of execution order.
std::uint64_t task_seed(std::uint64_t seed, std::uint64_t index);

struct SearchBudget {
  std::uint64_t seed = 1;
  std::size_t samples = 0;
  std::size_t max_group_order = 6;
  std::size_t max_domain = 5;
  bool orbital_only = false;
  /// (a): classes pseudo-closed but E not.
  bool target_a = true;
  /// (b): E pseudo-closed and weakly orbital, quotient not separated.
  bool target_b = true;
};

struct SearchHit {
  AgreeableStructure structure;
  Partition relation;
  char target = 'a';
  std::size_t sample_index = 0;
  std::uint64_t sample_seed = 0;
};

struct SearchResult {
  std::optional<SearchHit> hit;
  std::size_t structures_examined = 0;
  std::size_t relations_examined = 0;
};

SearchResult search_counterexample(SearchBudget const& budget);

}  // namespace worb
