#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "worb/bitset.hpp"

namespace worb {

using Element = std::uint32_t;

/// A finite group stored as its full multiplication table.
///
/// Elements are the indices 0..order()-1. Instances are immutable once
/// built; every constructor path validates the group axioms.
class FiniteGroup {
 public:
  /// Validates `table` (square, in range, associative, identity, inverses).
  /// Associativity is decided with Light's test over a generating set.
  static FiniteGroup from_table(std::vector<std::vector<Element>> const& table);

  /// Group generated by permutations of {0..degree-1}; `images[i]` is the
  /// image list of generator i. Product convention: (p*q)(i) = p(q(i)).
  /// Element 0 is the identity permutation; the rest follow in
  /// lexicographic order of image lists.
  static FiniteGroup from_permutations(std::size_t degree,
                                       std::vector<std::vector<std::uint32_t>> const& images,
                                       std::size_t max_order = 1u << 16);

  std::size_t order() const noexcept { return order_; }
  Element identity() const noexcept { return identity_; }
  Element mul(Element a, Element b) const noexcept { return mult_[a * order_ + b]; }
  Element inv(Element a) const noexcept { return inverse_[a]; }
  Element conj(Element g, Element h) const noexcept { return mul(mul(g, h), inv(g)); }

  /// A small generating set found greedily during validation.
  std::vector<Element> const& generators() const noexcept { return generators_; }

  std::vector<std::vector<Element>> table() const;

  /// Permutation images, when the group was built from permutations.
  std::vector<std::vector<std::uint32_t>> const& permutations() const noexcept {
    return permutations_;
  }

  friend bool operator==(FiniteGroup const& a, FiniteGroup const& b) {
    return a.order_ == b.order_ && a.mult_ == b.mult_;
  }

 private:
  FiniteGroup() = default;
  void finish_validation();

  std::size_t order_ = 0;
  std::vector<Element> mult_;
  std::vector<Element> inverse_;
  Element identity_ = 0;
  std::vector<Element> generators_;
  std::vector<std::vector<std::uint32_t>> permutations_;
};

using GroupPtr = std::shared_ptr<FiniteGroup const>;

inline GroupPtr build_group(std::vector<std::vector<Element>> const& table) {
  return std::make_shared<FiniteGroup const>(FiniteGroup::from_table(table));
}

/// A subgroup, held as a sorted element list plus a membership mask.
class Subgroup {
 public:
  /// Validates that `elements` is a subgroup of `g`; throws NotASubgroup.
  static Subgroup from_elements(FiniteGroup const& g, std::span<Element const> elements);

  static Subgroup trivial(FiniteGroup const& g);
  static Subgroup whole(FiniteGroup const& g);

  std::size_t size() const noexcept { return elements_.size(); }
  std::vector<Element> const& elements() const noexcept { return elements_; }
  Bitset const& members() const noexcept { return members_; }
  bool contains(Element e) const noexcept { return e < members_.size() && members_.test(e); }
  bool is_subset_of(Subgroup const& other) const { return members_.is_subset_of(other.members_); }

  /// Some generating set (not necessarily minimal).
  std::vector<Element> const& generators() const noexcept { return generators_; }

  friend bool operator==(Subgroup const& a, Subgroup const& b) { return a.members_ == b.members_; }
  /// Deterministic order: by size, then by sorted element list.
  friend bool operator<(Subgroup const& a, Subgroup const& b) {
    return canonical_less(a.members_, b.members_);
  }

 private:
  friend Subgroup subgroup_closure(FiniteGroup const&, std::span<Element const>);
  Subgroup() = default;

  std::vector<Element> elements_;
  Bitset members_;
  std::vector<Element> generators_;
};

/// Smallest subgroup containing `gens`.
Subgroup subgroup_closure(FiniteGroup const& g, std::span<Element const> gens);

bool is_normal(FiniteGroup const& g, Subgroup const& h);

/// The subgroup {g*h*g^-1 : h in H}.
Subgroup conjugate_subgroup(FiniteGroup const& g, Element by, Subgroup const& h);

std::size_t index(FiniteGroup const& g, Subgroup const& h);

std::size_t element_order(FiniteGroup const& g, Element e);

struct SubgroupOptions {
  std::size_t max_group_order = 2000;
};

/// All subgroups, or one per conjugacy class (the canonically smallest
/// member of the class). Sorted by order, then by element list.
/// Throws BoundExceeded when the group order exceeds the bound.
std::vector<Subgroup> enumerate_subgroups(FiniteGroup const& g, bool up_to_conjugacy,
                                          SubgroupOptions const& opts = {});

/// Cyclic and 2-generated subgroups only, one per conjugacy class, capped
/// at `max_count` results. Used when the full lattice is out of reach.
std::vector<Subgroup> enumerate_small_generated_subgroups(FiniteGroup const& g,
                                                          std::size_t max_count);

}  // namespace worb
