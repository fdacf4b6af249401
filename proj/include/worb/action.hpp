#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "worb/bitset.hpp"
#include "worb/group.hpp"

namespace worb {

using Point = std::uint32_t;

class Partition;

/// A left action of a finite group on the points 0..domain_size()-1,
/// stored as a table act(g, x).
class GAction {
 public:
  /// Validates the identity and compatibility axioms; throws InvalidAction.
  static GAction from_table(GroupPtr group, std::size_t domain_size,
                            std::vector<std::vector<Point>> const& act);

  GroupPtr const& group_ptr() const noexcept { return group_; }
  FiniteGroup const& group() const noexcept { return *group_; }
  std::size_t domain_size() const noexcept { return domain_; }
  Point apply(Element g, Point x) const noexcept { return act_[g * domain_ + x]; }

  /// Image g.S of a point set.
  Bitset apply(Element g, Bitset const& set) const;

  std::vector<std::vector<Point>> table() const;

 private:
  GAction() = default;
  friend GAction regular_action(GroupPtr group);
  friend GAction disjoint_union(GAction const& a, GAction const& b);
  friend GAction unchecked_action(GroupPtr, std::size_t, std::vector<Point>);

  GroupPtr group_;
  std::size_t domain_ = 0;
  std::vector<Point> act_;
};

/// Builds an action from a flat row-major table without validating it.
/// Only for constructions that are actions by definition.
GAction unchecked_action(GroupPtr group, std::size_t domain_size, std::vector<Point> act);

/// The group acting on itself by left multiplication.
GAction regular_action(GroupPtr group);

/// The action on left cosets gK of a subgroup K; coset i is listed in order
/// of its smallest element.
GAction coset_action(GroupPtr group, Subgroup const& k);

/// Action on the disjoint sum; points of `b` are shifted by a.domain_size().
/// Throws GroupMismatch unless both act through equal groups.
GAction disjoint_union(GAction const& a, GAction const& b);

/// The G-orbits, as a partition (the relation E_G).
Partition orbits(GAction const& a);

bool is_transitive(GAction const& a);
bool is_free(GAction const& a);

/// The G-saturation G.S of a point set.
Bitset saturate(GAction const& a, Bitset const& set);

/// For each point, some g with g.rep = point, where rep is the smallest
/// point of its orbit.
std::vector<Element> orbit_transversal(GAction const& a);

/// {g : x E g.x}. Throws NotASubgroup when the set is not a subgroup,
/// which can only happen for non-invariant E.
Subgroup class_stabilizer(GAction const& a, Partition const& e, Point x);

}  // namespace worb
