#include "worb/relations.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "worb/errors.hpp"

namespace worb {

// Partition -------------------------------------------------------------------

Partition Partition::from_labels(std::vector<std::uint32_t> const& labels) {
  Partition p;
  p.block_of_.resize(labels.size());
  std::unordered_map<std::uint32_t, std::uint32_t> canon;
  for (Point x = 0; x < labels.size(); ++x) {
    auto [it, fresh] = canon.emplace(labels[x], static_cast<std::uint32_t>(p.blocks_.size()));
    if (fresh) p.blocks_.emplace_back();
    p.block_of_[x] = it->second;
    p.blocks_[it->second].push_back(x);
  }
  return p;
}

Partition Partition::from_blocks(std::size_t n, std::vector<std::vector<Point>> const& blocks) {
  std::vector<std::uint32_t> labels(n, UINT32_MAX);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw InvalidPartition("block " + std::to_string(b) + " is empty");
    for (Point x : blocks[b]) {
      if (x >= n) throw InvalidPartition("point " + std::to_string(x) + " out of range");
      if (labels[x] != UINT32_MAX) throw InvalidPartition("point " + std::to_string(x) + " in two blocks");
      labels[x] = static_cast<std::uint32_t>(b);
    }
  }
  for (Point x = 0; x < n; ++x)
    if (labels[x] == UINT32_MAX) throw InvalidPartition("point " + std::to_string(x) + " not covered");
  return from_labels(labels);
}

Partition Partition::discrete(std::size_t n) {
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::uint32_t>(i);
  return from_labels(labels);
}

Partition Partition::total(std::size_t n) { return from_labels(std::vector<std::uint32_t>(n, 0)); }

Bitset Partition::block_bits(Point x) const {
  Bitset b(size());
  for (Point y : blocks_[block_of_[x]]) b.set(y);
  return b;
}

// Relation --------------------------------------------------------------------

Relation Relation::from_partition(Partition const& p) {
  Relation r(p.size());
  for (auto const& block : p.blocks()) {
    Bitset bits(p.size());
    for (Point y : block) bits.set(y);
    for (Point x : block) r.rows_[x] = bits;
  }
  return r;
}

Relation Relation::from_pairs(std::size_t n, std::vector<std::pair<Point, Point>> const& pairs) {
  Relation r(n);
  for (auto [a, b] : pairs) {
    if (a >= n || b >= n) throw InvalidPartition("pair index out of range");
    r.insert(a, b);
  }
  return r;
}

std::size_t Relation::pair_count() const {
  std::size_t c = 0;
  for (auto const& row : rows_) c += row.count();
  return c;
}

std::vector<std::pair<Point, Point>> Relation::pairs() const {
  std::vector<std::pair<Point, Point>> out;
  for (Point a = 0; a < n_; ++a)
    for (auto b = rows_[a].find_first(); b != Bitset::npos; b = rows_[a].find_next(b))
      out.emplace_back(a, static_cast<Point>(b));
  return out;
}

bool Relation::is_subset_of(Relation const& other) const {
  if (n_ != other.n_) return false;
  for (Point a = 0; a < n_; ++a)
    if (!rows_[a].is_subset_of(other.rows_[a])) return false;
  return true;
}

Bitset Relation::as_square_set() const {
  Bitset out(n_ * n_);
  for (Point a = 0; a < n_; ++a)
    for (auto b = rows_[a].find_first(); b != Bitset::npos; b = rows_[a].find_next(b))
      out.set(a * n_ + b);
  return out;
}

bool is_equivalence(Relation const& r) {
  std::size_t n = r.size();
  for (Point a = 0; a < n; ++a)
    if (!r.contains(a, a)) return false;
  for (Point a = 0; a < n; ++a) {
    auto const& row = r.row(a);
    for (auto b = row.find_first(); b != Bitset::npos; b = row.find_next(b)) {
      if (!r.contains(static_cast<Point>(b), a)) return false;
      if (!r.row(static_cast<Point>(b)).is_subset_of(row)) return false;
    }
  }
  return true;
}

Partition partition_from_relation(Relation const& r) {
  if (!is_equivalence(r)) throw NotAnEquivalence("relation is not an equivalence relation");
  std::vector<std::uint32_t> labels(r.size());
  for (Point a = 0; a < r.size(); ++a) labels[a] = static_cast<std::uint32_t>(r.row(a).find_first());
  return Partition::from_labels(labels);
}

// Invariance ------------------------------------------------------------------

bool is_invariant(GAction const& a, Partition const& e) {
  if (e.size() != a.domain_size()) throw InvalidPartition("partition size does not match domain");
  // Forward implication for generators suffices in a finite group.
  for (Element s : a.group().generators()) {
    for (auto const& block : e.blocks()) {
      auto target = e.block_of(a.apply(s, block.front()));
      for (Point x : block)
        if (e.block_of(a.apply(s, x)) != target) return false;
    }
  }
  return true;
}

void require_invariant(GAction const& a, Partition const& e) {
  if (!is_invariant(a, e)) throw NotInvariant("equivalence relation is not G-invariant");
}

void require_within_orbits(GAction const& a, Partition const& e) {
  auto orb = orbits(a);
  for (auto const& block : e.blocks())
    for (Point x : block)
      if (!orb.related(x, block.front()))
        throw ClassCrossesOrbit("class of point " + std::to_string(block.front()) +
                                " meets two G-orbits");
}

Partition orbit_relation(GAction const& a, Subgroup const& h) {
  std::size_t n = a.domain_size();
  std::vector<std::uint32_t> label(n, UINT32_MAX);
  for (Point s = 0; s < n; ++s) {
    if (label[s] != UINT32_MAX) continue;
    for (Element e : h.elements()) label[a.apply(e, s)] = s;
  }
  return Partition::from_labels(label);
}

namespace {

// x E s.x for every generator s of H; exact for invariant E, since the
// set of g with x E g.x is then a subgroup.
Bitset witness_set_by_generators(GAction const& a, Partition const& e, Subgroup const& h) {
  Bitset out(a.domain_size());
  for (Point x = 0; x < a.domain_size(); ++x) {
    bool ok = true;
    for (Element s : h.generators())
      if (!e.related(x, a.apply(s, x))) {
        ok = false;
        break;
      }
    if (ok) out.set(x);
  }
  return out;
}

Subgroup group_fixing_classes(GAction const& a, Partition const& e, Bitset const& points) {
  std::vector<Element> elems;
  for (Element g = 0; g < a.group().order(); ++g) {
    bool ok = true;
    for (auto x = points.find_first(); x != Bitset::npos && ok; x = points.find_next(x))
      ok = e.related(static_cast<Point>(x), a.apply(g, static_cast<Point>(x)));
    if (ok) elems.push_back(g);
  }
  return Subgroup::from_elements(a.group(), elems);
}

bool meets_every_orbit(Partition const& orbit_part, Bitset const& set) {
  for (auto const& block : orbit_part.blocks()) {
    bool hit = false;
    for (Point x : block)
      if (set.test(x)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

bool r_equals_unchecked(GAction const& a, Partition const& orbit_part, Subgroup const& h,
                        Bitset const& witness_set, Partition const& e) {
  for (auto const& block : orbit_part.blocks()) {
    Point rep = block.front();
    if (r_class(a, h, witness_set, rep) != e.block_bits(rep)) return false;
  }
  return true;
}

}  // namespace

Subgroup kernel_group(GAction const& a, Partition const& e) {
  require_invariant(a, e);
  return group_fixing_classes(a, e, full_bitset(a.domain_size()));
}

OrbitalResult is_orbital(GAction const& a, Partition const& e) {
  auto h = kernel_group(a, e);
  if (orbit_relation(a, h) == e) return {true, std::move(h)};
  return {false, std::nullopt};
}

// R_{H,X~} --------------------------------------------------------------------

Bitset r_class(GAction const& a, Subgroup const& h, Bitset const& witness_set, Point x0) {
  auto const& g = a.group();
  Bitset out(a.domain_size());
  std::unordered_map<Point, std::vector<Point>> h_orbit;
  for (Element k = 0; k < g.order(); ++k) {
    Point y = a.apply(k, x0);
    if (!witness_set.test(y)) continue;
    auto it = h_orbit.find(y);
    if (it == h_orbit.end()) {
      std::vector<Point> orb;
      Bitset seen(a.domain_size());
      for (Element e : h.elements()) {
        Point z = a.apply(e, y);
        if (!seen.test(z)) {
          seen.set(z);
          orb.push_back(z);
        }
      }
      it = h_orbit.emplace(y, std::move(orb)).first;
    }
    Element back = g.inv(k);
    for (Point z : it->second) out.set(a.apply(back, z));
  }
  return out;
}

Relation r_relation(GAction const& a, Subgroup const& h, Bitset const& witness_set) {
  std::size_t n = a.domain_size();
  Relation r(n);
  auto part = orbits(a);
  auto transversal = orbit_transversal(a);
  // R is invariant: row(t.rep) = t.row(rep).
  for (auto const& block : part.blocks()) {
    Bitset base = r_class(a, h, witness_set, block.front());
    for (Point x : block) r.row(x) = a.apply(transversal[x], base);
  }
  return r;
}

bool r_relation_equals(GAction const& a, Subgroup const& h, Bitset const& witness_set,
                       Partition const& e) {
  return r_equals_unchecked(a, orbits(a), h, witness_set, e);
}

// Maximal witnesses -----------------------------------------------------------

Bitset maximal_witness_set(GAction const& a, Partition const& e, Subgroup const& h) {
  Bitset out(a.domain_size());
  for (Point x = 0; x < a.domain_size(); ++x) {
    bool ok = true;
    for (Element k : h.elements())
      if (!e.related(x, a.apply(k, x))) {
        ok = false;
        break;
      }
    if (ok) out.set(x);
  }
  return out;
}

Subgroup maximal_witness_group(GAction const& a, Partition const& e, Bitset const& witness_set) {
  if (witness_set.none()) throw EmptyWitnessSet("every element fixes the classes of an empty set");
  return group_fixing_classes(a, e, witness_set);
}

bool is_maximal_pair(GAction const& a, Partition const& e, Subgroup const& h,
                     Bitset const& witness_set) {
  if (witness_set.none() || !is_invariant(a, e)) return false;
  if (!r_relation_equals(a, h, witness_set, e)) return false;
  return maximal_witness_set(a, e, h) == witness_set && maximal_witness_group(a, e, witness_set) == h;
}

WitnessPair maximal_pair(GAction const& a, Partition const& e, Subgroup const& h,
                         Bitset const& witness_set, MaximalOrder order) {
  if (!is_invariant(a, e) || !r_relation_equals(a, h, witness_set, e))
    throw WitnessMismatch("E is not R_{H,X~} for the given pair");
  WitnessPair out{h, witness_set, true, true};
  if (order == MaximalOrder::SetFirst) {
    out.witness_set = maximal_witness_set(a, e, h);
    out.subgroup = maximal_witness_group(a, e, out.witness_set);
  } else {
    out.subgroup = maximal_witness_group(a, e, witness_set);
    out.witness_set = maximal_witness_set(a, e, out.subgroup);
  }
  if (maximal_witness_set(a, e, out.subgroup) != out.witness_set ||
      maximal_witness_group(a, e, out.witness_set) != out.subgroup ||
      !r_relation_equals(a, out.subgroup, out.witness_set, e))
    throw std::logic_error("maximal_pair: result is not a maximal pair of witnesses");
  return out;
}

// Deciders --------------------------------------------------------------------

WeakOrbitalityResult weak_orbitality_witnesses(GAction const& a, Partition const& e,
                                               DeciderOptions const& opts) {
  require_invariant(a, e);
  require_within_orbits(a, e);
  auto const& g = a.group();
  WeakOrbitalityResult result;
  std::vector<Subgroup> candidates;
  if (g.order() <= opts.max_group_order) {
    candidates = enumerate_subgroups(g, true, {opts.max_group_order});
  } else {
    candidates = enumerate_small_generated_subgroups(g, opts.fallback_subgroup_cap);
    result.exhaustive = false;
  }
  auto orbit_part = orbits(a);
  for (auto const& h : candidates) {
    ++result.subgroups_examined;
    Bitset xt = witness_set_by_generators(a, e, h);
    if (!meets_every_orbit(orbit_part, xt)) continue;
    if (!r_equals_unchecked(a, orbit_part, h, xt, e)) continue;
    bool h_max = group_fixing_classes(a, e, xt) == h;
    result.witnesses.push_back({h, std::move(xt), h_max, true});
    if (result.witnesses.size() >= opts.max_witnesses) break;
  }
  return result;
}

std::optional<WitnessPair> is_weakly_orbital(GAction const& a, Partition const& e,
                                             DeciderOptions const& opts) {
  auto local = opts;
  local.max_witnesses = 1;
  auto res = weak_orbitality_witnesses(a, e, local);
  if (res.witnesses.empty()) return std::nullopt;
  return std::move(res.witnesses.front());
}

WitnessPair transitive_witness(GAction const& a, Partition const& e, Point x) {
  if (!is_transitive(a)) throw NotTransitive("action has more than one orbit");
  require_invariant(a, e);
  auto h = class_stabilizer(a, e, x);
  Bitset xt(a.domain_size());
  xt.set(x);
  if (!r_relation_equals(a, h, xt, e))
    throw std::logic_error("transitive_witness: stabiliser pair does not reproduce E");
  bool set_max = maximal_witness_set(a, e, h) == xt;
  bool h_max = maximal_witness_group(a, e, xt) == h;
  return {std::move(h), std::move(xt), h_max, set_max};
}

bool orbital_via_full_witness(GAction const& a, Partition const& e) {
  // Any H with E = R_{H,X} enlarges to the maximal witness group for X,
  // which is H_E.
  auto h = kernel_group(a, e);
  return r_relation_equals(a, h, full_bitset(a.domain_size()), e);
}

}  // namespace worb
