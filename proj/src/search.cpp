#include <algorithm>
#include <functional>
#include <stdexcept>

#include "worb/errors.hpp"
#include "worb/lattice.hpp"
#include "worb/small_groups.hpp"

namespace worb {

namespace {

template <class T>
T const& pick(std::mt19937_64& rng, std::vector<T> const& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

std::vector<GroupPtr> small_groups(std::size_t max_order) {
  std::vector<GroupPtr> out;
  for (std::size_t n = 1; n <= std::min<std::size_t>(max_order, 8); ++n) out.push_back(cyclic_group(n));
  if (max_order >= 4) {
    auto z2 = cyclic_group(2);
    out.push_back(direct_product(*z2, *z2));
  }
  if (max_order >= 6) out.push_back(s3_standard());
  return out;
}

GAction random_action(std::mt19937_64& rng, GroupPtr const& g, std::size_t max_domain) {
  auto subs = enumerate_subgroups(*g, false);
  std::vector<Subgroup> fitting;
  for (auto const& k : subs)
    if (index(*g, k) <= max_domain) fitting.push_back(k);
  std::size_t orbits_wanted = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  auto act = coset_action(g, pick(rng, fitting));
  for (std::size_t i = 1; i < orbits_wanted; ++i) {
    std::vector<Subgroup> room;
    for (auto const& k : fitting)
      if (act.domain_size() + index(*g, k) <= max_domain) room.push_back(k);
    if (room.empty()) break;
    act = disjoint_union(act, coset_action(g, pick(rng, room)));
  }
  return act;
}

Bitset random_union_of_blocks(std::mt19937_64& rng, Partition const& p) {
  Bitset out(p.size());
  for (auto const& block : p.blocks())
    if (rng() & 1)
      for (Point x : block) out.set(x);
  return out;
}

SetLattice random_group_lattice(std::mt19937_64& rng, FiniteGroup const& g) {
  switch (rng() % 3) {
    case 0:
      return SetLattice::discrete(g.order());
    case 1:
      return SetLattice::trivial(g.order());
    default: {
      std::vector<Subgroup> normal;
      for (auto const& k : enumerate_subgroups(g, false))
        if (is_normal(g, k)) normal.push_back(k);
      auto const& k = pick(rng, normal);
      std::vector<std::uint32_t> label(g.order());
      for (Element x = 0; x < g.order(); ++x) {
        Element lo = x;
        for (Element h : k.elements()) lo = std::min(lo, g.mul(x, h));
        label[x] = lo;
      }
      return SetLattice::boolean(Partition::from_labels(label));
    }
  }
}

SetLattice random_point_lattice(std::mt19937_64& rng, GAction const& a) {
  std::size_t n = a.domain_size();
  switch (rng() % 5) {
    case 0:
      return SetLattice::discrete(n);
    case 1:
      return SetLattice::trivial(n);
    case 2: {
      auto invs = invariant_partitions(a);
      return SetLattice::boolean(pick(rng, invs));
    }
    case 3: {
      auto subs = enumerate_subgroups(a.group(), false);
      return SetLattice::boolean(orbit_relation(a, pick(rng, subs)));
    }
    default: {
      auto orb = orbits(a);
      std::vector<Bitset> gens;
      for (int i = 0; i < 2; ++i) gens.push_back(random_union_of_blocks(rng, orb));
      return family_closure(n, gens);
    }
  }
}

// Diagonal orbits on X x X.
Partition pair_orbits(GAction const& a) {
  std::size_t n = a.domain_size();
  Bitset eg = orbit_pairs(a);
  std::size_t n2 = n * n;
  std::vector<std::uint32_t> label(n2);
  for (std::size_t p = 0; p < n2; ++p) {
    std::size_t q = 0;
    while (!eg.test(p * n2 + q)) ++q;
    label[p] = static_cast<std::uint32_t>(q);
  }
  return Partition::from_labels(label);
}

}  // namespace

std::uint64_t task_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<Partition> invariant_partitions(GAction const& a) {
  std::size_t n = a.domain_size();
  if (n > 10) throw BoundExceeded("invariant_partitions supports at most 10 points");
  std::vector<Partition> out;
  std::vector<std::uint32_t> label(n);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t used) {
    if (i == n) {
      auto p = Partition::from_labels(label);
      if (is_invariant(a, p)) out.push_back(std::move(p));
      return;
    }
    for (std::uint32_t l = 0; l <= used && l < n; ++l) {
      label[i] = l;
      rec(i + 1, std::max(used, l + 1));
    }
  };
  rec(0, 0);
  return out;
}

AgreeableStructure sample_agreeable_structure(std::mt19937_64& rng, SamplerOptions const& opts) {
  auto groups = small_groups(opts.max_group_order);
  for (std::size_t attempt = 0; attempt < opts.max_attempts; ++attempt) {
    auto g = pick(rng, groups);
    auto act = random_action(rng, g, opts.max_domain);
    auto lg = random_group_lattice(rng, *g);
    auto lx = random_point_lattice(rng, act);
    LatticeOverrides over;
    if (opts.non_product && rng() % 2 == 0) {
      auto base = product_lattice(lx, lx);
      auto gens = base.irreducibles();
      auto po = pair_orbits(act);
      gens.push_back(random_union_of_blocks(rng, po));
      over.XxX = family_closure(act.domain_size() * act.domain_size(), gens);
    }
    auto s = make_structure(act, lg, lx, over);
    if (check_agreeable(s).agreeable()) return s;
  }
  throw std::runtime_error("no agreeable structure found within the attempt budget");
}

SearchResult search_counterexample(SearchBudget const& budget) {
  SearchResult res;
  SamplerOptions sopts;
  sopts.max_group_order = budget.max_group_order;
  sopts.max_domain = budget.max_domain;
  sopts.non_product = true;
  if (budget.max_group_order == 0 || budget.max_domain == 0) return res;
  for (std::size_t i = 0; i < budget.samples; ++i) {
    auto seed = task_seed(budget.seed, i);
    std::mt19937_64 rng(seed);
    auto s = sample_agreeable_structure(rng, sopts);
    ++res.structures_examined;
    auto const& a = s.action;
    auto orb = orbits(a);
    for (auto const& e : invariant_partitions(a)) {
      if (budget.orbital_only && !is_orbital(a, e).orbital) continue;
      ++res.relations_examined;
      bool e_closed = s.L_XxX.contains(Relation::from_partition(e).as_square_set());
      if (budget.target_a && !e_closed) {
        bool classes = std::all_of(e.blocks().begin(), e.blocks().end(), [&](auto const& b) {
          return s.L_X.contains(make_bitset(e.size(), b));
        });
        if (classes) {
          res.hit = SearchHit{s, e, 'a', i, seed};
          return res;
        }
      }
      if (budget.target_b && e_closed) {
        bool within = true;
        for (auto const& block : e.blocks())
          for (Point x : block) within = within && orb.related(x, block.front());
        if (within && is_weakly_orbital(a, e) && !quotient_separated(s, e)) {
          res.hit = SearchHit{s, e, 'b', i, seed};
          return res;
        }
      }
    }
  }
  return res;
}

}  // namespace worb
