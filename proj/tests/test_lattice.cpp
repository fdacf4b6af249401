#include "doctest.h"

#include <map>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "worb/errors.hpp"
#include "worb/lattice.hpp"
#include "worb/relations.hpp"
#include "worb/small_groups.hpp"

using namespace worb;

namespace {

Bitset bits(std::size_t n, std::vector<std::uint32_t> idx) { return make_bitset(n, idx); }

oracle::Set set_of(Bitset const& b) { return oracle::to_set(b); }

std::set<oracle::Set> member_sets(SetLattice const& l) {
  std::set<oracle::Set> out;
  for (auto const& m : l.members()) out.insert(set_of(m));
  return out;
}

// All members via the explicit union/intersection closure of the irreducibles.
std::vector<Bitset> brute_members(SetLattice const& l) {
  std::vector<oracle::Set> gens;
  for (auto const& g : l.irreducibles()) gens.push_back(set_of(g));
  std::vector<Bitset> out;
  for (auto const& s : oracle::family_closure(l.universe_size(), gens)) {
    Bitset b(l.universe_size());
    for (auto i : s) b.set(i);
    out.push_back(b);
  }
  return out;
}

bool small_lattice(SetLattice const& l, std::size_t limit) {
  try {
    l.members(limit);
    return true;
  } catch (ClosureBudgetExceeded const&) {
    return false;
  }
}

// Every axiom checked on every member instead of on irreducibles.
std::array<bool, 6> brute_agreeable(AgreeableStructure const& s) {
  auto const& a = s.action;
  std::size_t ng = a.group().order(), n = a.domain_size(), n2 = n * n;
  std::array<bool, 6> ok{true, true, true, true, true, true};
  auto sections_ok = [](std::vector<Bitset> const& mem, SetLattice const& la, SetLattice const& lb) {
    std::size_t na = la.universe_size(), nb = lb.universe_size();
    for (auto const& m : mem) {
      for (std::size_t i = 0; i < na; ++i) {
        Bitset sec(nb);
        for (std::size_t j = 0; j < nb; ++j) sec[j] = m[i * nb + j];
        if (!lb.contains(sec)) return false;
      }
      for (std::size_t j = 0; j < nb; ++j) {
        Bitset sec(na);
        for (std::size_t i = 0; i < na; ++i) sec[i] = m[i * nb + j];
        if (!la.contains(sec)) return false;
      }
    }
    return true;
  };
  auto products_ok = [](SetLattice const& la, SetLattice const& lb, SetLattice const& target) {
    auto ma = brute_members(la), mb = brute_members(lb);
    std::size_t nb = lb.universe_size();
    for (auto const& x : ma)
      for (auto const& y : mb) {
        Bitset r(la.universe_size() * nb);
        for (std::size_t i = 0; i < la.universe_size(); ++i)
          for (std::size_t j = 0; j < nb; ++j) r[i * nb + j] = x[i] && y[j];
        if (!target.contains(r)) return false;
      }
    return true;
  };
  auto gxx = brute_members(s.L_GxX), xxx = brute_members(s.L_XxX), xxg = brute_members(s.L_XxG);
  auto x2 = brute_members(*s.L_X2xX2);
  ok[0] = sections_ok(gxx, s.L_G, s.L_X) && sections_ok(xxx, s.L_X, s.L_X) && sections_ok(xxg, s.L_X, s.L_G) &&
          sections_ok(x2, s.L_XxX, s.L_XxX);
  ok[1] = products_ok(s.L_G, s.L_X, s.L_GxX) && products_ok(s.L_X, s.L_X, s.L_XxX) &&
          products_ok(s.L_X, s.L_G, s.L_XxG) && products_ok(s.L_XxX, s.L_XxX, *s.L_X2xX2);
  for (auto const& f : brute_members(s.L_X)) {
    Bitset pre(ng * n);
    for (Element g = 0; g < ng; ++g)
      for (Point x = 0; x < n; ++x) pre[g * n + x] = f[a.apply(g, x)];
    ok[2] = ok[2] && s.L_GxX.contains(pre);
  }
  for (Element g = 0; g < ng; ++g)
    for (auto const& f : xxx) {
      Bitset pre(n);
      for (Point x = 0; x < n; ++x) pre[x] = f[x * n + a.apply(g, x)];
      ok[3] = ok[3] && s.L_X.contains(pre);
    }
  for (auto const& f : x2) {
    Bitset img(n2);
    for (std::size_t p = 0; p < n2; ++p)
      for (Element g = 0; g < ng; ++g) {
        std::size_t q = a.apply(g, static_cast<Point>(p / n)) * n + a.apply(g, static_cast<Point>(p % n));
        if (f[p * n2 + q]) img.set(p);
      }
    ok[4] = ok[4] && s.L_XxX.contains(img);
  }
  for (auto const& f : xxg) {
    Bitset img(n2);
    for (Point x = 0; x < n; ++x)
      for (Element g = 0; g < ng; ++g)
        if (f[x * ng + g]) img.set(x * n + a.apply(g, x));
    ok[5] = ok[5] && s.L_XxX.contains(img);
  }
  return ok;
}

bool within_orbits(GAction const& a, Partition const& e) {
  auto orb = orbits(a);
  for (Point x = 0; x < e.size(); ++x)
    if (!orb.related(x, e.blocks()[e.block_of(x)].front())) return false;
  return true;
}

bool e_closed(AgreeableStructure const& s, Partition const& e) {
  return s.L_XxX.contains(Relation::from_partition(e).as_square_set());
}

bool classes_closed(AgreeableStructure const& s, Partition const& e) {
  for (auto const& b : e.blocks())
    if (!s.L_X.contains(make_bitset(e.size(), b))) return false;
  return true;
}

AgreeableStructure sample(gen::Rng& rng, std::size_t max_order = 6, std::size_t max_domain = 5) {
  SamplerOptions o;
  o.max_group_order = max_order;
  o.max_domain = max_domain;
  o.non_product = rng() & 1;
  return sample_agreeable_structure(rng, o);
}

}  // namespace

TEST_CASE("from_sets validates the lattice axioms") {
  CHECK_NOTHROW(SetLattice::from_sets(2, {bits(2, {}), bits(2, {0}), bits(2, {0, 1})}));
  CHECK_THROWS_AS(SetLattice::from_sets(2, {bits(2, {0}), bits(2, {0, 1})}), InvalidLattice);
  CHECK_THROWS_AS(SetLattice::from_sets(2, {bits(2, {}), bits(2, {0})}), InvalidLattice);
  CHECK_THROWS_AS(SetLattice::from_sets(3, {bits(3, {}), bits(3, {0}), bits(3, {1}), bits(3, {0, 1, 2})}),
                  InvalidLattice);
  CHECK_THROWS_AS(
      SetLattice::from_sets(3, {bits(3, {}), bits(3, {0, 1}), bits(3, {1, 2}), bits(3, {0, 1, 2})}),
      InvalidLattice);
  CHECK_THROWS_AS(SetLattice::from_union_generators(3, {bits(3, {0, 1}), bits(3, {1, 2})}), InvalidLattice);
  CHECK_THROWS_AS(SetLattice::from_union_generators(3, {bits(3, {0})}), InvalidLattice);
}

TEST_CASE("family_closure examples") {
  auto chain = family_closure(3, {bits(3, {0}), bits(3, {0, 1})});
  CHECK(chain.members().size() == 4);
  auto l = family_closure(3, {bits(3, {0, 1}), bits(3, {1, 2})});
  CHECK(member_sets(l) == std::set<oracle::Set>{{}, {1}, {0, 1}, {1, 2}, {0, 1, 2}});
  CHECK(family_closure(4, {}) == SetLattice::trivial(4));
  CHECK(family_closure(0, {}).members().size() == 1);
  CHECK_THROWS_AS(family_closure(3, {bits(4, {0})}), InvalidLattice);
}

TEST_CASE("family_closure agrees with the explicit closure") {
  gen::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + gen::below(rng, 6);
    std::vector<Bitset> gens;
    std::vector<oracle::Set> sets;
    for (std::size_t k = gen::below(rng, 5); k > 0; --k) {
      gens.push_back(gen::subset(rng, n));
      sets.push_back(set_of(gens.back()));
    }
    auto l = family_closure(n, gens);
    auto expected = oracle::family_closure(n, sets);
    CHECK(member_sets(l) == expected);
    for (int probe = 0; probe < 5; ++probe) {
      auto s = gen::subset(rng, n);
      CHECK(l.contains(s) == expected.contains(set_of(s)));
      auto m = l.largest_member_within(s);
      CHECK(l.contains(m));
      CHECK(m.is_subset_of(s));
      auto ss = set_of(s), ms = set_of(m);
      for (auto const& other : expected)
        if (std::includes(ss.begin(), ss.end(), other.begin(), other.end()))
          CHECK(std::includes(ms.begin(), ms.end(), other.begin(), other.end()));
    }
  }
}

TEST_CASE("member lists round-trip through from_sets") {
  gen::Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + gen::below(rng, 5);
    auto l = family_closure(n, {gen::subset(rng, n), gen::subset(rng, n), gen::subset(rng, n)});
    CHECK(SetLattice::from_sets(n, l.members()) == l);
    CHECK(SetLattice::from_union_generators(n, l.irreducibles()) == l);
  }
}

TEST_CASE("product lattices are generated by rectangles") {
  gen::Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t na = 1 + gen::below(rng, 3), nb = 1 + gen::below(rng, 3);
    auto a = family_closure(na, {gen::subset(rng, na), gen::subset(rng, na)});
    auto b = family_closure(nb, {gen::subset(rng, nb)});
    std::vector<oracle::Set> rects;
    for (auto const& x : a.members())
      for (auto const& y : b.members()) {
        oracle::Set r;
        for (auto i : set_of(x))
          for (auto j : set_of(y)) r.insert(static_cast<std::uint32_t>(i * nb + j));
        rects.push_back(r);
      }
    CHECK(member_sets(product_lattice(a, b)) == oracle::family_closure(na * nb, rects));
  }
  CHECK(product_lattice(SetLattice::discrete(2), SetLattice::discrete(3)) == SetLattice::discrete(6));
  CHECK(product_lattice(SetLattice::trivial(2), SetLattice::trivial(3)) == SetLattice::trivial(6));
  CHECK_THROWS_AS(product_lattice(SetLattice::discrete(30), SetLattice::discrete(30), 100), ClosureBudgetExceeded);
}

TEST_CASE("discrete structures are agreeable") {
  gen::Rng rng(24);
  for (auto const& g : gen::groups(8))
    for (int trial = 0; trial < 4; ++trial) {
      auto s = discrete_structure(gen::action(rng, g, 5));
      auto rep = check_agreeable(s);
      CHECK(rep.agreeable());
      CHECK(rep.first_failure() == 0);
      CHECK(rep.axioms[4].evaluated);
    }
}

TEST_CASE("check_agreeable on irreducibles matches the member-wise check") {
  gen::Rng rng(25);
  int compared = 0;
  for (int trial = 0; trial < 400 && compared < 60; ++trial) {
    auto g = gen::pick(rng, gen::groups(4));
    auto act = gen::action(rng, g, 3);
    std::size_t n = act.domain_size();
    auto lg = family_closure(g->order(), {gen::subset(rng, g->order())});
    auto lx = family_closure(n, {gen::subset(rng, n), gen::subset(rng, n)});
    auto s = make_structure(act, lg, lx);
    if (!small_lattice(*s.L_X2xX2, 4096) || !small_lattice(s.L_GxX, 4096)) continue;
    ++compared;
    auto rep = check_agreeable(s);
    auto brute = brute_agreeable(s);
    for (int i = 0; i < 6; ++i) CHECK(rep.axioms[i].holds == brute[i]);
  }
  CHECK(compared >= 20);
}

TEST_CASE("trivial lattices") {
  auto s3 = s3_standard();
  auto reg = regular_action(s3);
  auto t = make_structure(reg, SetLattice::trivial(6), SetLattice::trivial(6));
  CHECK(check_agreeable(t).agreeable());
  // two orbits: the image of X x G is E_G, which the trivial X x X lattice lacks
  auto two = disjoint_union(reg, reg);
  auto u = make_structure(two, SetLattice::trivial(6), SetLattice::trivial(12));
  auto rep = check_agreeable(u);
  CHECK(fixture::failing_axioms(rep) == "6");
  CHECK(*rep.axioms[5].offending == Relation::from_partition(orbits(two)).as_square_set());
  CHECK_FALSE(rep.axioms[4].evaluated);
  CHECK(u.L_X2xX2 == std::nullopt);
  CHECK_THROWS_AS(make_structure(reg, SetLattice::trivial(5), SetLattice::trivial(6)), InvalidLattice);
}

TEST_CASE("gluing two pairs localizes failures to the product and graph axioms") {
  auto a = fixture::s3_on_three();
  // p = (0, 1) lies on the graph of some g, q = (0, 0) is in another diagonal orbit
  auto s = fixture::glued_structure(a, 1, 0);
  auto rep = check_agreeable(s);
  CHECK(fixture::failing_axioms(rep) == "256");
  for (int ax : {5, 6}) {
    auto const& r = rep.axioms[ax - 1];
    REQUIRE(r.witness);
    REQUIRE(r.offending);
    CHECK_FALSE(s.L_XxX.contains(*r.offending));
    CHECK_FALSE(r.detail.empty());
  }
  // the graph of the identity hits the glued-away diagonal pair (0, 0)
  CHECK(*rep.axioms[5].offending == bits(9, {0}));
}

TEST_CASE("sampled structures are agreeable and deterministic") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    gen::Rng r1(seed), r2(seed);
    auto a = sample(r1), b = sample(r2);
    CHECK(check_agreeable(a).agreeable());
    CHECK(a.action.table() == b.action.table());
    CHECK(a.L_X == b.L_X);
    CHECK(a.L_XxX == b.L_XxX);
  }
  CHECK(task_seed(1, 0) != task_seed(1, 1));
  CHECK(task_seed(1, 5) == task_seed(1, 5));
}

TEST_CASE("invariant_partitions matches the oracle") {
  gen::Rng rng(26);
  for (int trial = 0; trial < 40; ++trial) {
    auto act = gen::action(rng, gen::pick(rng, gen::groups(8)), 7);
    std::size_t expected = 0;
    for (auto const& labels : oracle::set_partitions(act.domain_size()))
      expected += oracle::is_invariant(act, Partition::from_labels(labels));
    CHECK(invariant_partitions(act).size() == expected);
  }
  auto big = regular_action(cyclic_group(11));
  CHECK_THROWS_AS(invariant_partitions(big), BoundExceeded);
}

TEST_CASE("pseudo-closedness lemmas on sampled structures") {
  gen::Rng rng(27);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto s = sample(rng);
    auto const& a = s.action;
    for (auto const& e : invariant_partitions(a)) {
      for (Point x = 0; x < a.domain_size(); ++x) {
        if (s.L_X.contains(e.block_bits(x))) {
          CHECK(stabilizer_pseudo_closed_check(s, e, x));
          ++checked;
        } else {
          CHECK_THROWS_AS(stabilizer_pseudo_closed_check(s, e, x), HypothesisNotMet);
        }
      }
      auto rel = Relation::from_partition(e);
      for (Element h = 0; h < a.group().order(); ++h) {
        if (e_closed(s, e))
          CHECK(hfix_pseudo_closed_check(s, rel, h));
        else
          CHECK_THROWS_AS(hfix_pseudo_closed_check(s, rel, h), HypothesisNotMet);
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("closed classes force a closed relation") {
  // each class C gives C x C through the product axiom, and E is their union
  gen::Rng rng(28);
  for (int trial = 0; trial < 60; ++trial) {
    auto s = sample(rng);
    for (auto const& e : invariant_partitions(s.action))
      if (classes_closed(s, e)) CHECK(e_closed(s, e));
  }
}

TEST_CASE("verify_thm_orb examples") {
  auto s3 = s3_standard();
  auto reg = regular_action(s3);
  auto d = discrete_structure(reg);
  Element a3[] = {0, 4, 5};
  auto e = orbit_relation(reg, Subgroup::from_elements(*s3, a3));
  auto rep = verify_thm_orb(d, e);
  CHECK(rep.conditions == std::array<bool, 4>{true, true, true, true});
  CHECK(rep.agree);
  REQUIRE(rep.witness);
  CHECK(orbit_relation(reg, rep.witness->subgroup) == e);

  auto one = regular_action(cyclic_group(1));
  auto t = make_structure(one, SetLattice::trivial(1), SetLattice::trivial(1));
  auto r1 = verify_thm_orb(t, Partition::discrete(1));
  CHECK(r1.conditions == std::array<bool, 4>{true, true, true, true});

  auto tr = make_structure(reg, SetLattice::trivial(6), SetLattice::trivial(6));
  auto r2 = verify_thm_orb(tr, e);
  CHECK(r2.conditions == std::array<bool, 4>{false, false, false, false});
  CHECK(r2.agree);

  CHECK_THROWS_AS(verify_thm_orb(d, Partition::from_blocks(6, {{0, 1}, {2, 3}, {4, 5}})), NotInvariant);
  CHECK_THROWS_AS(verify_thm_orb(d, Partition::from_blocks(6, {{0, 1}, {2, 4}, {3, 5}})), NotOrbital);
  CHECK_THROWS_AS(verify_thm_orb(fixture::glued_structure(fixture::s3_on_three(), 1, 0), Partition::discrete(3)),
                  NotAgreeable);
}

TEST_CASE("verify_thm_worb examples") {
  auto a = fixture::s3_on_three();
  auto d = discrete_structure(a);
  auto rep = verify_thm_worb(d, Partition::discrete(3));
  CHECK(rep.conditions == std::array<bool, 4>{true, true, true, true});
  CHECK(rep.agree);
  REQUIRE(rep.witness);
  CHECK(r_relation_equals(a, rep.witness->subgroup, rep.witness->witness_set, Partition::discrete(3)));
  auto two = disjoint_union(a, a);
  CHECK_THROWS_AS(verify_thm_worb(discrete_structure(two), Partition::from_blocks(6, {{0, 3}, {1, 4}, {2, 5}})),
                  ClassCrossesOrbit);
}

TEST_CASE("theorem verifiers agree on sampled structures") {
  gen::Rng rng(29);
  int orb = 0, worb = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto s = sample(rng);
    auto const& a = s.action;
    for (auto const& e : invariant_partitions(a)) {
      if (is_orbital(a, e).orbital) {
        auto rep = verify_thm_orb(s, e);
        CHECK(rep.agree);
        ++orb;
      }
      if (within_orbits(a, e) && is_weakly_orbital(a, e)) {
        auto rep = verify_thm_worb(s, e);
        CHECK(rep.agree);
        if (rep.conditions[2]) {
          REQUIRE(rep.witness);
          CHECK(s.L_X.contains(rep.witness->witness_set));
          CHECK(s.L_G.contains(rep.witness->subgroup.members()));
          CHECK(r_relation_equals(a, rep.witness->subgroup, rep.witness->witness_set, e));
        }
        ++worb;
      }
    }
  }
  CHECK(orb > 0);
  CHECK(worb > 0);
}

TEST_CASE("weakly_orbital_by_pseudo_closed matches exhaustive search") {
  gen::Rng rng(30);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = sample(rng, 6, 4);
    auto const& a = s.action;
    auto subs = oracle::all_subgroups(a.group().table());
    auto members = s.L_X.members();
    for (auto const& e : invariant_partitions(a)) {
      auto target = oracle::pairs_of(e);
      for (bool closed_group : {false, true}) {
        bool expected = false;
        for (auto const& h : subs) {
          if (closed_group) {
            Bitset hb(a.group().order());
            for (auto x : h) hb.set(x);
            if (!s.L_G.contains(hb)) continue;
          }
          for (auto const& m : members) expected = expected || oracle::r_relation(a, h, set_of(m)) == target;
        }
        auto got = weakly_orbital_by_pseudo_closed(s, e, closed_group);
        CHECK(got.has_value() == expected);
        if (got) {
          CHECK(s.L_X.contains(got->witness_set));
          CHECK(r_relation_equals(a, got->subgroup, got->witness_set, e));
        }
      }
    }
  }
}

TEST_CASE("quotient separation and cross sections against brute force") {
  gen::Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    auto s = sample(rng, 6, 4);
    auto const& a = s.action;
    std::size_t n = a.domain_size();
    auto members = s.L_X.members();
    Bitset full = full_bitset(n);
    for (auto const& e : invariant_partitions(a)) {
      std::vector<Bitset> saturated;
      for (auto const& m : members) {
        bool sat = true;
        for (Point x = 0; x < n; ++x)
          if (m.test(x))
            for (Point y : e.blocks()[e.block_of(x)]) sat = sat && m.test(y);
        if (sat) saturated.push_back(m);
      }
      bool expected = true;
      for (std::size_t i = 0; i < e.block_count(); ++i)
        for (std::size_t j = i + 1; j < e.block_count(); ++j) {
          auto ci = make_bitset(n, e.blocks()[i]), cj = make_bitset(n, e.blocks()[j]);
          bool found = false;
          for (auto const& f1 : saturated)
            for (auto const& f2 : saturated)
              found = found || ((f1 | f2) == full && (ci & f1).none() && (cj & f2).none());
          expected = expected && found;
        }
      CHECK(quotient_separated(s, e) == expected);
    }
    auto orb = orbits(a);
    bool expected = true;
    for (Point x = 0; x < n; ++x) {
      bool found = false;
      for (auto const& m : members) {
        auto meet = m & orb.block_bits(x);
        found = found || (meet == bits(n, {x}) && saturate(a, m) == full);
      }
      expected = expected && found;
    }
    CHECK(cross_section_condition(s) == expected);
  }
}

TEST_CASE("quotient separation examples") {
  auto reg = regular_action(s3_standard());
  auto d = discrete_structure(reg);
  auto t = make_structure(reg, SetLattice::trivial(6), SetLattice::trivial(6));
  auto e = Partition::from_blocks(6, {{0, 1}, {2, 4}, {3, 5}});
  CHECK(quotient_separated(d, e));
  CHECK_FALSE(quotient_separated(t, e));
  CHECK(quotient_separated(t, Partition::total(6)));
  CHECK(cross_section_condition(d));
  CHECK_FALSE(cross_section_condition(t));
}

TEST_CASE("counterexample search") {
  SearchBudget zero;
  auto none = search_counterexample(zero);
  CHECK_FALSE(none.hit);
  CHECK(none.structures_examined == 0);

  SearchBudget orbital;
  orbital.samples = 20;
  orbital.orbital_only = true;
  orbital.target_b = false;
  auto r = search_counterexample(orbital);
  CHECK_FALSE(r.hit);
  CHECK(r.structures_examined == 20);

  SearchBudget b;
  b.samples = 15;
  b.seed = 7;
  auto r1 = search_counterexample(b), r2 = search_counterexample(b);
  CHECK(r1.structures_examined == r2.structures_examined);
  CHECK(r1.relations_examined == r2.relations_examined);
  CHECK(r1.hit.has_value() == r2.hit.has_value());
  if (r1.hit) {
    CHECK(r1.hit->target == 'b');
    CHECK(r1.hit->sample_seed == task_seed(b.seed, r1.hit->sample_index));
    CHECK_FALSE(quotient_separated(r1.hit->structure, r1.hit->relation));
  }
}
