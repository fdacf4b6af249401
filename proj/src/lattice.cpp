#include "worb/lattice.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "worb/errors.hpp"

namespace worb {

namespace {

std::string set_text(Bitset const& b) {
  std::string out = "{";
  bool first = true;
  for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

// Drops empty sets, duplicates and sets that are unions of smaller members.
std::vector<Bitset> join_irreducibles(std::vector<Bitset> family) {
  std::erase_if(family, [](Bitset const& b) { return b.none(); });
  std::sort(family.begin(), family.end(), canonical_less);
  family.erase(std::unique(family.begin(), family.end()), family.end());
  std::vector<Bitset> out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    Bitset acc(family[i].size());
    auto ci = family[i].count();
    for (std::size_t j = 0; j < i && family[j].count() < ci; ++j)
      if (family[j].is_subset_of(family[i])) acc |= family[j];
    if (acc != family[i]) out.push_back(family[i]);
  }
  return out;
}

Bitset rectangle(Bitset const& a, Bitset const& b) {
  std::size_t nb = b.size();
  Bitset out(a.size() * nb);
  for (auto i = a.find_first(); i != Bitset::npos; i = a.find_next(i))
    for (auto j = b.find_first(); j != Bitset::npos; j = b.find_next(j)) out.set(i * nb + j);
  return out;
}

void require_universe(SetLattice const& l, std::size_t n, char const* name) {
  if (l.universe_size() != n)
    throw InvalidLattice(std::string(name) + " has universe " + std::to_string(l.universe_size()) +
                         ", expected " + std::to_string(n));
}

}  // namespace

// SetLattice ------------------------------------------------------------------

SetLattice SetLattice::unchecked(std::size_t n, std::vector<Bitset> gens) {
  SetLattice l;
  l.n_ = n;
  l.irreducibles_ = join_irreducibles(std::move(gens));
  return l;
}

SetLattice SetLattice::from_sets(std::size_t n, std::vector<Bitset> const& sets) {
  std::unordered_set<Bitset> family;
  for (auto const& s : sets) {
    if (s.size() != n) throw InvalidLattice("set of size " + std::to_string(s.size()) + " in universe " + std::to_string(n));
    family.insert(s);
  }
  if (!family.contains(Bitset(n))) throw InvalidLattice("empty set missing");
  if (!family.contains(full_bitset(n))) throw InvalidLattice("full set missing");
  std::vector<Bitset> list(family.begin(), family.end());
  for (std::size_t i = 0; i < list.size(); ++i)
    for (std::size_t j = i + 1; j < list.size(); ++j) {
      if (!family.contains(list[i] | list[j]))
        throw InvalidLattice("not closed under union: " + set_text(list[i]) + " u " + set_text(list[j]));
      if (!family.contains(list[i] & list[j]))
        throw InvalidLattice("not closed under intersection: " + set_text(list[i]) + " n " + set_text(list[j]));
    }
  return unchecked(n, std::move(list));
}

SetLattice SetLattice::from_union_generators(std::size_t n, std::vector<Bitset> const& gens) {
  for (auto const& s : gens)
    if (s.size() != n) throw InvalidLattice("generator outside universe " + std::to_string(n));
  auto l = unchecked(n, gens);
  if (!l.contains(full_bitset(n))) throw InvalidLattice("full set is not a union of generators");
  auto const& irr = l.irreducibles_;
  for (std::size_t i = 0; i < irr.size(); ++i)
    for (std::size_t j = i + 1; j < irr.size(); ++j) {
      Bitset meet = irr[i] & irr[j];
      if (meet.any() && !l.contains(meet))
        throw InvalidLattice("not closed under intersection: " + set_text(irr[i]) + " n " + set_text(irr[j]));
    }
  return l;
}

SetLattice SetLattice::boolean(Partition const& atoms) {
  std::vector<Bitset> gens;
  for (auto const& block : atoms.blocks()) gens.push_back(make_bitset(atoms.size(), block));
  return unchecked(atoms.size(), std::move(gens));
}

SetLattice SetLattice::discrete(std::size_t n) { return boolean(Partition::discrete(n)); }

SetLattice SetLattice::trivial(std::size_t n) { return boolean(Partition::total(n)); }

bool SetLattice::contains(Bitset const& set) const {
  if (set.size() != n_) return false;
  return largest_member_within(set) == set;
}

Bitset SetLattice::largest_member_within(Bitset const& set) const {
  Bitset acc(n_);
  for (auto const& g : irreducibles_)
    if (g.is_subset_of(set)) acc |= g;
  return acc;
}

std::vector<Bitset> SetLattice::members(std::size_t cap) const {
  std::unordered_set<Bitset> seen{Bitset(n_)};
  std::vector<Bitset> queue{Bitset(n_)};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (auto const& g : irreducibles_) {
      Bitset next = queue[i] | g;
      if (seen.insert(next).second) {
        if (seen.size() > cap) throw ClosureBudgetExceeded("lattice has more than " + std::to_string(cap) + " members");
        queue.push_back(std::move(next));
      }
    }
  }
  std::sort(queue.begin(), queue.end(), canonical_less);
  return queue;
}

SetLattice family_closure(std::size_t n, std::vector<Bitset> const& gens, std::size_t cap) {
  // Unions of finite intersections of the generators (with the full set)
  // form the generated lattice.
  std::unordered_set<Bitset> seen;
  std::vector<Bitset> meets;
  auto add = [&](Bitset b) {
    if (b.none() || !seen.insert(b).second) return;
    if (seen.size() > cap) throw ClosureBudgetExceeded("more than " + std::to_string(cap) + " meet-generators");
    meets.push_back(std::move(b));
  };
  if (n > 0) add(full_bitset(n));
  for (auto const& g : gens) {
    if (g.size() != n) throw InvalidLattice("generator outside universe " + std::to_string(n));
    add(g);
  }
  for (std::size_t i = 0; i < meets.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) add(meets[i] & meets[j]);
  return SetLattice::from_union_generators(n, meets);
}

SetLattice product_lattice(SetLattice const& a, SetLattice const& b, std::size_t cap) {
  auto const& ia = a.irreducibles();
  auto const& ib = b.irreducibles();
  if (ia.size() * ib.size() > cap)
    throw ClosureBudgetExceeded("product has " + std::to_string(ia.size() * ib.size()) + " rectangle generators");
  std::vector<Bitset> gens;
  gens.reserve(ia.size() * ib.size());
  for (auto const& x : ia)
    for (auto const& y : ib) gens.push_back(rectangle(x, y));
  // (A x B) n (C x D) = (A n C) x (B n D), so rectangles of irreducibles
  // already generate an intersection-closed family under unions.
  return SetLattice::unchecked(a.universe_size() * b.universe_size(), std::move(gens));
}

bool is_pseudo_closed(SetLattice const& l, Bitset const& set) { return l.contains(set); }

// Structures ------------------------------------------------------------------

Bitset orbit_pairs(GAction const& a) {
  std::size_t n = a.domain_size(), n2 = n * n;
  std::vector<std::uint32_t> label(n2, UINT32_MAX);
  std::vector<std::uint32_t> stack;
  std::uint32_t next = 0;
  for (std::uint32_t s = 0; s < n2; ++s) {
    if (label[s] != UINT32_MAX) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      auto p = stack.back();
      stack.pop_back();
      for (Element g : a.group().generators()) {
        auto q = static_cast<std::uint32_t>(a.apply(g, p / n) * n + a.apply(g, p % n));
        if (label[q] == UINT32_MAX) {
          label[q] = next;
          stack.push_back(q);
        }
      }
    }
    ++next;
  }
  Bitset out(n2 * n2);
  for (std::size_t p = 0; p < n2; ++p)
    for (std::size_t q = 0; q < n2; ++q)
      if (label[p] == label[q]) out.set(p * n2 + q);
  return out;
}

AgreeableStructure make_structure(GAction action, SetLattice L_G, SetLattice L_X,
                                  LatticeOverrides const& overrides) {
  std::size_t g = action.group().order(), n = action.domain_size();
  require_universe(L_G, g, "L_G");
  require_universe(L_X, n, "L_X");
  auto gxx = overrides.GxX ? *overrides.GxX : product_lattice(L_G, L_X);
  auto xxx = overrides.XxX ? *overrides.XxX : product_lattice(L_X, L_X);
  auto xxg = overrides.XxG ? *overrides.XxG : product_lattice(L_X, L_G);
  require_universe(gxx, g * n, "L_GxX");
  require_universe(xxx, n * n, "L_XxX");
  require_universe(xxg, n * g, "L_XxG");
  std::optional<SetLattice> x2x2 = overrides.X2xX2;
  if (!x2x2 && n <= kQuarticDomainLimit) x2x2 = product_lattice(xxx, xxx);
  Bitset eg;
  if (x2x2) {
    require_universe(*x2x2, n * n * n * n, "L_X2xX2");
    eg = orbit_pairs(action);
  }
  return {std::move(action), std::move(L_G), std::move(L_X), std::move(gxx),
          std::move(xxx),    std::move(xxg), std::move(x2x2), std::move(eg)};
}

AgreeableStructure discrete_structure(GAction action) {
  std::size_t g = action.group().order(), n = action.domain_size();
  return make_structure(std::move(action), SetLattice::discrete(g), SetLattice::discrete(n));
}

// Agreeability ----------------------------------------------------------------

bool AgreeabilityReport::agreeable() const {
  return std::all_of(axioms.begin(), axioms.end(), [](AxiomResult const& r) { return r.holds; });
}

int AgreeabilityReport::first_failure() const {
  for (auto const& r : axioms)
    if (!r.holds) return r.axiom;
  return 0;
}

namespace {

void fail(AxiomResult& r, std::string detail, Bitset const& witness, Bitset const& offending) {
  r.holds = false;
  r.detail = std::move(detail);
  r.witness = witness;
  r.offending = offending;
}

// Sections of the irreducibles of `l` over A x B land in `la` / `lb`.
// Sections commute with unions, so irreducibles suffice.
bool check_sections(AxiomResult& r, SetLattice const& l, SetLattice const& la, SetLattice const& lb,
                    char const* name) {
  std::size_t na = la.universe_size(), nb = lb.universe_size();
  for (auto const& s : l.irreducibles()) {
    for (std::size_t a = 0; a < na; ++a) {
      Bitset sec(nb);
      for (std::size_t b = 0; b < nb; ++b)
        if (s.test(a * nb + b)) sec.set(b);
      if (!lb.contains(sec)) {
        fail(r, std::string("section of ") + name + " at first coordinate " + std::to_string(a), s, sec);
        return false;
      }
    }
    for (std::size_t b = 0; b < nb; ++b) {
      Bitset sec(na);
      for (std::size_t a = 0; a < na; ++a)
        if (s.test(a * nb + b)) sec.set(a);
      if (!la.contains(sec)) {
        fail(r, std::string("section of ") + name + " at second coordinate " + std::to_string(b), s, sec);
        return false;
      }
    }
  }
  return true;
}

bool check_products(AxiomResult& r, SetLattice const& la, SetLattice const& lb, SetLattice const& target,
                    char const* name) {
  for (auto const& a : la.irreducibles())
    for (auto const& b : lb.irreducibles()) {
      Bitset rect = rectangle(a, b);
      if (!target.contains(rect)) {
        fail(r, std::string("product ") + set_text(a) + " x " + set_text(b) + " not in " + name, a, rect);
        return false;
      }
    }
  return true;
}

}  // namespace

AgreeabilityReport check_agreeable(AgreeableStructure const& s, AgreeableOptions const& opts) {
  AgreeabilityReport rep;
  for (int i = 0; i < 6; ++i) rep.axioms[i].axiom = i + 1;
  auto const& act = s.action;
  std::size_t ng = act.group().order(), n = act.domain_size(), n2 = n * n;
  bool quartic = s.L_X2xX2.has_value() && n <= opts.max_axiom5_domain;

  // (1) sections
  {
    auto& r = rep.axioms[0];
    check_sections(r, s.L_GxX, s.L_G, s.L_X, "L_GxX") &&
        check_sections(r, s.L_XxX, s.L_X, s.L_X, "L_XxX") &&
        check_sections(r, s.L_XxG, s.L_X, s.L_G, "L_XxG") &&
        (!quartic || check_sections(r, *s.L_X2xX2, s.L_XxX, s.L_XxX, "L_X2xX2"));
  }
  // (2) products
  {
    auto& r = rep.axioms[1];
    check_products(r, s.L_G, s.L_X, s.L_GxX, "L_GxX") &&
        check_products(r, s.L_X, s.L_X, s.L_XxX, "L_XxX") &&
        check_products(r, s.L_X, s.L_G, s.L_XxG, "L_XxG") &&
        (!quartic || check_products(r, s.L_XxX, s.L_XxX, *s.L_X2xX2, "L_X2xX2"));
  }
  // (3) preimages under (g,x) -> g.x
  {
    auto& r = rep.axioms[2];
    for (auto const& f : s.L_X.irreducibles()) {
      Bitset pre(ng * n);
      for (Element g = 0; g < ng; ++g)
        for (Point x = 0; x < n; ++x)
          if (f.test(act.apply(g, x))) pre.set(g * n + x);
      if (!s.L_GxX.contains(pre)) {
        fail(r, "preimage under the action map is not in L_GxX", f, pre);
        break;
      }
    }
  }
  // (4) preimages under x -> (x, g.x)
  {
    auto& r = rep.axioms[3];
    for (Element g = 0; g < ng && r.holds; ++g)
      for (auto const& f : s.L_XxX.irreducibles()) {
        Bitset pre(n);
        for (Point x = 0; x < n; ++x)
          if (f.test(x * n + act.apply(g, x))) pre.set(x);
        if (!s.L_X.contains(pre)) {
          fail(r, "preimage under x -> (x, g.x) for g = " + std::to_string(g) + " is not in L_X", f, pre);
          break;
        }
      }
  }
  // (5) projection of (X^2)^2 restricted to E_G
  {
    auto& r = rep.axioms[4];
    if (!quartic) {
      r.evaluated = false;
      r.detail = s.L_X2xX2 ? "skipped: domain larger than " + std::to_string(opts.max_axiom5_domain)
                           : "skipped: no (X^2)^2 lattice";
    } else {
      for (auto const& f : s.L_X2xX2->irreducibles()) {
        Bitset rel = f & s.E_G_pairs;
        Bitset img(n2);
        for (auto i = rel.find_first(); i != Bitset::npos; i = rel.find_next(i)) img.set(i / n2);
        if (!s.L_XxX.contains(img)) {
          fail(r, "projection of a relatively pseudo-closed subset of E_G is not in L_XxX", f, img);
          break;
        }
      }
    }
  }
  // (6) images under (x,g) -> (x, g.x)
  {
    auto& r = rep.axioms[5];
    for (auto const& f : s.L_XxG.irreducibles()) {
      Bitset img(n2);
      for (auto i = f.find_first(); i != Bitset::npos; i = f.find_next(i)) {
        Point x = static_cast<Point>(i / ng);
        Element g = static_cast<Element>(i % ng);
        img.set(x * n + act.apply(g, x));
      }
      if (!s.L_XxX.contains(img)) {
        fail(r, "image under (x,g) -> (x, g.x) is not in L_XxX", f, img);
        break;
      }
    }
  }
  return rep;
}

// Lemma checks ----------------------------------------------------------------

bool stabilizer_pseudo_closed_check(AgreeableStructure const& s, Partition const& e, Point x) {
  if (!s.L_X.contains(e.block_bits(x)))
    throw HypothesisNotMet("class of " + std::to_string(x) + " is not pseudo-closed");
  auto const& a = s.action;
  Bitset stab(a.group().order());
  for (Element g = 0; g < a.group().order(); ++g)
    if (e.related(x, a.apply(g, x))) stab.set(g);
  return s.L_G.contains(stab);
}

bool hfix_pseudo_closed_check(AgreeableStructure const& s, Relation const& e_pairs, Element h) {
  if (!s.L_XxX.contains(e_pairs.as_square_set())) throw HypothesisNotMet("E is not pseudo-closed");
  auto const& a = s.action;
  Bitset fixed(a.domain_size());
  for (Point x = 0; x < a.domain_size(); ++x)
    if (e_pairs.contains(x, a.apply(h, x))) fixed.set(x);
  return s.L_X.contains(fixed);
}

// Theorem verifiers -----------------------------------------------------------

namespace {

void require_agreeable(AgreeableStructure const& s, AgreeableOptions const& opts, std::string& note) {
  auto rep = check_agreeable(s, opts);
  if (!rep.agreeable()) {
    auto const& r = rep.axioms[rep.first_failure() - 1];
    throw NotAgreeable("axiom (" + std::to_string(r.axiom) + ") fails: " + r.detail);
  }
  note = "finite lattices are closed under all intersections, so the completeness hypothesis holds";
  if (!rep.axioms[4].evaluated) note += "; axiom (5) " + rep.axioms[4].detail;
}

bool classes_closed(SetLattice const& lx, Partition const& e) {
  for (auto const& block : e.blocks())
    if (!lx.contains(make_bitset(e.size(), block))) return false;
  return true;
}

}  // namespace

TheoremReport verify_thm_orb(AgreeableStructure const& s, Partition const& e, VerifierOptions const& opts) {
  TheoremReport rep;
  require_agreeable(s, opts.agreeable, rep.note);
  auto const& a = s.action;
  auto orb = is_orbital(a, e);
  if (!orb.orbital) throw NotOrbital("E differs from the orbit relation of H_E");
  auto const& h_e = *orb.witness;

  rep.conditions[0] = s.L_XxX.contains(Relation::from_partition(e).as_square_set());
  rep.conditions[1] = classes_closed(s.L_X, e);
  rep.conditions[2] = s.L_G.contains(h_e.members());
  for (auto const& h : enumerate_subgroups(a.group(), false, {opts.max_group_order})) {
    if (!h.is_subset_of(h_e) || !s.L_G.contains(h.members())) continue;
    if (orbit_relation(a, h) == e) {
      rep.conditions[3] = true;
      rep.witness = WitnessPair{h, full_bitset(a.domain_size()), h == h_e, true};
      break;
    }
  }
  auto const& c = rep.conditions;
  rep.agree = c[0] == c[1] && c[1] == c[2] && c[2] == c[3];
  return rep;
}

std::optional<WitnessPair> weakly_orbital_by_pseudo_closed(AgreeableStructure const& s, Partition const& e,
                                                           bool closed_group, std::size_t max_group_order) {
  auto const& a = s.action;
  for (auto const& h : enumerate_subgroups(a.group(), false, {max_group_order})) {
    if (closed_group && !s.L_G.contains(h.members())) continue;
    Bitset xt = maximal_witness_set(a, e, h);
    // Any witness set for H lies inside X~_H, and R is monotone in X~.
    Bitset m = s.L_X.largest_member_within(xt);
    if (m.none() && a.domain_size() > 0) continue;
    if (r_relation_equals(a, h, m, e)) return WitnessPair{h, m, false, m == xt};
  }
  return std::nullopt;
}

TheoremReport verify_thm_worb(AgreeableStructure const& s, Partition const& e, VerifierOptions const& opts) {
  TheoremReport rep;
  require_agreeable(s, opts.agreeable, rep.note);
  auto const& a = s.action;
  DeciderOptions dopts;
  dopts.max_group_order = opts.max_group_order;
  if (!is_weakly_orbital(a, e, dopts)) throw NotWeaklyOrbital("no witness pair reproduces E");

  rep.conditions[0] = s.L_XxX.contains(Relation::from_partition(e).as_square_set());
  rep.conditions[1] = classes_closed(s.L_X, e) &&
                      weakly_orbital_by_pseudo_closed(s, e, false, opts.max_group_order).has_value();
  rep.witness = weakly_orbital_by_pseudo_closed(s, e, true, opts.max_group_order);
  rep.conditions[2] = rep.witness.has_value();

  // Maximal witness sets are the X~_H that work for H; maximal witness
  // groups are the H equal to the maximal group of their own X~_H.
  for (auto const& h : enumerate_subgroups(a.group(), false, {opts.max_group_order})) {
    Bitset xt = maximal_witness_set(a, e, h);
    if (xt.none() || !r_relation_equals(a, h, xt, e)) continue;
    if (!s.L_X.contains(xt) &&
        std::find(rep.unclosed_maximal_sets.begin(), rep.unclosed_maximal_sets.end(), xt) ==
            rep.unclosed_maximal_sets.end())
      rep.unclosed_maximal_sets.push_back(xt);
    if (maximal_witness_group(a, e, xt) == h && !s.L_G.contains(h.members()))
      rep.unclosed_maximal_groups.push_back(h);
  }
  rep.conditions[3] = rep.unclosed_maximal_sets.empty() && rep.unclosed_maximal_groups.empty();
  auto const& c = rep.conditions;
  rep.agree = c[0] == c[1] && c[1] == c[2] && c[2] == c[3];
  return rep;
}

// Separation ------------------------------------------------------------------

namespace {

Bitset saturated_interior(Partition const& e, Bitset const& set) {
  Bitset out(set.size());
  for (auto const& block : e.blocks()) {
    bool inside = std::all_of(block.begin(), block.end(), [&](Point x) { return set.test(x); });
    if (inside)
      for (Point x : block) out.set(x);
  }
  return out;
}

// Largest E-saturated member of the lattice inside `within`.
Bitset largest_saturated_member(SetLattice const& l, Partition const& e, Bitset within) {
  for (;;) {
    Bitset m = l.largest_member_within(within);
    Bitset sat = saturated_interior(e, m);
    if (sat == m) return m;
    within = sat;
  }
}

}  // namespace

bool quotient_separated(AgreeableStructure const& s, Partition const& e) {
  std::size_t n = s.action.domain_size();
  if (e.size() != n) throw InvalidPartition("partition size does not match domain");
  std::vector<Bitset> avoid;
  for (auto const& block : e.blocks()) {
    Bitset outside = full_bitset(n);
    for (Point x : block) outside.reset(x);
    avoid.push_back(largest_saturated_member(s.L_X, e, outside));
  }
  Bitset full = full_bitset(n);
  for (std::size_t i = 0; i < avoid.size(); ++i)
    for (std::size_t j = i + 1; j < avoid.size(); ++j)
      if ((avoid[i] | avoid[j]) != full) return false;
  return true;
}

bool cross_section_condition(AgreeableStructure const& s) {
  auto const& a = s.action;
  std::size_t n = a.domain_size();
  auto orb = orbits(a);
  Bitset full = full_bitset(n);
  for (Point x = 0; x < n; ++x) {
    Bitset allowed = full;
    for (Point y : orb.blocks()[orb.block_of(x)])
      if (y != x) allowed.reset(y);
    Bitset m = s.L_X.largest_member_within(allowed);
    if (!m.test(x) || saturate(a, m) != full) return false;
  }
  return true;
}

}  // namespace worb
