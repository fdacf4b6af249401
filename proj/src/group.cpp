#include "worb/group.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>

#include "worb/errors.hpp"

namespace worb {

namespace {

// Greedy generating set of the magma `n`/`mul`, closing under all pairwise
// products. Works before associativity is known.
template <typename Mul>
std::vector<Element> magma_generators(std::size_t n, Mul mul) {
  std::vector<Element> gens;
  std::vector<Element> closed;
  std::vector<char> in(n, 0);
  for (Element cand = 0; cand < n; ++cand) {
    if (in[cand]) continue;
    gens.push_back(cand);
    std::vector<Element> work{cand};
    in[cand] = 1;
    while (!work.empty()) {
      Element x = work.back();
      work.pop_back();
      closed.push_back(x);
      // pair x with everything closed so far, including itself
      for (std::size_t i = 0; i < closed.size(); ++i) {
        Element y = closed[i];
        for (Element p : {mul(x, y), mul(y, x)}) {
          if (!in[p]) {
            in[p] = 1;
            work.push_back(p);
          }
        }
      }
    }
  }
  return gens;
}

Bitset closure_bits(FiniteGroup const& g, std::span<Element const> gens,
                    std::vector<Element>* elements_out) {
  Bitset seen(g.order());
  std::vector<Element> elems{g.identity()};
  seen.set(g.identity());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (Element s : gens) {
      Element y = g.mul(elems[i], s);
      if (!seen.test(y)) {
        seen.set(y);
        elems.push_back(y);
      }
    }
  }
  if (elements_out) *elements_out = std::move(elems);
  return seen;
}

Bitset conjugate_bits(FiniteGroup const& g, Element by, Bitset const& members) {
  Bitset out(g.order());
  for (auto h = members.find_first(); h != Bitset::npos; h = members.find_next(h))
    out.set(g.conj(by, static_cast<Element>(h)));
  return out;
}

}  // namespace

// FiniteGroup -----------------------------------------------------------------

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<Element>> const& table) {
  FiniteGroup grp;
  std::size_t n = table.size();
  if (n == 0) throw NotAGroup("empty table");
  grp.order_ = n;
  grp.mult_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    if (table[a].size() != n)
      throw NotAGroup("row " + std::to_string(a) + " has length " +
                      std::to_string(table[a].size()) + ", expected " + std::to_string(n));
    for (std::size_t b = 0; b < n; ++b) {
      if (table[a][b] >= n)
        throw NotAGroup("entry (" + std::to_string(a) + "," + std::to_string(b) +
                        ") out of range");
      grp.mult_[a * n + b] = table[a][b];
    }
  }
  grp.finish_validation();
  return grp;
}

void FiniteGroup::finish_validation() {
  std::size_t const n = order_;
  auto m = [this, n](Element a, Element b) { return mult_[a * n + b]; };

  bool found = false;
  for (Element e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (Element a = 0; a < n && ok; ++a) ok = m(e, a) == a && m(a, e) == a;
    if (ok) {
      identity_ = e;
      found = true;
    }
  }
  if (!found) throw NotAGroup("no two-sided identity");

  inverse_.assign(n, 0);
  for (Element a = 0; a < n; ++a) {
    bool ok = false;
    for (Element b = 0; b < n && !ok; ++b) {
      if (m(a, b) == identity_ && m(b, a) == identity_) {
        inverse_[a] = b;
        ok = true;
      }
    }
    if (!ok) throw NotAGroup("element " + std::to_string(a) + " has no inverse");
  }

  // Light's associativity test: it suffices to check (x*s)*y == x*(s*y)
  // for s ranging over a generating set of the magma.
  auto gens = magma_generators(n, m);
  for (Element s : gens)
    for (Element x = 0; x < n; ++x)
      for (Element y = 0; y < n; ++y)
        if (m(m(x, s), y) != m(x, m(s, y)))
          throw NotAGroup("associativity fails at (" + std::to_string(x) + "," +
                          std::to_string(s) + "," + std::to_string(y) + ")");
  gens.erase(std::remove(gens.begin(), gens.end(), identity_), gens.end());
  generators_ = std::move(gens);
}

FiniteGroup FiniteGroup::from_permutations(std::size_t degree,
                                           std::vector<std::vector<std::uint32_t>> const& images,
                                           std::size_t max_order) {
  using Perm = std::vector<std::uint32_t>;
  for (auto const& p : images) {
    if (p.size() != degree) throw NotAGroup("generator of wrong degree");
    std::vector<char> hit(degree, 0);
    for (auto v : p) {
      if (v >= degree || hit[v]) throw NotAGroup("generator is not a permutation");
      hit[v] = 1;
    }
  }
  auto compose = [degree](Perm const& p, Perm const& q) {
    Perm r(degree);
    for (std::size_t i = 0; i < degree; ++i) r[i] = p[q[i]];
    return r;
  };
  Perm id(degree);
  for (std::size_t i = 0; i < degree; ++i) id[i] = static_cast<std::uint32_t>(i);

  std::map<Perm, Element> seen{{id, 0}};
  std::vector<Perm> elems{id};
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (auto const& s : images) {
      Perm y = compose(elems[i], s);
      if (seen.emplace(y, 0).second) {
        elems.push_back(std::move(y));
        if (elems.size() > max_order)
          throw BoundExceeded("permutation group exceeds order " + std::to_string(max_order));
      }
    }
  }
  // std::map iteration is lexicographic; the identity comes first.
  elems.clear();
  Element idx = 0;
  for (auto& [p, i] : seen) {
    i = idx++;
    elems.push_back(p);
  }

  FiniteGroup grp;
  std::size_t n = elems.size();
  grp.order_ = n;
  grp.mult_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) grp.mult_[a * n + b] = seen.at(compose(elems[a], elems[b]));
  grp.finish_validation();
  grp.permutations_ = std::move(elems);
  return grp;
}

std::vector<std::vector<Element>> FiniteGroup::table() const {
  std::vector<std::vector<Element>> t(order_, std::vector<Element>(order_));
  for (std::size_t a = 0; a < order_; ++a)
    for (std::size_t b = 0; b < order_; ++b) t[a][b] = mult_[a * order_ + b];
  return t;
}

// Subgroup --------------------------------------------------------------------

Subgroup Subgroup::from_elements(FiniteGroup const& g, std::span<Element const> elements) {
  Bitset bits(g.order());
  for (Element e : elements) {
    if (e >= g.order()) throw NotASubgroup("element " + std::to_string(e) + " out of range");
    bits.set(e);
  }
  if (!bits.test(g.identity())) throw NotASubgroup("identity missing");
  auto elems = indices_of(bits);
  for (Element a : elems) {
    if (!bits.test(g.inv(a))) throw NotASubgroup("not closed under inverses at " + std::to_string(a));
    for (Element b : elems)
      if (!bits.test(g.mul(a, b)))
        throw NotASubgroup("not closed under products at (" + std::to_string(a) + "," +
                           std::to_string(b) + ")");
  }
  std::vector<Element> gens;
  Bitset span_bits(g.order());
  span_bits.set(g.identity());
  for (Element a : elems) {
    if (span_bits.test(a)) continue;
    gens.push_back(a);
    span_bits = closure_bits(g, gens, nullptr);
  }
  Subgroup s;
  s.elements_ = std::move(elems);
  s.members_ = std::move(bits);
  s.generators_ = std::move(gens);
  return s;
}

Subgroup Subgroup::trivial(FiniteGroup const& g) { return subgroup_closure(g, {}); }

Subgroup Subgroup::whole(FiniteGroup const& g) { return subgroup_closure(g, g.generators()); }

Subgroup subgroup_closure(FiniteGroup const& g, std::span<Element const> gens) {
  std::vector<Element> kept;
  for (Element s : gens)
    if (s != g.identity() && std::find(kept.begin(), kept.end(), s) == kept.end()) kept.push_back(s);
  Subgroup out;
  out.members_ = closure_bits(g, kept, nullptr);
  out.elements_ = indices_of(out.members_);
  out.generators_ = std::move(kept);
  return out;
}

bool is_normal(FiniteGroup const& g, Subgroup const& h) {
  // Conjugating the generators by the group generators is enough.
  for (Element by : g.generators())
    for (Element s : h.generators())
      if (!h.contains(g.conj(by, s))) return false;
  return true;
}

Subgroup conjugate_subgroup(FiniteGroup const& g, Element by, Subgroup const& h) {
  std::vector<Element> gens;
  gens.reserve(h.generators().size());
  for (Element s : h.generators()) gens.push_back(g.conj(by, s));
  return subgroup_closure(g, gens);
}

std::size_t index(FiniteGroup const& g, Subgroup const& h) { return g.order() / h.size(); }

std::size_t element_order(FiniteGroup const& g, Element e) {
  std::size_t k = 1;
  for (Element x = e; x != g.identity(); x = g.mul(x, e)) ++k;
  return k;
}

// Enumeration -----------------------------------------------------------------

namespace {

bool is_prime_power(std::size_t n) {
  if (n < 2) return false;
  std::size_t p = 2;
  while (n % p != 0) ++p;
  while (n % p == 0) n /= p;
  return n == 1;
}

struct ClassRecord {
  Bitset rep;
  std::vector<Element> rep_gens;
  std::vector<std::pair<Bitset, Element>> members;  // bits, conjugating element
};

class LatticeWalker {
 public:
  explicit LatticeWalker(FiniteGroup const& g) : g_(g) {}

  // Registers the class of the subgroup <gens>; returns false if known.
  bool add(std::vector<Element> gens) {
    Bitset bits = closure_bits(g_, gens, nullptr);
    if (seen_.count(bits)) return false;
    ClassRecord rec;
    std::unordered_set<Bitset> local;
    Element best_by = g_.identity();
    Bitset best = bits;
    for (Element by = 0; by < g_.order(); ++by) {
      Bitset c = conjugate_bits(g_, by, bits);
      if (local.insert(c).second) {
        if (canonical_less(c, best)) {
          best = c;
          best_by = by;
        }
        rec.members.emplace_back(c, by);
      }
    }
    for (auto const& [c, by] : rec.members) seen_.insert(c);
    rec.rep = best;
    for (Element s : gens) rec.rep_gens.push_back(g_.conj(best_by, s));
    // Express member conjugators relative to the representative.
    Element back = g_.inv(best_by);
    for (auto& [c, by] : rec.members) by = g_.mul(by, back);
    queue_.push_back(classes_.size());
    classes_.push_back(std::move(rec));
    return true;
  }

  std::vector<ClassRecord> const& classes() const { return classes_; }
  std::vector<ClassRecord>& classes() { return classes_; }

  std::optional<std::size_t> next() {
    if (head_ == queue_.size()) return std::nullopt;
    return queue_[head_++];
  }

  bool known(Bitset const& b) const { return seen_.count(b) != 0; }

 private:
  FiniteGroup const& g_;
  std::unordered_set<Bitset> seen_;
  std::vector<ClassRecord> classes_;
  std::vector<std::size_t> queue_;
  std::size_t head_ = 0;
};

Subgroup make_subgroup(FiniteGroup const& g, std::vector<Element> const& gens) {
  return subgroup_closure(g, gens);
}

}  // namespace

std::vector<Subgroup> enumerate_subgroups(FiniteGroup const& g, bool up_to_conjugacy,
                                          SubgroupOptions const& opts) {
  if (g.order() > opts.max_group_order)
    throw BoundExceeded("group order " + std::to_string(g.order()) + " exceeds bound " +
                        std::to_string(opts.max_group_order));

  // Every subgroup is generated by its prime-power-order cyclic subgroups.
  std::vector<std::pair<Bitset, Element>> cyclics;
  {
    std::unordered_set<Bitset> have;
    for (Element e = 0; e < g.order(); ++e) {
      if (!is_prime_power(element_order(g, e))) continue;
      Element gen[1] = {e};
      Bitset b = closure_bits(g, gen, nullptr);
      if (have.insert(b).second) cyclics.emplace_back(std::move(b), e);
    }
  }

  LatticeWalker walker(g);
  walker.add({});
  while (auto id = walker.next()) {
    // copy: classes() may reallocate while we add
    Bitset rep = walker.classes()[*id].rep;
    std::vector<Element> rep_gens = walker.classes()[*id].rep_gens;
    for (auto const& [cbits, c] : cyclics) {
      if (cbits.is_subset_of(rep)) continue;
      auto gens = rep_gens;
      gens.push_back(c);
      walker.add(std::move(gens));
    }
  }

  std::vector<Subgroup> out;
  for (auto const& rec : walker.classes()) {
    if (up_to_conjugacy) {
      out.push_back(make_subgroup(g, rec.rep_gens));
    } else {
      for (auto const& [bits, by] : rec.members) {
        std::vector<Element> gens;
        for (Element s : rec.rep_gens) gens.push_back(g.conj(by, s));
        out.push_back(make_subgroup(g, gens));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Subgroup> enumerate_small_generated_subgroups(FiniteGroup const& g,
                                                          std::size_t max_count) {
  LatticeWalker walker(g);
  walker.add({});
  std::vector<Element> cyclic_reps;
  for (Element e = 0; e < g.order() && walker.classes().size() < max_count; ++e) {
    if (walker.add({e})) cyclic_reps.push_back(e);
  }
  for (Element a : cyclic_reps) {
    for (Element b = 0; b < g.order() && walker.classes().size() < max_count; ++b)
      walker.add({a, b});
  }
  std::vector<Subgroup> out;
  for (auto const& rec : walker.classes()) out.push_back(make_subgroup(g, rec.rep_gens));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace worb
