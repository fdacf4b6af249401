#include "worb/action.hpp"

#include <numeric>
#include <string>

#include "worb/errors.hpp"
#include "worb/relations.hpp"

namespace worb {

GAction GAction::from_table(GroupPtr group, std::size_t domain_size,
                            std::vector<std::vector<Point>> const& act) {
  if (!group) throw InvalidAction("null group");
  auto const& g = *group;
  if (act.size() != g.order())
    throw InvalidAction("table has " + std::to_string(act.size()) + " rows, group order is " +
                        std::to_string(g.order()));
  std::vector<Point> flat(g.order() * domain_size);
  for (Element e = 0; e < g.order(); ++e) {
    if (act[e].size() != domain_size) throw InvalidAction("row " + std::to_string(e) + " has wrong length");
    for (Point x = 0; x < domain_size; ++x) {
      if (act[e][x] >= domain_size) throw InvalidAction("image out of range in row " + std::to_string(e));
      flat[e * domain_size + x] = act[e][x];
    }
  }
  for (Point x = 0; x < domain_size; ++x)
    if (flat[g.identity() * domain_size + x] != x)
      throw InvalidAction("identity moves point " + std::to_string(x));
  // Compatibility for generators s suffices: the set of s satisfying
  // s.(h.x) = (sh).x for all h, x is closed under products.
  for (Element s : g.generators())
    for (Element h = 0; h < g.order(); ++h)
      for (Point x = 0; x < domain_size; ++x)
        if (flat[s * domain_size + flat[h * domain_size + x]] != flat[g.mul(s, h) * domain_size + x])
          throw InvalidAction("compatibility fails at g=" + std::to_string(s) + ", h=" +
                              std::to_string(h) + ", x=" + std::to_string(x));
  return unchecked_action(std::move(group), domain_size, std::move(flat));
}

GAction unchecked_action(GroupPtr group, std::size_t domain_size, std::vector<Point> act) {
  GAction out;
  out.group_ = std::move(group);
  out.domain_ = domain_size;
  out.act_ = std::move(act);
  return out;
}

Bitset GAction::apply(Element g, Bitset const& set) const {
  Bitset out(domain_);
  for (auto x = set.find_first(); x != Bitset::npos; x = set.find_next(x))
    out.set(apply(g, static_cast<Point>(x)));
  return out;
}

std::vector<std::vector<Point>> GAction::table() const {
  std::vector<std::vector<Point>> t(group_->order(), std::vector<Point>(domain_));
  for (Element g = 0; g < group_->order(); ++g)
    for (Point x = 0; x < domain_; ++x) t[g][x] = apply(g, x);
  return t;
}

GAction regular_action(GroupPtr group) {
  std::size_t n = group->order();
  std::vector<Point> act(n * n);
  for (Element g = 0; g < n; ++g)
    for (Element x = 0; x < n; ++x) act[g * n + x] = group->mul(g, x);
  return unchecked_action(std::move(group), n, std::move(act));
}

GAction coset_action(GroupPtr group, Subgroup const& k) {
  auto const& g = *group;
  // label each element by its left coset xK
  std::vector<std::int64_t> coset_of(g.order(), -1);
  std::size_t count = 0;
  for (Element x = 0; x < g.order(); ++x) {
    if (coset_of[x] >= 0) continue;
    for (Element h : k.elements()) coset_of[g.mul(x, h)] = static_cast<std::int64_t>(count);
    ++count;
  }
  std::vector<Element> rep(count);
  for (Element x = g.order(); x-- > 0;) rep[coset_of[x]] = x;
  std::vector<Point> act(g.order() * count);
  for (Element e = 0; e < g.order(); ++e)
    for (std::size_t c = 0; c < count; ++c)
      act[e * count + c] = static_cast<Point>(coset_of[g.mul(e, rep[c])]);
  return unchecked_action(std::move(group), count, std::move(act));
}

GAction disjoint_union(GAction const& a, GAction const& b) {
  if (a.group_ptr() != b.group_ptr() && !(a.group() == b.group()))
    throw GroupMismatch("actions are over different groups");
  std::size_t na = a.domain_size(), nb = b.domain_size(), n = na + nb;
  std::vector<Point> act(a.group().order() * n);
  for (Element g = 0; g < a.group().order(); ++g) {
    for (Point x = 0; x < na; ++x) act[g * n + x] = a.apply(g, x);
    for (Point x = 0; x < nb; ++x) act[g * n + na + x] = static_cast<Point>(na + b.apply(g, x));
  }
  return unchecked_action(a.group_ptr(), n, std::move(act));
}

namespace {

std::vector<std::uint32_t> orbit_labels(GAction const& a, std::span<Element const> gens) {
  std::size_t n = a.domain_size();
  std::vector<std::uint32_t> label(n, UINT32_MAX);
  std::uint32_t next = 0;
  std::vector<Point> stack;
  for (Point s = 0; s < n; ++s) {
    if (label[s] != UINT32_MAX) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Point x = stack.back();
      stack.pop_back();
      for (Element g : gens) {
        Point y = a.apply(g, x);
        if (label[y] == UINT32_MAX) {
          label[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace

Partition orbits(GAction const& a) {
  return Partition::from_labels(orbit_labels(a, a.group().generators()));
}

bool is_transitive(GAction const& a) {
  return orbits(a).block_count() == 1;
}

bool is_free(GAction const& a) {
  auto const& g = a.group();
  for (Element e = 0; e < g.order(); ++e) {
    if (e == g.identity()) continue;
    for (Point x = 0; x < a.domain_size(); ++x)
      if (a.apply(e, x) == x) return false;
  }
  return true;
}

Bitset saturate(GAction const& a, Bitset const& set) {
  auto part = orbits(a);
  Bitset out(a.domain_size());
  for (auto x = set.find_first(); x != Bitset::npos; x = set.find_next(x))
    for (Point y : part.blocks()[part.block_of(static_cast<Point>(x))]) out.set(y);
  return out;
}

std::vector<Element> orbit_transversal(GAction const& a) {
  auto const& g = a.group();
  std::size_t n = a.domain_size();
  std::vector<Element> t(n, g.identity());
  std::vector<char> done(n, 0);
  std::vector<Point> queue;
  for (Point s = 0; s < n; ++s) {
    if (done[s]) continue;
    done[s] = 1;
    queue.assign(1, s);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      Point x = queue[i];
      for (Element gen : g.generators()) {
        Point y = a.apply(gen, x);
        if (!done[y]) {
          done[y] = 1;
          t[y] = g.mul(gen, t[x]);
          queue.push_back(y);
        }
      }
    }
  }
  return t;
}

Subgroup class_stabilizer(GAction const& a, Partition const& e, Point x) {
  std::vector<Element> elems;
  for (Element g = 0; g < a.group().order(); ++g)
    if (e.related(x, a.apply(g, x))) elems.push_back(g);
  return Subgroup::from_elements(a.group(), elems);
}

}  // namespace worb
