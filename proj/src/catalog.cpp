#include "worb/catalog.hpp"

#include <Eigen/Geometry>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "worb/errors.hpp"
#include "worb/small_groups.hpp"

namespace worb {

namespace {

WitnessPair honest_pair(GAction const& a, Partition const& e, Subgroup h, Bitset set) {
  WitnessPair w{std::move(h), std::move(set), false, false};
  w.set_maximal = maximal_witness_set(a, e, w.subgroup) == w.witness_set;
  w.subgroup_maximal = maximal_witness_group(a, e, w.witness_set) == w.subgroup;
  return w;
}

void expect(bool ok, InstanceBundle const& b, std::string const& what) {
  if (!ok) throw std::logic_error(b.name + ": expected property failed: " + what);
}

InstanceBundle verified(InstanceBundle b) {
  verify_bundle(b);
  return b;
}

// Affine group over F_2 -----------------------------------------------------

using Mat = std::uint16_t;  // 9-bit row-major code, A[0][0] most significant
using Vec = std::uint8_t;   // v0 v1 v2 as a binary numeral

int entry(Mat a, int r, int c) { return (a >> (8 - (3 * r + c))) & 1; }

int coord(Vec v, int i) { return (v >> (2 - i)) & 1; }

Vec mat_vec(Mat a, Vec v) {
  Vec out = 0;
  for (int r = 0; r < 3; ++r) {
    int s = 0;
    for (int c = 0; c < 3; ++c) s ^= entry(a, r, c) & coord(v, c);
    out = static_cast<Vec>(out | (s << (2 - r)));
  }
  return out;
}

Mat mat_mul(Mat a, Mat b) {
  Mat out = 0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      int s = 0;
      for (int k = 0; k < 3; ++k) s ^= entry(a, r, k) & entry(b, k, c);
      out = static_cast<Mat>(out | (s << (8 - (3 * r + c))));
    }
  return out;
}

bool invertible(Mat a) {
  // over F_2 the determinant is the parity of the permutation expansion
  int det = 0;
  static constexpr std::array<std::array<int, 4>, 6> perms{{
      {0, 1, 2, 0}, {1, 2, 0, 0}, {2, 0, 1, 0}, {0, 2, 1, 1}, {2, 1, 0, 1}, {1, 0, 2, 1}}};
  for (auto const& p : perms) det ^= entry(a, 0, p[0]) & entry(a, 1, p[1]) & entry(a, 2, p[2]);
  return det != 0;
}

struct Affine {
  std::vector<Mat> mats;  // invertible codes in increasing order
  std::map<Mat, std::size_t> rank;
  GroupPtr group;

  Affine() {
    for (Mat m = 0; m < 512; ++m)
      if (invertible(m)) {
        rank[m] = mats.size();
        mats.push_back(m);
      }
    std::size_t n = 8 * mats.size();
    std::vector<std::vector<Element>> table(n, std::vector<Element>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        auto [v, a] = split(i);
        auto [w, b] = split(j);
        table[i][j] = index(static_cast<Vec>(v ^ mat_vec(a, w)), mat_mul(a, b));
      }
    group = build_group(table);
  }

  std::size_t size() const { return 8 * mats.size(); }
  Element index(Vec v, Mat a) const { return static_cast<Element>(v * mats.size() + rank.at(a)); }
  std::pair<Vec, Mat> split(std::size_t i) const {
    return {static_cast<Vec>(i / mats.size()), mats[i % mats.size()]};
  }
};

Affine const& affine_f2() {
  static Affine const instance;
  return instance;
}

constexpr Mat kIdentity = 0b100'010'001;
constexpr Vec kE1 = 0b100, kE2 = 0b010;

// Points of the subspace spanned by `basis`, as a bitmask over the 8 vectors.
std::uint8_t span(std::vector<Vec> const& basis) {
  std::uint8_t out = 1;
  for (Vec b : basis) {
    std::uint8_t next = out;
    for (Vec v = 0; v < 8; ++v)
      if (out >> v & 1) next = static_cast<std::uint8_t>(next | 1 << (v ^ b));
    out = next;
  }
  return out;
}

std::uint8_t image(Mat a, std::uint8_t subspace) {
  std::uint8_t out = 0;
  for (Vec v = 0; v < 8; ++v)
    if (subspace >> v & 1) out = static_cast<std::uint8_t>(out | 1 << mat_vec(a, v));
  return out;
}

// Labels of the classes (v + A.W, A) on one regular copy of the group.
std::vector<std::uint32_t> coset_labels(Affine const& f, std::uint8_t w) {
  std::vector<std::uint32_t> labels(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto [v, a] = f.split(i);
    auto moved = image(a, w);
    Vec least = 8;
    for (Vec u = 0; u < 8; ++u)
      if (moved >> u & 1) least = std::min<Vec>(least, static_cast<Vec>(v ^ u));
    labels[i] = static_cast<std::uint32_t>(least * f.mats.size() + i % f.mats.size());
  }
  return labels;
}

Subgroup translations(Affine const& f, std::uint8_t w) {
  std::vector<Element> elems;
  for (Vec v = 0; v < 8; ++v)
    if (w >> v & 1) elems.push_back(f.index(v, kIdentity));
  return Subgroup::from_elements(*f.group, elems);
}

// F^3 x {A : pred(A)} inside one copy starting at `offset`.
template <class Pred>
Bitset translate_closed_set(Affine const& f, std::size_t universe, std::size_t offset, Pred pred) {
  Bitset out(universe);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (pred(f.split(i).second)) out.set(offset + i);
  return out;
}

InstanceBundle affine_maximal_pairs() {
  auto const& f = affine_f2();
  auto plane = span({kE1, kE2}), line = span({kE1});
  InstanceBundle b{"affine_gl3_maximal_pairs",
                   "F_2^3 x| GL_3(F_2) acting on itself by left translation; E lies in the same coset of "
                   "A.plane at every A, with two maximal witness pairs of different sizes",
                   regular_action(f.group),
                   Partition::from_labels(coset_labels(f, plane)),
                   {},
                   std::nullopt,
                   {true, false, true, {"H2 < H1", "X1 < X2", "both pairs maximal"}}};
  auto h1 = translations(f, plane), h2 = translations(f, line);
  auto x1 = translate_closed_set(f, f.size(), 0, [&](Mat a) { return image(a, plane) == plane; });
  auto x2 = translate_closed_set(f, f.size(), 0, [&](Mat a) { return (line & ~image(a, plane)) == 0; });
  b.witnesses.push_back(honest_pair(b.action, b.relation, h1, x1));
  b.witnesses.push_back(honest_pair(b.action, b.relation, h2, x2));
  for (auto const& w : b.witnesses)
    expect(w.set_maximal && w.subgroup_maximal, b, "both pairs maximal");
  expect(h2.is_subset_of(h1) && h2 != h1, b, "H2 < H1");
  expect(x1.is_subset_of(x2) && x1 != x2, b, "X1 < X2");
  return b;
}

InstanceBundle affine_disjoint_union() {
  auto const& f = affine_f2();
  auto plane = span({kE1, kE2}), line = span({kE1});
  auto reg = regular_action(f.group);
  std::size_t n = f.size();
  auto labels = coset_labels(f, plane);
  for (auto l : coset_labels(f, line)) labels.push_back(static_cast<std::uint32_t>(n + l));
  InstanceBundle b{"affine_gl3_disjoint_union",
                   "two regular copies of F_2^3 x| GL_3(F_2); E is cosets of A.plane on the first copy "
                   "and cosets of A.line on the second",
                   disjoint_union(reg, reg),
                   Partition::from_labels(labels),
                   {},
                   std::nullopt,
                   {true, false, true, {"no witness set meets each copy exactly once"}}};
  // A holds I and, for each other line L of the plane, the first a with a^-1.line = L
  std::vector<Mat> chosen{kIdentity};
  for (Vec u = 1; u < 8; ++u) {
    if (!(plane >> u & 1) || (line >> u & 1)) continue;
    for (Mat a : f.mats)
      if (mat_vec(a, u) == kE1) {
        chosen.push_back(a);
        break;
      }
  }
  Bitset set(2 * n);
  set.set(n + f.index(0, kIdentity));
  for (Mat a : chosen) set.set(f.index(0, a));
  b.witnesses.push_back(honest_pair(b.action, b.relation, translations(f, line), set));
  return b;
}

// Icosahedron ---------------------------------------------------------------

std::vector<Eigen::Vector3d> icosahedron_vertices() {
  double phi = std::numbers::phi;
  std::vector<Eigen::Vector3d> out;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) {
      out.emplace_back(0, s1, s2 * phi);
      out.emplace_back(s1, s2 * phi, 0);
      out.emplace_back(s2 * phi, 0, s1);
    }
  return out;
}

std::vector<std::uint32_t> as_permutation(std::vector<Eigen::Vector3d> const& verts, Eigen::Matrix3d const& rot) {
  std::vector<std::uint32_t> perm(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    Eigen::Vector3d img = rot * verts[i];
    std::size_t best = 0;
    for (std::size_t j = 1; j < verts.size(); ++j)
      if ((verts[j] - img).norm() < (verts[best] - img).norm()) best = j;
    if ((verts[best] - img).norm() > 1e-9) throw std::logic_error("rotation does not preserve the icosahedron");
    perm[i] = static_cast<std::uint32_t>(best);
  }
  return perm;
}

}  // namespace

void verify_bundle(InstanceBundle const& b) {
  auto const& a = b.action;
  auto const& e = b.relation;
  bool invariant = is_invariant(a, e);
  if (b.expected.invariant) expect(invariant == *b.expected.invariant, b, "invariant");
  if (!invariant) return;
  if (b.expected.orbital) expect(is_orbital(a, e).orbital == *b.expected.orbital, b, "orbital");
  for (auto const& w : b.witnesses) {
    expect(r_relation_equals(a, w.subgroup, w.witness_set, e), b, "witness reproduces E");
    expect(w.set_maximal == (maximal_witness_set(a, e, w.subgroup) == w.witness_set), b, "set maximality flag");
    expect(w.subgroup_maximal == (maximal_witness_group(a, e, w.witness_set) == w.subgroup), b,
           "group maximality flag");
  }
  if (b.expected.weakly_orbital) {
    bool worb = !b.witnesses.empty() || is_weakly_orbital(a, e).has_value();
    expect(worb == *b.expected.weakly_orbital, b, "weakly orbital");
  }
  if (b.structure) expect(check_agreeable(*b.structure).agreeable(), b, "structure agreeable");
}

std::vector<std::string> catalog_names() {
  return {"cyclic_rotation",          "icosahedron_antipodism", "affine_gl3_maximal_pairs",
          "affine_gl3_disjoint_union", "translation_square",     "s3_chain"};
}

InstanceBundle cyclic_rotation(std::size_t m, std::size_t d) {
  if (m == 0 || d == 0 || m % d != 0)
    throw std::invalid_argument("cyclic_rotation needs d dividing m, got m=" + std::to_string(m) +
                                " d=" + std::to_string(d));
  auto g = cyclic_group(m);
  Element gen[] = {static_cast<Element>(d % m)};
  auto h = subgroup_closure(*g, gen);
  auto act = regular_action(g);
  auto e = orbit_relation(act, h);
  InstanceBundle b{"cyclic_rotation",
                   "Z/" + std::to_string(m) + " rotating itself, E the orbits of the multiples of " +
                       std::to_string(d) + "; finite analogue of rotating the circle by a fixed angle",
                   act,
                   e,
                   {},
                   discrete_structure(act),
                   {true, true, true, {"full witness set"}}};
  b.witnesses.push_back(honest_pair(act, e, h, full_bitset(m)));
  return verified(std::move(b));
}

InstanceBundle icosahedron_antipodism() {
  auto verts = icosahedron_vertices();
  Eigen::Vector3d face = verts[0] + verts[6] + verts[2];
  Eigen::Matrix3d five(Eigen::AngleAxisd(2 * std::numbers::pi / 5, verts[0].normalized()));
  Eigen::Matrix3d three(Eigen::AngleAxisd(2 * std::numbers::pi / 3, face.normalized()));
  auto group = std::make_shared<FiniteGroup const>(
      FiniteGroup::from_permutations(verts.size(), {as_permutation(verts, five), as_permutation(verts, three)}));
  if (group->order() != 60) throw std::logic_error("icosahedral rotations should form a group of order 60");
  std::vector<std::vector<Point>> table;
  for (auto const& p : group->permutations()) table.emplace_back(p.begin(), p.end());
  auto act = GAction::from_table(group, verts.size(), table);
  std::vector<std::uint32_t> labels(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = 0; j < verts.size(); ++j)
      if ((verts[i] + verts[j]).norm() < 1e-9) labels[i] = static_cast<std::uint32_t>(std::min(i, j));
  auto e = Partition::from_labels(labels);
  InstanceBundle b{"icosahedron_antipodism",
                   "rotations of the icosahedron (A5) on its 12 vertices, E identifying antipodal vertices; "
                   "finite analogue of SO(3) on the sphere",
                   act,
                   e,
                   {transitive_witness(act, e, 0)},
                   discrete_structure(act),
                   {true, false, true, {"singleton witness set", "kernel group trivial"}}};
  expect(b.witnesses[0].witness_set.count() == 1, b, "singleton witness set");
  expect(kernel_group(act, e).size() == 1, b, "kernel group trivial");
  return verified(std::move(b));
}

InstanceBundle affine_gl3(std::size_t q, AffineVariant variant) {
  if (q != 2)
    throw UnsupportedField("only q = 2 is supported, got q = " + std::to_string(q) +
                           (q == 3 ? " (the group would have order 303264)" : ""));
  return verified(variant == AffineVariant::MaximalPairs ? affine_maximal_pairs() : affine_disjoint_union());
}

std::optional<WitnessPair> transversal_witness_search(InstanceBundle const& bundle) {
  auto const& a = bundle.action;
  std::size_t n = a.group().order();
  if (a.domain_size() != 2 * n) throw std::invalid_argument("expected two regular copies of the group");
  // R_{gHg^-1, g.X~} = R_{H,X~}, so the point in the first copy may be taken to be e
  Point base = a.group().identity();
  for (Point other = 0; other < n; ++other) {
    Bitset set(2 * n);
    set.set(base);
    set.set(n + other);
    auto h = maximal_witness_group(a, bundle.relation, set);
    if (r_relation_equals(a, h, set, bundle.relation)) return honest_pair(a, bundle.relation, h, set);
  }
  return std::nullopt;
}

InstanceBundle translation_square(GroupPtr group, Subgroup const& h) {
  std::size_t n = group->order();
  std::vector<Point> act(n * n * n);
  for (Element g = 0; g < n; ++g)
    for (Point a = 0; a < n; ++a)
      for (Point b = 0; b < n; ++b) act[(g * n + a) * n + b] = group->mul(g, a) * n + b;
  auto action = unchecked_action(group, n * n, std::move(act));
  Bitset diagonal(n * n);
  for (Point a = 0; a < n; ++a) diagonal.set(a * n + a);
  auto e = partition_from_relation(r_relation(action, h, diagonal));
  bool normal = is_normal(*group, h);
  InstanceBundle b{"translation_square",
                   "G acting on G x G by left translation of the first coordinate, witnessed by the diagonal",
                   action,
                   e,
                   {honest_pair(action, e, h, diagonal)},
                   std::nullopt,
                   {true, normal, true, {"diagonal witness set"}}};
  return verified(std::move(b));
}

InstanceBundle s3_chain(std::size_t k) {
  if (k < 1) throw std::invalid_argument("s3_chain needs k >= 1");
  auto s3 = s3_standard();
  std::size_t n = 6 * (k + 1);
  std::vector<Point> act(6 * n);
  for (Element g = 0; g < 6; ++g)
    for (Point x = 0; x < n; ++x) act[g * n + x] = (x / 6) * 6 + s3->mul(g, x % 6);
  auto action = unchecked_action(s3, n, std::move(act));
  Bitset set(n);
  set.set(4);
  for (std::size_t level = 1; level <= k; ++level) set.set(level * 6);
  Element t12[] = {0, 1};
  auto h = Subgroup::from_elements(*s3, t12);
  auto e = partition_from_relation(r_relation(action, h, set));
  std::vector<std::uint32_t> levels(n);
  for (Point x = 0; x < n; ++x) levels[x] = static_cast<std::uint32_t>(x / 6);
  auto structure =
      make_structure(action, SetLattice::trivial(6), SetLattice::boolean(Partition::from_labels(levels)));
  InstanceBundle b{"s3_chain",
                   "S3 acting on S3 x {0..k} by left multiplication, a truncation of S3 x {0} u {1/n}",
                   action,
                   e,
                   {honest_pair(action, e, h, set)},
                   std::move(structure),
                   {true, false, true, {"((),0) not related to ((12),0)", "((),n) related to ((12),n) for n >= 1"}}};
  expect(!e.related(0, 1), b, "((),0) not related to ((12),0)");
  for (std::size_t level = 1; level <= k; ++level)
    expect(e.related(level * 6, level * 6 + 1), b, "((),n) related to ((12),n)");
  return verified(std::move(b));
}

InstanceBundle build_catalog_instance(std::string const& name, std::vector<std::size_t> const& params) {
  auto arg = [&](std::size_t i, std::size_t fallback) { return i < params.size() ? params[i] : fallback; };
  auto at_most = [&](std::size_t count) {
    if (params.size() > count)
      throw std::invalid_argument(name + " takes at most " + std::to_string(count) + " parameters");
  };
  if (name == "cyclic_rotation") {
    at_most(2);
    return cyclic_rotation(arg(0, 6), arg(1, 3));
  }
  if (name == "icosahedron_antipodism") {
    at_most(0);
    return icosahedron_antipodism();
  }
  if (name == "affine_gl3_maximal_pairs") {
    at_most(1);
    return affine_gl3(arg(0, 2), AffineVariant::MaximalPairs);
  }
  if (name == "affine_gl3_disjoint_union") {
    at_most(1);
    return affine_gl3(arg(0, 2), AffineVariant::DisjointUnion);
  }
  if (name == "translation_square") {
    // S3 in its standard indexing, H generated by the given element
    at_most(1);
    auto s3 = s3_standard();
    auto g = arg(0, 1);
    if (g >= 6) throw std::invalid_argument("translation_square: element index must be below 6");
    Element gen[] = {static_cast<Element>(g)};
    return translation_square(s3, subgroup_closure(*s3, gen));
  }
  if (name == "s3_chain") {
    at_most(1);
    return s3_chain(arg(0, 3));
  }
  throw std::invalid_argument("unknown catalog instance: " + name);
}

}  // namespace worb
