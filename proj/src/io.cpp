#include "worb/io.hpp"

#include <fstream>
#include <sstream>

#include "worb/errors.hpp"

namespace worb::io {

namespace {

[[noreturn]] void fail(Source const& src, std::string const& at, std::string const& what) {
  throw ParseError(src.name + ": " + (at.empty() ? "/" : at) + ": " + what);
}

Json const& field(Json const& j, char const* key, Source const& src, std::string const& at) {
  if (!j.is_object()) fail(src, at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(src, at, std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t count(Json const& j, Source const& src, std::string const& at) {
  if (!j.is_number_unsigned()) fail(src, at, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::vector<std::uint32_t> indices(Json const& j, std::size_t bound, Source const& src, std::string const& at) {
  if (!j.is_array()) fail(src, at, "expected an array of indices");
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto v = count(j[i], src, at + "/" + std::to_string(i));
    if (v >= bound) fail(src, at + "/" + std::to_string(i), "index " + std::to_string(v) + " out of range");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> rows(Json const& j, std::size_t bound, Source const& src,
                                             std::string const& at) {
  if (!j.is_array()) fail(src, at, "expected an array of arrays");
  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(indices(j[i], bound, src, at + "/" + std::to_string(i)));
  return out;
}

Bitset read_bits(Json const& j, std::size_t n, Source const& src, std::string const& at) {
  return make_bitset(n, indices(j, n, src, at));
}

// Library errors raised while building an object are reported at its path.
template <class F>
auto located(Source const& src, std::string const& at, F&& build) -> decltype(build()) {
  try {
    return build();
  } catch (ParseError const&) {
    throw;
  } catch (Error const& e) {
    fail(src, at, e.what());
  }
}

Json resolve(Json const& j, Source const& src, std::string const& at, Source& inner) {
  if (!j.is_string()) {
    inner = src;
    return j;
  }
  auto path = src.dir / j.get<std::string>();
  try {
    inner = {path.string(), path.parent_path()};
    return load_file(path);
  } catch (ParseError const&) {
    throw;
  } catch (std::exception const& e) {
    fail(src, at, e.what());
  }
}

}  // namespace

Json parse(std::string_view text, Source const& src) {
  try {
    return Json::parse(text);
  } catch (nlohmann::json::parse_error const& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(src.name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

Json load_file(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), {path.string(), path.parent_path()});
}

// Writers ---------------------------------------------------------------------

Json bits_to_json(Bitset const& b) { return indices_of(b); }

Json to_json(FiniteGroup const& g) {
  if (!g.permutations().empty()) {
    Json gens = Json::array();
    for (Element e : g.generators()) gens.push_back(g.permutations()[e]);
    return {{"degree", g.permutations()[0].size()}, {"generators", gens}};
  }
  return {{"order", g.order()}, {"mult", g.table()}};
}

Json to_json(GAction const& a) {
  return {{"group", to_json(a.group())}, {"domain", a.domain_size()}, {"act", a.table()}};
}

Json to_json(Partition const& p) { return {{"blocks", p.blocks()}}; }

Json to_json(Relation const& r) {
  Json pairs = Json::array();
  for (auto [x, y] : r.pairs()) pairs.push_back({x, y});
  return {{"pairs", pairs}};
}

Json to_json(Subgroup const& h) { return h.elements(); }

Json to_json(WitnessPair const& w) {
  return {{"subgroup", to_json(w.subgroup)},
          {"witness_set", bits_to_json(w.witness_set)},
          {"maximal", {w.subgroup_maximal, w.set_maximal}}};
}

Json to_json(SetLattice const& l) {
  Json gens = Json::array();
  for (auto const& g : l.irreducibles()) gens.push_back(bits_to_json(g));
  return {{"universe", l.universe_size()}, {"generators", gens}, {"close", true}};
}

Json to_json(AgreeableStructure const& s) {
  auto entry = [](SetLattice const& l, std::optional<SetLattice> product) -> Json {
    if (product && l == *product) return "product";
    if (l == SetLattice::discrete(l.universe_size())) return "discrete";
    if (l == SetLattice::trivial(l.universe_size())) return "trivial";
    return to_json(l);
  };
  Json out{{"action", to_json(s.action)},
           {"L_G", entry(s.L_G, std::nullopt)},
           {"L_X", entry(s.L_X, std::nullopt)},
           {"L_GxX", entry(s.L_GxX, product_lattice(s.L_G, s.L_X))},
           {"L_XxX", entry(s.L_XxX, product_lattice(s.L_X, s.L_X))},
           {"L_XxG", entry(s.L_XxG, product_lattice(s.L_X, s.L_G))}};
  if (s.L_X2xX2) out["L_X2xX2"] = entry(*s.L_X2xX2, product_lattice(s.L_XxX, s.L_XxX));
  return out;
}

Json to_json(InstanceBundle const& b) {
  Json witnesses = Json::array();
  for (auto const& w : b.witnesses) witnesses.push_back(to_json(w));
  Json expected = Json::object();
  auto opt = [&](char const* key, std::optional<bool> v) {
    if (v) expected[key] = *v;
  };
  opt("invariant", b.expected.invariant);
  opt("orbital", b.expected.orbital);
  opt("weakly_orbital", b.expected.weakly_orbital);
  expected["witness_shapes"] = b.expected.witness_shapes;
  Json out{{"name", b.name},
           {"description", b.description},
           {"action", to_json(b.action)},
           {"relation", to_json(b.relation)},
           {"witnesses", witnesses}};
  if (b.structure) out["structure"] = to_json(*b.structure);
  out["expected"] = expected;
  return out;
}

// Readers ---------------------------------------------------------------------

GroupPtr read_group(Json const& j0, Source const& src0, std::string const& at) {
  Source src;
  Json j = resolve(j0, src0, at, src);
  if (!j.is_object()) fail(src, at, "expected a group object");
  if (j.contains("degree")) {
    auto degree = count(j["degree"], src, at + "/degree");
    auto gens = rows(field(j, "generators", src, at), degree, src, at + "/generators");
    return located(src, at, [&] {
      return std::make_shared<FiniteGroup const>(FiniteGroup::from_permutations(degree, gens));
    });
  }
  auto order = count(field(j, "order", src, at), src, at + "/order");
  auto table = rows(field(j, "mult", src, at), order, src, at + "/mult");
  return located(src, at, [&] { return build_group(table); });
}

GAction read_action(Json const& j0, Source const& src0, std::string const& at) {
  Source src;
  Json j = resolve(j0, src0, at, src);
  auto group = read_group(field(j, "group", src, at), src, at + "/group");
  auto domain = count(field(j, "domain", src, at), src, at + "/domain");
  auto table = rows(field(j, "act", src, at), domain, src, at + "/act");
  return located(src, at, [&] { return GAction::from_table(group, domain, table); });
}

Partition read_partition(Json const& j, std::size_t domain, Source const& src, std::string const& at) {
  auto blocks = rows(field(j, "blocks", src, at), domain, src, at + "/blocks");
  return located(src, at, [&] { return Partition::from_blocks(domain, blocks); });
}

Relation read_relation(Json const& j, std::size_t domain, Source const& src, std::string const& at) {
  auto pairs = rows(field(j, "pairs", src, at), domain, src, at + "/pairs");
  std::vector<std::pair<Point, Point>> list;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].size() != 2) fail(src, at + "/pairs/" + std::to_string(i), "expected a pair");
    list.emplace_back(pairs[i][0], pairs[i][1]);
  }
  return Relation::from_pairs(domain, list);
}

Subgroup read_subgroup(Json const& j, FiniteGroup const& g, Source const& src, std::string const& at) {
  auto elems = indices(j, g.order(), src, at);
  return located(src, at, [&] { return Subgroup::from_elements(g, elems); });
}

WitnessPair read_witness(Json const& j, GAction const& a, Source const& src, std::string const& at) {
  WitnessPair w{read_subgroup(field(j, "subgroup", src, at), a.group(), src, at + "/subgroup"),
                read_bits(field(j, "witness_set", src, at), a.domain_size(), src, at + "/witness_set"), false,
                false};
  if (j.contains("maximal")) {
    auto const& m = j["maximal"];
    if (!m.is_array() || m.size() != 2 || !m[0].is_boolean() || !m[1].is_boolean())
      fail(src, at + "/maximal", "expected [bool, bool]");
    w.subgroup_maximal = m[0].get<bool>();
    w.set_maximal = m[1].get<bool>();
  }
  return w;
}

SetLattice read_lattice(Json const& j, std::size_t universe, Source const& src, std::string const& at) {
  if (j.is_string()) {
    auto kind = j.get<std::string>();
    if (kind == "discrete") return SetLattice::discrete(universe);
    if (kind == "trivial") return SetLattice::trivial(universe);
    fail(src, at, "unknown lattice shorthand \"" + kind + "\"");
  }
  auto n = count(field(j, "universe", src, at), src, at + "/universe");
  if (n != universe)
    fail(src, at, "universe " + std::to_string(n) + " where " + std::to_string(universe) + " is expected");
  std::vector<Bitset> sets;
  bool listed = j.contains("sets");
  auto const& list = listed ? j["sets"] : field(j, "generators", src, at);
  auto key = at + (listed ? "/sets" : "/generators");
  for (auto const& r : rows(list, n, src, key)) sets.push_back(make_bitset(n, r));
  bool close = j.contains("close") && j["close"].is_boolean() && j["close"].get<bool>();
  return located(src, at, [&] {
    if (listed) return SetLattice::from_sets(n, sets);
    return close ? family_closure(n, sets) : SetLattice::from_union_generators(n, sets);
  });
}

AgreeableStructure read_structure(Json const& j0, Source const& src0, std::string const& at) {
  Source src;
  Json j = resolve(j0, src0, at, src);
  auto action = read_action(field(j, "action", src, at), src, at + "/action");
  std::size_t ng = action.group().order(), n = action.domain_size();
  auto base = [&](char const* key, std::size_t universe) {
    if (!j.contains(key)) fail(src, at, std::string("missing field \"") + key + "\"");
    return read_lattice(j[key], universe, src, at + "/" + key);
  };
  auto product = [&](char const* key, std::size_t universe) -> std::optional<SetLattice> {
    if (!j.contains(key) || j[key] == "product") return std::nullopt;
    return read_lattice(j[key], universe, src, at + "/" + key);
  };
  LatticeOverrides o;
  o.GxX = product("L_GxX", ng * n);
  o.XxX = product("L_XxX", n * n);
  o.XxG = product("L_XxG", n * ng);
  o.X2xX2 = product("L_X2xX2", n * n * n * n);
  if (!o.X2xX2 && j.contains("L_X2xX2")) {
    // an explicit "product" is honoured whatever the domain size
    auto xxx = o.XxX ? *o.XxX : product_lattice(base("L_X", n), base("L_X", n));
    o.X2xX2 = product_lattice(xxx, xxx);
  }
  auto lg = base("L_G", ng);
  auto lx = base("L_X", n);
  return located(src, at, [&] { return make_structure(action, lg, lx, o); });
}

InstanceBundle read_bundle(Json const& j0, Source const& src0, std::string const& at) {
  Source src;
  Json j = resolve(j0, src0, at, src);
  auto text = [&](char const* key) {
    auto const& v = field(j, key, src, at);
    if (!v.is_string()) fail(src, at + "/" + key, "expected a string");
    return v.get<std::string>();
  };
  auto action = read_action(field(j, "action", src, at), src, at + "/action");
  auto relation = read_partition(field(j, "relation", src, at), action.domain_size(), src, at + "/relation");
  InstanceBundle b{text("name"), text("description"), std::move(action), std::move(relation), {}, std::nullopt, {}};
  auto const& ws = field(j, "witnesses", src, at);
  if (!ws.is_array()) fail(src, at + "/witnesses", "expected an array");
  for (std::size_t i = 0; i < ws.size(); ++i)
    b.witnesses.push_back(read_witness(ws[i], b.action, src, at + "/witnesses/" + std::to_string(i)));
  if (j.contains("structure")) b.structure = read_structure(j["structure"], src, at + "/structure");
  auto const& ex = field(j, "expected", src, at);
  auto flag = [&](char const* key) -> std::optional<bool> {
    if (!ex.contains(key)) return std::nullopt;
    if (!ex[key].is_boolean()) fail(src, at + "/expected/" + key, "expected a boolean");
    return ex[key].get<bool>();
  };
  b.expected.invariant = flag("invariant");
  b.expected.orbital = flag("orbital");
  b.expected.weakly_orbital = flag("weakly_orbital");
  if (ex.contains("witness_shapes")) {
    for (auto const& s : ex["witness_shapes"]) {
      if (!s.is_string()) fail(src, at + "/expected/witness_shapes", "expected strings");
      b.expected.witness_shapes.push_back(s.get<std::string>());
    }
  }
  try {
    verify_bundle(b);
  } catch (std::exception const& e) {
    fail(src, at, e.what());
  }
  return b;
}

}  // namespace worb::io
