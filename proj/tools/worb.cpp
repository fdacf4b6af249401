#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "worb/catalog.hpp"
#include "worb/errors.hpp"
#include "worb/io.hpp"

using namespace worb;
using io::Json;

namespace {

constexpr int kRan = 0;
constexpr int kViolated = 1;
constexpr int kInputError = 2;

struct Options {
  std::optional<std::uint64_t> seed;
  std::size_t max_subgroups = 5000;
  std::size_t max_lattice = std::size_t{1} << 16;
  std::string out;
};

struct Outcome {
  Json results = Json::object();
  int code = kRan;
  std::string summary;
};

// Input problems that should end the run with exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(std::string const& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

struct Inputs {
  Json digests = Json::array();

  std::pair<Json, io::Source> load(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream text;
    text << in.rdbuf();
    digests.push_back({{"file", path}, {"sha256", sha256_hex(text.str())}});
    std::filesystem::path p(path);
    io::Source src{path, p.has_parent_path() ? p.parent_path() : std::filesystem::path(".")};
    return {io::parse(text.str(), src), src};
  }
};

bool is_bundle(Json const& j) { return j.is_object() && j.contains("relation") && j.contains("action"); }

DeciderOptions decider(Options const& o) {
  DeciderOptions d;
  d.fallback_subgroup_cap = o.max_subgroups;
  return d;
}

void check_lattice_budget(AgreeableStructure const& s, Options const& o) {
  std::size_t worst = 0;
  for (auto const* l : {&s.L_G, &s.L_X, &s.L_GxX, &s.L_XxX, &s.L_XxG})
    worst = std::max(worst, l->irreducibles().size());
  if (s.L_X2xX2) worst = std::max(worst, s.L_X2xX2->irreducibles().size());
  if (worst > o.max_lattice)
    throw InputError("a lattice has " + std::to_string(worst) + " irreducible members, above --max-lattice " +
                     std::to_string(o.max_lattice));
}

// Action and relation from either (bundle) or (action, partition), or a
// group with --regular.
std::pair<GAction, Partition> action_and_relation(Inputs& in, std::string const& first,
                                                  std::string const& second, bool regular) {
  auto [doc, src] = in.load(first);
  if (is_bundle(doc) && second.empty()) {
    auto b = io::read_bundle(doc, src);
    return {b.action, b.relation};
  }
  if (second.empty()) throw InputError("a partition file is required unless the first file is a bundle");
  GAction action = regular ? regular_action(io::read_group(doc, src))
                           : io::read_action(is_bundle(doc) ? doc["action"] : doc, src);
  auto [pdoc, psrc] = in.load(second);
  return {action, io::read_partition(pdoc, action.domain_size(), psrc)};
}

std::pair<AgreeableStructure, Partition> structure_and_relation(Inputs& in, std::string const& first,
                                                                std::string const& second) {
  auto [doc, src] = in.load(first);
  if (is_bundle(doc)) {
    if (!doc.contains("structure")) throw InputError(first + ": bundle has no structure");
    auto s = io::read_structure(doc["structure"], src, "/structure");
    if (second.empty()) return {s, io::read_partition(doc["relation"], s.action.domain_size(), src, "/relation")};
    auto [pdoc, psrc] = in.load(second);
    return {s, io::read_partition(pdoc, s.action.domain_size(), psrc)};
  }
  auto s = io::read_structure(doc, src);
  if (second.empty()) throw InputError("a partition file is required unless the first file is a bundle");
  auto [pdoc, psrc] = in.load(second);
  return {s, io::read_partition(pdoc, s.action.domain_size(), psrc)};
}

Json axioms_json(AgreeabilityReport const& rep) {
  Json out = Json::array();
  for (auto const& a : rep.axioms) {
    Json j{{"axiom", a.axiom}, {"evaluated", a.evaluated}, {"holds", a.holds}};
    if (!a.detail.empty()) j["detail"] = a.detail;
    if (a.witness) j["witness"] = io::bits_to_json(*a.witness);
    if (a.offending) j["offending"] = io::bits_to_json(*a.offending);
    out.push_back(j);
  }
  return out;
}

// Commands ----------------------------------------------------------------------

Outcome cmd_analyze(Inputs& in, Options const& o, std::string const& first, std::string const& second,
                    bool regular) {
  auto [a, e] = action_and_relation(in, first, second, regular);
  Outcome out;
  auto& r = out.results;
  r["domain"] = a.domain_size();
  r["group_order"] = a.group().order();
  r["transitive"] = is_transitive(a);
  r["free"] = is_free(a);
  bool invariant = is_invariant(a, e);
  r["invariant"] = invariant;
  if (!invariant) {
    r["error"] = "NotInvariant";
    out.summary = "relation is not invariant";
    return out;
  }
  auto orb = is_orbital(a, e);
  auto h_e = kernel_group(a, e);
  r["orbital"] = orb.orbital;
  r["kernel_group"] = io::to_json(h_e);
  r["kernel_group_trivial"] = h_e.size() == 1;
  bool within = true;
  try {
    require_within_orbits(a, e);
  } catch (ClassCrossesOrbit const&) {
    within = false;
  }
  if (!within) {
    r["weakly_orbital"] = false;
    r["reason"] = "ClassCrossesOrbit";
  } else {
    auto res = weak_orbitality_witnesses(a, e, decider(o));
    r["weakly_orbital"] = !res.witnesses.empty();
    r["exhaustive"] = res.exhaustive;
    r["subgroups_examined"] = res.subgroups_examined;
    if (!res.witnesses.empty()) r["witness"] = io::to_json(res.witnesses.front());
    if (is_transitive(a)) r["transitive_witness"] = io::to_json(transitive_witness(a, e, 0));
  }
  out.summary = std::string("invariant, ") + (orb.orbital ? "orbital" : "not orbital") + ", " +
                (r["weakly_orbital"].get<bool>() ? "weakly orbital" : "not weakly orbital");
  return out;
}

Outcome cmd_verify(Inputs& in, Options const& o, std::string const& first, std::string const& second,
                   std::string const& theorem) {
  auto [s, e] = structure_and_relation(in, first, second);
  check_lattice_budget(s, o);
  Outcome out;
  auto& r = out.results;
  r["theorem"] = theorem;
  auto rep = check_agreeable(s);
  r["agreeable"] = rep.agreeable();
  r["axioms"] = axioms_json(rep);
  if (!rep.agreeable()) {
    r["failed_axiom"] = rep.first_failure();
    out.code = kViolated;
    out.summary = "structure is not agreeable: axiom (" + std::to_string(rep.first_failure()) + ") fails";
    return out;
  }
  VerifierOptions vo;
  TheoremReport t;
  try {
    t = theorem == "orb" ? verify_thm_orb(s, e, vo) : verify_thm_worb(s, e, vo);
  } catch (NotInvariant const& err) {
    throw InputError(err.what());
  } catch (NotOrbital const& err) {
    throw InputError(err.what());
  } catch (NotWeaklyOrbital const& err) {
    throw InputError(err.what());
  } catch (ClassCrossesOrbit const& err) {
    throw InputError(err.what());
  }
  r["conditions"] = t.conditions;
  r["agree"] = t.agree;
  r["note"] = t.note;
  if (t.witness) r["witness"] = io::to_json(*t.witness);
  if (theorem == "worb") {
    Json groups = Json::array(), sets = Json::array();
    for (auto const& h : t.unclosed_maximal_groups) groups.push_back(io::to_json(h));
    for (auto const& b : t.unclosed_maximal_sets) sets.push_back(io::bits_to_json(b));
    r["unclosed_maximal_groups"] = groups;
    r["unclosed_maximal_sets"] = sets;
  }
  out.code = t.agree ? kRan : kViolated;
  std::ostringstream msg;
  msg << "conditions";
  for (bool c : t.conditions) msg << ' ' << (c ? 'T' : 'F');
  msg << (t.agree ? ", in agreement" : ", DISAGREEMENT");
  out.summary = msg.str();
  return out;
}

Outcome cmd_search(Inputs& in, Options const& o, std::string const& budget_file) {
  auto [doc, src] = in.load(budget_file);
  if (!doc.is_object()) throw ParseError(budget_file + ": /: expected an object");
  SearchBudget b;
  auto num = [&](char const* key, auto& dst) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_unsigned()) throw ParseError(budget_file + ": /" + key + ": expected a non-negative integer");
    dst = doc[key].get<std::remove_reference_t<decltype(dst)>>();
  };
  num("seed", b.seed);
  num("samples", b.samples);
  num("max_group_order", b.max_group_order);
  num("max_domain", b.max_domain);
  if (doc.contains("orbital_only")) b.orbital_only = doc["orbital_only"].get<bool>();
  if (doc.contains("targets")) {
    b.target_a = b.target_b = false;
    for (auto const& t : doc["targets"]) {
      auto name = t.get<std::string>();
      if (name == "a") b.target_a = true;
      else if (name == "b") b.target_b = true;
      else throw ParseError(budget_file + ": /targets: unknown target \"" + name + "\"");
    }
  }
  if (o.seed) b.seed = *o.seed;
  if (b.max_domain > 10) throw InputError("max_domain above 10 is not supported");
  auto res = search_counterexample(b);
  Outcome out;
  auto& r = out.results;
  r["budget"] = {{"seed", b.seed},
                 {"samples", b.samples},
                 {"max_group_order", b.max_group_order},
                 {"max_domain", b.max_domain},
                 {"orbital_only", b.orbital_only},
                 {"target_a", b.target_a},
                 {"target_b", b.target_b}};
  r["structures_examined"] = res.structures_examined;
  r["relations_examined"] = res.relations_examined;
  if (res.hit) {
    auto const& h = *res.hit;
    bool reverified = check_agreeable(h.structure).agreeable() &&
                      (h.target == 'a' || !quotient_separated(h.structure, h.relation));
    r["hit"] = {{"target", std::string(1, h.target)},
                {"sample_index", h.sample_index},
                {"sample_seed", h.sample_seed},
                {"reverified", reverified},
                {"structure", io::to_json(h.structure)},
                {"relation", io::to_json(h.relation)}};
    out.summary = std::string("hit for target (") + h.target + ") at sample " + std::to_string(h.sample_index);
  } else {
    r["hit"] = nullptr;
    out.summary = "no hit in " + std::to_string(res.structures_examined) + " structures";
  }
  return out;
}

Outcome cmd_catalog_list() {
  Outcome out;
  out.results["instances"] = catalog_names();
  out.summary = std::to_string(catalog_names().size()) + " instances";
  return out;
}

Outcome cmd_catalog_build(std::string const& name, std::vector<std::size_t> const& params, Options const& o) {
  InstanceBundle b = [&] {
    try {
      return build_catalog_instance(name, params);
    } catch (std::invalid_argument const& e) {
      throw InputError(e.what());
    }
  }();
  Outcome out;
  auto bundle = io::to_json(b);
  out.results["name"] = b.name;
  out.results["params"] = params;
  out.results["domain"] = b.action.domain_size();
  out.results["classes"] = b.relation.block_count();
  if (o.out.empty()) {
    out.results["bundle"] = bundle;
  } else {
    std::ofstream f(o.out);
    if (!f) throw InputError("cannot write " + o.out);
    f << bundle.dump() << '\n';
    out.results["written_to"] = o.out;
  }
  out.summary = "built " + b.name;
  return out;
}

Outcome cmd_witnesses(Inputs& in, Options const& o, std::string const& first, std::string const& second,
                      std::string const& witness_file, bool regular) {
  auto [a, e] = action_and_relation(in, first, second, regular);
  require_invariant(a, e);
  Outcome out;
  auto& r = out.results;
  auto start = [&] {
    if (!witness_file.empty()) {
      auto [wdoc, wsrc] = in.load(witness_file);
      r["source"] = witness_file;
      return io::read_witness(wdoc, a, wsrc);
    }
    require_within_orbits(a, e);
    auto found = is_weakly_orbital(a, e, decider(o));
    if (!found) throw InputError("relation is not weakly orbital and no witness was given");
    r["source"] = "decider";
    return *found;
  }();
  r["input"] = io::to_json(start);
  auto set_first = maximal_pair(a, e, start.subgroup, start.witness_set, MaximalOrder::SetFirst);
  auto group_first = maximal_pair(a, e, start.subgroup, start.witness_set, MaximalOrder::GroupFirst);
  r["set_first"] = io::to_json(set_first);
  r["group_first"] = io::to_json(group_first);
  r["orders_agree"] = set_first == group_first;
  r["input_maximal"] = is_maximal_pair(a, e, start.subgroup, start.witness_set);
  out.summary = std::string("maximal pairs computed") + (set_first == group_first ? "" : " (orders differ)");
  return out;
}

Outcome cmd_quotient(Inputs& in, Options const& o, std::string const& first, std::string const& second) {
  auto [s, e] = structure_and_relation(in, first, second);
  check_lattice_budget(s, o);
  Outcome out;
  auto& r = out.results;
  r["agreeable"] = check_agreeable(s).agreeable();
  r["relation_pseudo_closed"] = s.L_XxX.contains(Relation::from_partition(e).as_square_set());
  r["quotient_separated"] = quotient_separated(s, e);
  r["cross_section"] = cross_section_condition(s);
  out.summary = std::string("quotient ") + (r["quotient_separated"].get<bool>() ? "separated" : "not separated");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbital and weakly orbital equivalence relations of finite group actions"};
  app.require_subcommand(1);
  Options opts;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized commands")->expected(1);
  app.add_option("--max-subgroups", opts.max_subgroups, "Cap on subgroup classes in the restricted fallback");
  app.add_option("--max-lattice", opts.max_lattice, "Cap on irreducible members of any loaded lattice");
  app.add_option("--out", opts.out, "Write the primary JSON document here");

  std::string first, second, witness_file, theorem = "worb", budget, name;
  std::vector<std::size_t> params;
  bool regular = false;

  auto* analyze = app.add_subcommand("analyze", "Invariance, orbitality and weak orbitality of a relation");
  analyze->add_option("action", first, "Action (or bundle, or group with --regular)")->required();
  analyze->add_option("partition", second, "Partition");
  analyze->add_flag("--regular", regular, "Treat the first file as a group acting on itself");

  auto* verify = app.add_subcommand("verify", "Check a meta-theorem on an agreeable structure");
  verify->add_option("structure", first, "Structure (or bundle with a structure)")->required();
  verify->add_option("partition", second, "Partition");
  verify->add_option("--theorem", theorem, "orb or worb")->check(CLI::IsMember({"orb", "worb"}));

  auto* search = app.add_subcommand("search", "Random search for counterexamples");
  search->add_option("budget", budget, "Budget file")->required();

  auto* catalog = app.add_subcommand("catalog", "Named example instances");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "List instance names");
  auto* build = catalog->add_subcommand("build", "Build an instance bundle");
  build->add_option("name", name, "Instance name")->required();
  build->add_option("params", params, "Integer parameters");

  auto* witnesses = app.add_subcommand("witnesses", "Maximal witness pairs");
  witnesses->add_option("action", first, "Action (or bundle, or group with --regular)")->required();
  witnesses->add_option("partition", second, "Partition");
  witnesses->add_option("--witness", witness_file, "Starting witness pair");
  witnesses->add_flag("--regular", regular, "Treat the first file as a group acting on itself");

  auto* quotient = app.add_subcommand("quotient", "Separation of the quotient by pseudo-closed sets");
  quotient->add_option("structure", first, "Structure (or bundle with a structure)")->required();
  quotient->add_option("partition", second, "Partition");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? kRan : kInputError;
  }
  if (*seed_opt) opts.seed = seed;

  auto start = std::chrono::steady_clock::now();
  Inputs inputs;
  Outcome outcome;
  std::string command;
  try {
    if (*analyze) {
      command = "analyze";
      outcome = cmd_analyze(inputs, opts, first, second, regular);
    } else if (*verify) {
      command = "verify";
      outcome = cmd_verify(inputs, opts, first, second, theorem);
    } else if (*search) {
      command = "search";
      outcome = cmd_search(inputs, opts, budget);
    } else if (*list) {
      command = "catalog list";
      outcome = cmd_catalog_list();
    } else if (*build) {
      command = "catalog build";
      outcome = cmd_catalog_build(name, params, opts);
    } else if (*witnesses) {
      command = "witnesses";
      outcome = cmd_witnesses(inputs, opts, first, second, witness_file, regular);
    } else if (*quotient) {
      command = "quotient";
      outcome = cmd_quotient(inputs, opts, first, second);
    }
  } catch (InputError const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (Error const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (nlohmann::json::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  Json report{{"command", command}, {"inputs", inputs.digests}, {"results", outcome.results}};
  if (command == "search") report["seed"] = outcome.results["budget"]["seed"];
  report["runtime_ms"] = ms;
  std::string text = report.dump(2);
  if (!opts.out.empty() && command != "catalog build") {
    std::ofstream f(opts.out);
    if (!f) {
      std::cerr << "error: cannot write " << opts.out << '\n';
      return kInputError;
    }
    f << text << '\n';
  } else {
    std::cout << text << '\n';
  }
  std::cerr << command << ": " << outcome.summary << '\n';
  return outcome.code;
}
