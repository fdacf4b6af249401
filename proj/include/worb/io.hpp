#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "worb/catalog.hpp"
#include "worb/lattice.hpp"
#include "worb/relations.hpp"

// JSON formats:
//   group      {"order": n, "mult": [[...]]} or {"degree": m, "generators": [[images]]}
//   action     {"group": <group or file name>, "domain": m, "act": [[...]]}
//   partition  {"blocks": [[indices]]}
//   relation   {"pairs": [[i, j]]}
//   witness    {"subgroup": [indices], "witness_set": [indices], "maximal": [bool, bool]}
//   lattice    {"universe": n, "sets": [[indices]]}
//              {"universe": n, "generators": [[indices]], "close": true}
//              {"universe": n, "generators": [[indices]]}  (all unions of the generators)
//   structure  {"action": ..., "L_G": ..., "L_X": ..., "L_GxX": ..., "L_XxX": ...,
//               "L_XxG": ..., "L_X2xX2": ...}; lattice entries may also be
//               "discrete", "trivial" or (products only) "product", the default.
//   bundle     {"name", "description", "action", "relation", "witnesses",
//               "structure" (optional), "expected"}
// File names inside a document are resolved against the document's directory.

namespace worb::io {

using Json = nlohmann::ordered_json;

/// Where a document came from; used for error locations and file references.
struct Source {
  std::string name = "<input>";
  std::filesystem::path dir = ".";
};

/// Throws ParseError with line and column on malformed text.
Json parse(std::string_view text, Source const& src = {});

/// Reads and parses a file; throws ParseError when it cannot be read.
Json load_file(std::filesystem::path const& path);

Json to_json(FiniteGroup const& g);
Json to_json(GAction const& a);
Json to_json(Partition const& p);
Json to_json(Relation const& r);
Json to_json(Subgroup const& h);
Json to_json(WitnessPair const& w);
Json to_json(SetLattice const& l);
Json to_json(AgreeableStructure const& s);
Json to_json(InstanceBundle const& b);
Json bits_to_json(Bitset const& b);

// Readers throw ParseError naming the source and the JSON path.
GroupPtr read_group(Json const& j, Source const& src = {}, std::string const& at = "");
GAction read_action(Json const& j, Source const& src = {}, std::string const& at = "");
Partition read_partition(Json const& j, std::size_t domain, Source const& src = {}, std::string const& at = "");
Relation read_relation(Json const& j, std::size_t domain, Source const& src = {}, std::string const& at = "");
Subgroup read_subgroup(Json const& j, FiniteGroup const& g, Source const& src = {}, std::string const& at = "");
WitnessPair read_witness(Json const& j, GAction const& a, Source const& src = {}, std::string const& at = "");
SetLattice read_lattice(Json const& j, std::size_t universe, Source const& src = {}, std::string const& at = "");
AgreeableStructure read_structure(Json const& j, Source const& src = {}, std::string const& at = "");
/// Re-verifies the expected properties after loading.
InstanceBundle read_bundle(Json const& j, Source const& src = {}, std::string const& at = "");

}  // namespace worb::io
