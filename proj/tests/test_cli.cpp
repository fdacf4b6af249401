#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "worb/catalog.hpp"
#include "worb/io.hpp"

using namespace worb;
using io::Json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

fs::path workdir() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("worb_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(std::string const& args, bool merge_stderr = false) {
  std::string cmd = std::string(WORB_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write(std::string const& name, Json const& j) {
  auto path = (workdir() / name).string();
  std::ofstream(path) << j.dump() << '\n';
  return path;
}

std::string write_text(std::string const& name, std::string const& text) {
  auto path = (workdir() / name).string();
  std::ofstream(path) << text;
  return path;
}

std::string bundle_file(std::string const& name) {
  auto path = (workdir() / (name + ".json")).string();
  if (!fs::exists(path)) REQUIRE(run("--out " + path + " catalog build " + name).code == 0);
  return path;
}

std::string s3_group_file() { return write("s3.json", io::to_json(*s3_standard())); }

}  // namespace

TEST_CASE("catalog list and build") {
  auto r = run("catalog list");
  REQUIRE(r.code == 0);
  auto j = r.json();
  CHECK(j["command"] == "catalog list");
  CHECK(j["results"]["instances"].size() == catalog_names().size());
  CHECK(run("catalog build no_such_instance").code == 2);
  CHECK(run("catalog build cyclic_rotation 6 3 9").code == 2);

  auto built = run("catalog build cyclic_rotation 8 4");
  REQUIRE(built.code == 0);
  auto b = io::read_bundle(built.json()["results"]["bundle"]);
  CHECK(b.action.domain_size() == 8);
  CHECK(b.relation.block_count() == 4);
}

TEST_CASE("analyze the icosahedron bundle") {
  auto path = bundle_file("icosahedron_antipodism");
  auto r = run("analyze " + path);
  REQUIRE(r.code == 0);
  auto j = r.json();
  auto const& res = j["results"];
  CHECK(res["invariant"] == true);
  CHECK(res["orbital"] == false);
  CHECK(res["weakly_orbital"] == true);
  CHECK(res["kernel_group_trivial"] == true);
  CHECK(res["transitive_witness"]["witness_set"].size() == 1);
  REQUIRE(j["inputs"].size() == 1);
  CHECK(j["inputs"][0]["sha256"].get<std::string>().size() == 64);

  // both reported witnesses re-verify through the maximal-pair operation
  for (auto const* key : {"witness", "transitive_witness"}) {
    auto w = write(std::string(key) + ".json", res[key]);
    auto back = run("witnesses " + path + " --witness " + w);
    REQUIRE(back.code == 0);
    CHECK(back.json()["results"]["set_first"]["maximal"] == Json::array({true, true}));
  }
}

TEST_CASE("analyze the equality partition of a regular action") {
  auto g = s3_group_file();
  auto p = write("eq6.json", io::to_json(Partition::discrete(6)));
  auto r = run("analyze --regular " + g + " " + p);
  REQUIRE(r.code == 0);
  auto res = r.json()["results"];
  CHECK(res["orbital"] == true);
  CHECK(res["kernel_group"] == Json::array({0}));
  CHECK(res["free"] == true);
}

TEST_CASE("a relation that is not invariant is a structured entry") {
  auto g = s3_group_file();
  auto p = write("noninv.json", io::to_json(Partition::from_blocks(6, {{0, 1}, {2, 3, 4, 5}})));
  auto r = run("analyze --regular " + g + " " + p);
  REQUIRE(r.code == 0);
  auto res = r.json()["results"];
  CHECK(res["invariant"] == false);
  CHECK(res["error"] == "NotInvariant");
  CHECK_FALSE(res.contains("orbital"));
}

TEST_CASE("input errors exit with code 2 and a location") {
  auto bad = write_text("bad.json", "{\n  \"order\": 2,\n  \"mult\": [[0, 1],\n");
  auto r = run("analyze " + bad + " " + bad, true);
  CHECK(r.code == 2);
  CHECK(r.out.find("bad.json:4:1") != std::string::npos);

  auto g = write_text("notgroup.json", R"({"order": 2, "mult": [[0, 1], [1, 1]]})");
  auto p = write("eq2.json", io::to_json(Partition::discrete(2)));
  auto r2 = run("analyze --regular " + g + " " + p, true);
  CHECK(r2.code == 2);
  CHECK(r2.out.find("notgroup.json: /: NotAGroup") != std::string::npos);

  CHECK(run("analyze /nonexistent/file.json").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("verify " + bundle_file("s3_chain") + " --theorem neither").code == 2);
}

TEST_CASE("verify on a discrete structure with an orbital relation") {
  auto a = fixture::s3_on_three();
  auto s = write("discrete.json", io::to_json(discrete_structure(a)));
  auto p = write("eq3.json", io::to_json(Partition::discrete(3)));
  for (std::string th : {"orb", "worb"}) {
    auto r = run("verify " + s + " " + p + " --theorem " + th);
    REQUIRE(r.code == 0);
    auto res = r.json()["results"];
    CHECK(res["agreeable"] == true);
    CHECK(res["agree"] == true);
    CHECK(res["conditions"] == Json::array({true, true, true, true}));
  }
  auto total = write("total3.json", io::to_json(Partition::total(3)));
  CHECK(run("verify " + s + " " + total + " --theorem orb").code == 0);
}

TEST_CASE("verify localizes a tampered structure to axiom indices") {
  auto a = fixture::s3_on_three();
  auto s = write("tampered.json", io::to_json(fixture::glued_structure(a, 1, 0)));
  auto p = write("eq3.json", io::to_json(Partition::discrete(3)));
  auto r = run("verify " + s + " " + p + " --theorem orb");
  CHECK(r.code == 1);
  auto res = r.json()["results"];
  CHECK(res["agreeable"] == false);
  CHECK(res["failed_axiom"] == 2);
  for (auto const& ax : res["axioms"]) {
    int i = ax["axiom"];
    CHECK(ax["holds"] == (i != 2 && i != 5 && i != 6));
    if (i == 5 || i == 6) {
      CHECK(ax.contains("witness"));
      CHECK(ax.contains("offending"));
    }
  }
  CHECK(run("quotient " + s + " " + p).json()["results"]["agreeable"] == false);
}

TEST_CASE("verify on a single point with trivial lattices") {
  Json one = {{"action", {{"group", {{"order", 1}, {"mult", {{0}}}}}, {"domain", 1}, {"act", {{0}}}}},
              {"L_G", "trivial"},
              {"L_X", "trivial"}};
  auto s = write("one.json", one);
  auto p = write("eq1.json", io::to_json(Partition::discrete(1)));
  auto r = run("verify " + s + " " + p + " --theorem orb");
  REQUIRE(r.code == 0);
  CHECK(r.json()["results"]["conditions"] == Json::array({true, true, true, true}));
}

TEST_CASE("verify reports hypothesis failures as input errors") {
  auto a = fixture::s3_on_three();
  auto s = write("discrete.json", io::to_json(discrete_structure(a)));
  auto two = disjoint_union(a, a);
  auto s2 = write("discrete2.json", io::to_json(discrete_structure(two)));
  auto cross = write("cross.json", io::to_json(Partition::from_blocks(6, {{0, 3}, {1, 4}, {2, 5}})));
  CHECK(run("verify " + s2 + " " + cross + " --theorem worb").code == 2);
  auto noninv = write("noninv3.json", io::to_json(Partition::from_blocks(3, {{0, 1}, {2}})));
  CHECK(run("verify " + s + " " + noninv + " --theorem orb").code == 2);
}

TEST_CASE("the s3 chain bundle verifies with all conditions false") {
  auto path = bundle_file("s3_chain");
  auto r = run("verify " + path + " --theorem worb");
  REQUIRE(r.code == 0);
  auto res = r.json()["results"];
  CHECK(res["conditions"] == Json::array({false, false, false, false}));
  CHECK(res["agree"] == true);
  auto q = run("quotient " + path);
  REQUIRE(q.code == 0);
  CHECK(q.json()["results"]["quotient_separated"] == false);
}

TEST_CASE("lattice budget") {
  auto path = bundle_file("s3_chain");
  CHECK(run("--max-lattice 1 verify " + path).code == 2);
  CHECK(run("--max-lattice 100000 verify " + path).code == 0);
}

TEST_CASE("search budgets") {
  auto zero = write("zero.json", Json{{"seed", 3}, {"samples", 0}});
  auto r = run("search " + zero);
  REQUIRE(r.code == 0);
  auto j = r.json();
  CHECK(j["results"]["hit"].is_null());
  CHECK(j["seed"] == 3);

  auto orbital = write("orbital.json", Json{{"seed", 11}, {"samples", 60}, {"orbital_only", true}});
  auto a = run("search " + orbital), b = run("search " + orbital);
  REQUIRE(a.code == 0);
  CHECK(a.json()["results"]["hit"].is_null());
  CHECK(a.json()["results"]["structures_examined"] == 60);
  CHECK(a.json()["results"].dump() == b.json()["results"].dump());

  auto seeded = run("--seed 99 search " + orbital);
  CHECK(seeded.json()["seed"] == 99);

  auto bad = write("badbudget.json", Json{{"samples", -4}});
  CHECK(run("search " + bad).code == 2);
  auto badt = write("badtarget.json", Json{{"targets", {"c"}}});
  CHECK(run("search " + badt).code == 2);
}

TEST_CASE("results are deterministic across runs") {
  auto path = bundle_file("icosahedron_antipodism");
  for (std::string cmd : {"analyze ", "witnesses "}) {
    auto a = run(cmd + path), b = run(cmd + path);
    REQUIRE(a.code == 0);
    CHECK(a.json()["results"].dump() == b.json()["results"].dump());
  }
}

TEST_CASE("witnesses compares the two maximal-pair orders") {
  auto path = bundle_file("affine_gl3_maximal_pairs");
  auto b = io::read_bundle(io::load_file(path));
  REQUIRE(b.witnesses.size() == 2);
  auto w = write("affine_w0.json", io::to_json(b.witnesses[0]));
  auto r = run("witnesses " + path + " --witness " + w);
  REQUIRE(r.code == 0);
  auto res = r.json()["results"];
  CHECK(res["input_maximal"] == true);
  CHECK(res["orders_agree"] == true);
  CHECK(res["set_first"]["witness_set"] == res["input"]["witness_set"]);
}

TEST_CASE("--out writes the report") {
  auto out = (workdir() / "report.json").string();
  auto r = run("--out " + out + " catalog list");
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(io::load_file(out)["command"] == "catalog list");
}
