#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "test_support.hpp"
#include "tolquot/iso_search.hpp"
#include "tolquot/quotients.hpp"
#include "tolquot/realization.hpp"
#include "tolquot/structure_io.hpp"

using namespace tolquot;
using namespace tolquot::testing;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / ("tolquot-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Workdir() { fs::remove_all(dir); }
  std::string write(std::string const& name, std::string const& text) const {
    auto const p = dir / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string path(std::string const& name) const { return (dir / name).string(); }
};

cli::CommandOutcome run(std::vector<std::string> args) { return cli::run(args); }

json run_json(std::vector<std::string> args, int expected_code) {
  args.push_back("--format");
  args.push_back("json");
  auto const r = cli::run(args);
  REQUIRE_MESSAGE(r.exit_code == expected_code, r.err);
  return json::parse(r.out);
}

json doc(std::string const& text) { return json::parse(text); }

std::string read(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Node id for a label, from lines like: n4 [label="13", ...];
std::string node_of(std::string const& dot, std::string const& label) {
  std::smatch mt;
  std::regex const re("  (n[0-9]+) \\[label=\"" + label + "\"");
  REQUIRE(std::regex_search(dot, mt, re));
  return mt[1];
}

bool has_edge(std::string const& dot, std::string const& a, std::string const& b) {
  return dot.find("  " + a + " -- " + b + ";") != std::string::npos
         || dot.find("  " + b + " -- " + a + ";") != std::string::npos;
}

}  // namespace

TEST_CASE("generators emit the built-in structures") {
  auto const pow = parse_as<FiniteAlgebra>(run({"gen", "pow3-plus"}).out);
  CHECK(pow.table(0) == pow3_plus().table(0));
  CHECK(pow.names() == nondisjointness(3).names());
  CHECK(doc(run({"gen", "nondisjoint", "--m", "3"}).out) == doc(serialize(nondisjointness(3))));
  CHECK(doc(run({"gen", "principal-filters", "--m", "3"}).out)
        == doc(serialize(principal_filter_covering(3))));
  auto const ex2 = parse_as<MultiAlgebra>(run({"gen", "example2"}).out);
  CHECK(ex2.same_tables(pair_groupoid()));
  auto const a = run({"gen", "random", "--size", "4", "--arities", "1,2", "--seed", "7"});
  auto const b = run({"gen", "random", "--size", "4", "--arities", "1,2", "--seed", "7"});
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(parse_as<FiniteAlgebra>(a.out).size() == 4);
}

TEST_CASE("json output matches the library") {
  Workdir w;
  auto const alg = w.write("pow3.json", serialize(pow3_plus()));
  auto const nu = w.write("nu.json", serialize(nondisjointness(3)));
  auto const pf = w.write("pf.json", serialize(principal_filter_covering(3)));
  auto const ex2 = w.write("ex2.json", serialize(pair_groupoid()));

  SUBCASE("quotient") {
    auto const q = tolerance_quotient(pow3_plus(), nondisjointness(3));
    auto const j = run_json({"quotient", "--algebra", alg, "--tolerance", nu}, 0);
    CHECK(j["construction"] == "tolerance");
    CHECK(j["blocks"] == doc(serialize(q.blocks)));
    CHECK(j["quotient"] == doc(serialize(q.quotient)));
    // +(B1,B2) = {B1,B2,B3} where B3 is the block S.
    CHECK(j["quotient"]["operations"][0]["table"][1] == json({0, 1, 2}));
  }
  SUBCASE("fc-quotient") {
    auto const q = full_covering_quotient(pow3_plus(), nondisjointness(3), principal_filter_covering(3));
    auto const j = run_json({"fc-quotient", "--algebra", alg, "--tolerance", nu, "--covering", pf}, 0);
    CHECK(j["construction"] == "full_covering");
    CHECK(j["quotient"] == doc(serialize(q.quotient)));
  }
  SUBCASE("blocks and induced") {
    auto const j = run_json({"blocks", "--relation", nu}, 0);
    CHECK(j == doc(serialize(maximal_cliques(nondisjointness(3)))));
    auto const cov = w.write("all.json", j.dump());
    auto const i = run_json({"induced", "--covering", cov}, 0);
    CHECK(i == doc(serialize(nondisjointness(3))));
  }
  SUBCASE("check-tolerance") {
    auto const j = run_json({"check-tolerance", "--algebra", alg, "--relation", nu}, 0);
    CHECK(j["tolerance"] == true);
    CHECK(j["violation"].is_null());
    auto const s = w.write("s.json", serialize(unary_algebra("s", {1, 2, 0})));
    std::vector<ElementPair> p{{0, 1}};
    auto const rel = w.write("r.json", serialize(BinaryRelation::from_pairs(3, p)));
    auto const n = run_json({"check-tolerance", "--algebra", s, "--relation", rel}, 1);
    auto const v = *find_substitution_violation(unary_algebra("s", {1, 2, 0}), BinaryRelation::from_pairs(3, p));
    CHECK(n["tolerance"] == false);
    CHECK(n["violation"]["op"] == v.op);
    CHECK(n["violation"]["lhs"] == json(v.lhs));
    CHECK(n["violation"]["rhs"] == json(v.rhs));
    CHECK(n["violation"]["lhs_image"] == v.lhs_image);
    CHECK(n["violation"]["rhs_image"] == v.rhs_image);
  }
  SUBCASE("full-covering") {
    CHECK(run_json({"full-covering", "--algebra", alg, "--relation", nu, "--covering", pf}, 0)["full_covering"] == true);
    std::string partial = R"({"kind": "covering", "size": 7, "blocks": [[0, 2, 4, 6], [1, 2, 5, 6]]})";
    auto const j = run_json({"full-covering", "--algebra", alg, "--relation", nu, "--covering",
                             w.write("partial.json", partial)}, 1);
    CHECK(j["violation"]["kind"] == "uncovered_element");
    CHECK(j["violation"]["a"] == m(4));
  }
  SUBCASE("determinacy") {
    auto const wit = *check_block_determinacy(pow3_plus(), nondisjointness(3));
    auto const j = run_json({"determinacy", "--algebra", alg, "--tolerance", nu}, 1);
    CHECK(j["determinate"] == false);
    CHECK(j["witness"]["op"] == wit.op);
    CHECK(j["witness"]["block_tuple"] == json(wit.block_tuple));
    CHECK(j["witness"]["block"] == wit.block);
    CHECK(j["witness"]["tuple_in"] == json(wit.tuple_in));
    CHECK(j["witness"]["tuple_out"] == json(wit.tuple_out));
    auto const sweep = run_json({"determinacy", "--sweep-unary", "3"}, 0);
    auto const rep = sweep_unary_determinacy(3);
    CHECK(sweep["tolerances"] == rep.tolerances);
    CHECK(sweep["counterexamples"] == rep.counterexamples);
    CHECK(sweep["first_counterexample"]["algebra"] == doc(serialize(rep.first->algebra)));
  }
  SUBCASE("realize") {
    auto const out = w.path("bundle");
    auto const r = run({"realize", "--multialgebra", ex2, "--output", out});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("isomorphic: yes (S_k ↦ k)") != std::string::npos);
    auto const b = realize(pair_groupoid());
    CHECK(doc(read(out + "/algebra.json")) == doc(serialize(b.power_algebra)));
    CHECK(doc(read(out + "/tolerance.json")) == doc(serialize(b.nu)));
    CHECK(doc(read(out + "/covering.json")) == doc(serialize(b.filters)));
    CHECK(doc(read(out + "/quotient.json")) == doc(serialize(b.quotient.quotient)));
    CHECK(fs::exists(out + "/legend.txt"));
    auto const j = run_json({"realize", "--multialgebra", ex2}, 0);
    CHECK(j["iso"] == json({0, 1, 2}));
  }
  SUBCASE("iso") {
    auto const q = w.write("q.json", serialize(full_covering_quotient(pow3_plus(), nondisjointness(3),
                                                                      principal_filter_covering(3)).quotient));
    auto const j = run_json({"iso", "--lhs", q, "--rhs", ex2}, 0);
    CHECK(j["mapping"] == json({0, 1, 2}));
    auto const proj = w.write("proj.json", serialize(as_multialgebra(
                                              binary_algebra("+", 3, {0, 0, 0, 1, 1, 1, 2, 2, 2}))));
    CHECK(run_json({"iso", "--lhs", proj, "--rhs", ex2}, 1)["isomorphic"] == false);
  }
  SUBCASE("represent") {
    auto const r = run({"represent", "--target", ex2, "--max-size", "4"});
    CHECK(r.exit_code == 1);
    CHECK(r.out.rfind("ExhaustedNone at bound 4\n", 0) == 0);
    auto const lib = find_tolerance_representation(pair_groupoid(), 4);
    auto const j = run_json({"represent", "--target", ex2, "--max-size", "4"}, 1);
    CHECK(j["verdict"] == "exhausted_none");
    CHECK(j["stats"]["relations_examined"] == lib.stats.relations_examined);
    CHECK(j["stats"]["region_prunes"] == lib.stats.region_prunes);
    auto const fc = run_json({"fc-represent", "--target", ex2, "--max-size", "7"}, 0);
    auto const lw = *find_full_covering_representation(pair_groupoid(), 7).witness;
    CHECK(fc["witness"]["algebra"] == doc(serialize(lw.algebra)));
    CHECK(fc["witness"]["covering"] == doc(serialize(lw.covering)));
    CHECK(fc["witness"]["iso"] == json(lw.iso.mapping));
  }
  SUBCASE("fourth-clique") {
    auto const j = run_json({"fourth-clique", "--relation", nu, "--blocks", "0,1,3", "--elements", "12,13,23"}, 0);
    CHECK(j["clique"] == json({m(3), m(5), m(6)}));
    auto const d = run_json({"fourth-clique", "--relation", nu}, 0);
    CHECK(d["clique"] == j["clique"]);
    auto const path = w.write("path.json", serialize(BinaryRelation::from_pairs(3, std::vector<ElementPair>{{0, 1}, {1, 2}})));
    CHECK(run({"fourth-clique", "--relation", path}).exit_code == 1);
    CHECK(run({"fourth-clique", "--relation", nu, "--blocks", "0,1,3", "--elements", "123,13,23"}).exit_code == 2);
  }
}

TEST_CASE("exit codes") {
  Workdir w;
  auto const alg = w.write("pow3.json", serialize(pow3_plus()));
  auto const nu = w.write("nu.json", serialize(nondisjointness(3)));
  CHECK(run({}).exit_code == 2);
  CHECK(run({"no-such-command"}).exit_code == 2);
  CHECK(run({"quotient", "--algebra", alg}).exit_code == 2);
  CHECK(run({"quotient", "--algebra", alg, "--tolerance", nu, "--format", "yaml"}).exit_code == 2);
  CHECK(run({"--help"}).exit_code == 0);
  CHECK(run({"quotient", "--algebra", w.path("missing.json"), "--tolerance", nu}).exit_code == 3);
  CHECK(run({"quotient", "--algebra", w.write("bad.json", "{\"kind\": "), "--tolerance", nu}).exit_code == 3);
  CHECK(run({"quotient", "--algebra", nu, "--tolerance", nu}).exit_code == 3);
  CHECK(run({"quotient", "--algebra", alg, "--tolerance", nu, "--budget", "3"}).exit_code == 4);
  CHECK(run({"represent", "--target", w.write("ex2.json", serialize(pair_groupoid())), "--max-size", "9"}).exit_code == 3);
  CHECK(run({"quotient", "--algebra", alg, "--tolerance", nu, "--format", "dot"}).exit_code == 2);
  auto const g = w.write("g.json", serialize(unary_algebra("g", {m(3), m(3), m(3), m(5), m(5), m(6), m(6)})));
  auto const pf = w.write("pf.json", serialize(principal_filter_covering(3)));
  auto const e = run_json({"fc-quotient", "--algebra", g, "--tolerance", nu, "--covering", pf}, 1);
  CHECK(e["error"] == "empty_value");
  CHECK(e["block_tuple"] == json({0}));
}

TEST_CASE("output goes to --output when given") {
  Workdir w;
  auto const path = w.path("nu.json");
  auto const r = run({"gen", "nondisjoint", "--m", "2", "--output", path});
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(read(path) == serialize(nondisjointness(2)));
}

TEST_CASE("jobs do not change outputs") {
  Workdir w;
  auto const alg = w.write("pow3.json", serialize(pow3_plus()));
  auto const nu = w.write("nu.json", serialize(nondisjointness(3)));
  CHECK(run({"quotient", "--algebra", alg, "--tolerance", nu}).out
        == run({"quotient", "--algebra", alg, "--tolerance", nu, "--jobs", "4"}).out);
}

TEST_CASE("dot export") {
  SUBCASE("non-disjointness") {
    auto const dot = cli::export_dot(nondisjointness(3));
    CHECK(dot.rfind("graph ", 0) == 0);
    CHECK(has_edge(dot, node_of(dot, "12"), node_of(dot, "13")));
    CHECK(!has_edge(dot, node_of(dot, "1"), node_of(dot, "23")));
    CHECK(dot.find("n0 -- n0") == std::string::npos);
    CHECK(dot == cli::export_dot(nondisjointness(3)));
  }
  SUBCASE("diagonal is edgeless") {
    auto const dot = cli::export_dot(BinaryRelation::diagonal(4));
    CHECK(dot.find("--") == std::string::npos);
    CHECK(dot.find("[label=") != std::string::npos);
  }
  SUBCASE("covering annotation") {
    auto const nu = nondisjointness(3);
    auto const cov = maximal_cliques(nu);
    auto const dot = cli::export_dot(nu, &cov);
    CHECK(std::count(dot.begin(), dot.end(), '\n') > 0);
    std::size_t classes = 0;
    for (std::size_t pos = dot.find("// block "); pos != std::string::npos; pos = dot.find("// block ", pos + 1)) {
      ++classes;
    }
    CHECK(classes == 4);
    CHECK(dot.find("n6 [label=\"123\", style=wedged") != std::string::npos);
    CHECK(dot.find("n0 [label=\"1\", style=filled") != std::string::npos);
    // Edges do not depend on the annotation.
    auto edges = [](std::string const& d) { return d.substr(d.find(" -- ") - 5); };
    CHECK(edges(dot) == edges(cli::export_dot(nu)));
    Covering const small(2, {ElementSet::full(2)});
    CHECK_THROWS_AS(cli::export_dot(nu, &small), ArgumentError);
  }
  SUBCASE("dot command") {
    Workdir w;
    auto const nu = w.write("nu.json", serialize(nondisjointness(3)));
    auto const r = run({"dot", "--relation", nu});
    CHECK(r.exit_code == 0);
    CHECK(r.out == cli::export_dot(nondisjointness(3)));
  }
}
