#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "ciq/cli.hpp"
#include "ciq/closure.hpp"
#include "ciq/io.hpp"
#include "ciq/query.hpp"
#include "ciq/setops.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace ciq;

namespace {

const char* example1_text =
    "# six variables, five seed statements\n"
    "vars: 1 2 3 4 5 6\n"
    "axioms: semigraphoid\n"
    "triplet: 5 ; 6\n"
    "triplet: 1 2 ; 3 4 | 6\n"
    "triplet: 2 3 ; 1 4 | 5\n"
    "triplet: 1 2 ; 3 4 | 5\n"
    "triplet: 3 ; 1 4 | 2 5\n";

elementary_model load_text(const std::string& text) {
  std::istringstream in(text);
  return load_model(in);
}

errc load_failure(const std::string& text) {
  try {
    load_text(text);
  } catch (const error& e) {
    return e.code;
  }
  FAIL("expected a parse error");
  return errc::syntax_error;
}

struct cli_result {
  int code = 0;
  std::string out, err;
};

cli_result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  cli_result r;
  r.code = cli_run(std::move(args), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool has_line(const std::string& text, const std::string& line) {
  return ("\n" + text).find("\n" + line + "\n") != std::string::npos;
}

const char* adjustment_graph_text =
    "nodes: x y z1 z2 z3 z4 z5 z6\n"
    "z1 -> z3\nz1 -> z4\nz2 -> z4\nz2 -> z5\nz3 -> x\nz4 -> x\nz4 -> y\nz5 -> y\n"
    "x -> z6\nz6 -> y\n";

}  // namespace

TEST_CASE("statement text round-trips") {
  auto u = fix::example_universe();
  triplet t = fix::tr({1, 2}, {3, 4}, {5});
  CHECK(to_text(t, *u) == "1 2 ; 3 4 | 5");
  CHECK(parse_statement_text(to_text(t, *u), *u) == t);
  CHECK(to_text(fix::tr({5}, {6}), *u) == "5 ; 6");

  auto uc = std::make_shared<universe>();
  uc->add_base("a");
  uc->add_base("b");
  uc->add_context("s", {"lo", "hi"});
  elem_triplet e{0, 1, {}, {}};
  e.C.bind(2, 1);
  CHECK(to_text(e, *uc) == "a ; b @ s=hi");
  CHECK(parse_statement_text("a;b@s=hi", *uc) == e.as_triplet());
}

TEST_CASE("model files load the running example") {
  elementary_model m = load_text(example1_text);
  CHECK(m.level == axiom_level::semigraphoid);
  CHECK(m.symmetric);
  CHECK(!m.closed);
  close_elementary(m);
  CHECK(m.set == fix::example1_model().set);
}

TEST_CASE("model parsing reports broken lines") {
  CHECK(load_failure("vars: a b\ntriplet: a ; a\n") == errc::overlapping_sets);
  CHECK(load_failure("vars: a b\ntriplet: a ; q\n") == errc::unknown_variable);
  CHECK(load_failure("vars: a b\nwhatever: 1\n") == errc::syntax_error);
  CHECK(load_failure("vars: a b\ntriplet: a b\n") == errc::syntax_error);
  CHECK(load_failure("vars: a b c\nelem: a b ; c\n") == errc::invalid_triplet);
  CHECK(load_failure("vars: a b\naxioms: strong\n") == errc::syntax_error);
  CHECK(load_failure("vars: a a\n") == errc::aux_name_collision);
  CHECK(load_failure("vars: a b\ncontext-var: s hi\n") == errc::syntax_error);
  CHECK(load_failure("vars: a b\nclosed: maybe\n") == errc::syntax_error);
  CHECK(load_failure("vars: a b\ntriplet: a ; b @ a=1\n") == errc::invalid_triplet);

  try {
    load_text("vars: a b\n\ntriplet: a ; q\n");
  } catch (const error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("serialization is canonical and lossless") {
  elementary_model m = fix::example1_model();
  std::string text = serialize_model(m);
  elementary_model back = load_text(text);
  CHECK(back.closed);
  CHECK(back.level == m.level);
  CHECK(back.symmetric == m.symmetric);
  CHECK(back.set == m.set);
  CHECK(serialize_model(back) == text);

  // statement order in the source does not matter
  std::string reordered =
      "vars: 1 2 3 4 5 6\naxioms: semigraphoid\n"
      "triplet: 3 ; 1 4 | 2 5\ntriplet: 1 2 ; 3 4 | 5\ntriplet: 1 2 ; 3 4 | 6\n"
      "triplet: 2 3 ; 1 4 | 5\ntriplet: 5 ; 6\n";
  elementary_model m2 = load_text(reordered);
  close_elementary(m2);
  CHECK(serialize_model(m2) == text);

  // directed and context-tagged models survive the trip
  elementary_model dir(fix::base_universe(3), axiom_level::graphoid, false);
  dir.insert({2, 0, varset::single(1), {}});
  dir.closed = true;
  elementary_model dir_back = load_text(serialize_model(dir));
  CHECK(!dir_back.symmetric);
  CHECK(dir_back.level == axiom_level::graphoid);
  CHECK(dir_back.set == dir.set);

  elementary_model e = fix::closed_model({fix::tr({1}, {2}, {3})}, fix::base_universe(3),
                                         axiom_level::semigraphoid);
  elementary_model f = fix::closed_model({fix::tr({1}, {3})}, e.u, axiom_level::semigraphoid);
  elementary_model tagged = union_with_context(e, f, "which");
  elementary_model tagged_back = load_text(serialize_model(tagged));
  CHECK(*tagged_back.u == *tagged.u);
  CHECK(tagged_back.set == tagged.set);
}

TEST_CASE("graph files round-trip and reject malformed input") {
  std::istringstream in(adjustment_graph_text);
  named_dag d = load_dag(in);
  CHECK(d.names.size() == 8);
  CHECK(d.g.edge_count() == 10);
  CHECK(d.latent.empty());
  CHECK(d.g.has_edge(2, 4));  // z1 -> z3

  std::istringstream back(serialize_dag(d));
  named_dag d2 = load_dag(back);
  CHECK(d2.g == d.g);
  CHECK(d2.names == d.names);

  std::istringstream lat("nodes: x y u\nlatent: u\nu -> x\nu -> y\n");
  named_dag b = load_dag(lat);
  CHECK(b.latent == varset::single(2));
  std::istringstream lat2(serialize_dag(b));
  CHECK(load_dag(lat2).latent == b.latent);

  auto dag_failure = [](const std::string& text) {
    std::istringstream s(text);
    try {
      (void)load_dag(s);
    } catch (const error& e) {
      return e.code;
    }
    FAIL("expected a graph parse error");
    return errc::syntax_error;
  };
  CHECK(dag_failure("nodes: a b\na -> q\n") == errc::unknown_variable);
  CHECK(dag_failure("nodes: a b\na -> b\nb -> a\n") == errc::invalid_sets);  // cycle
  CHECK(dag_failure("nodes: a b\na -> b\nnodes: c\n") == errc::syntax_error);
  CHECK(dag_failure("") == errc::syntax_error);
  CHECK(dag_failure("nodes: a b\nlatent: q\n") == errc::unknown_variable);
}

TEST_CASE("dot exports name every node") {
  std::istringstream in("nodes: x y u\nlatent: u\nu -> x\nu -> y\nx -> y\n");
  named_dag d = load_dag(in);
  std::string dot = dot_of_dag(d);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("\"x\"") != std::string::npos);
  CHECK(dot.find("\"u\" -> \"y\"") != std::string::npos);
  CHECK(dot.find("dashed") != std::string::npos);  // the latent is marked

  elementary_model two = fix::example2_model();
  std::string grid_dot = dot_of_grid_dag(build_grid_dag(two), *two.u);
  CHECK(grid_dot.find("digraph") != std::string::npos);
  CHECK(grid_dot.find("1 ; 4") != std::string::npos);
}

TEST_CASE("cli closes and reports the running examples") {
  fix::temp_file model("cli_example1.model", example1_text);
  cli_result r = run_cli({"close", "--in", model.str(), "--axioms", "semigraphoid"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "stored=41"));
  CHECK(has_line(r.out, "elementary=82"));

  fix::temp_file out_path("cli_example1_closed.model", "");
  CHECK(run_cli({"close", "--in", model.str(), "--out", out_path.str()}).code == 0);
  cli_result member = run_cli({"member", "--in", out_path.str(), "1 2 3 ; 4 | 5"});
  CHECK(member.code == 0);
  CHECK(has_line(member.out, "member=true"));
  cli_result non_member = run_cli({"member", "--in", out_path.str(), "1 ; 2"});
  CHECK(non_member.code == 0);
  CHECK(has_line(non_member.out, "member=false"));
}

TEST_CASE("cli lists dominants and grids") {
  fix::temp_file model("cli_example2.model",
                       "vars: 1 2 3 4 5 6\naxioms: semigraphoid\n"
                       "triplet: 1 2 ; 4 5 6\ntriplet: 1 2 3 ; 4\n");
  cli_result doms = run_cli({"dominant", "--in", model.str(), "--close", "--nonsymmetric"});
  CHECK(doms.code == 0);
  CHECK(has_line(doms.out, "dominant=1 2 ; 4 5 6"));
  CHECK(has_line(doms.out, "dominant=1 2 3 ; 4"));
  CHECK(has_line(doms.out, "count=2"));

  cli_result grids = run_cli({"grids", "--in", model.str(), "--close", "--canonical-half"});
  CHECK(grids.code == 0);
  CHECK(has_line(grids.out, "count=18"));
  CHECK(has_line(grids.out, "grid-dag-nodes=112"));
}

TEST_CASE("cli identifies causal effects from graph files") {
  fix::temp_file graph("cli_adjustment.graph", adjustment_graph_text);
  cli_result r = run_cli({"identify", "--graph", graph.str(), "--do", "x", "--target", "y"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "status=found"));
  CHECK(has_line(r.out, "estimand=sum{z1,z4}( p(y|x,z1,z4) * p(z1,z4) )"));

  fix::temp_file bow("cli_bow.graph", "nodes: x y u\nlatent: u\nu -> x\nu -> y\nx -> y\n");
  cli_result none = run_cli({"identify", "--graph", bow.str(), "--do", "x", "--target", "y"});
  CHECK(none.code == 0);
  CHECK(has_line(none.out, "status=none"));

  fix::temp_file plan_graph("cli_two_stage.graph",
                            "nodes: x1 x2 z y u1 u2\nlatent: u1 u2\n"
                            "x1 -> x2\nx1 -> z\nz -> x2\nx1 -> y\nx2 -> y\n"
                            "u1 -> x1\nu1 -> z\nx1 -> u2\nu2 -> z\nu2 -> y\n");
  cli_result plan = run_cli({"plan", "--graph", plan_graph.str(), "--stage", "x1", "--stage",
                             "x2", "--pool", "", "--pool", "z", "--target", "y"});
  CHECK(plan.code == 0);
  CHECK(has_line(plan.out, "status=found"));
  CHECK(has_line(plan.out, "stage1-covariates="));
  CHECK(has_line(plan.out, "stage2-covariates=z"));
  CHECK(has_line(plan.out, "estimand=sum{z}( p(y|x1,x2,z) * p(z|x1) )"));
}

TEST_CASE("cli extracts models and evaluates estimands on tables") {
  fix::temp_file csv("cli_product.csv", "a,b,p\n0,0,0.25\n0,1,0.25\n1,0,0.25\n1,1,0.25\n");
  fix::temp_file out_model("cli_product.model", "");
  cli_result r = run_cli({"from-table", "--table", csv.str(), "--out", out_model.str()});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "stored=1"));
  cli_result member = run_cli({"member", "--in", out_model.str(), "a ; b"});
  CHECK(has_line(member.out, "member=true"));

  cli_result value =
      run_cli({"eval-estimand", "--table", csv.str(), "--estimand", "p(a|b)", "--bind", "a=0",
               "--bind", "b=1"});
  CHECK(value.code == 0);
  CHECK(has_line(value.out, "value=0.5"));

  fix::temp_file chain_graph("cli_chain.graph", "nodes: a b c\na -> b\nb -> c\n");
  fix::temp_file chain_csv("cli_chain.csv", "");
  CHECK(run_cli({"random-table", "--graph", chain_graph.str(), "--seed", "11", "--out",
                 chain_csv.str()})
            .code == 0);
  cli_result extracted = run_cli({"from-table", "--table", chain_csv.str()});
  CHECK(has_line(extracted.out, "stored=1"));
}

TEST_CASE("cli combines models") {
  fix::temp_file a("cli_union_a.model", "vars: x y z\naxioms: semigraphoid\ntriplet: x ; y | z\n");
  fix::temp_file b("cli_union_b.model", "vars: x y z\naxioms: semigraphoid\ntriplet: x ; z\n");

  cli_result lub = run_cli({"union", a.str(), b.str(), "--mode", "min", "--close"});
  CHECK(lub.code == 0);
  CHECK(has_line(lub.out, "stored=4"));

  cli_result glb = run_cli({"union", a.str(), b.str(), "--mode", "max", "--close"});
  CHECK(has_line(glb.out, "stored=1"));

  cli_result tagged =
      run_cli({"union", a.str(), b.str(), "--mode", "context", "--aux", "which", "--close"});
  CHECK(tagged.code == 0);
  CHECK(has_line(tagged.out, "stored=2"));

  cli_result cap = run_cli({"intersect", a.str(), b.str(), "--close"});
  CHECK(cap.code == 0);
  CHECK(has_line(cap.out, "stored=0"));
}

TEST_CASE("cli failures set the exit status") {
  cli_result missing = run_cli({"close", "--in", "/nonexistent/nothing.model"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("error=") == 0);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  fix::temp_file model("cli_errors.model", example1_text);
  cli_result bad_statement = run_cli({"member", "--in", model.str(), "--close", "1 ; 1"});
  CHECK(bad_statement.code == 1);
  CHECK(bad_statement.err.find("overlapping") != std::string::npos);

  cli_result bad_level = run_cli({"close", "--in", model.str(), "--axioms", "maximal"});
  CHECK(bad_level.code == 1);

  CHECK(run_cli({}).code != 0);            // a verb is required
  CHECK(run_cli({"frobnicate"}).code != 0);
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({"close"}).code != 0);     // --in is required

  fix::temp_file open_model("cli_open.model",
                            "vars: a b c\naxioms: semigraphoid\ntriplet: a ; b | c\n");
  cli_result not_closed = run_cli({"dominant", "--in", open_model.str()});
  CHECK(not_closed.code == 1);  // without --close the model stays open
}
