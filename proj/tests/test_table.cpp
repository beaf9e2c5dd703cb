#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "ciq/query.hpp"
#include "ciq/table.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace ciq;

namespace {

joint_table table_of(const std::string& csv) {
  std::istringstream in(csv);
  return load_table(in);
}

errc load_error(const std::string& csv) {
  try {
    table_of(csv);
  } catch (const error& e) {
    return e.code;
  }
  FAIL("expected a load error");
  return errc::syntax_error;
}

const char* product_csv =
    "a,b,p\n"
    "0,0,0.25\n"
    "0,1,0.25\n"
    "1,0,0.25\n"
    "1,1,0.25\n";

}  // namespace

TEST_CASE("table loading validates the format") {
  joint_table t = table_of(product_csv);
  CHECK(t.vars == std::vector<std::string>{"a", "b"});
  CHECK(t.rows() == 4);
  CHECK(t.var_index("b") == 1);
  CHECK(t.var_index("c") == -1);
  CHECK(t.index_of({1, 0}) == 2);
  CHECK(t.values_at(2) == std::vector<int>{1, 0});

  CHECK(load_error("a,b\n0,0,1\n") == errc::syntax_error);  // header must end in p
  CHECK(load_error("a,b,p\n0,0,oops\n0,1,0.25\n1,0,0.25\n1,1,0.25\n") == errc::syntax_error);
  CHECK(load_error("a,b,p\n0,0,0.5\n0,1,0.5\n") == errc::incomplete_domain);
  CHECK(load_error("a,p\n0,0.5\n0,0.5\n") == errc::incomplete_domain);
  CHECK(load_error("a,b,p\n0,0,0.25\n0,1,0.25\n1,0,0.25\n1,1,0.15\n0,0,0.1\n") ==
        errc::duplicate_row);
  CHECK(load_error("a,b,p\n0,0,0.25\n0,1,0.25\n1,0,0.25\n1,1,0.23\n") == errc::not_normalized);
  CHECK(load_error("a,b,p\n0,0,-0.25\n0,1,0.5\n1,0,0.5\n1,1,0.25\n") == errc::not_normalized);
}

TEST_CASE("tables round-trip through the serializer") {
  structural_model sm = fix::two_stage_graph();
  std::mt19937_64 rng(51);
  randomize_cpts(sm, rng);
  joint_table t = observational_table(sm);

  std::istringstream back(save_table(t));
  joint_table t2 = load_table(back);
  CHECK(t2.vars == t.vars);
  CHECK(t2.domains == t.domains);
  REQUIRE(t2.rows() == t.rows());
  for (std::size_t r = 0; r < t.rows(); ++r) CHECK(t2.p[r] == doctest::Approx(t.p[r]).epsilon(1e-12));
}

TEST_CASE("marginals agree with mass sums") {
  structural_model sm;
  sm.g = dag(3);
  sm.g.add_edge(0, 1);
  sm.g.add_edge(1, 2);
  sm.names = {"a", "b", "c"};
  std::mt19937_64 rng(6);
  randomize_cpts(sm, rng);
  joint_table t = observational_table(sm);

  joint_table m = marginal_table(t, {"c", "a"});
  CHECK(m.vars == std::vector<std::string>{"c", "a"});
  REQUIRE(m.rows() == 4);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto vals = m.values_at(r);
    // c is column 2 of t, a is column 0
    CHECK(m.p[r] == doctest::Approx(marginal_mass(t, {vals[1], -1, vals[0]})).epsilon(1e-12));
  }

  CHECK(marginal_mass(t, {-1, -1, -1}) == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)marginal_table(t, {"zz"}), error);
  CHECK_THROWS_AS((void)marginal_table(t, {"a", "a"}), error);
}

TEST_CASE("extraction finds the chain structure") {
  structural_model sm;
  sm.g = dag(3);
  sm.g.add_edge(0, 1);
  sm.g.add_edge(1, 2);
  sm.names = {"a", "b", "c"};
  std::mt19937_64 rng(77);
  randomize_cpts(sm, rng);
  joint_table t = observational_table(sm);

  elementary_model m = extract_model_from_table(t, axiom_level::semigraphoid);
  CHECK(m.closed);
  CHECK(m.size() == 1);
  CHECK(m.contains({0, 2, varset::single(1), {}}));
  CHECK(is_member(m, fix::tr({1}, {3}, {2})));
  CHECK(!is_member(m, fix::tr({1}, {3})));
}

TEST_CASE("extraction of a product table finds everything") {
  joint_table t = table_of(product_csv);
  for (auto level :
       {axiom_level::semigraphoid, axiom_level::graphoid, axiom_level::compositional}) {
    elementary_model m = extract_model_from_table(t, level);
    CAPTURE(axiom_level_name(level));
    CHECK(m.size() == 1);
    CHECK(m.contains({0, 1, {}, {}}));
  }
}

TEST_CASE("propagation never changes the extracted model") {
  std::mt19937_64 rng(2718);
  for (int round = 0; round < 6; ++round) {
    structural_model sm;
    sm.g = fix::random_dag(rng, 4);
    sm.names = {"a", "b", "c", "d"};
    randomize_cpts(sm, rng);
    joint_table t = observational_table(sm);

    elementary_model fast = extract_model_from_table(t, axiom_level::semigraphoid, 1e-9, true);
    elementary_model slow = extract_model_from_table(t, axiom_level::semigraphoid, 1e-9, false);
    CAPTURE(round);
    CHECK(fast.set == slow.set);

    // the numeric separations of a positive factorizing table are the graph's
    elementary_model graph_m = induced_elementary_model(sm.g, fast.u, fast.level);
    CHECK(fast.set == graph_m.set);
  }
}

TEST_CASE("levels demanding positivity reject tables with zeros") {
  const char* zero_csv =
      "a,b,p\n"
      "0,0,0.5\n"
      "0,1,0\n"
      "1,0,0.25\n"
      "1,1,0.25\n";
  joint_table t = table_of(zero_csv);
  CHECK_NOTHROW((void)extract_model_from_table(t, axiom_level::semigraphoid));
  CHECK_THROWS_AS((void)extract_model_from_table(t, axiom_level::graphoid), error);
  CHECK_THROWS_AS((void)extract_model_from_table(t, axiom_level::compositional), error);
}

TEST_CASE("context variables slice the table into strata") {
  const char* sliced_csv =
      "x,y,s,p\n"
      "0,0,0,0.125\n"
      "0,1,0,0.125\n"
      "1,0,0,0.125\n"
      "1,1,0,0.125\n"
      "0,0,1,0.2\n"
      "0,1,1,0.05\n"
      "1,0,1,0.05\n"
      "1,1,1,0.2\n";
  joint_table t = table_of(sliced_csv);

  auto u = std::make_shared<universe>();
  u->add_base("x");
  u->add_base("y");
  u->add_context("s", {"0", "1"});
  elementary_model m = extract_model_from_table(t, u, axiom_level::semigraphoid);

  triplet independent = fix::tr({1}, {2});
  independent.C.bind(2, 0);
  CHECK(is_member(m, independent));

  triplet dependent = fix::tr({1}, {2});
  dependent.C.bind(2, 1);
  CHECK(!is_member(m, dependent));

  // without the context column declared, x and y are marginally dependent
  elementary_model flat = extract_model_from_table(marginal_table(t, {"x", "y"}),
                                                   axiom_level::semigraphoid);
  CHECK(flat.size() == 0);
}
