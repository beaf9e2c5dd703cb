#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "ciq/closure.hpp"
#include "ciq/query.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace ciq;

namespace {

std::set<triplet> as_set(const std::vector<triplet>& v) { return {v.begin(), v.end()}; }

// membership straight from the definition: every window instance must be in
bool member_by_windows(const elementary_model& m, const triplet& t) {
  for (const auto& e : expand_e({t}, *m.u))
    if (!m.contains(e)) return false;
  return true;
}

}  // namespace

TEST_CASE("membership on the running examples") {
  elementary_model two = fix::example2_model();
  CHECK(is_member(two, fix::tr({1}, {4})));
  CHECK(is_member(two, fix::tr({1}, {4}, {2})));
  CHECK(is_member(two, fix::tr({1, 2}, {4}, {3})));
  CHECK(is_member(two, fix::tr({1, 2}, {4, 5, 6})));
  CHECK(!is_member(two, fix::tr({3}, {5})));
  CHECK(!is_member(two, fix::tr({1, 2, 3}, {4, 5, 6})));
  CHECK(is_member(two, fix::tr({1}, {4}, {5})));
  CHECK(!is_member(two, fix::tr({1}, {4}, {3, 5})));  // no seed window holds 3 and 5 together

  elementary_model one = fix::example1_model();
  CHECK(is_member(one, fix::tr({5}, {6})));
  CHECK(is_member(one, fix::tr({1, 2, 3}, {4}, {5})));
  CHECK(!is_member(one, fix::tr({1}, {2})));

  // malformed queries are rejected, open models too
  CHECK_THROWS_AS((void)is_member(two, fix::tr({1}, {1})), error);
  elementary_model open(fix::example_universe(), axiom_level::semigraphoid);
  open.insert({0, 1, {}, {}});
  CHECK_THROWS_AS((void)is_member(open, fix::tr({1}, {2})), error);
}

TEST_CASE("membership equals the window definition on random closed models") {
  std::mt19937_64 rng(42);
  for (int round = 0; round < 20; ++round) {
    elementary_model m = fix::random_closed_model(rng, 4, axiom_level::semigraphoid);
    // sweep every valid context-free triplet over four variables
    for (int code = 0; code < 256; ++code) {
      triplet t;
      for (int v = 0; v < 4; ++v) {
        int slot = (code >> (2 * v)) & 3;
        if (slot == 1) t.I.set(v);
        if (slot == 2) t.J.set(v);
        if (slot == 3) t.K.set(v);
      }
      if (t.I.empty() || t.J.empty()) continue;
      CAPTURE(round);
      CAPTURE(code);
      CHECK(is_member(m, t) == member_by_windows(m, t));
    }
  }
}

TEST_CASE("dominant triplets of the running examples") {
  elementary_model two = fix::example2_model();
  auto ds2 = dominant_triplets(two, true);
  CHECK(as_set(ds2) == std::set<triplet>{fix::tr({1, 2}, {4, 5, 6}), fix::tr({1, 2, 3}, {4})});
  CHECK(dominant_triplets(two).size() == 4);

  elementary_model one = fix::example1_model();
  auto ds1 = dominant_triplets(one, true);
  std::set<triplet> expected{
      fix::tr({1}, {2, 3, 4}, {5}), fix::tr({2}, {1, 3, 4}, {5}), fix::tr({1, 2}, {3, 4}, {5}),
      fix::tr({1, 2}, {3, 4}, {6}), fix::tr({3}, {1, 2, 4}, {5}), fix::tr({1, 3}, {2, 4}, {5}),
      fix::tr({2, 3}, {1, 4}, {5}), fix::tr({1, 2, 3}, {4}, {5}), fix::tr({5}, {6})};
  CHECK(as_set(ds1) == expected);
  CHECK(dominant_triplets(one).size() == 18);
}

TEST_CASE("dominant triplets match a brute-force scan of the represented set") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 6; ++round) {
    elementary_model m = fix::random_closed_model(rng, 4, axiom_level::semigraphoid, 2);
    auto all = enumerate_model(m);
    std::set<triplet> brute;
    for (const auto& t : all) {
      bool dominated = false;
      for (const auto& s : all)
        if (!(s == t) && dominates(s, t)) {
          dominated = true;
          break;
        }
      if (!dominated) brute.insert(t);
    }
    CAPTURE(round);
    CHECK(as_set(dominant_triplets(m)) == brute);

    // every represented triplet is recoverable from some dominant one
    for (const auto& t : all) {
      bool covered = false;
      for (const auto& d : dominant_triplets(m))
        if (dominates(d, t)) {
          covered = true;
          break;
        }
      CHECK(covered);
    }
  }
}

TEST_CASE("grid nodes follow the window algebra") {
  grid g{{1, 0}, {4, 5}, fix::vs({3}), {}};
  auto nodes = g.nodes();
  REQUIRE(nodes.size() == 4);
  CHECK(nodes[0] == elem_triplet{1, 4, fix::vs({3}), {}});
  CHECK(nodes[1] == elem_triplet{1, 5, fix::vs({3, 4}), {}});
  CHECK(nodes[2] == elem_triplet{0, 4, fix::vs({3, 1}), {}});
  CHECK(nodes[3] == elem_triplet{0, 5, fix::vs({3, 1, 4}), {}});

  grid m = g.mirrored();
  CHECK(m.rows == g.cols);
  CHECK(m.nodes()[1] == elem_triplet{4, 0, fix::vs({3, 1}), {}});
}

TEST_CASE("grid layout of the running examples") {
  elementary_model two = fix::example2_model();
  grid_dag gd = build_grid_dag(two);
  CHECK(gd.nodes.size() == 112);
  for (const auto& n : gd.nodes) CHECK(two.contains(n.t));

  // a 3x1 grid of the second example: rows 3,2,1 against column 4
  auto grids_half = maximal_grids(two, true);
  CHECK(grids_half.size() == 18);
  grid expected{{2, 1, 0}, {3}, {}, {}};
  CHECK(std::count(grids_half.begin(), grids_half.end(), expected) == 1);

  CHECK(maximal_grids(two).size() == 36);

  elementary_model one = fix::example1_model();
  CHECK(build_grid_dag(one).nodes.size() == 82);
  CHECK(maximal_grids(one, true).size() == 21);
  CHECK(maximal_grids(one).size() == 82);
}

TEST_CASE("grid dag edges step one variable into the context") {
  elementary_model one = fix::example1_model();
  grid_dag gd = build_grid_dag(one);

  for (const auto& e : gd.edges) {
    const elem_triplet& from = gd.nodes[e.from].t;
    const elem_triplet& to = gd.nodes[e.to].t;
    CHECK(to.K.count() == from.K.count() + 1);
    if (e.solid) {
      CHECK(from.i == to.i);       // first element kept
      CHECK(to.K.test(from.j));    // second element stepped into the context
    } else {
      CHECK(from.j == to.j);
      CHECK(to.K.test(from.i));
    }
  }

  // solid edge: 1 _||_ 6 | {} feeds 1 _||_ 5 | {6} wherever both are nodes
  elem_triplet a{0, 5, {}, {}};
  elem_triplet b{0, 4, fix::vs({5}), {}};
  if (gd.has_node(a) && gd.has_node(b)) CHECK(gd.has_edge(a, b, true));

  // maximal grids over the prebuilt layout agree with the model search
  auto via_dag = maximal_grids(gd, true);
  auto via_model = maximal_grids(one, true);
  CHECK(via_dag == via_model);
}

TEST_CASE("submodel order on the examples") {
  elementary_model one = fix::example1_model();
  elementary_model two = fix::example2_model();
  CHECK(is_submodel(one, one));
  CHECK(!is_submodel(one, two));
  CHECK(!is_submodel(two, one));

  elementary_model small =
      fix::closed_model({fix::tr({1}, {4})}, fix::example_universe(), axiom_level::semigraphoid);
  CHECK(is_submodel(small, two));
  CHECK(!is_submodel(two, small));
}
