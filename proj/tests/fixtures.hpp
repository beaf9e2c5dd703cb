#pragma once
// Shared builders for the test suite: the two running example models, the
// causal benchmark graphs, and random generators for property tests.

#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ciq/causal.hpp"
#include "ciq/closure.hpp"
#include "ciq/graph.hpp"
#include "ciq/model.hpp"

namespace fix {

using namespace ciq;

inline std::shared_ptr<universe> base_universe(int n, const std::string& prefix = "v") {
  auto u = std::make_shared<universe>();
  for (int i = 0; i < n; ++i) u->add_base(prefix + std::to_string(i + 1));
  return u;
}

// universe named 1..6, as in the running examples
inline std::shared_ptr<universe> example_universe() { return base_universe(6, ""); }

inline varset vs(std::initializer_list<int> vars) {
  varset s;
  for (int v : vars) s.set(v);
  return s;
}

// variables are 1-based in the examples, 0-based in the code
inline triplet tr(std::initializer_list<int> I, std::initializer_list<int> J,
                  std::initializer_list<int> K = {}) {
  triplet t;
  for (int v : I) t.I.set(v - 1);
  for (int v : J) t.J.set(v - 1);
  for (int v : K) t.K.set(v - 1);
  return t;
}

inline std::vector<triplet> example1_seeds() {
  return {tr({5}, {6}), tr({1, 2}, {3, 4}, {6}), tr({2, 3}, {1, 4}, {5}),
          tr({1, 2}, {3, 4}, {5}), tr({3}, {1, 4}, {2, 5})};
}

inline std::vector<triplet> example2_seeds() {
  return {tr({1, 2}, {4, 5, 6}), tr({1, 2, 3}, {4})};
}

inline elementary_model closed_model(const std::vector<triplet>& seeds,
                                     std::shared_ptr<const universe> u, axiom_level level,
                                     bool symmetric = true) {
  elementary_model m(u, level, symmetric);
  for (const auto& t : expand_e(seeds, *u)) m.insert(t);
  close_elementary(m);
  return m;
}

inline elementary_model example1_model(axiom_level level = axiom_level::semigraphoid) {
  return closed_model(example1_seeds(), example_universe(), level);
}

inline elementary_model example2_model(axiom_level level = axiom_level::semigraphoid) {
  return closed_model(example2_seeds(), example_universe(), level);
}

// ------------------------------------------------------------ causal graphs

inline structural_model graph_of(const std::vector<std::string>& names,
                                 const std::vector<std::pair<int, int>>& edges,
                                 std::initializer_list<int> latent = {}) {
  structural_model sm;
  sm.names = names;
  sm.g = dag(static_cast<int>(names.size()));
  for (auto [a, b] : edges) sm.g.add_edge(a, b);
  for (int v : latent) sm.latent.set(v);
  return sm;
}

// x <- {z3, z4}, y <- {z4, z5, z6}, with z1, z2 above and the mediator z6;
// the effect of x on y is identified by adjusting for {z1, z4}
inline structural_model adjustment_graph() {
  // 0=x 1=y 2=z1 3=z2 4=z3 5=z4 6=z5 7=z6
  return graph_of({"x", "y", "z1", "z2", "z3", "z4", "z5", "z6"},
                  {{2, 4}, {2, 5}, {3, 5}, {3, 6}, {4, 0}, {5, 0}, {5, 1}, {6, 1}, {0, 7}, {7, 1}});
}

// x -> z1 -> z2 -> y and x -> y, with a latent confounder of x and z2;
// identified by reconstructing the interventional joint over the mediators
inline structural_model latent_mediator_graph() {
  // 0=x 1=z1 2=z2 3=y 4=u
  return graph_of({"x", "z1", "z2", "y", "u"}, {{4, 0}, {4, 2}, {0, 1}, {1, 2}, {0, 3}, {2, 3}},
                  {4});
}

// the bow: x -> y with a latent confounder; not identifiable
inline structural_model bow_graph() {
  // 0=x 1=y 2=u
  return graph_of({"x", "y", "u"}, {{2, 0}, {2, 1}, {0, 1}}, {2});
}

// two-treatment plan benchmark: x1 then x2, covariate z between them,
// latents confounding z with x1 and with y
inline structural_model two_stage_graph() {
  // 0=x1 1=x2 2=z 3=y 4=u1 5=u2
  return graph_of({"x1", "x2", "z", "y", "u1", "u2"},
                  {{0, 1}, {0, 2}, {2, 1}, {0, 3}, {1, 3}, {4, 0}, {4, 2}, {0, 5}, {5, 2}, {5, 3}},
                  {4, 5});
}

// --------------------------------------------------------------- randomness

inline triplet random_triplet(std::mt19937_64& rng, int n) {
  // random nonempty disjoint I, J and K inside the rest
  while (true) {
    varset I, J, K;
    for (int v = 0; v < n; ++v) {
      switch (rng() % 4) {
        case 0: I.set(v); break;
        case 1: J.set(v); break;
        case 2: K.set(v); break;
        default: break;
      }
    }
    if (!I.empty() && !J.empty()) return {I, J, K, {}};
  }
}

inline std::vector<triplet> random_triplets(std::mt19937_64& rng, int n, int count) {
  std::vector<triplet> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) out.push_back(random_triplet(rng, n));
  return out;
}

inline elementary_model random_closed_model(std::mt19937_64& rng, int n, axiom_level level,
                                            int seeds = 3) {
  auto u = base_universe(n);
  elementary_model m(u, level);
  for (const auto& t : expand_e(random_triplets(rng, n, seeds), *u)) m.insert(t);
  close_elementary(m);
  return m;
}

inline dag random_dag(std::mt19937_64& rng, int n, int edge_percent = 40) {
  dag g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (static_cast<int>(rng() % 100) < edge_percent) g.add_edge(a, b);
  return g;
}

// ---------------------------------------------------------------- tmp files

struct temp_file {
  std::filesystem::path path;

  temp_file(const std::string& name, const std::string& content)
      : path(std::filesystem::temp_directory_path() / name) {
    std::ofstream f(path);
    f << content;
  }
  ~temp_file() { std::filesystem::remove(path); }

  std::string str() const { return path.string(); }
};

}  // namespace fix
