#pragma once
// DAGs over the base variables: d-separation, the independence model a graph
// induces, parent-set search over a model, minimal independence maps for an
// ordering, and the search for a graph whose separations reproduce a model
// exactly.

#include <memory>
#include <optional>
#include <vector>

#include "ciq/membership.hpp"

namespace ciq {

struct dag {
  int n = 0;
  std::vector<varset> pa, ch;  // parent / child masks per node

  dag() = default;
  explicit dag(int nodes) : n(nodes), pa(nodes), ch(nodes) {}

  void add_edge(int from, int to);
  bool has_edge(int from, int to) const {
    return from >= 0 && from < n && to >= 0 && to < n && pa[to].test(from);
  }
  std::size_t edge_count() const;

  varset ancestors(const varset& s) const;    // s plus everything above it
  varset descendants(const varset& s) const;  // s plus everything below it
  bool acyclic() const;
  std::vector<int> topological_order() const;  // parents before children

  bool operator==(const dag&) const = default;
};

// True iff K blocks every trail between I and J (reachability over active
// trails; colliders pass only inside the ancestral closure of K).
bool d_separated(const dag& g, const varset& I, const varset& J, const varset& K);

// The model of all elementary separations i _||_ j | K of the graph. The
// result is closed at any level (separation models satisfy the full
// compositional-graphoid family); it is tagged compositional by default.
// The universe must consist of exactly the graph's nodes as base variables.
elementary_model induced_elementary_model(const dag& g, std::shared_ptr<const universe> u,
                                          axiom_level level = axiom_level::compositional);

// Every Y obtained from a maximal chain i _||_ j1 | X-{j1..jn} -> ... ->
// i _||_ jn | X-{jn} inside the model, returned as Y = X-{j1..jn}; when no
// chain exists the whole X is the only candidate parent set. Sorted by
// (cardinality, mask). The model must be closed and context-free; i not in X.
std::vector<varset> all_pa(const elementary_model& m, int i, const varset& X);

// Minimal independence map for the ordering: parents of order[s] are the
// first all_pa candidate within {order[0..s-1]}. Every separation of the
// output holds in the model.
dag build_mim(const elementary_model& m, const std::vector<int>& order);

struct perfect_map {
  std::vector<int> ordering;
  dag g;
};

// Searches for an ordering and graph whose separation model equals the model
// exactly; none when no graph can represent it. Exponential in the worst
// case; refuses universes above max_nodes base variables (0 = no limit).
std::optional<perfect_map> has_perfect_map(const elementary_model& m, int max_nodes = 8);

struct joint_table;

// True when the table factorizes over the graph: p(v) equals the product of
// p(node | parents(node)) pointwise within eps.
bool verify_factorization(const dag& g, const joint_table& t, double eps = 1e-9);

}  // namespace ciq
