#pragma once
// Structure queries over a closed elementary model: dominant triplets (the
// maximal statements under the dominance order, from which every member is
// recoverable) and the grid layout of the elementary triplets themselves.

#include <cstddef>
#include <vector>

#include "ciq/membership.hpp"

namespace ciq {

// True when every statement of m holds in m2, i.e. m's triplet set is
// contained in m2's. Both models must be closed and share universe and level.
bool is_submodel(const elementary_model& m, const elementary_model& m2);

// All dominant triplets of the model, i.e. members not dominated by any other
// member, in the ordered convention (a statement and its mirror image count
// separately). With nonsymmetric_only, one representative per mirror pair is
// kept: the one whose first set has the lexicographically smaller mask.
// Sorted; the model must be closed.
std::vector<triplet> dominant_triplets(const elementary_model& m, bool nonsymmetric_only = false);

// The grid DAG over the ordered elementary triplets of a model. Nodes are the
// ordered forms (a symmetric model contributes both orientations). A node
// (i, j, K) has, for each k in K, a solid parent (i, k, K-k) -- the second
// element steps into the context -- and a dashed parent (k, j, K-k) -- the
// first element steps into the context -- whenever that parent is a node too.
struct grid_node {
  elem_triplet t;
  bool canonical = true;  // i < j; the mirror orientation of a symmetric model otherwise
};

struct grid_edge {
  std::size_t from = 0, to = 0;  // node indices
  bool solid = true;
};

struct grid_dag {
  std::vector<grid_node> nodes;  // sorted by triplet order
  std::vector<grid_edge> edges;  // sorted by (to, from)

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index_of(const elem_triplet& t) const;
  bool has_node(const elem_triplet& t) const { return index_of(t) != npos; }
  bool has_edge(const elem_triplet& from, const elem_triplet& to, bool solid) const;
};

grid_dag build_grid_dag(const elementary_model& m);

// A grid: variable sequences (i1..ip), (j1..jq) and a base context K such
// that every node v[s,t] = (i_s, j_t, K + {i1..i_(s-1)} + {j1..j_(t-1)}) is an
// ordered elementary triplet of the model. The grid's edges are exactly the
// solid links along rows and dashed links along columns, so a grid is
// determined by its node set.
struct grid {
  std::vector<std::uint8_t> rows;  // i-sequence
  std::vector<std::uint8_t> cols;  // j-sequence
  varset K;
  context_assignment C;

  std::vector<elem_triplet> nodes() const;  // row-major, ordered forms
  grid mirrored() const { return {cols, rows, K, C}; }
  bool operator==(const grid&) const = default;
};

// All maximal grids: grids whose node set is not strictly contained in any
// other grid's node set. With canonical_half, the search runs over only the
// canonically ordered nodes (i < j) -- the convention used when drawing one
// orientation of each triplet. That is a separate enumeration, not a
// pairing-off of the full search's output, because full-space grids may mix
// orientations. Sorted deterministically; the model must be closed.
std::vector<grid> maximal_grids(const elementary_model& m, bool canonical_half = false);

// The same search over an already-built grid DAG's node set.
std::vector<grid> maximal_grids(const grid_dag& g, bool canonical_half = false);

}  // namespace ciq
