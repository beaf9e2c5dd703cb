#pragma once
// Combining independence models: intersection (the consensus model) and three
// union constructions, each with a different trade-off between exactness and
// staying inside the representation.

#include "ciq/model.hpp"

namespace ciq {

// Triplet-set intersection. Both models must be closed and share universe and
// level; the intersection of closed sets is closed.
elementary_model intersect(const elementary_model& a, const elementary_model& b);

// Exact union: a new universe gains a two-valued context variable, every
// a-triplet is tagged with its first value and every b-triplet with its
// second, so each input survives as its own stratum. Triplets present in both
// inputs appear under both tags. Throws when the universe already has a
// variable with the chosen name.
elementary_model union_with_context(const elementary_model& a, const elementary_model& b,
                                    const std::string& aux_name = "aux");

// The least closed superset of the union: close(a.set + b.set). May represent
// strictly more than either input.
elementary_model union_min_superset(const elementary_model& a, const elementary_model& b);

// A maximal closed subset of the union whose every dominant triplet already
// holds in one of the inputs (so nothing new is represented). Maximal subsets
// are not unique; the deterministic policy starts from the model whose sorted
// triplet sequence is lexicographically smaller and greedily admits the
// other's triplets in canonical order, rolling back any addition whose
// closure escapes the union.
elementary_model union_max_subset(const elementary_model& a, const elementary_model& b);

}  // namespace ciq
