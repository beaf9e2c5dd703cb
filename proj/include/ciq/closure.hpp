#pragma once
// Closure machinery. The elementary engine is the workhorse: a worklist over
// canonical elementary triplets, partnered through a (variable, context)
// stratum index, applying the level-selected rewrite rules until fixpoint.
// The full-triplet closure exists as a brute-force reference for testing the
// elementary representation against the classical one.

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "ciq/model.hpp"

namespace ciq {

// e(M): all elementary triplets recoverable from composite ones by
// decomposition and weak union: i in I, j in J, K <= K' <= (I-i)(J-j)K.
std::vector<elem_triplet> expand_e(const std::vector<triplet>& M, const universe& u);

struct closure_options {
  // 0 = unlimited; otherwise the number of worklist steps allowed before
  // giving up with budget_exhausted
  std::uint64_t max_steps = 0;
};

// Close the model in place under its axiom level. Symmetric models fold the
// symmetry rule into canonical storage; directed models apply the left-hand
// (first-slot) rule family alongside the right-hand one instead.
void close_elementary(elementary_model& m, const closure_options& opts = {});

// Full-triplet fixpoint closure over composite triplets; exponential, guarded.
// Intended as a test oracle, not a production path.
std::vector<triplet> close_triplets_oracle(const std::vector<triplet>& M, const universe& u,
                                           axiom_level level, int max_base_vars = 8);

// All composite triplets represented by a closed elementary model, i.e. every
// valid I _||_ J | K whose membership test passes.
std::vector<triplet> enumerate_model(const elementary_model& m);

}  // namespace ciq
