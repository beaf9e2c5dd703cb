#pragma once
// Membership test for arbitrary (set, set | set) statements against a closed
// elementary model. Each axiom level admits a finite reduction to elementary
// lookups, so no full-triplet closure is ever materialized.

#include "ciq/model.hpp"

namespace ciq {

// Membership of a composite statement I _||_ J | K reduces to finitely many
// elementary lookups; `has(a, b, L)` answers whether a _||_ b | L holds
// elementarily (within whatever stratum the caller fixed).
//
//  - semigraphoid:   with I = {i1 < ... < ip} and J = {j1 < ... < jq}, every
//                    chain link i_s _||_ j_t | {i1..i_(s-1)} {j1..j_(t-1)} K
//                    must hold.
//  - graphoid:       every corner i _||_ j | (I-i)(J-j)K must hold.
//  - compositional:  every pair i _||_ j | K must hold.
template <class Has>
bool member_by_reduction(axiom_level level, const varset& I, const varset& J, const varset& K,
                         Has&& has) {
  switch (level) {
    case axiom_level::semigraphoid: {
      varset acc_i = K;
      bool ok = true;
      I.for_each([&](int i) {
        if (!ok) return;
        varset acc = acc_i;
        J.for_each([&](int j) {
          if (!ok) return;
          if (!has(i, j, acc)) ok = false;
          acc.set(j);
        });
        acc_i.set(i);
      });
      return ok;
    }
    case axiom_level::graphoid: {
      bool ok = true;
      I.for_each([&](int i) {
        if (!ok) return;
        J.for_each([&](int j) {
          if (!ok) return;
          varset L = (I - varset::single(i)) | (J - varset::single(j)) | K;
          if (!has(i, j, L)) ok = false;
        });
      });
      return ok;
    }
    case axiom_level::compositional: {
      bool ok = true;
      I.for_each([&](int i) {
        if (!ok) return;
        J.for_each([&](int j) {
          if (!ok) return;
          if (!has(i, j, K)) ok = false;
        });
      });
      return ok;
    }
  }
  return false;
}

// True when the statement I _||_ J | K (in stratum C) belongs to the full
// model represented by m, by the reduction above over m's stored triplets.
// The model must be closed.
bool is_member(const elementary_model& m, const triplet& t);
bool is_member(const elementary_model& m, const varset& I, const varset& J, const varset& K,
               const context_assignment& C = {});

}  // namespace ciq
