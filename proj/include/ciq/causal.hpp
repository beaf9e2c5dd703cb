#pragma once
// Causal reasoning over regimes. Every observed variable x gets a companion
// regime variable F_x recording whether x arises naturally (obs) or is set by
// intervention (int). Queries are memberships I _||_ J | K in the
// independence model of a chosen regime, where I, J, K may mention regime
// variables; on top of that sit the three rewrite rules for interventional
// probabilities, an identification search that turns p(Y | do(X), W) into an
// observational estimand, and a sequential-plan evaluator.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "ciq/estimand.hpp"
#include "ciq/graph.hpp"
#include "ciq/model.hpp"

namespace ciq {

// ---------------------------------------------------------------- regimes

// Universe with one base slot per observed variable (index v) plus one
// context slot F_<name> with domain {obs,int} (index n + v).
std::shared_ptr<universe> make_regime_universe(const std::vector<std::string>& names);

// Number of observed variables in a regime universe; throws invalid_sets if
// the universe does not have the shape above.
int observed_of_regime_universe(const universe& u);

inline int regime_of(int observed_count, int base) { return observed_count + base; }

// Regime variables of the bases in X.
varset regime_set(int observed_count, const varset& X);

// The context assignment binding every regime variable: int for bases in
// intv, obs otherwise -- except those in `skip`, which stay unbound because
// they play element roles in the query at hand.
context_assignment complete_regime_context(const universe& u, const varset& intv,
                                           const varset& skip);

// Membership oracle for regime queries. I, J, K range over base and regime
// indices; intv holds the bases set by intervention. An empty I or J holds
// vacuously.
struct regime_view {
  virtual ~regime_view() = default;
  virtual int observed_count() const = 0;
  virtual const universe& regime_universe() const = 0;
  virtual bool member(const varset& I, const varset& J, const varset& K,
                      const varset& intv) const = 0;
};

// Backed by a closed elementary model over a regime universe: the membership
// reduction for the model's level runs inside the stratum that binds every
// regime variable not mentioned by the query.
struct model_regime_view final : regime_view {
  explicit model_regime_view(const elementary_model& model);
  int observed_count() const override { return observed; }
  const universe& regime_universe() const override { return *m->u; }
  bool member(const varset& I, const varset& J, const varset& K,
              const varset& intv) const override;

 private:
  const elementary_model* m;
  int observed;
};

// ------------------------------------------------------- structural models

// A directed acyclic model over named binary variables, some latent. Node
// order is arbitrary except that observed variables keep their relative
// order in the induced regime universe. cpt[v][bits] = P(v=1 | parents),
// where bit s of `bits` is the value of v's s-th parent in ascending index
// order; cpt may be empty when only separation queries are asked.
struct structural_model {
  dag g;
  std::vector<std::string> names;  // one per node
  varset latent;
  std::vector<std::vector<double>> cpt;

  varset observed_nodes() const;
  std::vector<int> observed_order() const;  // node ids of observed vars, ascending
};

// Draws every CPT entry uniformly from [0.08, 0.92], giving a strictly
// positive joint.
void randomize_cpts(structural_model& sm, std::mt19937_64& rng);

// Separation oracle for a structural model: membership is d-separation in
// the graph augmented with a root F_v -> v per observed v, after removing
// the other edges into intervened variables.
struct structural_regime_view final : regime_view {
  explicit structural_regime_view(structural_model model);
  int observed_count() const override { return static_cast<int>(obs_order.size()); }
  const universe& regime_universe() const override { return *u; }
  bool member(const varset& I, const varset& J, const varset& K,
              const varset& intv) const override;

  const structural_model sm;

 private:
  std::shared_ptr<universe> u;
  std::vector<int> obs_order;  // regime base index -> node id
  mutable std::map<std::array<std::uint64_t, 2>, dag> surgered;    // by intv mask
  mutable std::map<std::array<std::uint64_t, 8>, bool> memo;       // by full query
};

// Materializes the regime independence model of a structural model: for
// every stratum leaving at most max_free_regimes regime variables unbound
// (all others bound to a definite obs/int value), every elementary
// d-separation statement over the base variables plus the unbound regime
// variables. The result is closed at the compositional level by
// construction. Guard: at most 6 observed variables.
elementary_model regime_model_from_structural(const structural_model& sm,
                                              int max_free_regimes = 2);

// ------------------------------------------------------------------ rules

// A conditional probability under a mixed regime: p(targets | given), where
// the subset `intervened` of given is set by intervention rather than
// observed.
struct p_term {
  varset targets, given, intervened;
  bool operator==(const p_term&) const = default;
};

std::string to_text(const p_term& t, const universe& regime_u);

// The three rewrite rules for interventional probabilities, applied to the
// set X (bases). Forward direction deletes: rule 1 removes the observations
// X from `given`, rule 2 downgrades the interventions X to observations,
// rule 3 removes the interventions X entirely. reverse=true applies the
// inverse rewrite under the same license. Returns the rewritten term, or
// nullopt when the required memberships do not hold.
std::optional<p_term> apply_rule(const regime_view& rv, int rule, const p_term& from,
                                 const varset& X, bool reverse = false);

// --------------------------------------------------------- identification

struct identify_result {
  enum class status { found, none, depth_exhausted };
  status st = status::none;
  estimand e;  // meaningful only when st == found

  explicit operator bool() const { return st == status::found; }
};

// Searches for an observational estimand of p(Y | do(X), W). Strategies, in
// order, each scanning candidate covariate sets Z ascending by (size, index
// pattern): (1) adjust for confounding by Z; (2) front-door through Z;
// (3) identify the joint over Z instead and marginalize; (4) move Z into the
// context W. Recursive strategies consume one unit of depth; max_depth < 0
// means the number of observed variables. Deterministic: the first estimand
// in this order is returned.
identify_result identify(const regime_view& rv, const varset& X, const varset& Y,
                         const varset& W, int max_depth = -1);

// ------------------------------------------------------------------ plans

struct plan_result {
  std::vector<varset> covariates;  // chosen Z_k per stage
  estimand e;
};

// Sequential plan evaluation: the treatment sets in `stages` are imposed in
// order, and before stage k a covariate set Z_k from pools[k] may be
// measured. Backtracking over stage-wise inclusion-minimal candidates in
// ascending (size, index pattern) order, finds the first choice of
// covariates licensing the standard plan estimand for p(Y, W | do(stages)),
// or nullopt. Variables already treated, targeted, or in W are never
// candidates. With check_natural, chosen covariates must also be independent
// of the future treatment regimes (throws naturalness_violated otherwise).
std::optional<plan_result> evaluate_plan(const regime_view& rv,
                                         const std::vector<varset>& stages,
                                         const std::vector<varset>& pools, const varset& Y,
                                         const varset& W, bool check_natural = true);

// ---------------------------------------------------------- ground truth

// Exact joint over all nodes (latents included) under the intervention
// do(node = value); the truncated product drops the clamped factors. Guard:
// at most 12 nodes. Variables are named as in sm, domain {0,1}.
joint_table interventional_joint(const structural_model& sm, const std::map<int, int>& do_vals);

// Observational joint over the observed variables only.
joint_table observational_table(const structural_model& sm);

}  // namespace ciq
