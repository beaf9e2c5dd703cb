#include "ciq/causal.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "ciq/membership.hpp"
#include "ciq/table.hpp"

namespace ciq {

// ---------------------------------------------------------------- regimes

std::shared_ptr<universe> make_regime_universe(const std::vector<std::string>& names) {
  if (names.empty()) throw error(errc::invalid_sets, "a regime universe needs variables");
  auto u = std::make_shared<universe>();
  for (const auto& n : names) u->add_base(n);
  for (const auto& n : names) u->add_context("F_" + n, {"obs", "int"});
  return u;
}

int observed_of_regime_universe(const universe& u) {
  int n = u.size() / 2;
  bool ok = u.size() % 2 == 0 && n > 0;
  for (int v = 0; ok && v < n; ++v)
    ok = !u.is_context(v) && u.is_context(n + v) && u.names[n + v] == "F_" + u.names[v] &&
         u.domains[n + v] == std::vector<std::string>{"obs", "int"};
  if (!ok)
    throw error(errc::invalid_sets,
                "expected a universe of n observed variables followed by their regimes");
  return n;
}

varset regime_set(int observed_count, const varset& X) {
  varset out;
  X.for_each([&](int v) { out.set(observed_count + v); });
  return out;
}

context_assignment complete_regime_context(const universe& u, const varset& intv,
                                           const varset& skip) {
  int n = observed_of_regime_universe(u);
  context_assignment c;
  for (int v = 0; v < n; ++v) {
    if (skip.test(n + v)) continue;
    c.bind(n + v, intv.test(v) ? 1 : 0);  // {obs, int} -> {0, 1}
  }
  return c;
}

namespace {

varset range_set(int count, int from = 0) {
  varset s;
  for (int v = from; v < count; ++v) s.set(v);
  return s;
}

void validate_regime_query(int n, const varset& I, const varset& J, const varset& K,
                           const varset& intv) {
  if (!(I | J | K).subset_of(range_set(2 * n)))
    throw error(errc::index_out_of_range, "query variable outside the regime universe");
  if (!intv.subset_of(range_set(n)))
    throw error(errc::index_out_of_range, "interventions must be observed variables");
  if (I.intersects(J) || I.intersects(K) || J.intersects(K))
    throw error(errc::overlapping_sets, "I, J and K must be pairwise disjoint");
}

}  // namespace

model_regime_view::model_regime_view(const elementary_model& model) : m(&model) {
  if (!m->u) throw error(errc::invalid_sets, "model has no universe");
  observed = observed_of_regime_universe(*m->u);
  if (!m->closed) throw error(errc::not_closed, "regime queries need a closed model");
  if (!m->symmetric)
    throw error(errc::invalid_sets, "regime queries need a symmetric model");
}

bool model_regime_view::member(const varset& I, const varset& J, const varset& K,
                               const varset& intv) const {
  if (I.empty() || J.empty()) return true;
  validate_regime_query(observed, I, J, K, intv);
  context_assignment c = complete_regime_context(*m->u, intv, I | J | K);
  return member_by_reduction(m->level, I, J, K, [&](int a, int b, const varset& L) {
    return m->contains({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), L, c});
  });
}

// ------------------------------------------------------- structural models

varset structural_model::observed_nodes() const { return range_set(g.n) - latent; }

std::vector<int> structural_model::observed_order() const {
  std::vector<int> out;
  observed_nodes().for_each([&](int v) { out.push_back(v); });
  return out;
}

void randomize_cpts(structural_model& sm, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.08, 0.92);
  sm.cpt.assign(sm.g.n, {});
  for (int v = 0; v < sm.g.n; ++v) {
    sm.cpt[v].assign(std::size_t{1} << sm.g.pa[v].count(), 0.0);
    for (auto& p : sm.cpt[v]) p = unif(rng);
  }
}

namespace {

void validate_structural(const structural_model& sm) {
  if (sm.g.n <= 0) throw error(errc::invalid_sets, "structural model has no nodes");
  if (static_cast<int>(sm.names.size()) != sm.g.n)
    throw error(errc::invalid_sets, "one name per node required");
  if (!sm.latent.subset_of(range_set(sm.g.n)))
    throw error(errc::index_out_of_range, "latent mask outside the node range");
  if (sm.observed_nodes().empty())
    throw error(errc::invalid_sets, "all variables are latent");
  if (!sm.g.acyclic()) throw error(errc::invalid_sets, "structural graph has a cycle");
}

// The F-augmented graph for one intervention set: every structural edge
// except those into intervened variables, plus a root F_v -> v per observed
// v (observed order k maps to node node_count + k).
dag regime_graph(const structural_model& sm, const std::vector<int>& obs_order,
                 const varset& intv) {
  int m = sm.g.n, n = static_cast<int>(obs_order.size());
  std::vector<int> base_of(m, -1);
  for (int k = 0; k < n; ++k) base_of[obs_order[k]] = k;
  dag g(m + n);
  for (int v = 0; v < m; ++v) {
    if (base_of[v] >= 0 && intv.test(base_of[v])) continue;
    sm.g.pa[v].for_each([&](int w) { g.add_edge(w, v); });
  }
  for (int k = 0; k < n; ++k) g.add_edge(m + k, obs_order[k]);
  return g;
}

// regime-universe indices -> augmented-graph nodes
varset to_graph_nodes(const varset& s, const std::vector<int>& obs_order, int node_count) {
  int n = static_cast<int>(obs_order.size());
  varset out;
  s.for_each([&](int v) { out.set(v < n ? obs_order[v] : node_count + (v - n)); });
  return out;
}

}  // namespace

structural_regime_view::structural_regime_view(structural_model model) : sm(std::move(model)) {
  validate_structural(sm);
  std::vector<std::string> obs_names;
  sm.observed_nodes().for_each([&](int v) {
    obs_order.push_back(v);
    obs_names.push_back(sm.names[v]);
  });
  u = make_regime_universe(obs_names);
}

bool structural_regime_view::member(const varset& I, const varset& J, const varset& K,
                                    const varset& intv) const {
  if (I.empty() || J.empty()) return true;
  int n = observed_count();
  validate_regime_query(n, I, J, K, intv);
  std::array<std::uint64_t, 8> qkey{I.w[0],    I.w[1],    J.w[0],    J.w[1],
                                    K.w[0],    K.w[1],    intv.w[0], intv.w[1]};
  if (auto it = memo.find(qkey); it != memo.end()) return it->second;
  std::array<std::uint64_t, 2> gkey{intv.w[0], intv.w[1]};
  auto git = surgered.find(gkey);
  if (git == surgered.end())
    git = surgered.emplace(gkey, regime_graph(sm, obs_order, intv)).first;
  bool sep = d_separated(git->second, to_graph_nodes(I, obs_order, sm.g.n),
                         to_graph_nodes(J, obs_order, sm.g.n),
                         to_graph_nodes(K, obs_order, sm.g.n));
  memo.emplace(qkey, sep);
  return sep;
}

elementary_model regime_model_from_structural(const structural_model& sm,
                                              int max_free_regimes) {
  validate_structural(sm);
  auto obs_order = sm.observed_order();
  int n = static_cast<int>(obs_order.size());
  if (n > 6)
    throw error(errc::universe_too_large,
                "materialized regime models are limited to 6 observed variables");
  if (max_free_regimes < 0) max_free_regimes = 0;

  std::vector<std::string> obs_names;
  for (int v : obs_order) obs_names.push_back(sm.names[v]);
  auto u = make_regime_universe(obs_names);
  elementary_model out(u, axiom_level::compositional);

  // d-separation per intervention set, graphs built once each
  std::map<std::array<std::uint64_t, 2>, dag> graphs;
  auto separated = [&](int a, int b, const varset& K, const varset& intv) {
    std::array<std::uint64_t, 2> key{intv.w[0], intv.w[1]};
    auto it = graphs.find(key);
    if (it == graphs.end()) it = graphs.emplace(key, regime_graph(sm, obs_order, intv)).first;
    return d_separated(it->second, to_graph_nodes(varset::single(a), obs_order, sm.g.n),
                       to_graph_nodes(varset::single(b), obs_order, sm.g.n),
                       to_graph_nodes(K, obs_order, sm.g.n));
  };

  varset fset = range_set(2 * n, n);
  for_each_subset_ordered(fset, [&](const varset& U) {
    if (U.count() > max_free_regimes) return;
    std::vector<int> bound;
    (fset - U).for_each([&](int f) { bound.push_back(f); });
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << bound.size()); ++bits) {
      context_assignment c;
      varset intv;
      for (std::size_t s = 0; s < bound.size(); ++s) {
        int val = static_cast<int>((bits >> s) & 1);
        c.bind(bound[s], val);
        if (val) intv.set(bound[s] - n);
      }
      std::vector<int> pool;
      (range_set(n) | U).for_each([&](int v) { pool.push_back(v); });
      for (std::size_t a = 0; a < pool.size(); ++a)
        for (std::size_t b = a + 1; b < pool.size(); ++b) {
          varset rest;
          for (std::size_t s = 0; s < pool.size(); ++s)
            if (s != a && s != b) rest.set(pool[s]);
          for_each_subset(rest, [&](const varset& K) {
            if (separated(pool[a], pool[b], K, intv))
              out.insert({static_cast<std::uint8_t>(pool[a]), static_cast<std::uint8_t>(pool[b]),
                          K, c});
          });
        }
    }
  });
  // separation statements already satisfy every closure rule within a stratum
  out.closed = true;
  return out;
}

// ------------------------------------------------------------------ rules

std::string to_text(const p_term& t, const universe& regime_u) {
  int n = observed_of_regime_universe(regime_u);
  (void)n;
  auto names = [&](const varset& s, const varset& wrapped) {
    std::vector<std::string> out;
    s.for_each([&](int v) {
      out.push_back(wrapped.test(v) ? "do(" + regime_u.names[v] + ")" : regime_u.names[v]);
    });
    std::sort(out.begin(), out.end());
    return out;
  };
  std::string text = "p(";
  auto tg = names(t.targets, {});
  for (std::size_t i = 0; i < tg.size(); ++i) text += (i ? "," : "") + tg[i];
  if (!t.given.empty()) {
    text += '|';
    auto gv = names(t.given, t.intervened);
    for (std::size_t i = 0; i < gv.size(); ++i) text += (i ? "," : "") + gv[i];
  }
  text += ')';
  return text;
}

std::optional<p_term> apply_rule(const regime_view& rv, int rule, const p_term& from,
                                 const varset& X, bool reverse) {
  int n = rv.observed_count();
  varset base = range_set(n);
  if (rule < 1 || rule > 3) throw error(errc::invalid_sets, "rule must be 1, 2 or 3");
  if (from.targets.empty()) throw error(errc::invalid_sets, "term needs target variables");
  if (!(from.targets | from.given | X).subset_of(base))
    throw error(errc::index_out_of_range, "term variable outside the observed range");
  if (from.targets.intersects(from.given))
    throw error(errc::overlapping_sets, "targets and conditioners overlap");
  if (!from.intervened.subset_of(from.given))
    throw error(errc::invalid_sets, "interventions must appear among the conditioners");
  if (X.empty()) throw error(errc::invalid_sets, "the rule needs a nonempty X");

  const varset Y = from.targets;
  const varset FX = regime_set(n, X);
  p_term to = from;
  varset W, Z;
  bool licensed = false;

  if (!reverse) {
    switch (rule) {
      case 1:  // delete the observations X
        if (!X.subset_of(from.given - from.intervened))
          throw error(errc::invalid_sets, "rule 1 deletes observed conditioners");
        Z = from.intervened;
        W = from.given - X - Z;
        licensed = rv.member(Y, X, W | Z, Z);
        to.given -= X;
        break;
      case 2:  // interventions X become observations
        if (!X.subset_of(from.intervened))
          throw error(errc::invalid_sets, "rule 2 downgrades intervened conditioners");
        Z = from.intervened - X;
        licensed = rv.member(Y, FX, from.given, Z);
        to.intervened -= X;
        break;
      case 3:  // delete the interventions X
        if (!X.subset_of(from.intervened))
          throw error(errc::invalid_sets, "rule 3 deletes intervened conditioners");
        Z = from.intervened - X;
        W = from.given - X - Z;
        licensed = rv.member(Y, X, W | Z, X | Z) && rv.member(Y, FX, W | Z, Z);
        to.given -= X;
        to.intervened -= X;
        break;
    }
  } else {
    switch (rule) {
      case 1:  // insert X as observations
        if (X.intersects(from.targets | from.given))
          throw error(errc::invalid_sets, "inserted variables must be fresh");
        Z = from.intervened;
        W = from.given - Z;
        licensed = rv.member(Y, X, W | Z, Z);
        to.given |= X;
        break;
      case 2:  // observations X become interventions
        if (!X.subset_of(from.given - from.intervened))
          throw error(errc::invalid_sets, "rule 2 upgrades observed conditioners");
        Z = from.intervened;
        licensed = rv.member(Y, FX, from.given, Z);
        to.intervened |= X;
        break;
      case 3:  // insert X as interventions
        if (X.intersects(from.targets | from.given))
          throw error(errc::invalid_sets, "inserted variables must be fresh");
        Z = from.intervened;
        W = from.given - Z;
        licensed = rv.member(Y, X, W | Z, X | Z) && rv.member(Y, FX, W | Z, Z);
        to.given |= X;
        to.intervened |= X;
        break;
    }
  }
  if (!licensed) return std::nullopt;
  return to;
}

// --------------------------------------------------------- identification

namespace {

std::vector<std::string> var_names(const universe& u, const varset& s) {
  std::vector<std::string> out;
  s.for_each([&](int v) { out.push_back(u.names[v]); });
  return out;
}

struct identify_ctx {
  const regime_view& rv;
  const universe& u;
  int n;

  estimand prob(const varset& A, const varset& B) const {
    return make_prob(var_names(u, A), var_names(u, B));
  }
  bool mem(const varset& I, const varset& J, const varset& K, const varset& intv) const {
    return rv.member(I, J, K, intv);
  }
  varset F(const varset& X) const { return regime_set(n, X); }
};

identify_result identify_rec(const identify_ctx& cx, const varset& X, const varset& Y,
                             const varset& W, int depth) {
  using status = identify_result::status;
  if (Y.empty()) return {status::found, make_product({})};
  varset pool = range_set(cx.n) - X - Y - W;
  std::vector<varset> zs;
  for_each_subset_ordered(pool, [&](const varset& z) { zs.push_back(z); });
  const varset FX = cx.F(X);
  bool exhausted = false;

  // adjust for confounding by Z
  for (const varset& Z : zs) {
    varset XWZ = X | W | Z;
    if (cx.mem(Y, FX, XWZ, {}) && cx.mem(Z, X, W, X) && cx.mem(Z, FX, W, {})) {
      std::vector<estimand> fs{cx.prob(Y, XWZ)};
      if (!Z.empty()) fs.push_back(cx.prob(Z, W));
      return {status::found, make_sum(var_names(cx.u, Z), std::move(fs))};
    }
  }
  // route the effect through a mechanism Z
  for (const varset& Z : zs) {
    varset XWZ = X | W | Z;
    varset FZ = cx.F(Z);
    if (cx.mem(Z, FX, X | W, {}) && cx.mem(Y, FZ, XWZ, {}) && cx.mem(X, Z, W, Z) &&
        cx.mem(X, FZ, W, {}) && cx.mem(Y, FZ, XWZ, X) && cx.mem(Y, X, W | Z, X | Z) &&
        cx.mem(Y, FX, W | Z, Z)) {
      estimand inner =
          make_sum(var_names(cx.u, X), {cx.prob(Y, XWZ), cx.prob(X, W)});
      std::vector<estimand> fs;
      if (!Z.empty()) fs.push_back(cx.prob(Z, X | W));
      fs.push_back(std::move(inner));
      return {status::found, make_sum(var_names(cx.u, Z), std::move(fs))};
    }
  }
  // identify the screen Z instead and compose
  for (const varset& Z : zs) {
    if (!cx.mem(Y, FX, X | W | Z, {})) continue;
    if (depth == 0) {
      exhausted = true;
      continue;
    }
    auto sub = identify_rec(cx, X, Z, W, depth - 1);
    if (sub.st == status::depth_exhausted) {
      exhausted = true;
      continue;
    }
    if (sub.st != status::found) continue;
    std::vector<estimand> fs{cx.prob(Y, X | W | Z)};
    fs.push_back(std::move(sub.e));
    return {status::found, make_sum(var_names(cx.u, Z), std::move(fs))};
  }
  // move Z into the context and retry
  for (const varset& Z : zs) {
    if (Z.empty()) continue;
    if (!(cx.mem(Z, X, W, X) && cx.mem(Z, FX, W, {}))) continue;
    if (depth == 0) {
      exhausted = true;
      continue;
    }
    auto sub = identify_rec(cx, X, Y, W | Z, depth - 1);
    if (sub.st == status::depth_exhausted) {
      exhausted = true;
      continue;
    }
    if (sub.st != status::found) continue;
    std::vector<estimand> fs{std::move(sub.e)};
    fs.push_back(cx.prob(Z, W));
    return {status::found, make_sum(var_names(cx.u, Z), std::move(fs))};
  }
  return {exhausted ? status::depth_exhausted : status::none, {}};
}

}  // namespace

identify_result identify(const regime_view& rv, const varset& X, const varset& Y,
                         const varset& W, int max_depth) {
  int n = rv.observed_count();
  varset base = range_set(n);
  if (!(X | Y | W).subset_of(base))
    throw error(errc::index_out_of_range, "query variable outside the observed range");
  if (X.intersects(Y) || X.intersects(W) || Y.intersects(W))
    throw error(errc::overlapping_sets, "treatments, targets and context must be disjoint");
  if (max_depth < 0) max_depth = n;
  identify_ctx cx{rv, rv.regime_universe(), n};
  return identify_rec(cx, X, Y, W, max_depth);
}

// ------------------------------------------------------------------ plans

std::optional<plan_result> evaluate_plan(const regime_view& rv,
                                         const std::vector<varset>& stages,
                                         const std::vector<varset>& pools, const varset& Y,
                                         const varset& W, bool check_natural) {
  int n_obs = rv.observed_count();
  const universe& u = rv.regime_universe();
  varset base = range_set(n_obs);
  int n = static_cast<int>(stages.size());
  if (n == 0) throw error(errc::invalid_sets, "a plan needs at least one stage");
  if (pools.size() != stages.size())
    throw error(errc::invalid_sets, "one covariate pool per stage required");
  varset allX;
  for (const auto& s : stages) {
    if (s.empty()) throw error(errc::invalid_sets, "every stage must treat something");
    if (s.intersects(allX))
      throw error(errc::overlapping_sets, "stages treat a variable twice");
    allX |= s;
  }
  varset everything = allX | Y | W;
  for (const auto& p : pools) everything |= p;
  if (!everything.subset_of(base))
    throw error(errc::index_out_of_range, "plan variable outside the observed range");
  if (Y.empty()) throw error(errc::invalid_sets, "a plan needs target variables");
  if (allX.intersects(Y) || allX.intersects(W) || Y.intersects(W))
    throw error(errc::overlapping_sets, "treatments, targets and context must be disjoint");

  // the stage-k identifying condition, given covariates chosen so far
  auto stage_ok = [&](int k, const std::vector<varset>& Zs) {
    varset later;
    for (int t = k + 1; t < n; ++t) later |= stages[t];
    varset cond = allX;
    for (int t = 0; t <= k && t < static_cast<int>(Zs.size()); ++t) cond |= Zs[t];
    return rv.member(Y | W, regime_set(n_obs, stages[k]), cond, later);
  };

  std::vector<varset> Zs;
  std::function<bool(int)> search = [&](int k) -> bool {
    if (k == n) return true;
    varset used = allX | Y | W;
    for (const auto& z : Zs) used |= z;
    varset pool = pools[k] - used;
    std::vector<varset> sat;
    for_each_subset_ordered(pool, [&](const varset& z) {
      Zs.push_back(z);
      bool ok = stage_ok(k, Zs);
      Zs.pop_back();
      if (ok) sat.push_back(z);
    });
    for (std::size_t i = 0; i < sat.size(); ++i) {
      bool minimal = true;
      for (std::size_t j = 0; j < i && minimal; ++j)
        if (sat[j] != sat[i] && sat[j].subset_of(sat[i])) minimal = false;
      if (!minimal) continue;
      Zs.push_back(sat[i]);
      if (search(k + 1)) return true;
      Zs.pop_back();
    }
    return false;
  };
  if (!search(0)) return std::nullopt;

  if (check_natural) {
    for (int k = 0; k < n; ++k) {
      varset prev;
      for (int t = 0; t < k; ++t) prev |= stages[t] | Zs[t];
      varset nowX;
      for (int t = k; t < n; ++t) nowX |= stages[t];
      if (!rv.member(Zs[k], nowX, prev, nowX) ||
          !rv.member(Zs[k], regime_set(n_obs, nowX), prev, {}))
        throw error(errc::naturalness_violated,
                    "stage " + std::to_string(k + 1) +
                        " covariates react to the remaining treatments");
    }
  }

  varset allZ;
  for (const auto& z : Zs) allZ |= z;
  std::vector<estimand> fs{make_prob(var_names(u, Y | W), var_names(u, allX | allZ))};
  for (int k = 0; k < n; ++k) {
    if (Zs[k].empty()) continue;
    varset prior;
    for (int t = 0; t < k; ++t) prior |= stages[t] | Zs[t];
    fs.push_back(make_prob(var_names(u, Zs[k]), var_names(u, prior)));
  }
  return plan_result{std::move(Zs), make_sum(var_names(u, allZ), std::move(fs))};
}

// ---------------------------------------------------------- ground truth

joint_table interventional_joint(const structural_model& sm, const std::map<int, int>& do_vals) {
  validate_structural(sm);
  if (sm.g.n > 12)
    throw error(errc::universe_too_large, "exact joints are limited to 12 variables");
  if (static_cast<int>(sm.cpt.size()) != sm.g.n)
    throw error(errc::invalid_sets, "structural model has no tables");
  for (int v = 0; v < sm.g.n; ++v)
    if (sm.cpt[v].size() != std::size_t{1} << sm.g.pa[v].count())
      throw error(errc::invalid_sets, "table of " + sm.names[v] + " has the wrong shape");
  for (auto [v, val] : do_vals) {
    if (v < 0 || v >= sm.g.n) throw error(errc::index_out_of_range, "intervened variable");
    if (val != 0 && val != 1)
      throw error(errc::invalid_sets, "interventions take values 0 or 1");
  }

  joint_table t;
  t.vars = sm.names;
  t.domains.assign(sm.g.n, {"0", "1"});
  t.p.assign(std::size_t{1} << sm.g.n, 0.0);
  for (std::size_t row = 0; row < t.p.size(); ++row) {
    auto vals = t.values_at(row);
    double prob = 1.0;
    for (int v = 0; v < sm.g.n && prob != 0.0; ++v) {
      auto it = do_vals.find(v);
      if (it != do_vals.end()) {
        if (vals[v] != it->second) prob = 0.0;
        continue;
      }
      std::size_t bits = 0;
      int s = 0;
      sm.g.pa[v].for_each([&](int w) {
        bits |= std::size_t{static_cast<std::size_t>(vals[w])} << s;
        ++s;
      });
      double p1 = sm.cpt[v][bits];
      prob *= vals[v] ? p1 : 1.0 - p1;
    }
    t.p[row] = prob;
  }
  return t;
}

joint_table observational_table(const structural_model& sm) {
  joint_table full = interventional_joint(sm, {});
  std::vector<std::string> keep;
  sm.observed_nodes().for_each([&](int v) { keep.push_back(sm.names[v]); });
  return marginal_table(full, keep);
}

}  // namespace ciq
