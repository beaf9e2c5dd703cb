#include "ciq/graph.hpp"

#include <unordered_map>
#include <unordered_set>

#include "ciq/closure.hpp"

namespace ciq {

void dag::add_edge(int from, int to) {
  if (from < 0 || from >= n || to < 0 || to >= n)
    throw error(errc::index_out_of_range, "edge endpoint outside the graph");
  if (from == to) throw error(errc::invalid_sets, "self edges are not allowed");
  pa[to].set(from);
  ch[from].set(to);
}

std::size_t dag::edge_count() const {
  std::size_t c = 0;
  for (const auto& p : pa) c += p.count();
  return c;
}

varset dag::ancestors(const varset& s) const {
  varset out = s, work = s;
  while (!work.empty()) {
    int v = work.lowest();
    work.reset(v);
    varset fresh = pa[v] - out;
    out = out | fresh;
    work = work | fresh;
  }
  return out;
}

varset dag::descendants(const varset& s) const {
  varset out = s, work = s;
  while (!work.empty()) {
    int v = work.lowest();
    work.reset(v);
    varset fresh = ch[v] - out;
    out = out | fresh;
    work = work | fresh;
  }
  return out;
}

bool dag::acyclic() const {
  std::vector<int> indeg(n);
  std::vector<int> ready;
  for (int v = 0; v < n; ++v) {
    indeg[v] = static_cast<int>(pa[v].count());
    if (indeg[v] == 0) ready.push_back(v);
  }
  int seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    ch[v].for_each([&](int c) {
      if (--indeg[c] == 0) ready.push_back(c);
    });
  }
  return seen == n;
}

std::vector<int> dag::topological_order() const {
  std::vector<int> indeg(n), out;
  varset ready;
  for (int v = 0; v < n; ++v) {
    indeg[v] = static_cast<int>(pa[v].count());
    if (indeg[v] == 0) ready.set(v);
  }
  while (!ready.empty()) {
    int v = ready.lowest();  // smallest-index-first for a deterministic order
    ready.reset(v);
    out.push_back(v);
    ch[v].for_each([&](int c) {
      if (--indeg[c] == 0) ready.set(c);
    });
  }
  if (static_cast<int>(out.size()) != n)
    throw error(errc::invalid_sets, "graph has a cycle");
  return out;
}

bool d_separated(const dag& g, const varset& I, const varset& J, const varset& K) {
  if (I.intersects(J)) return false;
  varset anc = g.ancestors(K);

  // reachability over active trails; a state is (node, arrived-from-parent?)
  varset seen_up, seen_down;
  std::vector<std::pair<int, bool>> work;  // bool: true = "up" (from a child, or a source)
  I.for_each([&](int a) {
    seen_up.set(a);
    work.push_back({a, true});
  });
  while (!work.empty()) {
    auto [v, up] = work.back();
    work.pop_back();
    if (J.test(v)) return false;
    bool in_k = K.test(v);
    auto push_up = [&](int p) {
      if (!seen_up.test(p)) {
        seen_up.set(p);
        work.push_back({p, true});
      }
    };
    auto push_down = [&](int c) {
      if (!seen_down.test(c)) {
        seen_down.set(c);
        work.push_back({c, false});
      }
    };
    if (up && !in_k) {
      g.pa[v].for_each(push_up);
      g.ch[v].for_each(push_down);
    } else if (!up) {
      if (!in_k) g.ch[v].for_each(push_down);
      if (anc.test(v)) g.pa[v].for_each(push_up);  // collider with conditioned descendant
    }
  }
  return true;
}

namespace {

void require_base_universe(const universe& u) {
  if (static_cast<int>(u.base_vars().count()) != u.size())
    throw error(errc::invalid_sets, "graph operations need a context-free universe");
}

}  // namespace

elementary_model induced_elementary_model(const dag& g, std::shared_ptr<const universe> u,
                                          axiom_level level) {
  if (!u) throw error(errc::universe_mismatch, "no universe given");
  require_base_universe(*u);
  if (u->size() != g.n)
    throw error(errc::universe_mismatch, "universe and graph disagree on the variables");
  if (g.n > 16) throw error(errc::universe_too_large, "separation model enumeration capped at 16");
  if (!g.acyclic()) throw error(errc::invalid_sets, "graph has a cycle");

  elementary_model m(u, level, true);
  m.closed = true;
  varset all = u->all_vars();
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) {
      varset rest = all - varset::single(i) - varset::single(j);
      for_each_subset(rest, [&](const varset& K) {
        if (d_separated(g, varset::single(i), varset::single(j), K))
          m.insert({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j), K, {}});
      });
    }
  return m;
}

std::vector<varset> all_pa(const elementary_model& m, int i, const varset& X) {
  if (!m.closed) throw error(errc::not_closed, "parent-set search needs a closed model");
  varset vi = varset::single(i);
  std::vector<varset> hits;  // S with i _||_ S | X-S
  for_each_subset(X, [&](const varset& S) {
    if (!S.empty() && is_member(m, vi, S, X - S)) hits.push_back(S);
  });
  std::vector<varset> out;
  for (const auto& S : hits) {
    bool maximal = true;
    for (const auto& T : hits)
      if (!(S == T) && S.subset_of(T)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(X - S);
  }
  if (out.empty()) out.push_back(X);
  std::sort(out.begin(), out.end(), [](const varset& a, const varset& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a < b;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

dag build_mim(const elementary_model& m, const std::vector<int>& order) {
  if (!m.closed) throw error(errc::not_closed, "map construction needs a closed model");
  if (!m.u) throw error(errc::universe_mismatch, "model has no universe");
  require_base_universe(*m.u);
  int n = m.u->size();
  varset seen;
  if (static_cast<int>(order.size()) != n)
    throw error(errc::invalid_sets, "ordering must cover every variable once");
  for (int v : order) {
    if (v < 0 || v >= n || seen.test(v))
      throw error(errc::invalid_sets, "ordering must cover every variable once");
    seen.set(v);
  }

  dag g(n);
  varset before;
  for (int v : order) {
    varset parents = all_pa(m, v, before).front();
    parents.for_each([&](int p) { g.add_edge(p, v); });
    before.set(v);
  }
  return g;
}

// --- perfect-map search -------------------------------------------------------

namespace {

struct pm_search {
  const elementary_model& m;
  varset all;
  int n;
  std::unordered_set<std::uint64_t> failed;           // (visited, marked) states
  std::unordered_map<std::uint64_t, bool> leaf_memo;  // marked-set hash -> verdict
  std::vector<int> ordering;
  std::vector<varset> parents;

  explicit pm_search(const elementary_model& model)
      : m(model), all(model.u->all_vars()), n(model.u->size()) {}

  static std::uint64_t state_key(const varset& visited, std::uint64_t mhash) {
    return (visited.hash() * 0x9e3779b97f4a7c15ull) ^ mhash;
  }

  bool leaf(const std::unordered_set<elem_triplet>& marked, std::uint64_t mhash) {
    auto it = leaf_memo.find(mhash);
    if (it != leaf_memo.end()) return it->second;
    elementary_model probe(m.u, axiom_level::semigraphoid, true);
    probe.set = marked;
    close_elementary(probe);
    bool eq = probe.set == m.set;
    leaf_memo.emplace(mhash, eq);
    return eq;
  }

  bool run(varset visited, std::unordered_set<elem_triplet>& marked, std::uint64_t mhash) {
    if (visited == all) return leaf(marked, mhash);
    std::uint64_t key = state_key(visited, mhash);
    if (failed.count(key)) return false;

    for (int i = 0; i < n; ++i) {
      if (visited.test(i)) continue;
      for (const varset& pa : all_pa(m, i, visited)) {
        varset rest = visited - pa;
        auto marked2 = marked;
        std::uint64_t mhash2 = mhash;
        if (!rest.empty()) {
          // the statement this parent choice represents, spread elementary
          for (const auto& et : expand_e({{varset::single(i), rest, pa, {}}}, *m.u)) {
            if (marked2.insert(et).second) mhash2 += et.hash() * 0xff51afd7ed558ccdull;
          }
        }
        ordering.push_back(i);
        parents.push_back(pa);
        if (run(visited | varset::single(i), marked2, mhash2)) return true;
        ordering.pop_back();
        parents.pop_back();
      }
    }
    failed.insert(key);
    return false;
  }
};

}  // namespace

std::optional<perfect_map> has_perfect_map(const elementary_model& m, int max_nodes) {
  if (!m.closed) throw error(errc::not_closed, "map search needs a closed model");
  if (!m.u) throw error(errc::universe_mismatch, "model has no universe");
  require_base_universe(*m.u);
  if (max_nodes > 0 && m.u->size() > max_nodes)
    throw error(errc::universe_too_large, "map search refused above the node limit");

  pm_search search(m);
  std::unordered_set<elem_triplet> marked;
  if (!search.run({}, marked, 0)) return std::nullopt;

  perfect_map out;
  out.ordering = search.ordering;
  out.g = dag(search.n);
  for (std::size_t s = 0; s < search.ordering.size(); ++s)
    search.parents[s].for_each([&](int p) { out.g.add_edge(p, search.ordering[s]); });
  return out;
}

}  // namespace ciq
