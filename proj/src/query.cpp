#include "ciq/query.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace ciq {

bool is_member(const elementary_model& m, const triplet& t) {
  if (!m.closed) throw error(errc::not_closed, "membership needs a closed model");
  if (!m.u) throw error(errc::universe_mismatch, "model has no universe");
  validate_or_throw(t, *m.u);

  return member_by_reduction(m.level, t.I, t.J, t.K, [&](int i, int j, const varset& K) {
    return m.contains(
        {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j), K, t.C});
  });
}

bool is_member(const elementary_model& m, const varset& I, const varset& J, const varset& K,
               const context_assignment& C) {
  return is_member(m, triplet{I, J, K, C});
}

bool is_submodel(const elementary_model& m, const elementary_model& m2) {
  if (!m.closed || !m2.closed) throw error(errc::not_closed, "inclusion needs closed models");
  require_same_universe(m, m2);
  require_same_level(m, m2);
  for (const auto& e : m.set) {
    if (!m2.contains(e)) return false;
    if (m.symmetric && !m2.symmetric && !m2.contains(e.mirrored())) return false;
  }
  return true;
}

// --- dominant triplets ----------------------------------------------------

namespace {

struct dominant_search {
  const elementary_model& m;
  varset pool;  // all universe variables
  std::unordered_set<triplet> visited;
  std::unordered_set<triplet> maximal;

  explicit dominant_search(const elementary_model& model) : m(model), pool(model.u->all_vars()) {}

  void grow(const triplet& t) {
    if (!visited.insert(t).second) return;
    bool extended = false;
    varset candidates = pool - (t.I | t.J | t.K | t.C.keys());
    candidates.for_each([&](int v) {
      varset vs = varset::single(v);
      if (is_member(m, t.I | vs, t.J, t.K, t.C)) {
        extended = true;
        grow({t.I | vs, t.J, t.K, t.C});
      }
      if (is_member(m, t.I, t.J | vs, t.K, t.C)) {
        extended = true;
        grow({t.I, t.J | vs, t.K, t.C});
      }
    });
    if (!extended) maximal.insert(t);
  }

  // a maximal (I, J) pair is dominant unless some context variable can step
  // into an element set while staying a member
  bool context_minimal(const triplet& t) const {
    bool ok = true;
    t.K.for_each([&](int k) {
      if (!ok) return;
      varset ks = varset::single(k);
      if (is_member(m, t.I | ks, t.J, t.K - ks, t.C)) ok = false;
      else if (is_member(m, t.I, t.J | ks, t.K - ks, t.C)) ok = false;
    });
    return ok;
  }
};

}  // namespace

std::vector<triplet> dominant_triplets(const elementary_model& m, bool nonsymmetric_only) {
  if (!m.closed) throw error(errc::not_closed, "dominant enumeration needs a closed model");
  if (!m.u) throw error(errc::universe_mismatch, "model has no universe");

  dominant_search search(m);
  for (const auto& e : m.sorted()) {
    search.grow(e.as_triplet());
    if (m.symmetric) search.grow(e.as_triplet().mirrored());
  }

  std::vector<triplet> out;
  for (const auto& t : search.maximal) {
    if (!search.context_minimal(t)) continue;
    if (nonsymmetric_only && !(t.I < t.J)) continue;
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- grid DAG ---------------------------------------------------------------

std::size_t grid_dag::index_of(const elem_triplet& t) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), t,
                             [](const grid_node& n, const elem_triplet& x) { return n.t < x; });
  if (it == nodes.end() || !(it->t == t)) return npos;
  return static_cast<std::size_t>(it - nodes.begin());
}

bool grid_dag::has_edge(const elem_triplet& from, const elem_triplet& to, bool solid) const {
  std::size_t a = index_of(from), b = index_of(to);
  if (a == npos || b == npos) return false;
  for (const auto& e : edges)
    if (e.from == a && e.to == b && e.solid == solid) return true;
  return false;
}

grid_dag build_grid_dag(const elementary_model& m) {
  if (!m.closed) throw error(errc::not_closed, "the grid DAG needs a closed model");

  grid_dag g;
  for (const auto& e : m.set) {
    g.nodes.push_back({e, e.is_canonical()});
    if (m.symmetric) g.nodes.push_back({e.mirrored(), !e.is_canonical()});
  }
  std::sort(g.nodes.begin(), g.nodes.end(),
            [](const grid_node& a, const grid_node& b) { return a.t < b.t; });

  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    const elem_triplet& t = g.nodes[n].t;
    t.K.for_each([&](int k) {
      varset rest = t.K - varset::single(k);
      std::size_t solid = g.index_of({t.i, static_cast<std::uint8_t>(k), rest, t.C});
      if (solid != grid_dag::npos) g.edges.push_back({solid, n, true});
      std::size_t dashed = g.index_of({static_cast<std::uint8_t>(k), t.j, rest, t.C});
      if (dashed != grid_dag::npos) g.edges.push_back({dashed, n, false});
    });
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const grid_edge& a, const grid_edge& b) {
    if (a.to != b.to) return a.to < b.to;
    if (a.from != b.from) return a.from < b.from;
    return a.solid && !b.solid;
  });
  return g;
}

// --- maximal grids ----------------------------------------------------------

std::vector<elem_triplet> grid::nodes() const {
  std::vector<elem_triplet> out;
  varset accI;
  for (std::size_t s = 0; s < rows.size(); ++s) {
    varset acc = accI;
    for (std::size_t t = 0; t < cols.size(); ++t) {
      out.push_back({rows[s], cols[t], K | acc, C});
      acc.set(cols[t]);
    }
    accI.set(rows[s]);
  }
  return out;
}

namespace {

struct grid_search {
  const std::unordered_set<elem_triplet>& space;  // admissible nodes
  varset pool;
  std::unordered_set<std::string> visited;
  std::vector<grid> maximal;

  explicit grid_search(const std::unordered_set<elem_triplet>& nodes) : space(nodes) {
    for (const auto& t : nodes) {
      pool.set(t.i);
      pool.set(t.j);
      pool = pool | t.K;
    }
  }

  bool has(const elem_triplet& t) const { return space.count(t) != 0; }

  static std::string key(const grid& g) {
    std::string s;
    s.reserve(g.rows.size() + g.cols.size() + 40);
    for (auto [k, v] : g.C.kv) {
      s.push_back(static_cast<char>(k));
      s.push_back(static_cast<char>(v));
    }
    s.push_back('\x7f');
    for (int half = 0; half < 2; ++half)
      for (int b = 0; b < 8; ++b) s.push_back(static_cast<char>((g.K.w[half] >> (8 * b)) & 0xff));
    for (auto r : g.rows) s.push_back(static_cast<char>(r));
    s.push_back('\x7f');
    for (auto c : g.cols) s.push_back(static_cast<char>(c));
    return s;
  }

  varset used(const grid& g) const {
    varset s = g.K | g.C.keys();
    for (auto r : g.rows) s.set(r);
    for (auto c : g.cols) s.set(c);
    return s;
  }

  bool row_fits(const grid& g, int v) const {
    varset accI = g.K;
    for (auto r : g.rows) accI.set(r);
    varset acc = accI;
    for (auto c : g.cols) {
      if (!has({static_cast<std::uint8_t>(v), c, acc, g.C})) return false;
      acc.set(c);
    }
    return true;
  }

  bool col_fits(const grid& g, int v) const {
    varset accJ = g.K;
    for (auto c : g.cols) accJ.set(c);
    varset accI;
    for (auto r : g.rows) {
      if (!has({r, static_cast<std::uint8_t>(v), accJ | accI, g.C})) return false;
      accI.set(r);
    }
    return true;
  }

  void grow(const grid& g) {
    if (!visited.insert(key(g)).second) return;
    bool extended = false;
    varset candidates = pool - used(g);
    candidates.for_each([&](int v) {
      if (row_fits(g, v)) {
        extended = true;
        grid h = g;
        h.rows.push_back(static_cast<std::uint8_t>(v));
        grow(h);
      }
      if (col_fits(g, v)) {
        extended = true;
        grid h = g;
        h.cols.push_back(static_cast<std::uint8_t>(v));
        grow(h);
      }
    });
    if (!extended) maximal.push_back(g);
  }
};

bool grid_less(const grid& a, const grid& b) {
  if (!(a.C == b.C)) return a.C < b.C;
  if (!(a.K == b.K)) return a.K < b.K;
  if (a.rows != b.rows) return a.rows < b.rows;
  return a.cols < b.cols;
}

std::vector<grid> maximal_grids_over(std::unordered_set<elem_triplet> space, bool canonical_half) {
  if (canonical_half)
    std::erase_if(space, [](const elem_triplet& t) { return !(t.i < t.j); });

  grid_search search(space);
  for (const auto& n : space) search.grow({{n.i}, {n.j}, n.K, n.C});

  // keep only grids whose node set is not strictly inside another's
  struct entry {
    grid g;
    std::unordered_set<elem_triplet> nodes;
  };
  std::vector<entry> entries;
  std::unordered_set<std::string> seen;
  for (auto& g : search.maximal) {
    std::string k = grid_search::key(g);
    if (!seen.insert(std::move(k)).second) continue;
    auto nodes = g.nodes();
    entries.push_back({std::move(g), {nodes.begin(), nodes.end()}});
  }

  auto contained = [](const entry& a, const entry& b) {  // a's nodes strictly inside b's
    if (a.nodes.size() >= b.nodes.size()) return false;
    for (const auto& n : a.nodes)
      if (!b.nodes.count(n)) return false;
    return true;
  };

  std::vector<grid> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < entries.size() && !dominated; ++j)
      if (i != j && contained(entries[i], entries[j])) dominated = true;
    if (!dominated) out.push_back(entries[i].g);
  }
  std::sort(out.begin(), out.end(), grid_less);
  return out;
}

}  // namespace

std::vector<grid> maximal_grids(const elementary_model& m, bool canonical_half) {
  if (!m.closed) throw error(errc::not_closed, "grid enumeration needs a closed model");
  if (!m.u) throw error(errc::universe_mismatch, "model has no universe");

  std::unordered_set<elem_triplet> space;
  for (const auto& e : m.set) {
    space.insert(e);
    if (m.symmetric) space.insert(e.mirrored());
  }
  return maximal_grids_over(std::move(space), canonical_half);
}

std::vector<grid> maximal_grids(const grid_dag& g, bool canonical_half) {
  std::unordered_set<elem_triplet> space;
  for (const auto& n : g.nodes) space.insert(n.t);
  return maximal_grids_over(std::move(space), canonical_half);
}

}  // namespace ciq
