#include "ciq/closure.hpp"

#include <deque>
#include <unordered_map>

#include "ciq/membership.hpp"

namespace ciq {

std::vector<elem_triplet> expand_e(const std::vector<triplet>& M, const universe& u) {
  std::unordered_set<elem_triplet> out;
  for (const auto& t : M) {
    validate_or_throw(t, u);
    t.I.for_each([&](int i) {
      t.J.for_each([&](int j) {
        varset window = (t.I - varset::single(i)) | (t.J - varset::single(j));
        for_each_subset(window, [&](varset extra) {
          elem_triplet e{static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                         t.K | extra, t.C};
          out.insert(canonicalize(e));
        });
      });
    });
  }
  return {out.begin(), out.end()};
}

namespace {

// Partner index: triplets containing a given variable in an element slot,
// within one context stratum. Symmetric mode indexes both slots; directed
// mode keeps separate first-slot and second-slot lists so the two rule
// families pivot on the right position.
struct stratum_key {
  int var;
  context_assignment ctx;
  bool operator==(const stratum_key&) const = default;
};

struct stratum_hash {
  std::size_t operator()(const stratum_key& k) const {
    return k.ctx.hash() * 31 + static_cast<std::size_t>(k.var);
  }
};

struct engine {
  elementary_model& m;
  std::uint64_t budget;
  std::uint64_t steps = 0;
  std::deque<elem_triplet> work;
  // symmetric: single index keyed on either element; directed: index 0 keys
  // the first slot, index 1 the second
  std::unordered_map<stratum_key, std::vector<elem_triplet>, stratum_hash> index[2];

  explicit engine(elementary_model& model, const closure_options& opts)
      : m(model), budget(opts.max_steps) {}

  void push(const elem_triplet& t) {
    if (m.insert(t)) {
      const elem_triplet s = m.storage_form(t);
      work.push_back(s);
      if (m.symmetric) {
        index[0][{s.i, s.C}].push_back(s);
        index[0][{s.j, s.C}].push_back(s);
      } else {
        index[0][{s.i, s.C}].push_back(s);
        index[1][{s.j, s.C}].push_back(s);
      }
    }
  }

  // Apply the right-hand rule family to ordered views a=(p,qa,Ka), b=(p,qb,Kb)
  // sharing pivot p. Levels gate intersection and composition.
  void combine(int p, int qa, varset Ka, int qb, varset Kb, const context_assignment& ctx,
               bool left_family) {
    if (qa == qb) return;
    auto emit = [&](int x, int y, varset K) {
      elem_triplet t;
      if (left_family) {
        t = {static_cast<std::uint8_t>(y), static_cast<std::uint8_t>(x), K, ctx};
      } else {
        t = {static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y), K, ctx};
      }
      push(t);
    };
    // contraction / weak union:  p_qa|{qb}L + p_qb|L  =>  p_qb|{qa}L, p_qa|L
    if (Ka == (Kb | varset::single(qb)) && !Kb.test(qb)) {
      emit(p, qb, Kb | varset::single(qa));
      emit(p, qa, Kb);
    }
    if (m.level >= axiom_level::graphoid) {
      // intersection:  p_qa|{qb}L + p_qb|{qa}L  =>  p_qa|L, p_qb|L
      if (Ka.test(qb) && Kb.test(qa)) {
        varset L = Ka - varset::single(qb);
        if (L == (Kb - varset::single(qa))) {
          emit(p, qa, L);
          emit(p, qb, L);
        }
      }
    }
    if (m.level >= axiom_level::compositional) {
      // composition:  p_qa|L + p_qb|L  =>  p_qa|{qb}L, p_qb|{qa}L
      if (Ka == Kb) {
        emit(p, qa, Ka | varset::single(qb));
        emit(p, qb, Ka | varset::single(qa));
      }
    }
  }

  void process(const elem_triplet& t) {
    // ordered views of t: (pivot, other, K)
    struct view {
      int p, q;
    };
    if (m.symmetric) {
      for (view v : {view{t.i, t.j}, view{t.j, t.i}}) {
        auto it = index[0].find({v.p, t.C});
        if (it == index[0].end()) continue;
        // partners may grow while we emit; iterate by position
        auto& partners = it->second;
        for (std::size_t n = 0; n < partners.size(); ++n) {
          elem_triplet o = partners[n];
          for (view w : {view{o.i, o.j}, view{o.j, o.i}}) {
            if (w.p != v.p) continue;
            combine(v.p, v.q, t.K, w.q, o.K, t.C, false);
            combine(v.p, w.q, o.K, v.q, t.K, t.C, false);
          }
        }
      }
    } else {
      // right-hand family pivots on the first slot
      {
        auto it = index[0].find({t.i, t.C});
        if (it != index[0].end()) {
          auto& partners = it->second;
          for (std::size_t n = 0; n < partners.size(); ++n) {
            elem_triplet o = partners[n];
            combine(t.i, t.j, t.K, o.j, o.K, t.C, false);
            combine(t.i, o.j, o.K, t.j, t.K, t.C, false);
          }
        }
      }
      // left-hand (primed) family pivots on the second slot
      {
        auto it = index[1].find({t.j, t.C});
        if (it != index[1].end()) {
          auto& partners = it->second;
          for (std::size_t n = 0; n < partners.size(); ++n) {
            elem_triplet o = partners[n];
            combine(t.j, t.i, t.K, o.i, o.K, t.C, true);
            combine(t.j, o.i, o.K, t.i, t.K, t.C, true);
          }
        }
      }
    }
  }

  void run() {
    while (!work.empty()) {
      if (budget && ++steps > budget)
        throw error(errc::budget_exhausted, "closure exceeded its step budget");
      elem_triplet t = work.front();
      work.pop_front();
      process(t);
    }
  }
};

}  // namespace

void close_elementary(elementary_model& m, const closure_options& opts) {
  if (!m.u) throw error(errc::universe_mismatch, "model has no universe");
  engine eng(m, opts);
  // seed the worklist and index with the existing set
  std::vector<elem_triplet> seeds(m.set.begin(), m.set.end());
  m.set.clear();
  for (const auto& t : seeds) {
    if (auto e = validate(t, *m.u)) throw *e;
    eng.push(t);
  }
  eng.run();
  m.closed = true;
}

namespace {

struct triplet_hash {
  std::size_t operator()(const triplet& t) const { return t.hash(); }
};

struct full_engine {
  axiom_level level;
  std::unordered_set<triplet, triplet_hash> set;
  std::deque<triplet> work;
  std::unordered_map<context_assignment, std::vector<triplet>> strata;

  void push(const triplet& t) {
    if (set.insert(t).second) {
      work.push_back(t);
      strata[t.C].push_back(t);
    }
  }

  // ordered pair application; a and b share first argument
  void combine(const triplet& a, const triplet& b) {
    if (!(a.I == b.I)) return;
    // contraction:  I_J|KL + I_K|L  =>  I_JK|L  (with a=(I,J,K|L), b=(I,K,L))
    if (!a.J.intersects(b.J) && (b.J | b.K) == a.K && !b.J.intersects(b.K) &&
        b.K == (a.K - b.J)) {
      push({a.I, a.J | b.J, b.K, a.C});
    }
    if (level >= axiom_level::graphoid) {
      // intersection:  I_J|KL + I_K|JL  =>  I_J|L, I_K|L
      if (b.J.subset_of(a.K) && a.J.subset_of(b.K) && !a.J.intersects(b.J)) {
        varset L = a.K - b.J;
        if (L == (b.K - a.J)) {
          push({a.I, a.J, L, a.C});
          push({a.I, b.J, L, a.C});
        }
      }
    }
    if (level >= axiom_level::compositional) {
      // composition:  I_J|L + I_K|L  =>  I_JK|L
      if (a.K == b.K && !a.J.intersects(b.J) && !(a.J == b.J)) {
        push({a.I, a.J | b.J, a.K, a.C});
      }
    }
  }

  void process(const triplet& t) {
    // symmetry
    push(t.mirrored());
    // decomposition + weak union: I_JK|L => I_J|KL and I_K|L, all splits
    for_each_subset(t.J, [&](varset Jp) {
      if (Jp.empty() || Jp == t.J) return;
      varset Kp = t.J - Jp;
      push({t.I, Jp, t.K | Kp, t.C});
      push({t.I, Kp, t.K, t.C});
    });
    auto& peers = strata[t.C];
    for (std::size_t n = 0; n < peers.size(); ++n) {
      triplet o = peers[n];
      combine(t, o);
      combine(o, t);
    }
  }

  void run() {
    while (!work.empty()) {
      triplet t = work.front();
      work.pop_front();
      process(t);
    }
  }
};

}  // namespace

std::vector<triplet> close_triplets_oracle(const std::vector<triplet>& M, const universe& u,
                                           axiom_level level, int max_base_vars) {
  if (u.size() > max_base_vars)
    throw error(errc::universe_too_large,
                "full-triplet closure is exponential; universe exceeds the guard");
  full_engine eng;
  eng.level = level;
  for (const auto& t : M) {
    validate_or_throw(t, u);
    eng.push(t);
  }
  eng.run();
  std::vector<triplet> out(eng.set.begin(), eng.set.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<triplet> enumerate_model(const elementary_model& m) {
  if (!m.closed) throw error(errc::not_closed, "enumerate_model needs a closed model");
  if (m.u->size() > 12)
    throw error(errc::universe_too_large, "enumerate_model is exponential in |V|");
  // candidate contexts = the strata present in the model
  std::vector<context_assignment> strata;
  {
    std::unordered_set<context_assignment> seen;
    for (const auto& t : m.set)
      if (seen.insert(t.C).second) strata.push_back(t.C);
    std::sort(strata.begin(), strata.end());
  }
  std::vector<triplet> out;
  varset pool = m.u->all_vars();
  for (const auto& ctx : strata) {
    varset avail = pool - ctx.keys();
    // assign each available variable to I, J, K or out; I, J nonempty
    std::vector<int> vars;
    avail.for_each([&](int v) { vars.push_back(v); });
    int n = static_cast<int>(vars.size());
    std::vector<int> slot(n, 0);
    while (true) {
      varset I, J, K;
      for (int k = 0; k < n; ++k) {
        switch (slot[k]) {
          case 1: I.set(vars[k]); break;
          case 2: J.set(vars[k]); break;
          case 3: K.set(vars[k]); break;
          default: break;
        }
      }
      if (!I.empty() && !J.empty()) {
        triplet t{I, J, K, ctx};
        if (is_member(m, t)) out.push_back(t);
      }
      int k = 0;
      while (k < n && slot[k] == 3) slot[k++] = 0;
      if (k == n) break;
      ++slot[k];
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ciq
