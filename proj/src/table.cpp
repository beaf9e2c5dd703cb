#include "ciq/table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "ciq/closure.hpp"
#include "ciq/graph.hpp"
#include "ciq/membership.hpp"
#include "ciq/query.hpp"

namespace ciq {

int joint_table::var_index(const std::string& name) const {
  for (std::size_t c = 0; c < vars.size(); ++c)
    if (vars[c] == name) return static_cast<int>(c);
  return -1;
}

std::size_t joint_table::index_of(const std::vector<int>& vals) const {
  std::size_t idx = 0;
  for (std::size_t c = 0; c < vars.size(); ++c) idx = idx * domains[c].size() + vals[c];
  return idx;
}

std::vector<int> joint_table::values_at(std::size_t row) const {
  std::vector<int> vals(vars.size());
  for (std::size_t c = vars.size(); c-- > 0;) {
    vals[c] = static_cast<int>(row % domains[c].size());
    row /= domains[c].size();
  }
  return vals;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    auto b = f.find_first_not_of(" \t");
    auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
  }
  return out;
}

[[noreturn]] void fail_line(std::size_t lineno, const std::string& what) {
  throw error(errc::syntax_error, "line " + std::to_string(lineno) + ": " + what);
}

}  // namespace

joint_table load_table(std::istream& in, double eps) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split_csv(line);
    break;
  }
  if (header.size() < 2 || header.back() != "p")
    fail_line(lineno, "expected a header of variable names ending in p");
  joint_table t;
  t.vars.assign(header.begin(), header.end() - 1);
  for (std::size_t c = 0; c < t.vars.size(); ++c) {
    if (t.vars[c].empty()) fail_line(lineno, "empty variable name");
    for (std::size_t c2 = c + 1; c2 < t.vars.size(); ++c2)
      if (t.vars[c] == t.vars[c2]) fail_line(lineno, "duplicate column " + t.vars[c]);
  }

  std::vector<std::vector<std::string>> cells;  // one entry per data row, vars then p
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv(line);
    if (fields.size() != header.size())
      fail_line(lineno, "expected " + std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    for (std::size_t c = 0; c + 1 < fields.size(); ++c)
      if (fields[c].empty()) fail_line(lineno, "empty value");
    cells.push_back(std::move(fields));
    cells.back().push_back(std::to_string(lineno));  // remember provenance for errors
  }
  if (cells.empty()) fail_line(lineno, "table has no rows");

  t.domains.assign(t.vars.size(), {});
  for (std::size_t c = 0; c < t.vars.size(); ++c) {
    std::set<std::string> values;
    for (const auto& row : cells) values.insert(row[c]);
    t.domains[c].assign(values.begin(), values.end());
    if (t.domains[c].size() < 2)
      throw error(errc::incomplete_domain,
                  "variable " + t.vars[c] + " takes a single value in the table");
  }

  std::size_t total = 1;
  for (const auto& d : t.domains) total *= d.size();
  t.p.assign(total, 0.0);
  std::vector<bool> seen(total, false);
  for (const auto& row : cells) {
    std::vector<int> vals(t.vars.size());
    for (std::size_t c = 0; c < t.vars.size(); ++c) {
      const auto& d = t.domains[c];
      vals[c] = static_cast<int>(std::lower_bound(d.begin(), d.end(), row[c]) - d.begin());
    }
    std::size_t idx = t.index_of(vals);
    std::size_t rowline = std::stoull(row.back());
    if (seen[idx]) {
      std::string key;
      for (std::size_t c = 0; c < t.vars.size(); ++c)
        key += (c ? "," : "") + row[c];
      throw error(errc::duplicate_row,
                  "line " + std::to_string(rowline) + ": assignment " + key + " repeats");
    }
    seen[idx] = true;
    double mass = 0.0;
    try {
      std::size_t used = 0;
      mass = std::stod(row[t.vars.size()], &used);
      if (used != row[t.vars.size()].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail_line(rowline, "bad probability " + row[t.vars.size()]);
    }
    if (mass < 0.0 || !std::isfinite(mass))
      throw error(errc::not_normalized, "line " + std::to_string(rowline) +
                                            ": probability " + row[t.vars.size()]);
    t.p[idx] = mass;
  }
  if (cells.size() != total)
    throw error(errc::incomplete_domain,
                std::to_string(total - cells.size()) + " assignments missing from the table");
  double sum = 0.0;
  for (double v : t.p) sum += v;
  if (std::abs(sum - 1.0) > eps)
    throw error(errc::not_normalized, "masses sum to " + std::to_string(sum));
  return t;
}

joint_table load_table_file(const std::string& path, double eps) {
  std::ifstream in(path);
  if (!in) throw error(errc::io_failure, "cannot open " + path);
  return load_table(in, eps);
}

std::string save_table(const joint_table& t) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& v : t.vars) out << v << ',';
  out << "p\n";
  for (std::size_t row = 0; row < t.p.size(); ++row) {
    auto vals = t.values_at(row);
    for (std::size_t c = 0; c < t.vars.size(); ++c) out << t.domains[c][vals[c]] << ',';
    out << t.p[row] << '\n';
  }
  return out.str();
}

double marginal_mass(const joint_table& t, const std::vector<int>& match) {
  double sum = 0.0;
  for (std::size_t row = 0; row < t.p.size(); ++row) {
    if (t.p[row] == 0.0) continue;
    auto vals = t.values_at(row);
    bool ok = true;
    for (std::size_t c = 0; c < vals.size(); ++c)
      if (match[c] >= 0 && vals[c] != match[c]) {
        ok = false;
        break;
      }
    if (ok) sum += t.p[row];
  }
  return sum;
}

joint_table marginal_table(const joint_table& t, const std::vector<std::string>& keep) {
  joint_table out;
  std::vector<int> cols;
  for (const auto& name : keep) {
    int c = t.var_index(name);
    if (c < 0) throw error(errc::missing_variable, "table lacks variable " + name);
    for (int seen : cols)
      if (seen == c) throw error(errc::invalid_sets, "variable " + name + " repeats");
    cols.push_back(c);
    out.vars.push_back(name);
    out.domains.push_back(t.domains[c]);
  }
  std::size_t total = 1;
  for (const auto& d : out.domains) total *= d.size();
  out.p.assign(total, 0.0);
  std::vector<int> kept(cols.size());
  for (std::size_t row = 0; row < t.p.size(); ++row) {
    if (t.p[row] == 0.0) continue;
    auto vals = t.values_at(row);
    for (std::size_t s = 0; s < cols.size(); ++s) kept[s] = vals[cols[s]];
    out.p[out.index_of(kept)] += t.p[row];
  }
  return out;
}

namespace {

// Column index per universe variable, demanding an exact two-way match
// between table columns and universe variables (including context domains).
std::vector<int> match_columns(const joint_table& t, const universe& u) {
  if (t.vars.size() != static_cast<std::size_t>(u.size()))
    throw error(errc::table_mismatch, "table has " + std::to_string(t.vars.size()) +
                                          " variables, universe has " +
                                          std::to_string(u.size()));
  std::vector<int> col(u.size());
  for (int v = 0; v < u.size(); ++v) {
    int c = t.var_index(u.names[v]);
    if (c < 0) throw error(errc::table_mismatch, "table lacks variable " + u.names[v]);
    col[v] = c;
    if (u.is_context(v)) {
      const auto& dom = u.domains[v];
      if (std::set<std::string>(dom.begin(), dom.end()) !=
          std::set<std::string>(t.domains[c].begin(), t.domains[c].end()))
        throw error(errc::table_mismatch, "domain of " + u.names[v] + " differs");
    }
  }
  return col;
}

// Measures independence of (i, j | K) on the slice selected by `fixed`
// (value index per column, -1 free). Configurations of K with zero mass are
// vacuously fine.
bool slice_independent(const joint_table& t, std::vector<int> fixed, int ci, int cj,
                       const std::vector<int>& ck, double eps) {
  std::vector<int> kvals(ck.size(), 0);
  for (;;) {
    for (std::size_t s = 0; s < ck.size(); ++s) fixed[ck[s]] = kvals[s];
    fixed[ci] = fixed[cj] = -1;
    double pk = marginal_mass(t, fixed);
    if (pk > 0.0) {
      for (std::size_t vi = 0; vi < t.domains[ci].size(); ++vi)
        for (std::size_t vj = 0; vj < t.domains[cj].size(); ++vj) {
          fixed[ci] = static_cast<int>(vi);
          fixed[cj] = static_cast<int>(vj);
          double pij = marginal_mass(t, fixed) / pk;
          fixed[cj] = -1;
          double pi = marginal_mass(t, fixed) / pk;
          fixed[ci] = -1;
          fixed[cj] = static_cast<int>(vj);
          double pj = marginal_mass(t, fixed) / pk;
          fixed[cj] = -1;
          if (std::abs(pij - pi * pj) > eps) return false;
        }
    }
    // advance the K configuration
    std::size_t s = ck.size();
    while (s > 0) {
      --s;
      if (++kvals[s] < static_cast<int>(t.domains[ck[s]].size())) break;
      kvals[s] = 0;
      if (s == 0) return true;
    }
    if (ck.empty()) return true;
  }
}

}  // namespace

elementary_model extract_model_from_table(const joint_table& t,
                                          std::shared_ptr<const universe> u, axiom_level level,
                                          double eps, bool propagate) {
  if (!u) throw error(errc::invalid_sets, "extract_model_from_table: null universe");
  auto col = match_columns(t, *u);
  if (level != axiom_level::semigraphoid)
    for (double v : t.p)
      if (v <= 0.0)
        throw error(errc::not_positive,
                    "the requested level assumes a strictly positive table");

  varset base = u->base_vars();
  std::vector<int> ctx;
  for (int v = 0; v < u->size(); ++v)
    if (u->is_context(v)) ctx.push_back(v);

  // All context assignments, in sorted order.
  std::vector<context_assignment> strata{context_assignment{}};
  for (int v : ctx) {
    std::vector<context_assignment> next;
    for (const auto& c : strata)
      for (std::size_t val = 0; val < u->domains[v].size(); ++val) {
        auto c2 = c;
        c2.bind(v, static_cast<int>(val));
        next.push_back(std::move(c2));
      }
    strata = std::move(next);
  }
  std::sort(strata.begin(), strata.end());

  elementary_model out(u, level);
  out.closed = true;  // vacuously, while empty; re-established after every insert
  std::vector<int> ck;
  for (const auto& c : strata) {
    std::vector<int> fixed(t.vars.size(), -1);
    for (int v : ctx) fixed[col[v]] = c.value_of(v);
    std::vector<int> pool;
    base.for_each([&](int v) { pool.push_back(v); });
    for (std::size_t a = 0; a < pool.size(); ++a)
      for (std::size_t b = a + 1; b < pool.size(); ++b) {
        int i = pool[a], j = pool[b];
        varset rest = base;
        rest.reset(i);
        rest.reset(j);
        for_each_subset_ordered(rest, [&](const varset& K) {
          elem_triplet et{static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j), K, c};
          if (propagate && is_member(out, {varset::single(i), varset::single(j), K, c})) return;
          ck.clear();
          K.for_each([&](int v) { ck.push_back(col[v]); });
          if (slice_independent(t, fixed, col[i], col[j], ck, eps)) {
            out.closed = false;
            out.insert(et);
            if (propagate) close_elementary(out);
          }
        });
      }
  }
  if (!out.closed) close_elementary(out);
  out.closed = true;
  return out;
}

elementary_model extract_model_from_table(const joint_table& t, axiom_level level, double eps,
                                          bool propagate) {
  auto u = std::make_shared<universe>();
  for (const auto& name : t.vars) u->add_base(name);
  return extract_model_from_table(t, std::move(u), level, eps, propagate);
}

bool verify_factorization(const dag& g, const joint_table& t, double eps) {
  if (static_cast<std::size_t>(g.n) != t.vars.size())
    throw error(errc::table_mismatch, "graph has " + std::to_string(g.n) +
                                          " nodes, table has " +
                                          std::to_string(t.vars.size()) + " variables");
  if (!g.acyclic()) throw error(errc::invalid_sets, "graph has a cycle");

  // Per node: conditional masses p(v, pa) and p(pa), accumulated in one pass.
  std::vector<std::vector<int>> fam(g.n);  // v then parents, ascending
  std::vector<std::vector<double>> fam_mass(g.n), pa_mass(g.n);
  for (int v = 0; v < g.n; ++v) {
    fam[v].push_back(v);
    g.pa[v].for_each([&](int w) { fam[v].push_back(w); });
    std::size_t fam_size = 1, pa_size = 1;
    for (std::size_t s = 0; s < fam[v].size(); ++s) {
      fam_size *= t.domains[fam[v][s]].size();
      if (s > 0) pa_size *= t.domains[fam[v][s]].size();
    }
    fam_mass[v].assign(fam_size, 0.0);
    pa_mass[v].assign(pa_size, 0.0);
  }
  for (std::size_t row = 0; row < t.p.size(); ++row) {
    if (t.p[row] == 0.0) continue;
    auto vals = t.values_at(row);
    for (int v = 0; v < g.n; ++v) {
      std::size_t fkey = 0, pkey = 0;
      for (std::size_t s = 0; s < fam[v].size(); ++s) {
        fkey = fkey * t.domains[fam[v][s]].size() + vals[fam[v][s]];
        if (s > 0) pkey = pkey * t.domains[fam[v][s]].size() + vals[fam[v][s]];
      }
      fam_mass[v][fkey] += t.p[row];
      pa_mass[v][pkey] += t.p[row];
    }
  }
  for (std::size_t row = 0; row < t.p.size(); ++row) {
    auto vals = t.values_at(row);
    double prod = 1.0;
    for (int v = 0; v < g.n; ++v) {
      std::size_t fkey = 0, pkey = 0;
      for (std::size_t s = 0; s < fam[v].size(); ++s) {
        fkey = fkey * t.domains[fam[v][s]].size() + vals[fam[v][s]];
        if (s > 0) pkey = pkey * t.domains[fam[v][s]].size() + vals[fam[v][s]];
      }
      prod *= pa_mass[v][pkey] > 0.0 ? fam_mass[v][fkey] / pa_mass[v][pkey] : 0.0;
    }
    if (std::abs(t.p[row] - prod) > eps) return false;
  }
  return true;
}

}  // namespace ciq
