#include "ciq/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "ciq/closure.hpp"

namespace ciq {

namespace {

std::string join_names(const universe& u, const varset& s) {
  std::string out;
  s.for_each([&](int v) {
    if (!out.empty()) out += ' ';
    out += u.names[v];
  });
  return out;
}

std::string context_suffix(const context_assignment& c, const universe& u) {
  if (c.empty()) return {};
  std::string out = " @";
  for (auto [v, val] : c.kv) out += ' ' + u.names[v] + '=' + u.domains[v][val];
  return out;
}

}  // namespace

std::string to_text(const triplet& t, const universe& u) {
  std::string out = join_names(u, t.I) + " ; " + join_names(u, t.J);
  if (!t.K.empty()) out += " | " + join_names(u, t.K);
  return out + context_suffix(t.C, u);
}

std::string to_text(const elem_triplet& t, const universe& u) {
  return to_text(t.as_triplet(), u);
}

namespace {

[[noreturn]] void fail_line(std::size_t lineno, errc code, const std::string& what) {
  throw error(code, "line " + std::to_string(lineno) + ": " + what);
}

std::string strip(const std::string& line) {
  std::string s = line.substr(0, line.find('#'));
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens_of(const std::string& s) {
  // ';', '|' and '@' separate even without spaces around them
  std::string spaced;
  for (char c : s) {
    if (c == ';' || c == '|' || c == '@') {
      spaced += ' ';
      spaced += c;
      spaced += ' ';
    } else {
      spaced += c;
    }
  }
  std::istringstream in(spaced);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int lookup(const universe& u, const std::string& name) {
  int v = u.find(name);
  if (v < 0) throw error(errc::unknown_variable, "unknown variable " + name);
  return v;
}

}  // namespace

triplet parse_statement_text(const std::string& body, const universe& u) {
  auto toks = tokens_of(body);
  triplet t;
  std::size_t p = 0;
  int part = 0;  // 0 = I, 1 = J, 2 = K
  for (; p < toks.size() && toks[p] != "@"; ++p) {
    if (toks[p] == ";") {
      if (part != 0) throw error(errc::syntax_error, "unexpected ';'");
      part = 1;
      continue;
    }
    if (toks[p] == "|") {
      if (part != 1) throw error(errc::syntax_error, "unexpected '|'");
      part = 2;
      continue;
    }
    int v = lookup(u, toks[p]);
    (part == 0 ? t.I : part == 1 ? t.J : t.K).set(v);
  }
  if (part == 0) throw error(errc::syntax_error, "expected ';' between the two sets");
  for (++p; p < toks.size(); ++p) {
    auto eq = toks[p].find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == toks[p].size())
      throw error(errc::syntax_error, "expected name=value after '@'");
    int v = lookup(u, toks[p].substr(0, eq));
    std::string value = toks[p].substr(eq + 1);
    if (!u.is_context(v))
      throw error(errc::invalid_triplet, u.names[v] + " is not a context variable");
    int val = u.domain_value(v, value);
    if (val < 0)
      throw error(errc::unknown_variable,
                  "value " + value + " is not in the domain of " + u.names[v]);
    t.C.bind(v, val);
  }
  return t;
}

elementary_model load_model(std::istream& in) {
  auto u = std::make_shared<universe>();
  axiom_level level = axiom_level::semigraphoid;
  bool symmetric = true, closed = false, saw_axioms = false;
  std::vector<std::pair<triplet, bool>> statements;  // (statement, is_elementary)
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty()) continue;
    auto colon = s.find(':');
    std::string key = colon == std::string::npos ? s : s.substr(0, colon);
    std::string rest = colon == std::string::npos ? std::string{} : strip(s.substr(colon + 1));
    try {
      if (key == "vars") {
        std::istringstream names(rest);
        std::string n;
        while (names >> n) u->add_base(n);
      } else if (key == "context-var") {
        std::istringstream names(rest);
        std::string n;
        std::vector<std::string> toks;
        while (names >> n) toks.push_back(n);
        if (toks.size() < 3)
          fail_line(lineno, errc::syntax_error, "context-var needs a name and two values");
        u->add_context(toks.front(), {toks.begin() + 1, toks.end()});
      } else if (key == "axioms") {
        auto l = axiom_level_from_name(rest);
        if (!l) fail_line(lineno, errc::syntax_error, "unknown axiom level " + rest);
        level = *l;
        saw_axioms = true;
      } else if (key == "symmetric" || key == "closed") {
        bool value;
        if (rest == "true" || rest == "yes")
          value = true;
        else if (rest == "false" || rest == "no")
          value = false;
        else
          fail_line(lineno, errc::syntax_error, key + " must be true or false");
        (key == "symmetric" ? symmetric : closed) = value;
      } else if (key == "elem" || key == "triplet") {
        triplet t = parse_statement_text(rest, *u);
        if (key == "elem" && (t.I.count() != 1 || t.J.count() != 1))
          fail_line(lineno, errc::invalid_triplet, "elem lines take single variables");
        if (auto e = validate(t, *u)) fail_line(lineno, e->code, e->what());
        statements.emplace_back(std::move(t), key == "elem");
      } else {
        fail_line(lineno, errc::syntax_error, "unknown line kind '" + key + "'");
      }
    } catch (const error& e) {
      if (std::string(e.what()).find("line ") != std::string::npos) throw;
      fail_line(lineno, e.code, e.what());
    }
  }
  (void)saw_axioms;
  elementary_model m(u, level, symmetric);
  std::vector<triplet> full;
  for (auto& [t, is_elem] : statements) {
    if (is_elem)
      m.insert({static_cast<std::uint8_t>(t.I.lowest()), static_cast<std::uint8_t>(t.J.lowest()),
                t.K, t.C});
    else
      full.push_back(t);
  }
  if (!full.empty())
    for (const auto& et : expand_e(full, *u)) m.insert(et);
  m.closed = closed;
  return m;
}

elementary_model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io_failure, "cannot open " + path);
  return load_model(in);
}

namespace {

void check_name_token(const std::string& name) {
  if (name.empty()) throw error(errc::invalid_sets, "empty variable name");
  for (char c : name)
    if (c == ' ' || c == '\t' || c == ';' || c == '|' || c == '@' || c == '=' || c == ':' ||
        c == '#' || c == ',' || c == '>' || c == '\n' || c == '\r')
      throw error(errc::invalid_sets, "variable name '" + name + "' cannot be serialized");
}

}  // namespace

std::string serialize_model(const elementary_model& m) {
  if (!m.u) throw error(errc::invalid_sets, "model has no universe");
  const universe& u = *m.u;
  for (const auto& n : u.names) check_name_token(n);
  for (const auto& d : u.domains)
    for (const auto& v : d) check_name_token(v);
  std::string out;
  int v = 0;
  while (v < u.size()) {
    if (u.is_context(v)) {
      out += "context-var: " + u.names[v];
      for (const auto& val : u.domains[v]) out += ' ' + val;
      out += '\n';
      ++v;
    } else {
      out += "vars:";
      for (; v < u.size() && !u.is_context(v); ++v) out += ' ' + u.names[v];
      out += '\n';
    }
  }
  out += std::string("axioms: ") + axiom_level_name(m.level) + '\n';
  if (!m.symmetric) out += "symmetric: false\n";
  if (m.closed) out += "closed: true\n";
  for (const auto& t : m.sorted()) out += "elem: " + to_text(t, u) + '\n';
  return out;
}

// --------------------------------------------------------------- graphs

std::shared_ptr<universe> named_dag::to_universe() const {
  auto u = std::make_shared<universe>();
  for (const auto& n : names) u->add_base(n);
  return u;
}

named_dag load_dag(std::istream& in) {
  named_dag d;
  std::string line;
  std::size_t lineno = 0;
  bool edges_started = false;
  auto index_of = [&](const std::string& name, std::size_t at) {
    for (std::size_t v = 0; v < d.names.size(); ++v)
      if (d.names[v] == name) return static_cast<int>(v);
    fail_line(at, errc::unknown_variable, "unknown node " + name);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty()) continue;
    if (s.rfind("nodes:", 0) == 0) {
      if (edges_started)
        fail_line(lineno, errc::syntax_error, "declare all nodes before the first edge");
      std::istringstream names(s.substr(6));
      std::string n;
      while (names >> n) {
        for (const auto& seen : d.names)
          if (seen == n) fail_line(lineno, errc::syntax_error, "duplicate node " + n);
        d.names.push_back(n);
      }
      continue;
    }
    if (s.rfind("latent:", 0) == 0) {
      std::istringstream names(s.substr(7));
      std::string n;
      while (names >> n) d.latent.set(index_of(n, lineno));
      continue;
    }
    auto arrow = s.find("->");
    if (arrow == std::string::npos)
      fail_line(lineno, errc::syntax_error, "expected nodes:, latent:, or an a -> b edge");
    std::string from = strip(s.substr(0, arrow)), to = strip(s.substr(arrow + 2));
    if (from.empty() || to.empty() || from.find(' ') != std::string::npos ||
        to.find(' ') != std::string::npos)
      fail_line(lineno, errc::syntax_error, "expected exactly one node on each side of ->");
    if (!edges_started) {
      d.g = dag(static_cast<int>(d.names.size()));
      edges_started = true;
    }
    int a = index_of(from, lineno), b = index_of(to, lineno);
    try {
      d.g.add_edge(a, b);
    } catch (const error& e) {
      fail_line(lineno, e.code, e.what());
    }
  }
  if (d.names.empty()) throw error(errc::syntax_error, "graph file declares no nodes");
  if (!edges_started) d.g = dag(static_cast<int>(d.names.size()));
  if (!d.g.acyclic()) throw error(errc::invalid_sets, "graph file contains a cycle");
  return d;
}

named_dag load_dag_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io_failure, "cannot open " + path);
  return load_dag(in);
}

std::string serialize_dag(const named_dag& d) {
  if (static_cast<int>(d.names.size()) != d.g.n)
    throw error(errc::invalid_sets, "one name per node required");
  for (const auto& n : d.names) check_name_token(n);
  std::string out = "nodes:";
  for (const auto& n : d.names) out += ' ' + n;
  out += '\n';
  if (!d.latent.empty()) {
    out += "latent:";
    d.latent.for_each([&](int v) { out += ' ' + d.names[v]; });
    out += '\n';
  }
  for (int from = 0; from < d.g.n; ++from)
    d.g.ch[from].for_each([&](int to) { out += d.names[from] + " -> " + d.names[to] + '\n'; });
  return out;
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string dot_of_dag(const named_dag& d) {
  if (static_cast<int>(d.names.size()) != d.g.n)
    throw error(errc::invalid_sets, "one name per node required");
  std::string out = "digraph g {\n";
  for (int v = 0; v < d.g.n; ++v) {
    out += "  " + dot_quote(d.names[v]);
    if (d.latent.test(v)) out += " [style=dashed]";
    out += ";\n";
  }
  for (int from = 0; from < d.g.n; ++from)
    d.g.ch[from].for_each([&](int to) {
      out += "  " + dot_quote(d.names[from]) + " -> " + dot_quote(d.names[to]) + ";\n";
    });
  return out + "}\n";
}

std::string dot_of_grid_dag(const grid_dag& g, const universe& u) {
  std::string out = "digraph grid {\n  rankdir=BT;\n";
  for (std::size_t s = 0; s < g.nodes.size(); ++s) {
    out += "  n" + std::to_string(s) + " [label=" + dot_quote(to_text(g.nodes[s].t, u));
    if (!g.nodes[s].canonical) out += ", style=dashed";
    out += "];\n";
  }
  for (const auto& e : g.edges) {
    out += "  n" + std::to_string(e.from) + " -> n" + std::to_string(e.to);
    if (!e.solid) out += " [style=dashed]";
    out += ";\n";
  }
  return out + "}\n";
}

}  // namespace ciq
