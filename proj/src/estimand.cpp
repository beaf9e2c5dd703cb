#include "ciq/estimand.hpp"

#include <algorithm>
#include <cctype>

#include "ciq/table.hpp"

namespace ciq {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

estimand make_prob(std::vector<std::string> targets, std::vector<std::string> given) {
  if (targets.empty()) throw error(errc::invalid_sets, "a probability term needs targets");
  estimand e;
  e.k = estimand::kind::prob;
  e.targets = sorted_unique(std::move(targets));
  e.given = sorted_unique(std::move(given));
  for (const auto& g : e.given)
    if (std::binary_search(e.targets.begin(), e.targets.end(), g))
      throw error(errc::overlapping_sets, "variable " + g + " is both target and conditioner");
  return e;
}

estimand make_product(std::vector<estimand> factors) {
  estimand e;
  e.k = estimand::kind::product;
  for (auto& f : factors) {
    if (f.k == estimand::kind::product)
      for (auto& g : f.factors) e.factors.push_back(std::move(g));
    else
      e.factors.push_back(std::move(f));
  }
  if (e.factors.size() == 1) return std::move(e.factors.front());
  return e;
}

estimand make_sum(std::vector<std::string> over, std::vector<estimand> factors) {
  if (over.empty()) return make_product(std::move(factors));
  estimand body = make_product(std::move(factors));
  estimand e;
  e.k = estimand::kind::sum;
  e.over = sorted_unique(std::move(over));
  if (body.k == estimand::kind::product)
    e.factors = std::move(body.factors);
  else
    e.factors.push_back(std::move(body));
  return e;
}

namespace {

void append_joined(std::string& out, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
}

void render(const estimand& e, std::string& out) {
  switch (e.k) {
    case estimand::kind::prob:
      out += "p(";
      append_joined(out, e.targets);
      if (!e.given.empty()) {
        out += '|';
        append_joined(out, e.given);
      }
      out += ')';
      return;
    case estimand::kind::product:
      if (e.factors.empty()) {
        out += '1';
        return;
      }
      for (std::size_t i = 0; i < e.factors.size(); ++i) {
        if (i) out += " * ";
        render(e.factors[i], out);
      }
      return;
    case estimand::kind::sum:
      out += "sum{";
      append_joined(out, e.over);
      out += "}( ";
      if (e.factors.empty()) {
        out += '1';
      } else {
        for (std::size_t i = 0; i < e.factors.size(); ++i) {
          if (i) out += " * ";
          render(e.factors[i], out);
        }
      }
      out += " )";
      return;
  }
}

struct parser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw error(errc::syntax_error,
                what + " at offset " + std::to_string(pos) + " in estimand");
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string name() {
    skip_ws();
    std::size_t b = pos;
    while (pos < s.size() && name_char(s[pos])) ++pos;
    if (pos == b) fail("expected a variable name");
    return s.substr(b, pos - b);
  }

  std::vector<std::string> name_list(char stop1, char stop2) {
    std::vector<std::string> out{name()};
    while (eat(',')) out.push_back(name());
    skip_ws();
    if (pos >= s.size() || (s[pos] != stop1 && s[pos] != stop2))
      fail("expected ',' or list end");
    return out;
  }

  estimand term() {
    skip_ws();
    if (pos >= s.size()) fail("expected a term");
    if (s[pos] == '1') {
      ++pos;
      return make_product({});
    }
    if (s.compare(pos, 4, "sum{") == 0 ||
        (s.compare(pos, 3, "sum") == 0 && pos + 3 < s.size() &&
         !name_char(s[pos + 3]))) {
      pos += 3;
      expect('{');
      auto over = name_list('}', '}');
      expect('}');
      expect('(');
      auto body = expr();
      expect(')');
      std::vector<estimand> fs;
      fs.push_back(std::move(body));
      return make_sum(std::move(over), std::move(fs));
    }
    if (s[pos] == 'p') {
      ++pos;
      expect('(');
      auto targets = name_list('|', ')');
      std::vector<std::string> given;
      if (eat('|')) given = name_list(')', ')');
      expect(')');
      return make_prob(std::move(targets), std::move(given));
    }
    fail("expected p(...), sum{...}(...), or 1");
  }

  estimand expr() {
    std::vector<estimand> factors;
    factors.push_back(term());
    while (eat('*')) factors.push_back(term());
    return make_product(std::move(factors));
  }
};

}  // namespace

std::string to_text(const estimand& e) {
  std::string out;
  render(e, out);
  return out;
}

estimand parse_estimand(const std::string& text) {
  parser p{text};
  estimand e = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("unexpected trailing text");
  return e;
}

namespace {

void collect_free(const estimand& e, std::vector<std::string>& bound,
                  std::vector<std::string>& out) {
  switch (e.k) {
    case estimand::kind::prob:
      for (const auto* list : {&e.targets, &e.given})
        for (const auto& v : *list)
          if (std::find(bound.begin(), bound.end(), v) == bound.end()) out.push_back(v);
      return;
    case estimand::kind::product:
      for (const auto& f : e.factors) collect_free(f, bound, out);
      return;
    case estimand::kind::sum: {
      std::size_t mark = bound.size();
      bound.insert(bound.end(), e.over.begin(), e.over.end());
      for (const auto& f : e.factors) collect_free(f, bound, out);
      bound.resize(mark);
      return;
    }
  }
}

}  // namespace

std::vector<std::string> free_variables(const estimand& e) {
  std::vector<std::string> bound, out;
  collect_free(e, bound, out);
  return sorted_unique(std::move(out));
}

namespace {

// Match-vector entry for `name = value` over the table's columns; a value the
// domain lacks selects nothing, which the caller sees as zero mass.
void bind_match(std::vector<int>& match, const joint_table& t, const std::string& name,
                const std::string& value) {
  int c = t.var_index(name);
  if (c < 0) throw error(errc::missing_variable, "table lacks variable " + name);
  const auto& d = t.domains[c];
  auto it = std::lower_bound(d.begin(), d.end(), value);
  match[c] = (it != d.end() && *it == value) ? static_cast<int>(it - d.begin()) : -2;
}

double eval_rec(const estimand& e, const joint_table& t,
                std::map<std::string, std::string>& env) {
  switch (e.k) {
    case estimand::kind::prob: {
      std::vector<int> num(t.vars.size(), -1), den(t.vars.size(), -1);
      auto lookup = [&](const std::string& name) -> const std::string& {
        auto it = env.find(name);
        if (it == env.end())
          throw error(errc::missing_variable, "no binding for variable " + name);
        return it->second;
      };
      for (const auto& v : e.targets) bind_match(num, t, v, lookup(v));
      for (const auto& v : e.given) {
        bind_match(num, t, v, lookup(v));
        bind_match(den, t, v, lookup(v));
      }
      auto mass = [&](const std::vector<int>& match) {
        for (int m : match)
          if (m == -2) return 0.0;  // value outside the table's domain
        return marginal_mass(t, match);
      };
      double d = mass(den);
      if (d == 0.0)
        throw error(errc::zero_conditioner, "conditioning event has zero mass in " + to_text(e));
      return mass(num) / d;
    }
    case estimand::kind::product: {
      double out = 1.0;
      for (const auto& f : e.factors) out *= eval_rec(f, t, env);
      return out;
    }
    case estimand::kind::sum: {
      std::vector<int> cols;
      for (const auto& v : e.over) {
        int c = t.var_index(v);
        if (c < 0) throw error(errc::missing_variable, "table lacks variable " + v);
        cols.push_back(c);
      }
      // save shadowed bindings
      std::vector<std::pair<std::string, std::string>> saved;
      std::vector<std::string> fresh;
      for (const auto& v : e.over) {
        auto it = env.find(v);
        if (it != env.end())
          saved.emplace_back(v, it->second);
        else
          fresh.push_back(v);
      }
      std::vector<int> vals(cols.size(), 0);
      double total = 0.0;
      for (;;) {
        for (std::size_t s = 0; s < cols.size(); ++s)
          env[e.over[s]] = t.domains[cols[s]][vals[s]];
        double prod = 1.0;
        for (const auto& f : e.factors) prod *= eval_rec(f, t, env);
        total += prod;
        std::size_t s = cols.size();
        for (;;) {
          if (s == 0) goto done;
          --s;
          if (++vals[s] < static_cast<int>(t.domains[cols[s]].size())) break;
          vals[s] = 0;
        }
      }
    done:
      for (const auto& v : fresh) env.erase(v);
      for (const auto& [k, val] : saved) env[k] = val;
      return total;
    }
  }
  return 0.0;
}

}  // namespace

double evaluate_estimand(const estimand& e, const joint_table& t,
                         const std::map<std::string, std::string>& env) {
  auto env2 = env;
  return eval_rec(e, t, env2);
}

std::vector<std::pair<std::map<std::string, std::string>, double>> estimand_distribution(
    const estimand& e, const joint_table& t, const std::vector<std::string>& targets,
    const std::map<std::string, std::string>& env) {
  std::vector<int> cols;
  for (const auto& v : targets) {
    int c = t.var_index(v);
    if (c < 0) throw error(errc::missing_variable, "table lacks variable " + v);
    cols.push_back(c);
  }
  std::vector<std::pair<std::map<std::string, std::string>, double>> rows;
  std::vector<int> vals(cols.size(), 0);
  double total = 0.0;
  for (;;) {
    auto env2 = env;
    std::map<std::string, std::string> key;
    for (std::size_t s = 0; s < cols.size(); ++s) {
      const auto& value = t.domains[cols[s]][vals[s]];
      env2[targets[s]] = value;
      key[targets[s]] = value;
    }
    double v = evaluate_estimand(e, t, env2);
    total += v;
    rows.emplace_back(std::move(key), v);
    std::size_t s = cols.size();
    for (;;) {
      if (s == 0) goto done;
      --s;
      if (++vals[s] < static_cast<int>(t.domains[cols[s]].size())) break;
      vals[s] = 0;
    }
  }
done:
  if (total == 0.0)
    throw error(errc::zero_conditioner, "estimand sums to zero over the target configurations");
  for (auto& r : rows) r.second /= total;
  return rows;
}

}  // namespace ciq
