#pragma once
// Variable universe: an ordered list of named slots. Base slots are ordinary
// random variables; context slots carry a finite value domain and may appear
// either as triplet elements (they are variables too) or bound to a value in
// a triplet's context assignment.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciq/bits.hpp"

namespace ciq {

enum class errc {
  overlapping_sets,
  index_out_of_range,
  context_clash,
  incomparable,
  universe_mismatch,
  not_closed,
  universe_too_large,
  level_mismatch,
  aux_name_collision,
  invalid_sets,
  depth_exhausted,
  naturalness_violated,
  zero_conditioner,
  missing_variable,
  incomplete_domain,
  duplicate_row,
  not_normalized,
  syntax_error,
  unknown_variable,
  not_positive,
  table_mismatch,
  budget_exhausted,
  invalid_triplet,
  io_failure,
};

const char* errc_name(errc c);

struct error : std::runtime_error {
  errc code;
  error(errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code(c) {}
};

enum class var_kind : std::uint8_t { base, context };

struct universe {
  std::vector<std::string> names;
  std::vector<var_kind> kinds;
  // domain value tokens per slot; empty for base slots
  std::vector<std::vector<std::string>> domains;

  int size() const { return static_cast<int>(names.size()); }

  int add_base(const std::string& name) {
    check_room(name);
    names.push_back(name);
    kinds.push_back(var_kind::base);
    domains.emplace_back();
    return size() - 1;
  }

  int add_context(const std::string& name, std::vector<std::string> domain) {
    check_room(name);
    if (domain.size() < 2)
      throw error(errc::invalid_sets, "context variable '" + name + "' needs at least two values");
    names.push_back(name);
    kinds.push_back(var_kind::context);
    domains.push_back(std::move(domain));
    return size() - 1;
  }

  bool is_context(int v) const { return kinds[v] == var_kind::context; }

  int find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
      if (names[i] == name) return i;
    return -1;
  }

  int domain_value(int v, const std::string& token) const {
    const auto& d = domains[v];
    for (int i = 0; i < static_cast<int>(d.size()); ++i)
      if (d[i] == token) return i;
    return -1;
  }

  varset base_vars() const {
    varset s;
    for (int i = 0; i < size(); ++i)
      if (kinds[i] == var_kind::base) s.set(i);
    return s;
  }

  varset all_vars() const {
    varset s;
    for (int i = 0; i < size(); ++i) s.set(i);
    return s;
  }

  bool operator==(const universe&) const = default;

 private:
  void check_room(const std::string& name) {
    if (size() >= max_vars)
      throw error(errc::universe_too_large, "universe is limited to 128 variables");
    if (find(name) >= 0)
      throw error(errc::aux_name_collision, "variable '" + name + "' already exists");
  }
};

// A partial assignment of context variables to domain-value indices, kept
// sorted by variable so equality and hashing are structural. Strata never
// interact: two triplets relate under the axioms only when their assignments
// are exactly equal.
struct context_assignment {
  std::vector<std::pair<std::uint8_t, std::uint8_t>> kv;  // (var, value), sorted by var

  bool empty() const { return kv.empty(); }

  varset keys() const {
    varset s;
    for (auto [v, _] : kv) s.set(v);
    return s;
  }

  void bind(int v, int value) {
    auto it = kv.begin();
    while (it != kv.end() && it->first < v) ++it;
    if (it != kv.end() && it->first == v) {
      if (it->second != value)
        throw error(errc::context_clash, "conflicting binding for context variable");
      return;
    }
    kv.insert(it, {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(value)});
  }

  int value_of(int v) const {
    for (auto [k, val] : kv)
      if (k == v) return val;
    return -1;
  }

  bool operator==(const context_assignment&) const = default;
  bool operator<(const context_assignment& o) const { return kv < o.kv; }

  std::size_t hash() const {
    std::size_t h = 0x51a1c6e53c21f8cdull;
    for (auto [k, v] : kv) h = h * 1099511628211ull + (std::size_t(k) << 8 | v);
    return h;
  }
};

}  // namespace ciq

template <>
struct std::hash<ciq::context_assignment> {
  std::size_t operator()(const ciq::context_assignment& c) const { return c.hash(); }
};
