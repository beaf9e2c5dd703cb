#pragma once
// Exact joint probability tables over named finite variables: CSV load/save,
// marginal mass arithmetic, extraction of the independence model a table
// satisfies, and the factorization check against a graph.

#include <memory>
#include <string>
#include <vector>

#include "ciq/model.hpp"

namespace ciq {

struct joint_table {
  std::vector<std::string> vars;                  // column order
  std::vector<std::vector<std::string>> domains;  // per variable, sorted distinct values
  std::vector<double> p;                          // dense, row-major, last variable fastest

  int var_index(const std::string& name) const;
  std::size_t rows() const { return p.size(); }
  std::size_t index_of(const std::vector<int>& vals) const;  // value index per variable
  std::vector<int> values_at(std::size_t row) const;
};

// CSV with a header of variable names plus a final `p` column; every full
// assignment must appear exactly once and the masses must sum to 1 within
// eps. No quoting; values are bare tokens.
joint_table load_table(std::istream& in, double eps = 1e-9);
joint_table load_table_file(const std::string& path, double eps = 1e-9);
std::string save_table(const joint_table& t);

// Total mass of the rows matching `match` (one entry per variable: a value
// index, or -1 for unconstrained).
double marginal_mass(const joint_table& t, const std::vector<int>& match);

// The marginal over `keep` (column order as given); unknown names throw
// missing_variable.
joint_table marginal_table(const joint_table& t, const std::vector<std::string>& keep);

// The model of elementary statements the table satisfies: i _||_ j | K holds
// when |p(i,j|K=k) - p(i|K=k) p(j|K=k)| <= eps for every value configuration
// (zero-mass configurations are vacuous); context variables slice the table
// first. The output is closed at the requested level. With propagate,
// candidates already derivable from confirmed ones skip the numeric test --
// an optimization that must not change the result. Levels with the
// intersection axiom demand a strictly positive table.
elementary_model extract_model_from_table(const joint_table& t,
                                          std::shared_ptr<const universe> u, axiom_level level,
                                          double eps = 1e-9, bool propagate = true);

// Convenience: builds an all-base universe from the table's columns.
elementary_model extract_model_from_table(const joint_table& t, axiom_level level,
                                          double eps = 1e-9, bool propagate = true);

}  // namespace ciq
