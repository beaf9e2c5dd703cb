#pragma once
// Symbolic estimands: conditional-probability terms over an observational
// joint, products of terms, and sums over bound variables, with a canonical
// text form, a parser for it, and a numeric evaluator against a table.

#include <map>
#include <string>
#include <vector>

#include "ciq/universe.hpp"

namespace ciq {

struct joint_table;

struct estimand {
  enum class kind { prob, product, sum };
  kind k = kind::product;
  std::vector<std::string> targets, given;  // prob: p(targets | given)
  std::vector<std::string> over;            // sum: bound variables
  std::vector<estimand> factors;            // product factors, or the sum body

  bool operator==(const estimand&) const = default;
};

// Constructors that keep trees canonical: variable lists are sorted and
// deduplicated, single-factor products unwrap, nested products flatten, and a
// sum over nothing collapses to its body. An empty product is the constant 1.
estimand make_prob(std::vector<std::string> targets, std::vector<std::string> given = {});
estimand make_product(std::vector<estimand> factors);
estimand make_sum(std::vector<std::string> over, std::vector<estimand> factors);

// Canonical text, e.g. sum{z1,z4}( p(y|x,z1,z4) * p(z1,z4) ). The constant
// (empty) product prints as 1.
std::string to_text(const estimand& e);

// Inverse of to_text, whitespace-tolerant. Throws syntax_error.
estimand parse_estimand(const std::string& text);

// Variables probability terms mention that no enclosing sum binds, sorted.
std::vector<std::string> free_variables(const estimand& e);

// Value of the estimand with every free variable bound by env. Throws
// missing_variable (an unbound free variable, or a name the table lacks) and
// zero_conditioner (a conditioning event of zero mass).
double evaluate_estimand(const estimand& e, const joint_table& t,
                         const std::map<std::string, std::string>& env);

// Values of the estimand across all configurations of `targets` (other free
// variables bound by env), normalized to sum to 1. Rows are ordered by the
// table's domain order. Throws zero_conditioner when the total is zero.
std::vector<std::pair<std::map<std::string, std::string>, double>> estimand_distribution(
    const estimand& e, const joint_table& t, const std::vector<std::string>& targets,
    const std::map<std::string, std::string>& env);

}  // namespace ciq
