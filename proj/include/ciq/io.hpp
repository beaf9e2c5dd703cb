#pragma once
// Text formats.
//
// Model file -- declarations first, then statements; `#` starts a comment:
//   vars: a b c               base variables, in index order
//   context-var: s lo hi      one context variable and its domain values
//   axioms: graphoid          semigraphoid | graphoid | compositional
//   symmetric: false          optional, defaults to true
//   closed: true              optional, defaults to false (trusted, not checked)
//   triplet: a b ; c | d      a full statement, expanded to its elementary
//                             projection on load
//   elem: a ; b | c d @ s=lo  one elementary statement (context tags after @)
//
// Graph file:
//   nodes: x y z              node names, in index order
//   latent: z                 optional subset of the nodes
//   x -> y                    one edge per line
//
// Serializers emit a canonical form: declarations in index order, statements
// sorted, one elem line each.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ciq/graph.hpp"
#include "ciq/model.hpp"
#include "ciq/query.hpp"

namespace ciq {

std::string to_text(const elem_triplet& t, const universe& u);
std::string to_text(const triplet& t, const universe& u);

// Parses one statement body, "I ; J [| K] [@ name=value ...]", against an
// existing universe.  Used for model-file statement lines and CLI queries.
triplet parse_statement_text(const std::string& body, const universe& u);

elementary_model load_model(std::istream& in);
elementary_model load_model_file(const std::string& path);
std::string serialize_model(const elementary_model& m);

struct named_dag {
  dag g;
  std::vector<std::string> names;
  varset latent;  // empty unless the file declares latent nodes

  // base slots named after the nodes, in node order
  std::shared_ptr<universe> to_universe() const;
};

named_dag load_dag(std::istream& in);
named_dag load_dag_file(const std::string& path);
std::string serialize_dag(const named_dag& d);

std::string dot_of_dag(const named_dag& d);
std::string dot_of_grid_dag(const grid_dag& g, const universe& u);

}  // namespace ciq
