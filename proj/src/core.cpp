#include "ciq/triplet.hpp"

namespace ciq {

const char* errc_name(errc c) {
  switch (c) {
    case errc::overlapping_sets: return "overlapping sets";
    case errc::index_out_of_range: return "index out of range";
    case errc::context_clash: return "context clash";
    case errc::incomparable: return "incomparable";
    case errc::universe_mismatch: return "universe mismatch";
    case errc::not_closed: return "model not closed";
    case errc::universe_too_large: return "universe too large";
    case errc::level_mismatch: return "axiom level mismatch";
    case errc::aux_name_collision: return "name collision";
    case errc::invalid_sets: return "invalid sets";
    case errc::depth_exhausted: return "depth exhausted";
    case errc::naturalness_violated: return "naturalness violated";
    case errc::zero_conditioner: return "zero conditioner";
    case errc::missing_variable: return "missing variable";
    case errc::incomplete_domain: return "incomplete domain";
    case errc::duplicate_row: return "duplicate row";
    case errc::not_normalized: return "not normalized";
    case errc::syntax_error: return "syntax error";
    case errc::unknown_variable: return "unknown variable";
    case errc::not_positive: return "not positive";
    case errc::table_mismatch: return "table mismatch";
    case errc::budget_exhausted: return "budget exhausted";
    case errc::invalid_triplet: return "invalid triplet";
    case errc::io_failure: return "io failure";
  }
  return "error";
}

const char* axiom_level_name(axiom_level l) {
  switch (l) {
    case axiom_level::semigraphoid: return "semigraphoid";
    case axiom_level::graphoid: return "graphoid";
    case axiom_level::compositional: return "compositional";
  }
  return "?";
}

std::optional<axiom_level> axiom_level_from_name(const std::string& s) {
  if (s == "semigraphoid") return axiom_level::semigraphoid;
  if (s == "graphoid") return axiom_level::graphoid;
  if (s == "compositional") return axiom_level::compositional;
  return std::nullopt;
}

static std::optional<error> validate_parts(varset I, varset J, varset K,
                                           const context_assignment& C, const universe& u) {
  if (I.empty() || J.empty())
    return error(errc::invalid_sets, "I and J must be nonempty");
  varset in_range;
  for (int v = 0; v < u.size(); ++v) in_range.set(v);
  varset all = I | J | K;
  if (!all.subset_of(in_range))
    return error(errc::index_out_of_range, "variable index outside the universe");
  if (I.intersects(J) || I.intersects(K) || J.intersects(K))
    return error(errc::overlapping_sets, "I, J and K must be pairwise disjoint");
  for (auto [v, val] : C.kv) {
    if (v >= u.size())
      return error(errc::index_out_of_range, "context variable outside the universe");
    if (!u.is_context(v))
      return error(errc::context_clash, "context binding on a base variable");
    if (val >= u.domains[v].size())
      return error(errc::context_clash, "context value outside the variable's domain");
    if (all.test(v))
      return error(errc::context_clash, "context binding overlaps I, J or K");
  }
  return std::nullopt;
}

std::optional<error> validate(const triplet& t, const universe& u) {
  return validate_parts(t.I, t.J, t.K, t.C, u);
}

std::optional<error> validate(const elem_triplet& t, const universe& u) {
  if (t.i == t.j) return error(errc::overlapping_sets, "i and j must differ");
  return validate_parts(varset::single(t.i), varset::single(t.j), t.K, t.C, u);
}

bool dominates(const triplet& t, const triplet& t2) {
  if (!(t.C == t2.C))
    throw error(errc::incomparable, "triplets in different context strata");
  if (!t2.I.subset_of(t.I) || !t2.J.subset_of(t.J)) return false;
  if (!t.K.subset_of(t2.K)) return false;
  varset window = (t.I - t2.I) | (t.J - t2.J) | t.K;
  return t2.K.subset_of(window);
}

}  // namespace ciq
