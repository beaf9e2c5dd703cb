#include "ciq/setops.hpp"

#include "ciq/closure.hpp"
#include "ciq/membership.hpp"
#include "ciq/query.hpp"

namespace ciq {

namespace {

void require_combinable(const elementary_model& a, const elementary_model& b) {
  require_same_universe(a, b);
  require_same_level(a, b);
  if (a.symmetric != b.symmetric)
    throw error(errc::level_mismatch, "models disagree on the symmetry convention");
}

}  // namespace

elementary_model intersect(const elementary_model& a, const elementary_model& b) {
  require_combinable(a, b);
  if (!a.closed || !b.closed) throw error(errc::not_closed, "intersection needs closed models");

  elementary_model out(a.u, a.level, a.symmetric);
  const elementary_model& small = a.size() <= b.size() ? a : b;
  const elementary_model& large = a.size() <= b.size() ? b : a;
  for (const auto& t : small.set)
    if (large.set.count(t)) out.set.insert(t);
  out.closed = true;
  return out;
}

elementary_model union_with_context(const elementary_model& a, const elementary_model& b,
                                    const std::string& aux_name) {
  require_combinable(a, b);
  if (!a.closed || !b.closed) throw error(errc::not_closed, "tagged union needs closed models");

  auto uni = std::make_shared<universe>(*a.u);
  int aux = uni->add_context(aux_name, {"0", "1"});  // throws on a name collision

  elementary_model out(uni, a.level, a.symmetric);
  auto tag = [&](const elementary_model& src, int value) {
    for (auto t : src.set) {
      t.C.bind(aux, value);
      out.set.insert(t);
    }
  };
  tag(a, 0);
  tag(b, 1);
  out.closed = true;  // each stratum is a closed input set; strata never interact
  return out;
}

elementary_model union_min_superset(const elementary_model& a, const elementary_model& b) {
  require_combinable(a, b);

  elementary_model out(a.u, a.level, a.symmetric);
  out.set = a.set;
  for (const auto& t : b.set) out.set.insert(t);
  close_elementary(out);
  return out;
}

elementary_model union_max_subset(const elementary_model& a, const elementary_model& b) {
  require_combinable(a, b);
  if (!a.closed || !b.closed) throw error(errc::not_closed, "maximal union needs closed models");

  auto sa = a.sorted(), sb = b.sorted();
  bool b_first = std::lexicographical_compare(sb.begin(), sb.end(), sa.begin(), sa.end());
  const elementary_model& base = b_first ? b : a;
  const elementary_model& other = b_first ? a : b;

  elementary_model cur = base;
  for (const auto& t : other.sorted()) {
    if (cur.contains(t)) continue;
    elementary_model trial = cur;
    trial.insert(t);
    trial.closed = false;
    close_elementary(trial);
    // admit the triplet only if the enlarged model still represents nothing
    // beyond the two inputs: its dominant triplets must each hold in one
    bool ok = true;
    for (const auto& d : dominant_triplets(trial))
      if (!is_member(a, d) && !is_member(b, d)) {
        ok = false;
        break;
      }
    if (ok) cur = std::move(trial);
  }
  return cur;
}

}  // namespace ciq
