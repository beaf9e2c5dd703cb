#pragma once
// An independence model represented by its elementary triplets. Symmetric
// models store one canonical triplet per {i _||_ j | K, j _||_ i | K} pair;
// directed models (symmetry-disabled axiom family) keep slot order.

#include <algorithm>
#include <memory>
#include <unordered_set>
#include <vector>

#include "ciq/triplet.hpp"

namespace ciq {

struct elementary_model {
  std::shared_ptr<const universe> u;
  axiom_level level = axiom_level::semigraphoid;
  bool symmetric = true;
  bool closed = false;
  std::unordered_set<elem_triplet> set;

  elementary_model() = default;
  elementary_model(std::shared_ptr<const universe> uni, axiom_level lvl, bool sym = true)
      : u(std::move(uni)), level(lvl), symmetric(sym) {}

  elem_triplet storage_form(const elem_triplet& t) const {
    return symmetric ? canonicalize(t) : t;
  }

  bool contains(const elem_triplet& t) const { return set.count(storage_form(t)) != 0; }

  // true if the triplet was new
  bool insert(const elem_triplet& t) { return set.insert(storage_form(t)).second; }

  // stored (canonical) triplet count
  std::size_t size() const { return set.size(); }

  // count in the ordered convention: a symmetric model represents both
  // orientations of every stored pair
  std::size_t directed_size() const { return symmetric ? 2 * set.size() : set.size(); }

  std::vector<elem_triplet> sorted() const {
    std::vector<elem_triplet> v(set.begin(), set.end());
    std::sort(v.begin(), v.end());
    return v;
  }

  bool same_universe(const elementary_model& o) const {
    return u && o.u && *u == *o.u;
  }
};

inline void require_same_universe(const elementary_model& a, const elementary_model& b) {
  if (!a.same_universe(b))
    throw error(errc::universe_mismatch, "models live in different universes");
}

inline void require_same_level(const elementary_model& a, const elementary_model& b) {
  if (a.level != b.level)
    throw error(errc::level_mismatch, "models use different axiom levels");
}

}  // namespace ciq
