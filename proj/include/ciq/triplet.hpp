#pragma once
// Independence triplets. A triplet I _||_ J | K (+ optional context bindings)
// asserts the first set independent of the second given the third within the
// bound context stratum. Elementary triplets have singleton I and J; the
// canonical storage form orders i < j, folding the symmetry axiom into the
// representation. A directed (non-canonical) form exists for the
// symmetry-disabled axiom family; there the slot order is meaningful.

#include <optional>

#include "ciq/bits.hpp"
#include "ciq/universe.hpp"

namespace ciq {

enum class axiom_level : std::uint8_t {
  semigraphoid = 1,   // symmetry + contraction/weak union/decomposition
  graphoid = 2,       // + intersection
  compositional = 3,  // + composition
};

const char* axiom_level_name(axiom_level l);
std::optional<axiom_level> axiom_level_from_name(const std::string& s);

struct triplet {
  varset I, J, K;
  context_assignment C;

  bool operator==(const triplet&) const = default;
  bool operator<(const triplet& o) const {
    if (!(C == o.C)) return C < o.C;
    if (!(I == o.I)) return I < o.I;
    if (!(J == o.J)) return J < o.J;
    return K < o.K;
  }

  triplet mirrored() const { return {J, I, K, C}; }

  std::size_t hash() const {
    std::size_t h = I.hash();
    h = h * 0x100000001b3ull ^ J.hash();
    h = h * 0x100000001b3ull ^ K.hash();
    h = h * 0x100000001b3ull ^ C.hash();
    return h;
  }
};

struct elem_triplet {
  std::uint8_t i = 0, j = 0;
  varset K;
  context_assignment C;

  bool operator==(const elem_triplet&) const = default;
  bool operator<(const elem_triplet& o) const {
    if (!(C == o.C)) return C < o.C;
    if (i != o.i) return i < o.i;
    if (j != o.j) return j < o.j;
    return K < o.K;
  }

  bool is_canonical() const { return i < j; }
  elem_triplet mirrored() const { return {j, i, K, C}; }

  triplet as_triplet() const { return {varset::single(i), varset::single(j), K, C}; }

  std::size_t hash() const {
    std::size_t h = (std::size_t(i) << 8 | j) * 0x9e3779b97f4a7c15ull;
    h ^= K.hash() + (h << 6) + (h >> 2);
    h ^= C.hash() + (h << 6) + (h >> 2);
    return h;
  }
};

// canonical form under symmetry: smaller variable index first
inline elem_triplet canonicalize(const elem_triplet& t) {
  return t.i <= t.j ? t : t.mirrored();
}

// Structural validity of a triplet against a universe: indices in range,
// I and J nonempty, I/J/K pairwise disjoint, context keys bound to context
// variables within their domains and disjoint from I, J and K.
std::optional<error> validate(const triplet& t, const universe& u);
std::optional<error> validate(const elem_triplet& t, const universe& u);
inline void validate_or_throw(const triplet& t, const universe& u) {
  if (auto e = validate(t, u)) throw *e;
}

// Dominance: t dominates t2 when t2's assertion is recoverable from t by
// decomposition and window shifts: I2 <= I, J2 <= J and K <= K2 <= (I-I2)(J-J2)K.
// Only triplets in the same context stratum are comparable.
bool dominates(const triplet& t, const triplet& t2);

}  // namespace ciq

template <>
struct std::hash<ciq::triplet> {
  std::size_t operator()(const ciq::triplet& t) const { return t.hash(); }
};
template <>
struct std::hash<ciq::elem_triplet> {
  std::size_t operator()(const ciq::elem_triplet& t) const { return t.hash(); }
};
