#pragma once
// Fixed-width variable sets. A universe holds at most 128 variable slots, so a
// set is two machine words; everything downstream (closure worklists, grid
// search, d-separation) leans on these being cheap to hash, compare and scan.

#include <array>
#include <bit>
#include <cstdint>
#include <cstddef>
#include <functional>

namespace ciq {

inline constexpr int max_vars = 128;

struct varset {
  std::array<std::uint64_t, 2> w{0, 0};

  static varset single(int v) {
    varset s;
    s.set(v);
    return s;
  }

  bool test(int v) const { return (w[v >> 6] >> (v & 63)) & 1u; }
  void set(int v) { w[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void reset(int v) { w[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  bool empty() const { return !w[0] && !w[1]; }
  int count() const { return std::popcount(w[0]) + std::popcount(w[1]); }

  varset operator|(varset o) const { return {{w[0] | o.w[0], w[1] | o.w[1]}}; }
  varset operator&(varset o) const { return {{w[0] & o.w[0], w[1] & o.w[1]}}; }
  varset operator-(varset o) const { return {{w[0] & ~o.w[0], w[1] & ~o.w[1]}}; }
  varset& operator|=(varset o) { w[0] |= o.w[0]; w[1] |= o.w[1]; return *this; }
  varset& operator&=(varset o) { w[0] &= o.w[0]; w[1] &= o.w[1]; return *this; }
  varset& operator-=(varset o) { w[0] &= ~o.w[0]; w[1] &= ~o.w[1]; return *this; }

  bool operator==(const varset&) const = default;
  bool intersects(varset o) const { return (w[0] & o.w[0]) || (w[1] & o.w[1]); }
  bool subset_of(varset o) const { return (w[0] & ~o.w[0]) == 0 && (w[1] & ~o.w[1]) == 0; }

  // lexicographic order on the bit pattern, low indices most significant
  bool operator<(const varset& o) const {
    if (w[0] != o.w[0]) return w[0] < o.w[0];
    return w[1] < o.w[1];
  }

  int lowest() const {
    if (w[0]) return std::countr_zero(w[0]);
    if (w[1]) return 64 + std::countr_zero(w[1]);
    return -1;
  }

  // visit members in ascending index order
  template <typename F>
  void for_each(F&& f) const {
    for (int half = 0; half < 2; ++half) {
      std::uint64_t x = w[half];
      while (x) {
        int b = std::countr_zero(x);
        f(half * 64 + b);
        x &= x - 1;
      }
    }
  }

  std::size_t hash() const {
    std::uint64_t h = w[0] * 0x9e3779b97f4a7c15ull;
    h ^= w[1] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

// enumerate all subsets of `mask`, ascending by (cardinality, bit pattern)
template <typename F>
void for_each_subset_ordered(varset mask, F&& f) {
  int n = mask.count();
  std::array<int, max_vars> members{};
  int m = 0;
  mask.for_each([&](int v) { members[m++] = v; });
  for (int r = 0; r <= n; ++r) {
    // combinations of size r in lexicographic order over ascending indices
    std::array<int, max_vars> idx{};
    for (int i = 0; i < r; ++i) idx[i] = i;
    while (true) {
      varset s;
      for (int i = 0; i < r; ++i) s.set(members[idx[i]]);
      f(s);
      int i = r - 1;
      while (i >= 0 && idx[i] == n - r + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int k = i + 1; k < r; ++k) idx[k] = idx[k - 1] + 1;
    }
    if (r == 0 && n == 0) break;
  }
}

// enumerate all subsets in submask order (no cardinality sort); cheaper
template <typename F>
void for_each_subset(varset mask, F&& f) {
  // classic submask walk only works in one word; do it via member list instead
  std::array<int, max_vars> members{};
  int n = 0;
  mask.for_each([&](int v) { members[n++] = v; });
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    varset s;
    for (int i = 0; i < n; ++i)
      if ((bits >> i) & 1) s.set(members[i]);
    f(s);
  }
}

}  // namespace ciq

template <>
struct std::hash<ciq::varset> {
  std::size_t operator()(const ciq::varset& s) const { return s.hash(); }
};
