#pragma once

#include <bit>

// Basis k-forms dx^{i1} ^ ... ^ dx^{ik} (i1 < ... < ik) are addressed by the
// bitmask with bits i1..ik set.

namespace acx::detail {

inline int popcount(unsigned m) { return std::popcount(m); }

/// Sign of dx^a ^ dx^mask relative to dx^{mask | a}; 0 when a is in mask.
inline int prepend_sign(int a, unsigned mask) {
  if (mask & (1u << a)) return 0;
  return (popcount(mask & ((1u << a) - 1u)) % 2) ? -1 : 1;
}

/// Sign of dx^left ^ dx^right relative to dx^{left | right}; 0 on overlap.
inline int wedge_sign(unsigned left, unsigned right) {
  if (left & right) return 0;
  int inversions = 0;
  for (unsigned r = right; r != 0; r &= r - 1) {
    const int j = std::countr_zero(r);
    inversions += popcount(left >> (j + 1));
  }
  return (inversions % 2) ? -1 : 1;
}

/// Sign of the contraction i_{d/dx_a} dx^mask = sign * dx^{mask without a}.
inline int interior_sign(int a, unsigned mask) {
  if (!(mask & (1u << a))) return 0;
  return (popcount(mask & ((1u << a) - 1u)) % 2) ? -1 : 1;
}

}  // namespace acx::detail
