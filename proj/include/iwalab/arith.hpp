#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "iwalab/error.hpp"

namespace iwalab {

using i64 = std::int64_t;
using i128 = __int128;

/// Moduli up to this bound multiply in plain 64-bit arithmetic.
inline constexpr i64 kFastModulus = i64{1} << 31;

constexpr i64 ipow(i64 base, int exp) {
  i64 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

constexpr i64 mod_reduce(i64 a, i64 m) {
  a %= m;
  return a < 0 ? a + m : a;
}

constexpr i64 mul_mod(i64 a, i64 b, i64 m) {
  if (m <= kFastModulus) return mod_reduce(a * b, m);
  return static_cast<i64>(mod_reduce(static_cast<i64>((static_cast<i128>(a) * b) % m), m));
}

/// l-adic valuation of a nonzero integer; `cap` is returned for zero.
constexpr int valuation(i64 a, i64 l, int cap) {
  if (a == 0) return cap;
  int v = 0;
  while (a % l == 0 && v < cap) {
    a /= l;
    ++v;
  }
  return v;
}

/// Inverse of `a` modulo `m`; throws BadUnit when gcd(a, m) != 1.
inline i64 inv_mod(i64 a, i64 m) {
  i64 old_r = mod_reduce(a, m), r = m;
  i64 old_s = 1, s = 0;
  while (r != 0) {
    i64 q = old_r / r;
    i64 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) raise(ErrorCode::BadUnit, std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return mod_reduce(old_s, m);
}

constexpr bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Returns k when n == l^k, -1 otherwise.
constexpr int log_exact(i64 n, i64 l) {
  if (n < 1) return -1;
  int k = 0;
  while (n % l == 0) {
    n /= l;
    ++k;
  }
  return n == 1 ? k : -1;
}

} // namespace iwalab
