#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "iwalab/arith.hpp"

namespace iwalab {

/// Shape of the ring (Z/l^N)[zeta_{l^m}][C_{l^M}] in the power basis
/// zeta^k * gamma^j, stored flat as index j * phi + k.
struct RingLayout {
  i64 l = 3;
  int m = 1;       // cyclotomic level
  int M = 0;       // log_l of the order of the cyclic group (0 = no group part)
  int cyc_n = 3;   // l^m
  int phi = 2;     // (l-1) l^(m-1)
  int gamma_n = 1; // l^M

  /// reduction of zeta^e, 0 <= e < l^m, to the power basis: (index, sign)
  std::vector<std::vector<std::pair<int, int>>> zeta_power;

  int size() const { return phi * gamma_n; }
};

namespace detail {

inline RingLayout make_layout(i64 l, int m, int M) {
  if (!is_prime(l) || l == 2) raise(ErrorCode::ConfigError, "l must be an odd prime");
  if (m < 1 || M < 0) raise(ErrorCode::ConfigError, "bad ring levels");
  RingLayout r;
  r.l = l;
  r.m = m;
  r.M = M;
  r.cyc_n = static_cast<int>(ipow(l, m));
  int h = static_cast<int>(ipow(l, m - 1));
  r.phi = static_cast<int>(l - 1) * h;
  r.gamma_n = static_cast<int>(ipow(l, M));
  r.zeta_power.resize(r.cyc_n);
  for (int e = 0; e < r.cyc_n; ++e) {
    if (e < r.phi) {
      r.zeta_power[e] = {{e, 1}};
    } else {
      // Phi_{l^m}(X) = sum_{i<l} X^{i l^{m-1}}
      int rest = e - r.phi;
      for (int i = 0; i + 1 < l; ++i) r.zeta_power[e].push_back({i * h + rest, -1});
    }
  }
  return r;
}

} // namespace detail

/// Layouts are interned so elements can carry a plain pointer.
inline const RingLayout& ring_layout(i64 l, int m, int M) {
  static std::mutex mu;
  static std::map<std::tuple<i64, int, int>, std::unique_ptr<RingLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(l, m, M);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<RingLayout>(detail::make_layout(l, m, M))).first;
  return *it->second;
}

} // namespace iwalab
