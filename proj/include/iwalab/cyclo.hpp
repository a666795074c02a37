#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "iwalab/padic.hpp"
#include "iwalab/ring_layout.hpp"

namespace iwalab {

namespace detail {

/// Shared implementation of truncated elements of (Z/l^prec)[zeta][C_{l^M}].
/// `Derived` supplies nothing but its name; all arithmetic lives here.
template <class Derived>
class FlatRingElt {
public:
  const RingLayout& layout() const { return *lay_; }
  i64 prime() const { return lay_->l; }
  int prec() const { return prec_; }
  i64 modulus() const { return ipow(lay_->l, prec_); }
  const std::vector<i64>& coeffs() const { return c_; }
  i64 coeff(int idx) const { return c_[idx]; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](i64 v) { return v == 0; });
  }
  bool is_one() const {
    if (c_[0] != 1 % modulus()) return false;
    return std::all_of(c_.begin() + 1, c_.end(), [](i64 v) { return v == 0; });
  }

  /// Image in the residue field F_l (zeta -> 1, gamma -> 1).
  i64 residue() const {
    i64 s = 0;
    for (i64 v : c_) s = mod_reduce(s + v, lay_->l);
    return s;
  }
  bool is_unit() const { return residue() != 0; }

  /// Smallest coefficient valuation, `prec` for zero.
  int valuation() const {
    int v = prec_;
    for (i64 x : c_) v = std::min(v, iwalab::valuation(x, lay_->l, prec_));
    return v;
  }
  bool is_divisible(int r) const { return valuation() >= r; }

  Derived reduced(int p) const {
    Derived r = self();
    r.set_prec(std::min(p, prec_));
    return r;
  }
  Derived lifted(int p) const {
    Derived r = self();
    r.prec_ = std::max(p, prec_);
    return r;
  }

  friend Derived operator+(const Derived& a, const Derived& b) { return a.combine(b, 1); }
  friend Derived operator-(const Derived& a, const Derived& b) { return a.combine(b, -1); }
  Derived operator-() const {
    Derived r = self();
    i64 mod = modulus();
    for (auto& v : r.c_) v = mod_reduce(-v, mod);
    return r;
  }
  friend Derived operator*(const Derived& a, const Derived& b) { return a.multiply(b); }
  Derived& operator+=(const Derived& o) { return self_mut() = self() + o; }
  Derived& operator-=(const Derived& o) { return self_mut() = self() - o; }
  Derived& operator*=(const Derived& o) { return self_mut() = self() * o; }

  Derived scaled(i64 k) const {
    Derived r = self();
    i64 mod = modulus();
    k = mod_reduce(k, mod);
    for (auto& v : r.c_) v = mul_mod(v, k, mod);
    return r;
  }
  Derived scaled(const PadicScalar& k) const {
    Derived r = self().reduced(k.prec());
    return r.scaled(k.value());
  }

  friend bool operator==(const Derived& a, const Derived& b) {
    return a.lay_ == b.lay_ && a.prec_ == b.prec_ && a.c_ == b.c_;
  }

  /// a == b modulo l^p.
  friend bool equal_at(const Derived& a, const Derived& b, int p) {
    i64 mod = ipow(a.prime(), p);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (mod_reduce(a.c_[i] - b.c_[i], mod) != 0) return false;
    return true;
  }

  /// x / l^r with precision reduced by r.
  Derived exact_div_l(int r) const {
    if (prec_ - r < 1)
      raise(ErrorCode::PrecisionExhausted, "dividing by l^" + std::to_string(r) + " at precision " + std::to_string(prec_));
    if (!is_divisible(r)) raise(ErrorCode::NotDivisible, "element not divisible by l^" + std::to_string(r));
    Derived out = self();
    i64 d = ipow(lay_->l, r);
    for (auto& v : out.c_) v /= d;
    out.prec_ = prec_ - r;
    return out;
  }

  /// x * l^r, known to r more digits than x.
  Derived mul_l_pow(int r) const {
    Derived out = self();
    i64 d = ipow(lay_->l, r);
    out.prec_ = prec_ + r;
    i64 mod = out.modulus();
    for (auto& v : out.c_) v = mul_mod(v, d, mod);
    return out;
  }

  /// Galois action sigma_u : zeta -> zeta^u, applied blockwise.
  Derived galois(i64 u) const {
    const RingLayout& L = *lay_;
    if (u % L.l == 0) raise(ErrorCode::BadUnit, "Galois exponent " + std::to_string(u) + " divisible by l");
    u = mod_reduce(u, L.cyc_n);
    return map_zeta_exponents([&](int k) { return static_cast<int>((u * k) % L.cyc_n); });
  }

  /// Multiplies by zeta^s.
  Derived times_root(i64 s) const {
    const RingLayout& L = *lay_;
    s = mod_reduce(s, L.cyc_n);
    return map_zeta_exponents([&](int k) { return static_cast<int>((k + s) % L.cyc_n); });
  }

  Derived pow(i64 e) const {
    Derived result = Derived::one_like(self());
    Derived base = self();
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  /// Newton iteration y <- y + y(1 - xy) from the residue-field inverse.
  Derived inverse() const {
    i64 r = residue();
    if (r == 0) raise(ErrorCode::NotAUnit, "element is not a unit (residue 0)");
    Derived one = Derived::one_like(self());
    Derived y = one.scaled(inv_mod(r, lay_->l));
    for (int it = 0; it < 256; ++it) {
      Derived e = one - self() * y;
      if (e.is_zero()) return y;
      y = y + y * e;
    }
    raise(ErrorCode::NoConvergence, "unit inversion did not stabilise");
  }

protected:
  FlatRingElt() = default;
  FlatRingElt(const RingLayout& lay, int prec) : lay_(&lay), prec_(prec), c_(lay.size(), 0) {
    if (prec < 1) raise(ErrorCode::PrecisionExhausted, "precision below 1");
  }

  void set_prec(int p) {
    prec_ = p;
    i64 mod = modulus();
    for (auto& v : c_) v = mod_reduce(v, mod);
  }
  void set_raw(int idx, i64 v) { c_[idx] = mod_reduce(v, modulus()); }
  void add_raw(int idx, i64 v) { c_[idx] = mod_reduce(c_[idx] + v, modulus()); }

  const Derived& self() const { return static_cast<const Derived&>(*this); }
  Derived& self_mut() { return static_cast<Derived&>(*this); }

  Derived combine(const Derived& b, int sign) const {
    Derived r = self();
    int p = std::min(prec_, b.prec_);
    r.prec_ = p;
    i64 mod = ipow(lay_->l, p);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mod_reduce(c_[i] + sign * b.c_[i], mod);
    return r;
  }

  Derived multiply(const Derived& b) const {
    const RingLayout& L = *lay_;
    int p = std::min(prec_, b.prec_);
    i64 mod = ipow(L.l, p);
    const int phi = L.phi, gn = L.gamma_n, w = 2 * phi - 1;
    thread_local std::vector<i64> acc;
    thread_local std::vector<std::pair<int, i64>> nza, nzb;
    acc.assign(static_cast<std::size_t>(gn) * w, 0);
    nza.clear();
    nzb.clear();
    for (int i = 0; i < L.size(); ++i) {
      if (i64 v = mod_reduce(c_[i], mod)) nza.emplace_back(i, v);
      if (i64 v = mod_reduce(b.c_[i], mod)) nzb.emplace_back(i, v);
    }
    for (auto [ia, va] : nza) {
      int ga = ia / phi, ka = ia % phi;
      for (auto [ib, vb] : nzb) {
        int g = ga + ib / phi;
        if (g >= gn) g -= gn;
        i64& t = acc[static_cast<std::size_t>(g) * w + ka + ib % phi];
        t = mod_reduce(t + mul_mod(va, vb, mod), mod);
      }
    }
    Derived out = Derived::zero_like(self(), p);
    for (int g = 0; g < gn; ++g)
      for (int k = 0; k < w; ++k) {
        i64 v = acc[static_cast<std::size_t>(g) * w + k];
        if (!v) continue;
        for (auto [idx, sign] : L.zeta_power[k % L.cyc_n]) out.c_[g * phi + idx] += sign * v;
      }
    for (auto& v : out.c_) v = mod_reduce(v, mod);
    return out;
  }

  template <class F>
  Derived map_zeta_exponents(F&& f) const {
    const RingLayout& L = *lay_;
    Derived out = Derived::zero_like(self(), prec_);
    i64 mod = modulus();
    for (int g = 0; g < L.gamma_n; ++g)
      for (int k = 0; k < L.phi; ++k) {
        i64 v = c_[g * L.phi + k];
        if (!v) continue;
        for (auto [idx, sign] : L.zeta_power[f(k)]) out.c_[g * L.phi + idx] += sign * v;
      }
    for (auto& v : out.c_) v = mod_reduce(v, mod);
    return out;
  }

  const RingLayout* lay_ = nullptr;
  int prec_ = 1;
  std::vector<i64> c_;
};

} // namespace detail

/// Element of (Z/l^prec)[zeta_{l^m}], stored against the power basis of zeta.
class CycloScalar : public detail::FlatRingElt<CycloScalar> {
  friend class detail::FlatRingElt<CycloScalar>;
  friend class GammaElt;

public:
  CycloScalar() = default;
  CycloScalar(i64 l, int m, int prec) : FlatRingElt(ring_layout(l, m, 0), prec) {}

  static CycloScalar zero_like(const CycloScalar& x, int prec) { return CycloScalar(x.prime(), x.level(), prec); }
  static CycloScalar one_like(const CycloScalar& x) { return constant(x.prime(), x.level(), x.prec(), 1); }

  static CycloScalar constant(i64 l, int m, int prec, i64 v) {
    CycloScalar r(l, m, prec);
    r.set_raw(0, v);
    return r;
  }
  /// zeta_{l^m}^e
  static CycloScalar root_of_unity(i64 l, int m, int prec, i64 e) { return constant(l, m, prec, 1).times_root(e); }
  static CycloScalar from_coeffs(i64 l, int m, int prec, const std::vector<i64>& c) {
    CycloScalar r(l, m, prec);
    for (std::size_t i = 0; i < c.size(); ++i) r.set_raw(static_cast<int>(i), c[i]);
    return r;
  }

  int level() const { return lay_->m; }
  int degree() const { return lay_->phi; }

  friend std::ostream& operator<<(std::ostream& os, const CycloScalar& x) {
    os << "[";
    for (std::size_t i = 0; i < x.c_.size(); ++i) os << (i ? " " : "") << x.c_[i];
    return os << "] mod " << x.prime() << "^" << x.prec();
  }
};

/// Exact cyclotomic integer in Z[zeta_{l^m}]; character values live here.
class CycloInt {
public:
  CycloInt() = default;
  CycloInt(i64 l, int m) : lay_(&ring_layout(l, m, 0)), c_(lay_->phi, 0) {}

  static CycloInt integer(i64 l, int m, i64 v) {
    CycloInt r(l, m);
    r.c_[0] = v;
    return r;
  }
  static CycloInt root_of_unity(i64 l, int m, i64 e) {
    CycloInt r(l, m);
    const RingLayout& L = *r.lay_;
    for (auto [idx, sign] : L.zeta_power[mod_reduce(e, L.cyc_n)]) r.c_[idx] += sign;
    return r;
  }

  const RingLayout& layout() const { return *lay_; }
  const std::vector<i64>& coeffs() const { return c_; }
  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](i64 v) { return v == 0; });
  }
  bool is_rational() const {
    return std::all_of(c_.begin() + 1, c_.end(), [](i64 v) { return v == 0; });
  }
  i64 rational_value() const { return c_[0]; }

  friend CycloInt operator+(CycloInt a, const CycloInt& b) {
    for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
    return a;
  }
  friend CycloInt operator-(CycloInt a, const CycloInt& b) {
    for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] -= b.c_[i];
    return a;
  }
  CycloInt operator-() const {
    CycloInt r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  CycloInt& operator+=(const CycloInt& o) { return *this = *this + o; }
  CycloInt& operator-=(const CycloInt& o) { return *this = *this - o; }
  CycloInt scaled(i64 k) const {
    CycloInt r = *this;
    for (auto& v : r.c_) v *= k;
    return r;
  }

  friend CycloInt operator*(const CycloInt& a, const CycloInt& b) {
    const RingLayout& L = *a.lay_;
    std::vector<i64> acc(2 * L.phi - 1, 0);
    for (int i = 0; i < L.phi; ++i) {
      if (!a.c_[i]) continue;
      for (int j = 0; j < L.phi; ++j) acc[i + j] += a.c_[i] * b.c_[j];
    }
    CycloInt r(L.l, L.m);
    for (int k = 0; k < 2 * L.phi - 1; ++k)
      if (acc[k])
        for (auto [idx, sign] : L.zeta_power[k % L.cyc_n]) r.c_[idx] += sign * acc[k];
    return r;
  }

  CycloInt galois(i64 u) const {
    const RingLayout& L = *lay_;
    if (u % L.l == 0) raise(ErrorCode::BadUnit, "Galois exponent divisible by l");
    u = mod_reduce(u, L.cyc_n);
    CycloInt r(L.l, L.m);
    for (int k = 0; k < L.phi; ++k)
      if (c_[k])
        for (auto [idx, sign] : L.zeta_power[(u * k) % L.cyc_n]) r.c_[idx] += sign * c_[k];
    return r;
  }
  /// Complex conjugation zeta -> zeta^{-1}.
  CycloInt conj() const { return galois(-1); }

  CycloScalar truncated(int prec) const { return CycloScalar::from_coeffs(lay_->l, lay_->m, prec, c_); }

  friend bool operator==(const CycloInt& a, const CycloInt& b) { return a.lay_ == b.lay_ && a.c_ == b.c_; }

  std::string str() const {
    std::string s;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (!c_[k]) continue;
      i64 v = c_[k];
      s += (v < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
      i64 a = v < 0 ? -v : v;
      if (k == 0) s += std::to_string(a);
      else {
        if (a != 1) s += std::to_string(a) + "*";
        s += "z" + (k == 1 ? std::string() : "^" + std::to_string(k));
      }
      first = false;
    }
    return first ? "0" : s;
  }

private:
  const RingLayout* lay_ = nullptr;
  std::vector<i64> c_;
};

} // namespace iwalab
