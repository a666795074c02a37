#pragma once

#include <algorithm>
#include <string>
#include <utility>

#include "iwalab/arith.hpp"

namespace iwalab {

/// num / l^den for any truncated element type T.
///
/// Absolute precision is num.prec() - den: the value is known modulo
/// l^(num.prec() - den). Only l-power denominators are representable.
template <class T>
class Fraction {
public:
  Fraction() = default;
  explicit Fraction(T num, int den = 0) : num_(std::move(num)), den_(den) { normalize(); }

  const T& numerator() const { return num_; }
  int den() const { return den_; }
  int abs_prec() const { return num_.prec() - den_; }
  bool is_integral() const { return den_ == 0; }

  /// The integral element this fraction represents; NotDivisible otherwise.
  T to_integral() const {
    if (den_ > 0) raise(ErrorCode::NotDivisible, "value has denominator l^" + std::to_string(den_));
    return num_;
  }

  Fraction div_l_pow(int r) const { return Fraction(num_, den_ + r); }

  friend Fraction operator+(const Fraction& a, const Fraction& b) { return combine(a, b, false); }
  friend Fraction operator-(const Fraction& a, const Fraction& b) { return combine(a, b, true); }
  Fraction operator-() const { return Fraction(-num_, den_); }
  friend Fraction operator*(const Fraction& a, const Fraction& b) { return Fraction(a.num_ * b.num_, a.den_ + b.den_); }
  Fraction& operator+=(const Fraction& o) { return *this = *this + o; }
  Fraction& operator-=(const Fraction& o) { return *this = *this - o; }

  Fraction scaled(i64 k) const { return Fraction(num_.scaled(k), den_); }

  template <class F>
  Fraction map(F&& f) const {
    return Fraction(f(num_), den_);
  }

  /// a == b modulo l^p in the absolute sense; requires p <= both absolute precisions.
  friend bool equal_at(const Fraction& a, const Fraction& b, int p) {
    Fraction d = a - b;
    if (d.abs_prec() < p) return false;
    return d.num_.is_divisible(p + d.den_);
  }

  /// Largest p <= cap with a == b mod l^p (relative agreement).
  friend int agreement(const Fraction& a, const Fraction& b, int cap) {
    Fraction d = a - b;
    int v = d.num_.valuation() - d.den_;
    return std::min({v, d.abs_prec(), cap});
  }

private:
  static Fraction combine(const Fraction& a, const Fraction& b, bool subtract) {
    int den = std::max(a.den_, b.den_);
    T x = a.den_ < den ? a.num_.mul_l_pow(den - a.den_) : a.num_;
    T y = b.den_ < den ? b.num_.mul_l_pow(den - b.den_) : b.num_;
    return Fraction(subtract ? x - y : x + y, den);
  }

  void normalize() {
    while (den_ > 0 && num_.prec() > 1 && num_.is_divisible(1) && !num_.is_zero()) {
      num_ = num_.exact_div_l(1);
      --den_;
    }
    if (den_ > 0 && num_.is_zero() && num_.prec() - den_ >= 1) {
      num_ = num_.reduced(num_.prec() - den_);
      den_ = 0;
    }
  }

  T num_{};
  int den_ = 0;
};

/// log(1 + z) for z divisible by l, to the precision of z.
///
/// Terms z^k/k are evaluated with guard digits so that dividing by the
/// l-part of k loses nothing: z^k is known to prec + k - 1 digits.
template <class T>
T log_one_plus(const T& z) {
  const i64 l = z.prime();
  const int P = z.prec();
  if (!z.is_divisible(1)) raise(ErrorCode::NoConvergence, "log(1+z) needs z divisible by l");
  int kmax = 1;
  while (kmax - valuation(kmax, l, 64) < P || (kmax + 1) - valuation(kmax + 1, l, 64) < P) ++kmax;
  int guard = 0;
  for (i64 t = l; t <= kmax; t *= l) ++guard;
  T zl = z.lifted(P + guard);
  T power = zl;
  T sum = z.scaled(0);
  for (int k = 1; k <= kmax; ++k) {
    if (k > 1) power = power * zl;
    int v = valuation(k, l, 64);
    T term = power.exact_div_l(v).reduced(P);
    i64 unit = k / ipow(l, v);
    term = term.scaled(inv_mod(unit, ipow(l, P)));
    sum = (k % 2 == 1) ? sum + term : sum - term;
  }
  return sum;
}

/// The l-adic logarithm of a unit x, extended to all units by
/// log x = log(x^(e l^s)) / (e l^s) where x^(e l^s) = 1 mod l, e in {1, l-1}.
///
/// The l^s-th power is formed at s extra digits (raising to the l-th power
/// gains one digit of absolute precision), so the result keeps the input
/// precision even though it is divided by l^s.
template <class T>
Fraction<T> unit_log(const T& x, int max_s = 12) {
  const i64 l = x.prime();
  const int N = x.prec();
  if (!x.is_unit()) raise(ErrorCode::NoConvergence, "logarithm of a non-unit");
  const i64 e = x.residue() == 1 ? 1 : l - 1;
  T base = x.pow(e);
  T one = T::one_like(base);
  int s = 0;
  T probe = base;
  while (!(probe - one).is_divisible(1)) {
    if (++s > max_s) raise(ErrorCode::NoConvergence, "no l-power of the unit is 1 mod l");
    probe = probe.pow(l);
  }
  T y = base.lifted(N + s);
  for (int i = 0; i < s; ++i) y = y.pow(l);
  T lg = log_one_plus(y - T::one_like(y));
  if (e != 1) lg = lg.scaled(inv_mod(e, ipow(l, lg.prec())));
  return Fraction<T>(lg, s);
}

} // namespace iwalab
