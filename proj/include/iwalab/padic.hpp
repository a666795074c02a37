#pragma once

#include <algorithm>
#include <ostream>
#include <string>

#include "iwalab/arith.hpp"

namespace iwalab {

/// An element of Z/l^prec: an l-adic integer known to absolute precision `prec`.
///
/// Arithmetic never fabricates precision: binary operations return the
/// minimum precision of their operands and `exact_div_l` gives up `r` digits.
class PadicScalar {
public:
  PadicScalar() = default;
  PadicScalar(i64 l, int prec, i64 value) : l_(l), prec_(prec) {
    if (prec < 1) raise(ErrorCode::PrecisionExhausted, "precision below 1");
    value_ = mod_reduce(value, modulus());
  }

  i64 prime() const { return l_; }
  int prec() const { return prec_; }
  i64 value() const { return value_; }
  i64 modulus() const { return ipow(l_, prec_); }

  bool is_zero() const { return value_ == 0; }
  bool is_unit() const { return value_ % l_ != 0; }
  /// Valuation of the stored residue; equals `prec` for zero.
  int valuation() const { return iwalab::valuation(value_, l_, prec_); }

  PadicScalar reduced(int p) const { return PadicScalar(l_, std::min(p, prec_), value_); }
  /// Re-interprets the residue at a larger modulus (any lift is as good as another).
  PadicScalar lifted(int p) const { return PadicScalar(l_, std::max(p, prec_), value_); }

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    return PadicScalar(a.l_, std::min(a.prec_, b.prec_), a.value_ + b.value_);
  }
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
    return PadicScalar(a.l_, std::min(a.prec_, b.prec_), a.value_ - b.value_);
  }
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    int p = std::min(a.prec_, b.prec_);
    return PadicScalar(a.l_, p, mul_mod(a.value_, b.value_, ipow(a.l_, p)));
  }
  PadicScalar operator-() const { return PadicScalar(l_, prec_, -value_); }
  PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
  PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
  PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }

  friend bool operator==(const PadicScalar& a, const PadicScalar& b) {
    return a.l_ == b.l_ && a.prec_ == b.prec_ && a.value_ == b.value_;
  }

  /// Equality of the two values modulo l^p (p must not exceed either precision).
  friend bool equal_at(const PadicScalar& a, const PadicScalar& b, int p) {
    return mod_reduce(a.value_ - b.value_, ipow(a.l_, p)) == 0;
  }

  PadicScalar inverse() const {
    if (!is_unit()) raise(ErrorCode::NotAUnit, "PadicScalar " + std::to_string(value_) + " is not a unit");
    return PadicScalar(l_, prec_, inv_mod(value_, modulus()));
  }

  /// x / l^r with precision reduced by r.
  PadicScalar exact_div_l(int r) const {
    if (prec_ - r < 1)
      raise(ErrorCode::PrecisionExhausted, "dividing by l^" + std::to_string(r) + " at precision " + std::to_string(prec_));
    if (valuation() < r) raise(ErrorCode::NotDivisible, std::to_string(value_) + " not divisible by l^" + std::to_string(r));
    return PadicScalar(l_, prec_ - r, value_ / ipow(l_, r));
  }

  /// x * l^r; the product is known to r more digits than x.
  PadicScalar mul_l_pow(int r) const { return PadicScalar(l_, prec_ + r, value_ * ipow(l_, r)); }

  friend std::ostream& operator<<(std::ostream& os, const PadicScalar& x) {
    return os << x.value_ << " (mod " << x.l_ << "^" << x.prec_ << ")";
  }

private:
  i64 l_ = 3;
  int prec_ = 1;
  i64 value_ = 0;
};

} // namespace iwalab
