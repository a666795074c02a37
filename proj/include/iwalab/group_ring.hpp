#pragma once

#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "iwalab/fraction.hpp"
#include "iwalab/group.hpp"

namespace iwalab {

/// Element of (Z/l^prec)[G], stored densely over the element indices of G.
class GroupRingElement {
public:
  GroupRingElement() = default;
  GroupRingElement(std::shared_ptr<const LGroup> G, int prec)
      : G_(std::move(G)), prec_(prec), c_(G_->order(), 0) {
    if (prec < 1) raise(ErrorCode::PrecisionExhausted, "precision below 1");
  }

  static GroupRingElement zero_like(const GroupRingElement& x, int prec) { return GroupRingElement(x.G_, prec); }
  static GroupRingElement one_like(const GroupRingElement& x) { return basis(x.G_, x.prec_, 0); }
  static GroupRingElement basis(std::shared_ptr<const LGroup> G, int prec, Elem g, i64 coeff = 1) {
    GroupRingElement r(std::move(G), prec);
    r.c_[g] = mod_reduce(coeff, r.modulus());
    return r;
  }
  static GroupRingElement from_coeffs(std::shared_ptr<const LGroup> G, int prec, const std::vector<i64>& c) {
    GroupRingElement r(std::move(G), prec);
    for (std::size_t i = 0; i < c.size(); ++i) r.c_[i] = mod_reduce(c[i], r.modulus());
    return r;
  }

  const LGroup& group() const { return *G_; }
  const std::shared_ptr<const LGroup>& group_ptr() const { return G_; }
  i64 prime() const { return G_->prime(); }
  int prec() const { return prec_; }
  i64 modulus() const { return ipow(prime(), prec_); }
  const std::vector<i64>& coeffs() const { return c_; }
  i64 coeff(Elem g) const { return c_[g]; }
  void set(Elem g, i64 v) { c_[g] = mod_reduce(v, modulus()); }
  void add(Elem g, i64 v) { c_[g] = mod_reduce(c_[g] + v, modulus()); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](i64 v) { return v == 0; });
  }
  bool is_one() const { return *this == one_like(*this); }
  /// Augmentation modulo l.
  i64 residue() const {
    i64 s = 0;
    for (i64 v : c_) s = mod_reduce(s + v, prime());
    return s;
  }
  bool is_unit() const { return residue() != 0; }
  i64 augmentation() const {
    i64 s = 0;
    for (i64 v : c_) s = mod_reduce(s + v, modulus());
    return s;
  }
  int valuation() const {
    int v = prec_;
    for (i64 x : c_) v = std::min(v, iwalab::valuation(x, prime(), prec_));
    return v;
  }
  bool is_divisible(int r) const { return valuation() >= r; }
  std::size_t support_size() const {
    return static_cast<std::size_t>(std::count_if(c_.begin(), c_.end(), [](i64 v) { return v != 0; }));
  }

  GroupRingElement reduced(int p) const {
    GroupRingElement r = *this;
    r.prec_ = std::min(p, prec_);
    i64 mod = r.modulus();
    for (auto& v : r.c_) v = mod_reduce(v, mod);
    return r;
  }
  GroupRingElement lifted(int p) const {
    GroupRingElement r = *this;
    r.prec_ = std::max(p, prec_);
    return r;
  }

  friend GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b) { return a.combine(b, 1); }
  friend GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b) { return a.combine(b, -1); }
  GroupRingElement operator-() const {
    GroupRingElement r = *this;
    i64 mod = modulus();
    for (auto& v : r.c_) v = mod_reduce(-v, mod);
    return r;
  }
  GroupRingElement& operator+=(const GroupRingElement& o) { return *this = *this + o; }
  GroupRingElement& operator-=(const GroupRingElement& o) { return *this = *this - o; }

  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
    int p = std::min(a.prec_, b.prec_);
    i64 mod = ipow(a.prime(), p);
    GroupRingElement r(a.G_, p);
    const LGroup& G = *a.G_;
    std::vector<std::pair<Elem, i64>> nb;
    for (Elem h = 0; h < G.order(); ++h)
      if (b.c_[h]) nb.emplace_back(h, b.c_[h]);
    for (Elem g = 0; g < G.order(); ++g) {
      i64 x = a.c_[g];
      if (!x) continue;
      for (auto [h, y] : nb) {
        i64& t = r.c_[G.mul(g, h)];
        t = mod_reduce(t + mul_mod(x, y, mod), mod);
      }
    }
    return r;
  }
  GroupRingElement& operator*=(const GroupRingElement& o) { return *this = *this * o; }

  GroupRingElement scaled(i64 k) const {
    GroupRingElement r = *this;
    i64 mod = modulus();
    k = mod_reduce(k, mod);
    for (auto& v : r.c_) v = mul_mod(v, k, mod);
    return r;
  }

  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    return a.G_.get() == b.G_.get() && a.prec_ == b.prec_ && a.c_ == b.c_;
  }
  friend bool equal_at(const GroupRingElement& a, const GroupRingElement& b, int p) {
    i64 mod = ipow(a.prime(), p);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (mod_reduce(a.c_[i] - b.c_[i], mod) != 0) return false;
    return true;
  }

  GroupRingElement exact_div_l(int r) const {
    if (prec_ - r < 1) raise(ErrorCode::PrecisionExhausted, "dividing by l^" + std::to_string(r) + " at precision " + std::to_string(prec_));
    if (!is_divisible(r)) raise(ErrorCode::NotDivisible, "group ring element not divisible by l^" + std::to_string(r));
    GroupRingElement out = *this;
    i64 d = ipow(prime(), r);
    for (auto& v : out.c_) v /= d;
    out.prec_ = prec_ - r;
    return out;
  }
  GroupRingElement mul_l_pow(int r) const {
    GroupRingElement out = *this;
    out.prec_ = prec_ + r;
    i64 d = ipow(prime(), r), mod = out.modulus();
    for (auto& v : out.c_) v = mul_mod(v, d, mod);
    return out;
  }

  GroupRingElement pow(i64 e) const {
    GroupRingElement result = one_like(*this), base = *this;
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  /// Two-sided inverse by Newton iteration from the residue inverse.
  GroupRingElement inverse() const {
    i64 r = residue();
    if (r == 0) raise(ErrorCode::NotAUnit, "augmentation is divisible by l");
    GroupRingElement one = one_like(*this);
    GroupRingElement y = one.scaled(inv_mod(r, prime()));
    for (int it = 0; it < 256; ++it) {
      GroupRingElement e = one - *this * y;
      if (e.is_zero()) return y;
      y = y + y * e;
    }
    raise(ErrorCode::NoConvergence, "group ring inversion did not stabilise");
  }

  /// Linear extension of g -> f(g) into the group ring of another group.
  template <class F>
  GroupRingElement pushed(std::shared_ptr<const LGroup> H, F&& f) const {
    GroupRingElement r(std::move(H), prec_);
    i64 mod = modulus();
    for (Elem g = 0; g < G_->order(); ++g)
      if (c_[g]) r.c_[f(g)] = mod_reduce(r.c_[f(g)] + c_[g], mod);
    return r;
  }

  /// Psi: linear extension of g -> g^l.
  GroupRingElement psi() const {
    return pushed(G_, [&](Elem g) { return G_->pow(g, prime()); });
  }

  /// x^h = h^-1 x h
  GroupRingElement conj(Elem h) const {
    return pushed(G_, [&](Elem g) { return G_->conj(g, h); });
  }

  friend std::ostream& operator<<(std::ostream& os, const GroupRingElement& x) {
    bool first = true;
    for (Elem g = 0; g < x.G_->order(); ++g) {
      if (!x.c_[g]) continue;
      os << (first ? "" : " + ") << x.c_[g] << "*(" << x.G_->label(g) << ")";
      first = false;
    }
    if (first) os << "0";
    return os << " mod " << x.prime() << "^" << x.prec_;
  }

private:
  GroupRingElement combine(const GroupRingElement& b, int sign) const {
    GroupRingElement r = *this;
    r.prec_ = std::min(prec_, b.prec_);
    i64 mod = r.modulus();
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mod_reduce(c_[i] + sign * b.c_[i], mod);
    return r;
  }

  std::shared_ptr<const LGroup> G_;
  int prec_ = 1;
  std::vector<i64> c_;
};

/// Element of the trace quotient T((Z/l^prec)[G]): coefficients per conjugacy class.
class TraceElement {
public:
  TraceElement() = default;
  TraceElement(std::shared_ptr<const LGroup> G, int prec)
      : G_(std::move(G)), prec_(prec), c_(G_->classes().count(), 0) {}

  static TraceElement of_element(std::shared_ptr<const LGroup> G, int prec, Elem g, i64 coeff = 1) {
    TraceElement t(std::move(G), prec);
    t.c_[t.G_->classes().class_of[g]] = mod_reduce(coeff, t.modulus());
    return t;
  }

  const LGroup& group() const { return *G_; }
  const std::shared_ptr<const LGroup>& group_ptr() const { return G_; }
  i64 prime() const { return G_->prime(); }
  int prec() const { return prec_; }
  i64 modulus() const { return ipow(prime(), prec_); }
  const std::vector<i64>& coeffs() const { return c_; }
  i64 coeff(int cls) const { return c_[cls]; }
  void add_class(int cls, i64 v) { c_[cls] = mod_reduce(c_[cls] + v, modulus()); }
  void add_element(Elem g, i64 v) { add_class(G_->classes().class_of[g], v); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](i64 v) { return v == 0; });
  }
  int valuation() const {
    int v = prec_;
    for (i64 x : c_) v = std::min(v, iwalab::valuation(x, prime(), prec_));
    return v;
  }
  bool is_divisible(int r) const { return valuation() >= r; }

  friend TraceElement operator+(const TraceElement& a, const TraceElement& b) { return a.combine(b, 1); }
  friend TraceElement operator-(const TraceElement& a, const TraceElement& b) { return a.combine(b, -1); }
  TraceElement operator-() const { return scaled(-1); }
  TraceElement scaled(i64 k) const {
    TraceElement r = *this;
    i64 mod = modulus();
    for (auto& v : r.c_) v = mul_mod(v, mod_reduce(k, mod), mod);
    return r;
  }
  TraceElement reduced(int p) const {
    TraceElement r = *this;
    r.prec_ = std::min(p, prec_);
    for (auto& v : r.c_) v = mod_reduce(v, r.modulus());
    return r;
  }
  TraceElement lifted(int p) const {
    TraceElement r = *this;
    r.prec_ = std::max(p, prec_);
    return r;
  }
  TraceElement exact_div_l(int r) const {
    if (prec_ - r < 1) raise(ErrorCode::PrecisionExhausted, "dividing by l^" + std::to_string(r) + " at precision " + std::to_string(prec_));
    if (!is_divisible(r)) raise(ErrorCode::NotDivisible, "trace element not divisible by l^" + std::to_string(r));
    TraceElement out = *this;
    i64 d = ipow(prime(), r);
    for (auto& v : out.c_) v /= d;
    out.prec_ = prec_ - r;
    return out;
  }
  TraceElement mul_l_pow(int r) const {
    TraceElement out = *this;
    out.prec_ = prec_ + r;
    i64 d = ipow(prime(), r), mod = out.modulus();
    for (auto& v : out.c_) v = mul_mod(v, d, mod);
    return out;
  }

  friend bool operator==(const TraceElement& a, const TraceElement& b) {
    return a.G_.get() == b.G_.get() && a.prec_ == b.prec_ && a.c_ == b.c_;
  }
  friend bool equal_at(const TraceElement& a, const TraceElement& b, int p) {
    i64 mod = ipow(a.prime(), p);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (mod_reduce(a.c_[i] - b.c_[i], mod) != 0) return false;
    return true;
  }

  /// Phi: tau(g) -> tau(g^l); well defined on classes.
  TraceElement frobenius() const {
    TraceElement r(G_, prec_);
    const auto& cls = G_->classes();
    for (int k = 0; k < cls.count(); ++k)
      if (c_[k]) r.add_element(G_->pow(cls.reps[k], prime()), c_[k]);
    return r;
  }

  friend std::ostream& operator<<(std::ostream& os, const TraceElement& x) {
    bool first = true;
    const auto& cls = x.G_->classes();
    for (int k = 0; k < cls.count(); ++k) {
      if (!x.c_[k]) continue;
      os << (first ? "" : " + ") << x.c_[k] << "*tau(" << x.G_->label(cls.reps[k]) << ")";
      first = false;
    }
    if (first) os << "0";
    return os << " mod " << x.prime() << "^" << x.prec_;
  }

private:
  TraceElement combine(const TraceElement& b, int sign) const {
    TraceElement r = *this;
    r.prec_ = std::min(prec_, b.prec_);
    i64 mod = r.modulus();
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mod_reduce(c_[i] + sign * b.c_[i], mod);
    return r;
  }

  std::shared_ptr<const LGroup> G_;
  int prec_ = 1;
  std::vector<i64> c_;
};

/// The canonical projection onto the trace quotient.
inline TraceElement tau(const GroupRingElement& x) {
  TraceElement t(x.group_ptr(), x.prec());
  for (Elem g = 0; g < x.group().order(); ++g)
    if (x.coeff(g)) t.add_element(g, x.coeff(g));
  return t;
}

/// Lifts a trace element to R[G] through the class representatives.
inline GroupRingElement lift_to_ring(const TraceElement& t) {
  GroupRingElement x(t.group_ptr(), t.prec());
  const auto& cls = t.group().classes();
  for (int k = 0; k < cls.count(); ++k) x.set(cls.reps[k], t.coeff(k));
  return x;
}

/// Uniform random element: each coefficient is nonzero with probability 1/2 and
/// then uniform in Z/l^prec.
inline GroupRingElement random_element(const std::shared_ptr<const LGroup>& G, int prec, std::mt19937_64& rng) {
  GroupRingElement x(G, prec);
  const auto mod = static_cast<std::uint64_t>(x.modulus());
  for (Elem g = 0; g < G->order(); ++g)
    if (rng() % 2) x.set(g, static_cast<i64>(rng() % mod));
  return x;
}

/// Random unit: a random element with its identity coefficient adjusted so
/// the augmentation is a unit.
inline GroupRingElement random_unit(const std::shared_ptr<const LGroup>& G, int prec, std::mt19937_64& rng) {
  GroupRingElement x = random_element(G, prec, rng);
  if (x.residue() == 0) x.add(0, 1 + static_cast<i64>(rng() % static_cast<std::uint64_t>(G->prime() - 1)));
  return x;
}

} // namespace iwalab
