#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "iwalab/cyclo.hpp"
#include "iwalab/fraction.hpp"

namespace iwalab {

/// Parameters of the coefficient side: l, working precision N, cyclotomic
/// level m and the order l^M of the cyclic group standing in for Gamma_k.
struct RingSpec {
  i64 l = 3;
  int prec = 6;
  int m = 2;
  int M = 2;

  i64 gamma_order() const { return ipow(l, M); }
  i64 cyc_order() const { return ipow(l, m); }
};

/// Element of the group algebra (Z/l^prec)[zeta_{l^m}][Gamma], Gamma cyclic of
/// order l^M with generator gamma.
class GammaElt : public detail::FlatRingElt<GammaElt> {
  friend class detail::FlatRingElt<GammaElt>;

public:
  GammaElt() = default;
  GammaElt(i64 l, int m, int M, int prec) : FlatRingElt(ring_layout(l, m, M), prec) {}
  explicit GammaElt(const RingSpec& s) : GammaElt(s.l, s.m, s.M, s.prec) {}

  static GammaElt zero_like(const GammaElt& x, int prec) { return GammaElt(x.prime(), x.level(), x.gamma_log(), prec); }
  static GammaElt one_like(const GammaElt& x) { return group_like(x.spec_at(x.prec()), 0); }

  static GammaElt constant(const RingSpec& s, i64 v) {
    GammaElt r(s);
    r.set_raw(0, v);
    return r;
  }
  /// gamma^j
  static GammaElt group_like(const RingSpec& s, i64 j) {
    GammaElt r(s);
    r.set_raw(static_cast<int>(mod_reduce(j, s.gamma_order())) * r.lay_->phi, 1);
    return r;
  }
  /// c * gamma^j
  static GammaElt from_cyclo(const CycloScalar& c, int M, i64 j) {
    GammaElt r(c.prime(), c.level(), M, c.prec());
    int g = static_cast<int>(mod_reduce(j, r.lay_->gamma_n));
    for (int k = 0; k < r.lay_->phi; ++k) r.c_[g * r.lay_->phi + k] = c.coeff(k);
    return r;
  }

  int level() const { return lay_->m; }
  int gamma_log() const { return lay_->M; }
  i64 gamma_order() const { return lay_->gamma_n; }
  RingSpec spec_at(int prec) const { return RingSpec{lay_->l, prec, lay_->m, lay_->M}; }

  CycloScalar cyclo_part(i64 j) const {
    CycloScalar c(lay_->l, lay_->m, prec_);
    int g = static_cast<int>(mod_reduce(j, lay_->gamma_n));
    for (int k = 0; k < lay_->phi; ++k) c.set_raw(k, c_[g * lay_->phi + k]);
    return c;
  }

  /// Psi: the ring endomorphism gamma -> gamma^l, fixing coefficients.
  GammaElt psi() const {
    GammaElt out = zero_like(*this, prec_);
    const int phi = lay_->phi, gn = lay_->gamma_n;
    for (int g = 0; g < gn; ++g) {
      int t = static_cast<int>((g * lay_->l) % gn);
      for (int k = 0; k < phi; ++k) out.c_[t * phi + k] += c_[g * phi + k];
    }
    i64 mod = modulus();
    for (auto& v : out.c_) v = mod_reduce(v, mod);
    return out;
  }
  GammaElt psi_pow(int r) const {
    GammaElt out = *this;
    for (int i = 0; i < r; ++i) out = out.psi();
    return out;
  }

  /// rho^sharp for the character rho(gamma) = zeta_{l^M}^t of Gamma:
  /// gamma^j -> rho(gamma^j) gamma^j. Needs m >= M.
  GammaElt twist_sharp(i64 t) const {
    const RingLayout& L = *lay_;
    if (L.m < L.M) raise(ErrorCode::OutOfModel, "twisting needs cyclotomic level >= M");
    i64 step = ipow(L.l, L.m - L.M);
    GammaElt out = zero_like(*this, prec_);
    for (int g = 0; g < L.gamma_n; ++g) {
      CycloScalar block = cyclo_part(g).times_root(mod_reduce(t * g, L.gamma_n) * step);
      for (int k = 0; k < L.phi; ++k) out.c_[g * L.phi + k] = block.coeff(k);
    }
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const GammaElt& x) {
    bool first = true;
    for (int g = 0; g < x.lay_->gamma_n; ++g) {
      bool any = false;
      for (int k = 0; k < x.lay_->phi; ++k) any = any || x.c_[g * x.lay_->phi + k] != 0;
      if (!any) continue;
      os << (first ? "" : " + ") << "(";
      for (int k = 0; k < x.lay_->phi; ++k) os << (k ? " " : "") << x.c_[g * x.lay_->phi + k];
      os << ")g^" << g;
      first = false;
    }
    if (first) os << "0";
    return os << " mod " << x.prime() << "^" << x.prec();
  }
};

/// Elements of the fraction ring with l-power denominators.
using QGamma = Fraction<GammaElt>;

/// (1/l^s) log(x^(l^s)), extended to units of any residue; see unit_log.
inline QGamma plog(const GammaElt& x, int max_s = 12) { return unit_log(x, max_s); }

inline QGamma psi(const QGamma& x) {
  return x.map([](const GammaElt& g) { return g.psi(); });
}

} // namespace iwalab
