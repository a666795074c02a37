#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iwalab/arith.hpp"

namespace iwalab {

/// Outcome of a membership query against a ZmodSpan.
struct Membership {
  bool member = false;
  /// member: x = sum coefficients[i] * generator[i] (mod l^N)
  std::vector<i64> coefficients;
  /// non-member: w with <w, generator> = 0 for every generator and <w, x> != 0
  std::vector<i64> functional;
  /// first coordinate at which reduction failed (non-member)
  int failing_coordinate = -1;
};

/// Submodule of (Z/l^N)^dim spanned by a list of generators, kept in Howell
/// form: one pivot per coordinate with pivot value l^v, plus the saturation
/// rows l^(N-v) * row. Membership is decided by forward reduction.
class ZmodSpan {
public:
  ZmodSpan() = default;
  ZmodSpan(i64 l, int N, int dim, std::vector<std::vector<i64>> generators)
      : l_(l), N_(N), mod_(ipow(l, N)), dim_(dim), gens_(std::move(generators)) {
    build();
  }

  i64 prime() const { return l_; }
  int prec() const { return N_; }
  int dim() const { return dim_; }
  const std::vector<std::vector<i64>>& generators() const { return gens_; }

  /// log_l of the number of elements of the span.
  int length() const {
    int s = 0;
    for (auto& r : rows_) s += N_ - r.val;
    return s;
  }

  Membership contains(const std::vector<i64>& x) const {
    Membership out;
    std::vector<i64> res(dim_);
    for (int i = 0; i < dim_; ++i) res[i] = mod_reduce(x[i], mod_);
    std::vector<i64> combo(gens_.size(), 0);
    std::size_t ri = 0;
    for (int col = 0; col < dim_; ++col) {
      while (ri < rows_.size() && rows_[ri].pivot < col) ++ri;
      if (res[col] == 0) continue;
      if (ri >= rows_.size() || rows_[ri].pivot != col || valuation(res[col], l_, N_) < rows_[ri].val) {
        out.failing_coordinate = col;
        out.functional = separating_functional(res);
        return out;
      }
      const Row& r = rows_[ri];
      i64 q = res[col] / ipow(l_, r.val);
      for (int k = col; k < dim_; ++k) res[k] = mod_reduce(res[k] - mul_mod(q, r.v[k], mod_), mod_);
      for (std::size_t g = 0; g < combo.size(); ++g) combo[g] = mod_reduce(combo[g] + mul_mod(q, r.combo[g], mod_), mod_);
    }
    out.member = true;
    out.coefficients = std::move(combo);
    return out;
  }

  bool contains_all(const ZmodSpan& other) const {
    return std::all_of(other.gens_.begin(), other.gens_.end(), [&](auto& g) { return contains(g).member; });
  }

  /// Replays a positive certificate: sum coefficients[i] * generator[i].
  std::vector<i64> combine(const std::vector<i64>& coefficients) const {
    std::vector<i64> out(dim_, 0);
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      if (!coefficients[g]) continue;
      for (int k = 0; k < dim_; ++k) out[k] = mod_reduce(out[k] + mul_mod(coefficients[g], gens_[g][k], mod_), mod_);
    }
    return out;
  }

  i64 pair(const std::vector<i64>& w, const std::vector<i64>& x) const {
    i64 s = 0;
    for (int k = 0; k < dim_; ++k) s = mod_reduce(s + mul_mod(mod_reduce(w[k], mod_), mod_reduce(x[k], mod_), mod_), mod_);
    return s;
  }

  /// Generators of the annihilator {w : <w, g> = 0 for all generators g}.
  std::vector<std::vector<i64>> annihilator() const {
    // Howell form of [G^T | I]: rows with zero left block carry the annihilator.
    const int k = static_cast<int>(gens_.size());
    std::vector<std::vector<i64>> aug(dim_, std::vector<i64>(k + dim_, 0));
    for (int i = 0; i < dim_; ++i) {
      for (int g = 0; g < k; ++g) aug[i][g] = mod_reduce(gens_[g][i], mod_);
      aug[i][k + i] = 1;
    }
    ZmodSpan h(l_, N_, k + dim_, std::move(aug));
    std::vector<std::vector<i64>> ann;
    for (auto& r : h.rows_)
      if (r.pivot >= k) ann.emplace_back(r.v.begin() + k, r.v.end());
    return ann;
  }

private:
  struct Row {
    std::vector<i64> v;
    std::vector<i64> combo;
    int pivot = 0;
    int val = 0;
  };

  void build() {
    std::vector<Row> active;
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      Row r;
      r.v.resize(dim_);
      for (int i = 0; i < dim_; ++i) r.v[i] = mod_reduce(gens_[g][i], mod_);
      r.combo.assign(gens_.size(), 0);
      r.combo[g] = 1;
      active.push_back(std::move(r));
    }
    for (int col = 0; col < dim_; ++col) {
      int best = -1, best_val = N_;
      for (std::size_t i = 0; i < active.size(); ++i) {
        int v = valuation(active[i].v[col], l_, N_);
        if (v < best_val) {
          best_val = v;
          best = static_cast<int>(i);
        }
      }
      if (best < 0) continue;
      Row p = std::move(active[best]);
      active.erase(active.begin() + best);
      i64 unit_inv = inv_mod(p.v[col] / ipow(l_, best_val), mod_);
      scale(p, unit_inv);
      i64 piv = ipow(l_, best_val);
      for (auto& r : active) {
        if (r.v[col] == 0) continue;
        i64 q = r.v[col] / piv;
        axpy(r, p, mod_reduce(-q, mod_));
      }
      if (best_val > 0) {
        Row s = p;
        scale(s, ipow(l_, N_ - best_val));
        if (std::any_of(s.v.begin(), s.v.end(), [](i64 v) { return v != 0; })) active.push_back(std::move(s));
      }
      p.pivot = col;
      p.val = best_val;
      rows_.push_back(std::move(p));
    }
  }

  void scale(Row& r, i64 k) const {
    for (auto& v : r.v) v = mul_mod(v, k, mod_);
    for (auto& v : r.combo) v = mul_mod(v, k, mod_);
  }
  // r += k * p
  void axpy(Row& r, const Row& p, i64 k) const {
    for (int i = 0; i < dim_; ++i) r.v[i] = mod_reduce(r.v[i] + mul_mod(k, p.v[i], mod_), mod_);
    for (std::size_t i = 0; i < r.combo.size(); ++i) r.combo[i] = mod_reduce(r.combo[i] + mul_mod(k, p.combo[i], mod_), mod_);
  }

  std::vector<i64> separating_functional(const std::vector<i64>& x) const {
    for (auto& w : annihilator())
      if (pair(w, x) != 0) return w;
    return {};
  }

  i64 l_ = 3;
  int N_ = 1;
  i64 mod_ = 3;
  int dim_ = 0;
  std::vector<std::vector<i64>> gens_;
  std::vector<Row> rows_;
};

} // namespace iwalab
