#pragma once

#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "iwalab/group.hpp"

namespace iwalab {

/// Default cap on group orders: l^6, and never more than this many elements.
inline constexpr int kHardElementCap = 4096;

inline i64 default_size_cap(i64 l) { return std::min<i64>(ipow(l, 6), kHardElementCap); }

/// Parsed presentation. Words are letter sequences: 2i is generator i, 2i+1 its inverse.
struct Presentation {
  using Word = std::vector<int>;

  i64 l = 3;
  std::string name = "presentation";
  std::vector<std::string> gen_names;
  std::vector<i64> gen_orders;
  std::vector<std::pair<Word, Word>> relations;
  std::vector<int> central;

  int generator(const std::string& n) const {
    for (std::size_t i = 0; i < gen_names.size(); ++i)
      if (gen_names[i] == n) return static_cast<int>(i);
    return -1;
  }

  static Word inverse(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (auto& x : r) x ^= 1;
    return r;
  }
  static Word power(const Word& w, i64 k) {
    Word base = k < 0 ? inverse(w) : w;
    Word r;
    for (i64 i = 0; i < (k < 0 ? -k : k); ++i) r.insert(r.end(), base.begin(), base.end());
    return r;
  }
  static Word concat(Word a, const Word& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  /// Relators (words equal to the identity) including generator orders and central hints.
  std::vector<Word> relators() const {
    std::vector<Word> out;
    for (std::size_t i = 0; i < gen_names.size(); ++i) out.push_back(power({2 * static_cast<int>(i)}, gen_orders[i]));
    for (auto& [lhs, rhs] : relations) out.push_back(concat(lhs, inverse(rhs)));
    for (int c : central)
      for (std::size_t i = 0; i < gen_names.size(); ++i)
        if (static_cast<int>(i) != c) {
          Word a{2 * c}, b{2 * static_cast<int>(i)};
          out.push_back(concat(concat(inverse(a), inverse(b)), concat(a, b)));
        }
    return out;
  }
};

namespace detail {

/// Recursive-descent parser for words over the declared generators:
///   word   := factor*            (juxtaposition or '*')
///   factor := atom ('^' (int | name))*
///   atom   := name | '1' | '(' word ')' | '[' word ',' word ']'
/// x^y means y^-1 x y; [a,b] means a^-1 b^-1 a b.
class WordParser {
public:
  WordParser(const Presentation& p, std::string text) : p_(p), s_(std::move(text)) {}

  Presentation::Word parse() {
    Presentation::Word w = word();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return w;
  }

private:
  void skip() {
    while (pos_ < s_.size() && (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '*')) ++pos_;
  }
  bool at(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!at(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    raise(ErrorCode::ParseError, why + " in word '" + s_ + "'");
  }

  std::string ident() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(b, pos_ - b);
  }

  Presentation::Word word() {
    Presentation::Word w;
    for (;;) {
      skip();
      if (pos_ >= s_.size() || s_[pos_] == ')' || s_[pos_] == ']' || s_[pos_] == ',') return w;
      w = Presentation::concat(std::move(w), factor());
    }
  }

  Presentation::Word factor() {
    Presentation::Word a = atom();
    while (at('^')) {
      ++pos_;
      skip();
      if (pos_ < s_.size() && (s_[pos_] == '-' || std::isdigit(static_cast<unsigned char>(s_[pos_])))) {
        std::size_t b = pos_;
        if (s_[pos_] == '-') ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string num = s_.substr(b, pos_ - b);
        if (num == "-") fail("missing exponent");
        a = Presentation::power(a, std::stoll(num));
      } else {
        Presentation::Word c = atom();
        a = Presentation::concat(Presentation::concat(Presentation::inverse(c), a), c);
      }
    }
    return a;
  }

  Presentation::Word atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Presentation::Word w = word();
      expect(')');
      return w;
    }
    if (c == '[') {
      ++pos_;
      Presentation::Word a = word();
      expect(',');
      Presentation::Word b = word();
      expect(']');
      return Presentation::concat(Presentation::concat(Presentation::inverse(a), Presentation::inverse(b)),
                                  Presentation::concat(a, b));
    }
    if (c == '1' && (pos_ + 1 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return {};
    }
    std::string name = ident();
    if (name.empty()) fail("expected a generator");
    int g = p_.generator(name);
    if (g < 0) fail("unknown generator '" + name + "'");
    return {2 * g};
  }

  const Presentation& p_;
  std::string s_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Parses the line format: `gen <name> order <k>`, `rel <word> = <word>`,
/// `central <name>`; `#` starts a comment.
inline Presentation parse_presentation(const std::string& text, i64 l, const std::string& name = "presentation") {
  Presentation p;
  p.l = l;
  p.name = name;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto where = " (line " + std::to_string(lineno) + ")";
    if (kw == "gen") {
      std::string g, ord_kw;
      i64 ord = 0;
      if (!(ls >> g >> ord_kw >> ord) || ord_kw != "order") raise(ErrorCode::ParseError, "expected 'gen <name> order <k>'" + where);
      if (p.generator(g) >= 0) raise(ErrorCode::ParseError, "duplicate generator '" + g + "'" + where);
      if (log_exact(ord, l) < 1) raise(ErrorCode::InconsistentPresentation, "generator '" + g + "' has order " + std::to_string(ord) + ", not a power of l" + where);
      p.gen_names.push_back(g);
      p.gen_orders.push_back(ord);
    } else if (kw == "rel") {
      std::string rest;
      std::getline(ls, rest);
      auto eq = rest.find('=');
      if (eq == std::string::npos) raise(ErrorCode::ParseError, "relation without '='" + where);
      auto lhs = detail::WordParser(p, rest.substr(0, eq)).parse();
      auto rhs = detail::WordParser(p, rest.substr(eq + 1)).parse();
      p.relations.emplace_back(std::move(lhs), std::move(rhs));
    } else if (kw == "central") {
      std::string g;
      if (!(ls >> g) || p.generator(g) < 0) raise(ErrorCode::ParseError, "central needs a declared generator" + where);
      p.central.push_back(p.generator(g));
    } else {
      raise(ErrorCode::ParseError, "unknown keyword '" + kw + "'" + where);
    }
  }
  if (p.gen_names.empty()) raise(ErrorCode::ParseError, "presentation declares no generators");
  return p;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) raise(ErrorCode::ConfigError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

namespace detail {

/// Hasse-Low-Todd-Coxeter coset enumeration over the trivial subgroup.
class CosetTable {
public:
  CosetTable(int ngens, std::vector<Presentation::Word> relators, int limit)
      : cols_(2 * ngens), rels_(std::move(relators)), limit_(limit) {
    new_coset();
  }

  /// Returns false when the coset limit was exceeded.
  bool run() {
    for (int c = 0; c < static_cast<int>(p_.size()); ++c) {
      if (!live(c)) continue;
      for (auto& r : rels_) {
        if (!scan_and_fill(c, r)) return false;
        if (!live(c)) break;
      }
      if (!live(c)) continue;
      for (int x = 0; x < cols_; ++x)
        if (entry(c, x) < 0 && !define(c, x)) return false;
    }
    return true;
  }

  /// Live cosets renumbered 0..n-1 in order; returns the compact action table.
  std::vector<std::vector<int>> compact() {
    std::vector<int> id(p_.size(), -1);
    int n = 0;
    for (std::size_t c = 0; c < p_.size(); ++c)
      if (live(static_cast<int>(c))) id[c] = n++;
    std::vector<std::vector<int>> out(n, std::vector<int>(cols_));
    for (std::size_t c = 0; c < p_.size(); ++c) {
      if (id[c] < 0) continue;
      for (int x = 0; x < cols_; ++x) {
        int t = entry(static_cast<int>(c), x);
        if (t < 0) raise(ErrorCode::InconsistentPresentation, "coset table is incomplete");
        out[id[c]][x] = id[rep(t)];
      }
    }
    return out;
  }

private:
  int& entry(int c, int x) { return table_[static_cast<std::size_t>(c) * cols_ + x]; }
  bool live(int c) const { return p_[c] == c; }

  int new_coset() {
    int c = static_cast<int>(p_.size());
    p_.push_back(c);
    table_.resize(table_.size() + cols_, -1);
    return c;
  }

  bool define(int c, int x) {
    if (static_cast<int>(p_.size()) >= limit_) return false;
    int d = new_coset();
    entry(c, x) = d;
    entry(d, x ^ 1) = c;
    return true;
  }

  bool scan_and_fill(int c, const Presentation::Word& w) {
    int f = c, b = c;
    int i = 0, j = static_cast<int>(w.size()) - 1;
    for (;;) {
      while (i <= j && entry(f, w[i]) >= 0) f = entry(f, w[i++]);
      if (i > j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j >= i && entry(b, w[j] ^ 1) >= 0) b = entry(b, w[j--] ^ 1);
      if (j < i) {
        coincidence(f, b);
        return true;
      }
      if (i == j) {
        entry(f, w[i]) = b;
        entry(b, w[i] ^ 1) = f;
        return true;
      }
      if (!define(f, w[i])) return false;
    }
  }

  int rep(int k) {
    int r = k;
    while (p_[r] != r) r = p_[r];
    while (p_[k] != r) {
      int n = p_[k];
      p_[k] = r;
      k = n;
    }
    return r;
  }

  void merge(int k, int l, std::vector<int>& q) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (k > l) std::swap(k, l);
    p_[l] = k;
    q.push_back(l);
  }

  void coincidence(int a, int b) {
    std::vector<int> q;
    merge(a, b, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
      int e = q[i];
      for (int x = 0; x < cols_; ++x) {
        int f = entry(e, x);
        if (f < 0) continue;
        entry(f, x ^ 1) = -1;
        int e1 = rep(e), f1 = rep(f);
        if (entry(e1, x) >= 0) merge(f1, entry(e1, x), q);
        else if (entry(f1, x ^ 1) >= 0) merge(e1, entry(f1, x ^ 1), q);
        else {
          entry(e1, x) = f1;
          entry(f1, x ^ 1) = e1;
        }
      }
    }
  }

  int cols_;
  std::vector<Presentation::Word> rels_;
  int limit_;
  std::vector<int> p_;
  std::vector<int> table_;
};

} // namespace detail

/// Builds the group defined by a presentation. Elements are the normal forms
/// g1^e1 ... gk^ek with 0 <= ei < order(gi), indexed in mixed radix, so the
/// presentation must be a consistent polycyclic one.
inline LGroup build_group(const Presentation& p, i64 cap = 0) {
  const i64 l = p.l;
  if (!is_prime(l) || l == 2) raise(ErrorCode::ConfigError, "l must be an odd prime");
  if (cap <= 0) cap = default_size_cap(l);
  const int k = static_cast<int>(p.gen_names.size());
  i64 declared = 1;
  for (i64 o : p.gen_orders) {
    declared *= o;
    if (declared > (i64{1} << 40)) break;
  }

  const int limit = static_cast<int>(std::min<i64>(std::max<i64>(64 * declared, 100000), 1500000));
  detail::CosetTable ct(k, p.relators(), limit);
  if (!ct.run()) {
    if (declared > cap) raise(ErrorCode::SizeCap, "declared generator orders allow up to " + std::to_string(declared) + " elements, cap is " + std::to_string(cap));
    raise(ErrorCode::InconsistentPresentation, "coset enumeration did not close within " + std::to_string(limit) + " cosets");
  }
  auto act = ct.compact();
  const i64 n = static_cast<i64>(act.size());
  if (log_exact(n, l) < 0) raise(ErrorCode::InconsistentPresentation, "relations force order " + std::to_string(n) + ", not a power of " + std::to_string(l));
  if (n > cap) raise(ErrorCode::SizeCap, "order " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  if (n != declared)
    raise(ErrorCode::InconsistentPresentation, "relations collapse the group to order " + std::to_string(n) + " (declared generator orders give " + std::to_string(declared) + ")");

  // normal form g1^e1 ... gk^ek -> coset, in mixed radix with g1 most significant
  std::vector<i64> radix(k);
  for (int i = 0; i < k; ++i) radix[i] = p.gen_orders[i];
  auto digits = [&](i64 idx) {
    std::vector<i64> e(k);
    for (int i = k - 1; i >= 0; --i) {
      e[i] = idx % radix[i];
      idx /= radix[i];
    }
    return e;
  };
  std::vector<int> coset_of(n), elem_of(n, -1);
  for (i64 idx = 0; idx < n; ++idx) {
    auto e = digits(idx);
    int c = 0;
    for (int i = 0; i < k; ++i)
      for (i64 t = 0; t < e[i]; ++t) c = act[c][2 * i];
    if (elem_of[c] >= 0) raise(ErrorCode::InconsistentPresentation, "normal forms are not unique");
    elem_of[c] = static_cast<int>(idx);
    coset_of[idx] = c;
  }

  // mult[i][j]: j = j' * g_t where t is the last generator with nonzero exponent
  std::vector<std::uint16_t> table(static_cast<std::size_t>(n) * n);
  std::vector<int> parent(n, 0), last_gen(n, 0);
  for (i64 j = 1; j < n; ++j) {
    auto e = digits(j);
    int t = k - 1;
    while (e[t] == 0) --t;
    i64 step = 1;
    for (int i = k - 1; i > t; --i) step *= radix[i];
    parent[j] = static_cast<int>(j - step);
    last_gen[j] = t;
  }
  for (i64 i = 0; i < n; ++i) {
    std::size_t row = static_cast<std::size_t>(i) * n;
    table[row] = static_cast<std::uint16_t>(i);
    for (i64 j = 1; j < n; ++j) {
      int prev = table[row + parent[j]];
      table[row + j] = static_cast<std::uint16_t>(elem_of[act[coset_of[prev]][2 * last_gen[j]]]);
    }
  }

  std::vector<std::string> labels(n);
  for (i64 idx = 0; idx < n; ++idx) {
    auto e = digits(idx);
    std::string s;
    for (int i = 0; i < k; ++i) {
      if (!e[i]) continue;
      if (!s.empty()) s += " ";
      s += p.gen_names[i];
      if (e[i] > 1) s += "^" + std::to_string(e[i]);
    }
    labels[idx] = s.empty() ? "1" : s;
  }
  std::vector<Elem> gens;
  for (int i = 0; i < k; ++i) {
    i64 step = 1;
    for (int t = k - 1; t > i; --t) step *= radix[t];
    gens.push_back(static_cast<Elem>(step));
  }
  return LGroup::from_table(l, p.name, static_cast<int>(n), std::move(table), std::move(labels), gens, p.gen_names);
}

inline LGroup build_group(const std::string& text, i64 l, const std::string& name = "presentation", i64 cap = 0) {
  return build_group(parse_presentation(text, l, name), cap);
}

} // namespace iwalab
