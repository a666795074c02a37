#pragma once

#include <memory>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "iwalab/marking.hpp"
#include "iwalab/presentation.hpp"

namespace iwalab {

struct CatalogEntry {
  std::shared_ptr<const LGroup> group;
  SubgroupMarking marking; // the default marking
};

namespace detail {

inline std::string heisenberg_text(i64 l) {
  std::ostringstream s;
  s << "gen x order " << l << "\ngen y order " << l << "\ngen z order " << l << "\n"
    << "rel [x,y] = z\ncentral z\n";
  return s.str();
}

inline std::string modular_text(i64 l) {
  std::ostringstream s;
  s << "gen x order " << l * l << "\ngen y order " << l << "\n"
    << "rel x^y = x^" << 1 + l << "\n";
  return s.str();
}

inline std::string abelian_text(const std::vector<i64>& orders) {
  std::ostringstream s;
  for (std::size_t i = 0; i < orders.size(); ++i) s << "gen a" << i + 1 << " order " << orders[i] << "\n";
  for (std::size_t i = 0; i < orders.size(); ++i)
    for (std::size_t j = i + 1; j < orders.size(); ++j) s << "rel [a" << i + 1 << ",a" << j + 1 << "] = 1\n";
  return s.str();
}

/// Z/l wr Z/l: top generator t permuting base generators b0..b_{l-1} cyclically.
inline std::string wreath_text(i64 l) {
  std::ostringstream s;
  s << "gen t order " << l << "\n";
  for (i64 i = 0; i < l; ++i) s << "gen b" << i << " order " << l << "\n";
  for (i64 i = 0; i < l; ++i) {
    s << "rel b" << i << "^t = b" << (i + 1) % l << "\n";
    for (i64 j = i + 1; j < l; ++j) s << "rel [b" << i << ",b" << j << "] = 1\n";
  }
  return s.str();
}

inline std::vector<i64> parse_int_list(const std::string& s) {
  std::vector<i64> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      raise(ErrorCode::UnknownName, "bad integer '" + item + "'");
    }
  }
  return out;
}

} // namespace detail

/// Names understood by catalog_group, for help texts.
inline std::vector<std::string> catalog_names() {
  return {"heisenberg", "modular_l3", "abelian(m1,...,mk)", "elem_abelian(k)", "wreath"};
}

/// Builds a named catalog group with its default marking.
inline CatalogEntry catalog_group(const std::string& spec, i64 l, int M = 2) {
  std::smatch m;
  static const std::regex re(R"(^\s*([a-z_0-9]+)\s*(?:\(\s*([0-9,\s]*)\s*\))?\s*$)");
  if (!std::regex_match(spec, m, re)) raise(ErrorCode::UnknownName, "unknown group '" + spec + "'");
  const std::string base = m[1];
  const std::string args = m[2];
  auto with_l = [&](const std::string& n) { return n + "(" + std::to_string(l) + ")"; };

  std::shared_ptr<LGroup> G;
  std::vector<std::string> gprime_gens;
  std::string a_name;
  if (base == "heisenberg") {
    G = std::make_shared<LGroup>(build_group(detail::heisenberg_text(l), l, with_l("heisenberg")));
    gprime_gens = {"y", "z"};
    a_name = "x";
  } else if (base == "modular_l3") {
    G = std::make_shared<LGroup>(build_group(detail::modular_text(l), l, with_l("modular_l3")));
    gprime_gens = {"x"};
    a_name = "y";
  } else if (base == "wreath") {
    G = std::make_shared<LGroup>(build_group(detail::wreath_text(l), l, with_l("wreath")));
    for (i64 i = 0; i < l; ++i) gprime_gens.push_back("b" + std::to_string(i));
    a_name = "t";
  } else if (base == "abelian" || base == "elem_abelian") {
    std::vector<i64> orders;
    if (base == "abelian") {
      orders = detail::parse_int_list(args);
    } else {
      auto k = detail::parse_int_list(args);
      if (k.size() != 1 || k[0] < 1) raise(ErrorCode::UnknownName, "elem_abelian needs a rank");
      orders.assign(k[0], l);
    }
    if (orders.empty()) raise(ErrorCode::UnknownName, "abelian needs at least one order");
    std::string n = base + "(";
    for (std::size_t i = 0; i < orders.size(); ++i) n += (i ? "," : "") + std::to_string(orders[i]);
    G = std::make_shared<LGroup>(build_group(detail::abelian_text(orders), l, n + ")"));
    // G' = <a1^l, a2, ..., ak>; a = a1
    for (std::size_t i = 1; i < orders.size(); ++i) gprime_gens.push_back("a" + std::to_string(i + 1));
    gprime_gens.push_back("a1^" + std::to_string(l));
    a_name = "a1";
  } else {
    raise(ErrorCode::UnknownName, "unknown group '" + spec + "'");
  }
  if (!args.empty() && base != "abelian" && base != "elem_abelian") raise(ErrorCode::UnknownName, base + " takes no arguments");

  auto find = [&](const std::string& label) {
    // labels are normal forms like "x", "a1^3"; a1^l of a Z/l factor is the identity
    for (Elem g = 0; g < G->order(); ++g)
      if (G->label(g) == label) return g;
    return Elem{0};
  };
  std::vector<Elem> gens;
  for (auto& n : gprime_gens) gens.push_back(find(n));
  std::shared_ptr<const LGroup> cg = G;
  CatalogEntry e{cg, make_marking(cg, gens, M, find(a_name))};
  return e;
}

/// A named catalog group or, if `spec` names a readable file, a presentation file.
inline std::shared_ptr<const LGroup> load_group(const std::string& spec, i64 l) {
  std::ifstream probe(spec);
  if (probe) return std::make_shared<LGroup>(build_group(read_text_file(spec), l, spec));
  return catalog_group(spec, l).group;
}

} // namespace iwalab
