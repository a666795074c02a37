#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "iwalab/catalog.hpp"
#include "iwalab/congruence.hpp"
#include "iwalab/deflation.hpp"
#include "iwalab/restriction.hpp"

namespace iwalab {

using Json = nlohmann::ordered_json;

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"chars", "res", "diagrams", "lemma5", "lemma6", "twotwo", "resver", "pipeline"};
  return names;
}

/// Default catalog groups per prime; wreath is skipped when it exceeds the size cap.
inline std::vector<std::string> default_groups(i64 l) {
  std::vector<std::string> g{"heisenberg", "modular_l3"};
  const std::string L = std::to_string(l), L2 = std::to_string(l * l);
  g.push_back("abelian(" + L2 + ")");
  g.push_back("abelian(" + L2 + "," + L + ")");
  g.push_back("elem_abelian(2)");
  if (ipow(l, l + 1) <= default_size_cap(l)) g.push_back("wreath");
  return g;
}

struct SuiteConfig {
  i64 l = 3;
  int prec = 6;
  int M = 2;      // Gbar = Z/l^M
  int level = 2;  // cyclotomic level, raised to cover the group exponent
  std::vector<std::string> groups;  // empty: default catalog for l
  std::uint64_t seed = 42;
  std::vector<std::string> suites;
  std::string format = "json";
  int units = 100;  // random units per marking (diagrams, resver)
  int betas = 50;   // random beta' per marking (twotwo, pipeline)
  int workers = 0;  // 0: IWALAB_WORKERS or 1

  void validate() const {
    if (l < 3 || l % 2 == 0) raise(ErrorCode::ConfigError, "l must be an odd prime");
    for (i64 d = 3; d * d <= l; d += 2)
      if (l % d == 0) raise(ErrorCode::ConfigError, "l must be an odd prime");
    if (prec < 3) raise(ErrorCode::ConfigError, "precision N must be at least 3");
    if (M < 1) raise(ErrorCode::ConfigError, "gamma order must be l^M with M >= 1");
    if (level < 1) raise(ErrorCode::ConfigError, "cyclotomic level must be at least 1");
    if (units < 0 || betas < 0) raise(ErrorCode::ConfigError, "sample counts must be non-negative");
    if (format != "json" && format != "text") raise(ErrorCode::ConfigError, "format must be json or text");
    for (auto& s : suites)
      if (s != "all" && std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
        raise(ErrorCode::ConfigError, "unknown suite '" + s + "'");
  }

  std::vector<std::string> selected_suites() const {
    if (std::find(suites.begin(), suites.end(), "all") != suites.end()) return suite_names();
    std::vector<std::string> out;
    for (auto& s : suite_names())
      if (std::find(suites.begin(), suites.end(), s) != suites.end()) out.push_back(s);
    return out;
  }

  std::vector<std::string> selected_groups() const { return groups.empty() ? default_groups(l) : groups; }

  Json to_json() const {
    Json j;
    j["l"] = l;
    j["prec"] = prec;
    j["gamma_order"] = ipow(l, M);
    j["level"] = level;
    j["groups"] = selected_groups();
    j["seed"] = seed;
    j["suites"] = selected_suites();
    j["units"] = units;
    j["betas"] = betas;
    return j;
  }
};

enum class Status { Pass, Fail, Indeterminate };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Indeterminate: return "indeterminate";
  }
  return "?";
}

struct CheckRecord {
  std::string suite;
  std::string check;
  std::string group;
  std::size_t index = 0;
  std::string input;
  Status status = Status::Fail;
  /// certificate on pass, counterexample otherwise
  Json evidence = Json::object();
  int precision_used = 0;

  std::string key() const {
    std::ostringstream os;
    os << check << "|" << group << "|";
    os.width(6);
    os.fill('0');
    os << index;
    return os.str();
  }

  Json to_json() const {
    Json j;
    j["check"] = check;
    j["group"] = group;
    j["input"] = input;
    j["status"] = to_string(status);
    j[status == Status::Pass ? "certificate" : "counterexample"] = evidence;
    j["precision_used"] = precision_used;
    return j;
  }
};

struct Report {
  Json config;
  std::vector<CheckRecord> checks;
  int pass = 0, fail = 0, indeterminate = 0;

  int exit_code() const { return fail > 0 ? 1 : (indeterminate > 0 ? 2 : 0); }

  Json to_json() const {
    Json j;
    j["config"] = config;
    j["checks"] = Json::array();
    for (auto& c : checks) j["checks"].push_back(c.to_json());
    j["summary"] = Json{{"pass", pass}, {"fail", fail}, {"indeterminate", indeterminate}};
    return j;
  }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// Per-input generator, independent of scheduling.
inline std::mt19937_64 input_rng(std::uint64_t seed, const std::string& stream, const std::string& group, std::size_t index) {
  std::uint64_t h = fnv1a(stream + "|" + group + "|" + std::to_string(index), seed ^ 0x9e3779b97f4a7c15ULL);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

inline Json step_json(const LabStep& s) {
  Json j;
  j["step"] = s.name;
  j["ok"] = s.ok;
  if (!s.detail.empty()) j["detail"] = s.detail;
  j["precision"] = s.precision;
  if (s.has_certificate) {
    const auto& c = s.certificate;
    if (c.member) {
      Json terms = Json::array();
      for (auto& [label, v] : c.terms) terms.push_back(Json::array({label, v}));
      j["combination"] = terms;
    } else {
      Json f = Json::array();
      for (auto& [label, v] : c.functional) f.push_back(Json::array({label, v}));
      j["functional"] = f;
      j["failing_coordinate"] = c.failing_coordinate;
    }
  }
  return j;
}

inline void fill_from_lab(CheckRecord& r, const LabReport& lab) {
  if (lab.indeterminate) {
    r.status = Status::Indeterminate;
    r.evidence = Json{{"reason", lab.reason}};
    return;
  }
  r.status = lab.ok() ? Status::Pass : Status::Fail;
  Json steps = Json::array();
  int p = 0;
  for (auto& s : lab.steps) {
    steps.push_back(step_json(s));
    if (s.precision > 0) p = p == 0 ? s.precision : std::min(p, s.precision);
  }
  r.evidence = Json{{"steps", steps}};
  r.precision_used = p;
}

inline std::string element_json(const GroupRingElement& x) {
  Json j = Json::object();
  for (Elem g = 0; g < x.group().order(); ++g)
    if (x.coeff(g)) j[std::to_string(g)] = x.coeff(g);
  return j.dump();
}

/// Lazily built per-group data shared by the checks of one run.
struct GroupContext {
  std::string name;
  CatalogEntry entry;
  std::unique_ptr<MarkedTables> tables;
  std::unique_ptr<Deflation> ab;
  std::unique_ptr<PipelineContext> pipeline;
  std::unique_ptr<IdealSpan> l_trace, trace_T, aug_b;

  const SubgroupMarking& mk() const { return entry.marking; }
};

inline int level_for(const SuiteConfig& c, const LGroup& G) {
  int m = std::max(c.level, c.M);
  while (ipow(c.l, m) < G.exponent()) ++m;
  return m;
}

inline CatalogEntry load_entry(const std::string& name, const SuiteConfig& c) {
  std::ifstream probe(name);
  if (!probe) return catalog_group(name, c.l, c.M);
  auto G = load_group(name, c.l);
  auto mks = find_abelian_index_l(G, c.M);
  if (mks.empty()) raise(ErrorCode::OutOfModel, name + " has no abelian subgroup of index l");
  return CatalogEntry{G, mks.front()};
}

using Task = std::function<CheckRecord()>;

/// Runs a check body; mathematical failures become records, PrecisionExhausted
/// becomes indeterminate.
template <class F>
CheckRecord guarded_record(CheckRecord base, F&& body) {
  try {
    body(base);
  } catch (const Error& e) {
    base.status = e.code() == ErrorCode::PrecisionExhausted ? Status::Indeterminate : Status::Fail;
    base.evidence = Json{{"error", to_string(e.code())}, {"message", e.what()}};
  }
  return base;
}

inline std::string comparison_detail(const PathComparison& p) {
  return p.errored() ? p.error : (p.equal ? "equal" : "differ");
}

inline void add_chars_tasks(std::vector<Task>& tasks, GroupContext& gc, const SuiteConfig&) {
  const MarkedTables* mt = gc.tables.get();
  const std::string group = gc.name;
  tasks.push_back([=] {
    return guarded_record(CheckRecord{"chars", "char_table", group, 0, "irreducibles of G and G'"}, [&](CheckRecord& r) {
      bool ok = true;
      Json bad = Json::array();
      for (auto* t : {mt->G.get(), mt->Gp.get()}) {
        if (t->count() != t->group().classes().count()) {
          ok = false;
          bad.push_back("count != class count for " + t->group().name());
        }
        for (int i = 0; i < t->count(); ++i)
          for (int j = 0; j < t->count(); ++j)
            if (t->inner(t->values(i), t->values(j)) != (i == j ? 1 : 0)) {
              ok = false;
              bad.push_back(t->group().name() + ": <" + std::to_string(i) + "," + std::to_string(j) + "> wrong");
            }
      }
      r.status = ok ? Status::Pass : Status::Fail;
      r.evidence = ok ? Json{{"irreducibles_G", mt->G->count()}, {"irreducibles_Gp", mt->Gp->count()}} : Json{{"failures", bad}};
    });
  });
  tasks.push_back([=] {
    return guarded_record(CheckRecord{"chars", "defect_closed_form", group, 0, "every linear chi' of G'"}, [&](CheckRecord& r) {
      int linear = 0;
      Json bad = Json::array();
      for (int j = 0; j < mt->Gp->count(); ++j) {
        if (!mt->Gp->is_linear(j)) continue;
        ++linear;
        if (MarkedTables::defect_fn(*mt, mt->Gp->values(j)) != mt->defect_closed_form(mt->Gp->values(j))) bad.push_back(j);
      }
      r.status = bad.empty() ? Status::Pass : Status::Fail;
      r.evidence = bad.empty() ? Json{{"linear_characters", linear}} : Json{{"mismatched_characters", bad}};
    });
  });
  tasks.push_back([=] {
    return guarded_record(CheckRecord{"chars", "defect_adams", group, 0, "psi_l of defect characters"}, [&](CheckRecord& r) {
      const i64 l = mt->G->prime();
      const bool exp_l = mt->G->group().exponent() == l;
      const bool abelian = mt->G->group().is_abelian();
      bool vanish = true, witness = false;
      for (int j = 0; j < mt->Gp->count(); ++j) {
        ClassFn chi = MarkedTables::defect_fn(*mt, mt->Gp->values(j));
        witness = witness || std::any_of(chi.begin(), chi.end(), [](const CycloInt& v) { return !v.is_zero(); });
        if (exp_l)
          for (auto& v : mt->G->adams(chi, l)) vanish = vanish && v.is_zero();
      }
      bool ok = (!exp_l || vanish) && (abelian || witness);
      r.status = ok ? Status::Pass : Status::Fail;
      r.evidence = Json{{"exponent_l", exp_l}, {"psi_vanishes", exp_l ? Json(vanish) : Json("n/a")}, {"noncommutation_witness", witness}};
    });
  });
}

/// res_trace(tau g) against a direct evaluation of the closed formula, and
/// Tr'(res_trace tau g) = Res(Tr tau g) on every irreducible of G'.
inline void add_res_tasks(std::vector<Task>& tasks, GroupContext& gc, const SuiteConfig& cfg) {
  const MarkedTables* mt = gc.tables.get();
  const std::string group = gc.name;
  const auto& cls = mt->mk.G().classes();
  const int N = cfg.prec;
  const int M = cfg.M;
  for (int k = 0; k < cls.count(); ++k) {
    tasks.push_back([=] {
      const SubgroupMarking& mk = mt->mk;
      const LGroup& G = mk.G();
      Elem g = G.classes().reps[k];
      return guarded_record(CheckRecord{"res", "trace_restriction", group, static_cast<std::size_t>(k), "class of " + G.label(g)}, [&](CheckRecord& r) {
        auto t = TraceElement::of_element(mk.group, N, g);
        TraceElement got = res_trace(t, mk);
        TraceElement closed(mk.Gp_ptr(), N);
        if (mk.contains(g)) {
          for (int i = 0; i < mk.index(); ++i) {
            Elem ai = G.pow(mk.a, i);
            closed.add_element(mk.sub.from_parent[G.mul(G.mul(G.inv(ai), g), ai)], 1);
          }
        } else {
          Elem p = 0;
          for (int i = 0; i < mk.prime(); ++i) p = G.mul(p, g);
          closed.add_element(mk.sub.from_parent[p], 1);
        }
        auto lhs = tr_hom(got, mt->Gp, pi_on_gprime(mk), M);
        auto rhs = res_hom(tr_hom(t, mt->G, mk.pi, M), *mt);
        int p = std::min(lhs.abs_prec(), rhs.abs_prec());
        bool dual = p >= 1 && hom_equal_at(lhs, rhs, p);
        r.precision_used = p;
        r.status = got == closed && dual ? Status::Pass : Status::Fail;
        std::ostringstream os;
        os << got;
        r.evidence = Json{{"res_trace", os.str()}, {"closed_form", got == closed}, {"dual_route", dual}, {"irreducibles", mt->Gp->count()}};
      });
    });
  }
}

inline void add_diagram_tasks(std::vector<Task>& tasks, GroupContext& gc, const SuiteConfig& cfg) {
  const MarkedTables* mt = gc.tables.get();
  const std::string group = gc.name;
  for (int i = 0; i < cfg.units; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    tasks.push_back([=] {
      auto rng = input_rng(cfg.seed, "unit", group, idx);
      auto u = random_unit(mt->mk.group, cfg.prec, rng);
      return guarded_record(CheckRecord{"diagrams", "hd_square", group, idx, element_json(u)}, [&](CheckRecord& r) {
        SquareReport sq = check_hd_square(u, *mt, cfg.M);
        Json paths = Json::array();
        bool indeterminate = false;
        for (auto& p : sq.paths) {
          paths.push_back(Json{{"path", p.name}, {"result", comparison_detail(p)}, {"precision", p.precision}});
          indeterminate = indeterminate || (p.errored() && p.code == ErrorCode::PrecisionExhausted);
        }
        r.precision_used = sq.precision();
        bool prec_ok = r.precision_used >= cfg.prec - 2;
        r.status = sq.ok() && prec_ok ? Status::Pass : (indeterminate ? Status::Indeterminate : Status::Fail);
        r.evidence = Json{{"paths", paths}, {"truncation_r0", sq.truncation.r0}, {"required_precision", cfg.prec - 2}};
      });
    });
    tasks.push_back([=] {
      auto rng = input_rng(cfg.seed, "unit", group, idx);
      auto u = random_unit(mt->mk.group, cfg.prec, rng);
      return guarded_record(CheckRecord{"diagrams", "hom_axioms", group, idx, element_json(u)}, [&](CheckRecord& r) {
        HomElement det = det_hom(u, mt->G, mt->mk.pi, cfg.M);
        HomAxiomReport ax = hom_axioms(det);
        r.precision_used = det.abs_prec();
        r.status = ax.ok() ? Status::Pass : Status::Fail;
        r.evidence = Json{{"galois", ax.galois}, {"twist", ax.twist}, {"integrality", ax.integral}};
      });
    });
  }
}

inline void add_lab_tasks(std::vector<Task>& tasks, GroupContext& gc, const SuiteConfig& cfg, const std::string& suite) {
  GroupContext* g = &gc;
  const std::string group = gc.name;
  const int N = cfg.prec;
  if (suite == "lemma5") {
    tasks.push_back([=] {
      return guarded_record(CheckRecord{suite, "trace_image", group, 0, "marking"}, [&](CheckRecord& r) { fill_from_lab(r, check_trace_ideal_image(g->mk(), N)); });
    });
  } else if (suite == "lemma6") {
    for (Elem h = 0; h < g->mk().Gp().order(); ++h)
      tasks.push_back([=] {
        return guarded_record(CheckRecord{suite, "trace_power", group, static_cast<std::size_t>(h), "g' = " + g->mk().Gp().label(h)},
                              [&](CheckRecord& r) { fill_from_lab(r, check_trace_power_congruence(h, g->mk(), N, g->l_trace.get())); });
      });
  } else if (suite == "twotwo" || suite == "pipeline") {
    for (int i = 0; i < cfg.betas; ++i) {
      const std::size_t idx = static_cast<std::size_t>(i);
      tasks.push_back([=] {
        auto rng = input_rng(cfg.seed, "beta", group, idx);
        const PipelineContext& ctx = *g->pipeline;
        BetaPrime b = random_beta(ctx.trace_bprime, ctx.ext.copies, N, rng);
        std::string input = "beta' = " + describe(b, g->mk());
        if (suite == "twotwo")
          return guarded_record(CheckRecord{suite, "power_congruence", group, idx, input},
                                [&](CheckRecord& r) { fill_from_lab(r, check_power_congruence(b, g->mk(), ctx.ext, ctx.l_trace)); });
        return guarded_record(CheckRecord{suite, "log_pipeline", group, idx, "y' = 1 + tr_A(" + input.substr(8) + ")"},
                              [&](CheckRecord& r) { fill_from_lab(r, check_log_pipeline(pipeline_unit(b, ctx.ext), ctx)); });
      });
    }
  } else if (suite == "resver") {
    for (int i = 0; i < cfg.units; ++i) {
      const std::size_t idx = static_cast<std::size_t>(i);
      tasks.push_back([=] {
        auto rng = input_rng(cfg.seed, "unit", group, idx);
        auto u = random_unit(g->mk().group, N, rng);
        return guarded_record(CheckRecord{suite, "res_ver", group, idx, element_json(u)},
                              [&](CheckRecord& r) { fill_from_lab(r, check_res_ver(u, g->mk(), *g->ab, *g->trace_T, g->aug_b.get())); });
      });
    }
  }
}

inline int worker_count(const SuiteConfig& c) {
  if (c.workers > 0) return c.workers;
  if (const char* env = std::getenv("IWALAB_WORKERS")) {
    try {
      int w = std::stoi(env);
      if (w > 0) return w;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

} // namespace detail

/// Executes the selected suites over the selected markings. Mathematical
/// failures and errors become check records; only ConfigError is thrown.
inline Report run_suite(const SuiteConfig& config) {
  config.validate();
  Report rep;
  rep.config = config.to_json();
  const auto suites = config.selected_suites();
  if (suites.empty()) return rep;

  auto has = [&](std::initializer_list<const char*> names) {
    return std::any_of(names.begin(), names.end(), [&](const char* n) { return std::find(suites.begin(), suites.end(), n) != suites.end(); });
  };
  std::vector<std::unique_ptr<detail::GroupContext>> contexts;
  std::vector<detail::Task> tasks;
  for (auto& name : config.selected_groups()) {
    auto gc = std::make_unique<detail::GroupContext>();
    gc->name = name;
    try {
      gc->entry = detail::load_entry(name, config);
      gc->name = gc->entry.group->name();
      const auto& mk = gc->mk();
      if (has({"chars", "res", "diagrams"})) gc->tables = std::make_unique<MarkedTables>(MarkedTables::build(mk, detail::level_for(config, mk.G())));
      if (has({"lemma6"})) gc->l_trace = std::make_unique<IdealSpan>(IdealKind::LTrace, mk, config.prec);
      if (has({"twotwo", "pipeline"})) gc->pipeline = std::make_unique<PipelineContext>(mk, config.prec);
      if (has({"resver"})) {
        gc->ab = std::make_unique<Deflation>(abelianization(mk.group));
        gc->trace_T = std::make_unique<IdealSpan>(IdealKind::TraceT, mk, config.prec);
        gc->aug_b = std::make_unique<IdealSpan>(IdealKind::AugBPrime, mk, config.prec);
      }
    } catch (const Error& e) {
      CheckRecord r{"setup", "group_setup", name, 0, name};
      r.status = Status::Fail;
      r.evidence = Json{{"error", to_string(e.code())}, {"message", e.what()}};
      rep.checks.push_back(std::move(r));
      continue;
    }
    for (auto& s : suites) {
      if (s == "chars") detail::add_chars_tasks(tasks, *gc, config);
      else if (s == "res") detail::add_res_tasks(tasks, *gc, config);
      else if (s == "diagrams") detail::add_diagram_tasks(tasks, *gc, config);
      else detail::add_lab_tasks(tasks, *gc, config, s);
    }
    contexts.push_back(std::move(gc));
  }

  std::vector<CheckRecord> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) results[i] = tasks[i]();
  };
  const int w = std::min<int>(detail::worker_count(config), static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  if (w <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < w; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& r : results) rep.checks.push_back(std::move(r));
  std::sort(rep.checks.begin(), rep.checks.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.key() < b.key(); });
  for (auto& c : rep.checks) {
    if (c.status == Status::Pass) ++rep.pass;
    else if (c.status == Status::Fail) ++rep.fail;
    else ++rep.indeterminate;
  }
  return rep;
}

inline std::string emit_report(const Report& rep, const std::string& format) {
  if (format == "json") return rep.to_json().dump(2) + "\n";
  if (format != "text") raise(ErrorCode::ConfigError, "format must be json or text");
  std::ostringstream os;
  std::vector<std::string> order = suite_names();
  order.insert(order.begin(), "setup");
  for (auto& s : order) {
    bool header = false;
    for (auto& c : rep.checks) {
      if (c.suite != s) continue;
      if (!header) {
        os << "== " << s << "\n";
        header = true;
      }
      os << "  " << to_string(c.status) << "  " << c.check << "  " << c.group << "  #" << c.index;
      if (c.precision_used) os << "  prec " << c.precision_used;
      os << "\n";
      if (c.status != Status::Pass) os << "      " << c.evidence.dump() << "\n";
    }
  }
  os << "summary: " << rep.pass << " pass, " << rep.fail << " fail, " << rep.indeterminate << " indeterminate\n";
  return os.str();
}

} // namespace iwalab
