#include <gtest/gtest.h>

#include <cstdlib>

#include "iwalab/harness.hpp"

using namespace iwalab;

namespace {

SuiteConfig small_config() {
  SuiteConfig c;
  c.prec = 4;
  c.units = 3;
  c.betas = 3;
  c.groups = {"heisenberg", "abelian(9)"};
  c.suites = {"all"};
  return c;
}

} // namespace

TEST(SuiteConfig, RejectsBadValues) {
  SuiteConfig c;
  c.prec = 2;
  EXPECT_THROW(run_suite(c), Error);
  try {
    c.validate();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
  }
  c = SuiteConfig{};
  c.M = 0;
  EXPECT_THROW(c.validate(), Error);
  c = SuiteConfig{};
  c.l = 9;
  EXPECT_THROW(c.validate(), Error);
  c = SuiteConfig{};
  c.l = 2;
  EXPECT_THROW(c.validate(), Error);
  c = SuiteConfig{};
  c.suites = {"nonsense"};
  EXPECT_THROW(c.validate(), Error);
  c = SuiteConfig{};
  c.format = "xml";
  EXPECT_THROW(c.validate(), Error);
  EXPECT_NO_THROW(SuiteConfig{}.validate());
}

TEST(SuiteConfig, SuiteSelection) {
  SuiteConfig c;
  c.suites = {"pipeline", "chars"};
  EXPECT_EQ(c.selected_suites(), (std::vector<std::string>{"chars", "pipeline"}));
  c.suites = {"all"};
  EXPECT_EQ(c.selected_suites(), suite_names());
  EXPECT_EQ(default_groups(3).back(), "wreath");
  const auto five = default_groups(5);
  EXPECT_EQ(std::count(five.begin(), five.end(), "wreath"), 0);
}

TEST(RunSuite, EmptySuiteListPasses) {
  SuiteConfig c;
  Report r = run_suite(c);
  EXPECT_TRUE(r.checks.empty());
  EXPECT_EQ(r.exit_code(), 0);
  Json j = r.to_json();
  EXPECT_EQ(j["summary"]["pass"], 0);
  EXPECT_TRUE(j["checks"].empty());
}

TEST(RunSuite, TracePowerSuiteOnHeisenberg) {
  SuiteConfig c;
  c.prec = 4;
  c.groups = {"heisenberg"};
  c.suites = {"lemma6"};
  Report r = run_suite(c);
  EXPECT_GE(r.checks.size(), 9u);
  EXPECT_EQ(r.pass, static_cast<int>(r.checks.size()));
  EXPECT_EQ(r.exit_code(), 0);
  for (auto& ch : r.checks) {
    EXPECT_EQ(ch.check, "trace_power");
    EXPECT_TRUE(ch.to_json().contains("certificate"));
  }
}

TEST(RunSuite, AllSuitesSmallConfig) {
  Report r = run_suite(small_config());
  EXPECT_EQ(r.fail, 0);
  EXPECT_EQ(r.indeterminate, 0);
  std::set<std::string> suites;
  for (auto& ch : r.checks) suites.insert(ch.suite);
  EXPECT_EQ(suites.size(), suite_names().size());
}

TEST(RunSuite, DeterministicAcrossRunsAndWorkers) {
  SuiteConfig c = small_config();
  c.workers = 1;
  std::string a = emit_report(run_suite(c), "json");
  std::string b = emit_report(run_suite(c), "json");
  c.workers = 3;
  std::string d = emit_report(run_suite(c), "json");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, d);
  c.seed = 7;
  EXPECT_NE(a, emit_report(run_suite(c), "json"));
}

TEST(RunSuite, UnknownGroupBecomesFailRecord) {
  SuiteConfig c;
  c.groups = {"no_such_group"};
  c.suites = {"chars"};
  Report r = run_suite(c);
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_EQ(r.checks[0].check, "group_setup");
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(RunSuite, ExitCodesFollowSummary) {
  Report r;
  EXPECT_EQ(r.exit_code(), 0);
  r.indeterminate = 1;
  EXPECT_EQ(r.exit_code(), 2);
  r.fail = 1;
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(EmitReport, JsonShape) {
  SuiteConfig c;
  c.groups = {"heisenberg"};
  c.suites = {"lemma5"};
  Json j = Json::parse(emit_report(run_suite(c), "json"));
  ASSERT_EQ(j["checks"].size(), 1u);
  auto& ch = j["checks"][0];
  for (auto key : {"check", "group", "input", "status", "certificate", "precision_used"}) EXPECT_TRUE(ch.contains(key)) << key;
  EXPECT_EQ(ch["status"], "pass");
  EXPECT_EQ(j["config"]["gamma_order"], 9);
}

TEST(EmitReport, TextFormat) {
  SuiteConfig c;
  c.groups = {"heisenberg"};
  c.suites = {"lemma5", "chars"};
  std::string t = emit_report(run_suite(c), "text");
  EXPECT_NE(t.find("== chars"), std::string::npos);
  EXPECT_NE(t.find("== lemma5"), std::string::npos);
  EXPECT_LT(t.find("== chars"), t.find("== lemma5"));
  EXPECT_NE(t.find("summary: 4 pass, 0 fail, 0 indeterminate"), std::string::npos);
  EXPECT_THROW(emit_report(Report{}, "yaml"), Error);
}
