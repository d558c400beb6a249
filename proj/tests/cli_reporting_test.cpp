#include "semilocal/cli_reporting.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace semilocal;

namespace {

Scenario quick(const std::string& id) {
  Scenario s = example_scenario(id);
  s.schedule.levels = 6;
  s.schedule.samples = 32;
  s.schedule.seed = 17;
  return s;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("semilocal_cli_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string expect_error(const std::string& text) {
  try {
    parse_scenario(text, "doc");
  } catch (const ScenarioError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no error for " << text;
  return {};
}

}  // namespace

TEST(Scenario, RoundTripsThroughJson) {
  for (const auto& id : fixture_ids()) {
    Scenario s = example_scenario(id);
    s.schedule.seed = 123456789012345ULL;
    s.schedule.r0 = 0.1 + 1e-17;
    s.out_dir = "somewhere";
    EXPECT_EQ(parse_scenario(serialize(s)), s) << id;
  }
}

TEST(Scenario, RoundTripRunMatchesInMemoryRun) {
  const Scenario s = quick("lcp");
  const RunReport a = run_scenario(s);
  const RunReport b = run_scenario(parse_scenario(serialize(s)));
  EXPECT_EQ(report_to_json(a, false), report_to_json(b, false));
}

TEST(Scenario, ShippedFilesMatchBuiltInExamples) {
  for (const auto& id : fixture_ids()) {
    const auto path = std::filesystem::path(SEMILOCAL_SOURCE_DIR) / "scenarios" / (id + ".json");
    EXPECT_EQ(load_scenario(path.string()), example_scenario(id)) << id;
  }
}

TEST(Scenario, ValidationNamesTheField) {
  Scenario s = example_scenario("lp_optimal");
  s.nominal = {1.0, 1.0};
  std::string msg = expect_error(serialize(s));
  EXPECT_NE(msg.find("'nominal'"), std::string::npos) << msg;

  msg = expect_error(R"({"schema_version": 1, "id": "x", "family": {"kind": "lcp", "n": 1, "bogus": 2}, "nominal": [1, 1]})");
  EXPECT_NE(msg.find("family.bogus"), std::string::npos) << msg;

  msg = expect_error(R"({"schema_version": 1, "id": "x", "family": {"kind": "lcp", "n": "one"}, "nominal": [1, 1]})");
  EXPECT_NE(msg.find("family.n"), std::string::npos) << msg;

  msg = expect_error(R"({"schema_version": 2, "id": "x", "family": {"kind": "lcp", "n": 1}, "nominal": [1, 1]})");
  EXPECT_NE(msg.find("schema_version"), std::string::npos) << msg;

  msg = expect_error(R"({"schema_version": 1, "id": "x", "family": {"kind": "lcp", "n": 1}, "nominal": [1, 1],
                         "analyses": [{"kind": "exact_qp"}]})");
  EXPECT_NE(msg.find("analyses[0].kind"), std::string::npos) << msg;

  msg = expect_error(R"({"schema_version": 1, "id": "x", "family": {"kind": "lcp", "n": 1}, "nominal": [1, 1],
                         "analyses": [{"kind": "calmness", "x": [1, 2]}]})");
  EXPECT_NE(msg.find("analyses[0].x"), std::string::npos) << msg;

  msg = expect_error("{\n  \"schema_version\": 1,\n  \"id\": \"x\"\n  \"family\": {}\n}");
  EXPECT_NE(msg.find("doc:4:"), std::string::npos) << msg;
}

TEST(Scenario, ErrorExitCodes) {
  try {
    parse_scenario("{}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.exit_code(), 2);
  }
  try {
    load_scenario("/nonexistent/file.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.exit_code(), 3);
  }
  Scenario s = quick("lcp");
  s.nominal = {-1.0, -1.0};  // no LCP solution
  try {
    run_scenario(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.exit_code(), 4);
  }
}

TEST(Reports, EveryAnalysisAppearsOnceInOrder) {
  Scenario s = quick("lcp");
  s.analyses = {analysis("lipusc"), analysis("calmness", {1.0}), analysis("sup_calmness"), analysis("hypotheses"),
                analysis("verify_equality")};
  const RunReport r = run_scenario(s);
  ASSERT_EQ(r.results.size(), s.analyses.size());
  const Json j = report_to_json(r);
  for (std::size_t i = 0; i < s.analyses.size(); ++i) EXPECT_EQ(j["results"][i]["analysis"], s.analyses[i].kind);
  EXPECT_EQ(j["seed"], 17u);
  EXPECT_TRUE(j.contains("version"));
}

TEST(Reports, NumbersRoundTripLosslessly) {
  const RunReport r = run_scenario(quick("lp_optimal"));
  const Json j = Json::parse(report_to_json(r).dump());
  const auto& per = r.results[0].equality->lipusc.per_radius;
  for (std::size_t k = 0; k < per.size(); ++k) {
    EXPECT_EQ(j["results"][0]["equality"]["lipusc"]["per_radius"][k]["worst_quotient"].get<double>(), per[k].worst);
  }
}

TEST(Reports, ExactQpReportListsCertificates) {
  Scenario s;
  s.id = "qp";
  s.family.kind = "qp_optimal_canonical";
  s.family.Q = {{1.0}};
  s.family.A = {{1.0}};
  s.nominal = {-2.0, 1.0};
  s.analyses = {analysis("exact_qp")};
  const RunReport r = run_scenario(s);
  ASSERT_TRUE(r.results[0].qp.has_value());
  EXPECT_NEAR(r.results[0].qp->value, 1.0, 1e-9);
  const Json j = report_to_json(r);
  EXPECT_EQ(j["results"][0]["exact_qp"]["certificates"].size(), 1u);
}

TEST(Traces, DeterministicBytes) {
  const Scenario s = quick("sip");
  const auto a = trace_tables(run_scenario(s));
  const auto b = trace_tables(run_scenario(s));
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  Scenario t = s;
  t.schedule.threads = 2;
  EXPECT_EQ(trace_tables(run_scenario(t)), a);
}

TEST(Traces, HeaderAndDecreasingRadius) {
  const RunReport r = run_scenario(quick("counterexample_sqrt"));
  const auto dir = scratch("traces");
  const auto paths = emit_traces(r, dir.string());
  ASSERT_EQ(paths.size(), 2u);
  std::ifstream in(paths[0]);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "radius,worst_quotient,witness_param_packed,witness_x");
  double prev = kInf, first_q = -1, last_q = -1;
  int rows = 0;
  while (std::getline(in, line)) {
    const double radius = std::stod(line.substr(0, line.find(',')));
    const double q = std::stod(line.substr(line.find(',') + 1));
    EXPECT_LT(radius, prev);
    prev = radius;
    if (first_q < 0) first_q = q;
    last_q = q;
    ++rows;
  }
  EXPECT_EQ(rows, 6);
  EXPECT_GE(last_q, 4.0 * first_q);
  std::filesystem::remove_all(dir);
}

TEST(Traces, EmptyAnalysisListWritesNothing) {
  Scenario s = quick("lcp");
  s.analyses.clear();
  const auto dir = scratch("empty");
  EXPECT_TRUE(write_outputs(run_scenario(s), dir.string()).empty());
  EXPECT_FALSE(std::filesystem::exists(dir));
}

TEST(Traces, UnwritableDirectoryIsAnIoError) {
  const RunReport r = run_scenario(quick("lcp"));
  EXPECT_THROW(emit_traces(r, "/proc/semilocal_not_writable"), IoError);
}

TEST(Reproduce, AllExamplesPass) {
  for (const auto& id : fixture_ids()) {
    const ReproduceResult res = reproduce_example(id);
    EXPECT_TRUE(res.all_pass()) << format_table(id, res.rows);
  }
}

TEST(Reproduce, MismatchesAreFailRows) {
  ScheduleSpec tiny;
  tiny.levels = 1;
  tiny.window = 2;
  const ReproduceResult res = reproduce_example("lcp", tiny);
  EXPECT_FALSE(res.rows.empty());
  EXPECT_FALSE(res.all_pass());
  const ReproduceResult unknown = reproduce_example("nope");
  ASSERT_EQ(unknown.rows.size(), 1u);
  EXPECT_FALSE(unknown.rows[0].pass);
}

TEST(Schema, ListsEveryFamilyAndAnalysis) {
  const Json s = scenario_schema();
  EXPECT_EQ(s["properties"]["schema_version"]["const"], kScenarioSchemaVersion);
  EXPECT_EQ(s["properties"]["family"]["properties"]["kind"]["enum"].size(), kAllFamilyKinds.size());
  EXPECT_EQ(s["properties"]["analyses"]["items"]["properties"]["kind"]["enum"].size(), analysis_kinds().size());
}
