// SPDX-License-Identifier: Apache-2.0
#include "lgps/io.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <string>
#include <vector>

#include "lgps/errors.hpp"
#include "lgps/process.hpp"
#include "lgps/scenarios.hpp"
#include "lgps/structure.hpp"
#include "test_util.hpp"

namespace lgps::io {
namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(FormatSignificant, TwelveDigitsByDefault) {
  EXPECT_EQ(format_significant(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_significant(1.5), "1.5");
  EXPECT_EQ(format_significant(0.0), "0");
  EXPECT_EQ(format_significant(-2.0), "-2");
  EXPECT_EQ(format_significant(1e-30), "1e-30");
  EXPECT_EQ(format_significant(1.0 / 3.0, 3), "0.333");
}

TEST(ComplexJson, AcceptsNumberAndPair) {
  EXPECT_EQ(complex_from_json(json(2.5), "z"), Complex(2.5, 0.0));
  EXPECT_EQ(complex_from_json(json::array({1.0, -2.0}), "z"),
            Complex(1.0, -2.0));
  EXPECT_EQ(complex_to_json(Complex(0.5, 0.25)), json::array({0.5, 0.25}));

  EXPECT_THROW(complex_from_json(json("nope"), "z"), SchemaError);
  EXPECT_THROW(complex_from_json(json::array({1.0, 2.0, 3.0}), "z"),
               SchemaError);
  const std::string msg = message_of(
      [] { complex_from_json(json(true), "rho0_system[0][1]"); });
  EXPECT_NE(msg.find("rho0_system[0][1]"), std::string::npos);
}

TEST(MatrixJson, RoundTripIsExact) {
  auto rng = lgps::test::make_rng(100);
  const ComplexMatrix m = lgps::test::ginibre(3, 3, rng);
  const ComplexMatrix back = matrix_from_json(matrix_to_json(m), "m");
  EXPECT_EQ((m - back).cwiseAbs().maxCoeff(), 0.0);

  // Through text: dumping uses enough digits to reparse exactly.
  const json reparsed = json::parse(matrix_to_json(m).dump());
  const ComplexMatrix back2 = matrix_from_json(reparsed, "m");
  EXPECT_EQ((m - back2).cwiseAbs().maxCoeff(), 0.0);
}

TEST(MatrixJson, NamesOffendingRow) {
  json j = json::array();
  j.push_back(json::array({json::array({1.0, 0.0}), json::array({0.0, 0.0})}));
  j.push_back(json::array({json::array({0.0, 0.0})}));
  const std::string msg =
      message_of([&] { matrix_from_json(j, "rho0_system"); });
  EXPECT_NE(msg.find("rho0_system[1]"), std::string::npos);
  EXPECT_NE(msg.find("ragged"), std::string::npos);

  EXPECT_THROW(matrix_from_json(json::array(), "m"), SchemaError);
  EXPECT_THROW(matrix_from_json(json(42), "m"), SchemaError);
}

TEST(PlanJson, ParsesInstrumentsAndUnmeasured) {
  json plan = json::array();
  plan.push_back(json{
      {"basis", json::array({json::array({json::array({1.0, 0.0}), 0.0}),
                             json::array({0.0, json::array({1.0, 0.0})})})},
      {"values", json::array({1.0, -1.0})}});
  plan.push_back("unmeasured");

  const process::MeasurementPlan parsed = plan_from_json(plan, "plan");
  ASSERT_EQ(parsed.size(), 2u);
  const auto* p = std::get_if<process::Projective>(&parsed[0]);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->basis[0](0), Complex(1.0, 0.0));
  EXPECT_EQ(p->values[1], -1.0);
  EXPECT_TRUE(std::holds_alternative<process::Unmeasured>(parsed[1]));

  // Round trip through the serializer.
  const process::MeasurementPlan again =
      plan_from_json(plan_to_json(parsed), "plan");
  ASSERT_EQ(again.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<process::Unmeasured>(again[1]));
}

TEST(PlanJson, RejectsMalformedEntries) {
  EXPECT_THROW(plan_from_json(json{{"basis", json::array()}}, "plan"),
               SchemaError);
  EXPECT_THROW(plan_from_json(json::array({"measured"}), "plan"), SchemaError);

  json bad_values = json::array();
  bad_values.push_back(json{
      {"basis", json::array({json::array({1.0, 0.0}),
                             json::array({0.0, 1.0})})},
      {"values", json::array({1.0})}});
  const std::string msg =
      message_of([&] { plan_from_json(bad_values, "plan"); });
  EXPECT_NE(msg.find("plan[0].values"), std::string::npos);
}

json explicit_scenario_json() {
  json j;
  j["dim_system"] = 2;
  j["dim_env"] = 1;
  j["rho0_system"] = json::array(
      {json::array({0.3, 0.0}), json::array({0.0, 0.7})});
  j["rho0_env"] = json::array({json::array({1.0})});
  j["evolutions"] = json::array(
      {json::array({json::array({0.0, 1.0}), json::array({1.0, 0.0})}),
       json::array({json::array({1.0, 0.0}),
                    json::array({0.0, json::array({0.0, 1.0})})})});
  return j;
}

TEST(ScenarioFileJson, ExplicitSchemaRoundTripIsIdempotent) {
  json j = explicit_scenario_json();
  j["plan"] = json::array(
      {json{{"basis", json::array({json::array({1.0, 0.0}),
                                   json::array({0.0, 1.0})})},
            {"values", json::array({1.0, -1.0})}},
       "unmeasured",
       json{{"basis", json::array({json::array({1.0, 0.0}),
                                   json::array({0.0, 1.0})})},
            {"values", json::array({1.0, -1.0})}}});

  const ScenarioFile f = scenario_file_from_json(j);
  EXPECT_EQ(f.scenario.dim_system, 2);
  EXPECT_EQ(f.scenario.dim_env, 1);
  EXPECT_EQ(f.scenario.n_times(), 3);
  ASSERT_TRUE(f.plan.has_value());
  EXPECT_FALSE(f.model.has_value());

  const json once = scenario_file_to_json(f);
  const json twice = scenario_file_to_json(scenario_file_from_json(once));
  EXPECT_EQ(once, twice);
}

TEST(ScenarioFileJson, HamiltonianFormMatchesExplicitUnitaries) {
  json j = explicit_scenario_json();
  j["dim_env"] = 2;
  j["rho0_env"] = json::array(
      {json::array({0.5, 0.5}), json::array({0.5, 0.5})});
  j["evolutions"] = json{
      {"hamiltonian",
       json::array({json::array({0.0, 0.0, 0.0, 0.0}),
                    json::array({0.0, 0.0, 1.0, 0.0}),
                    json::array({0.0, 1.0, 0.0, 0.0}),
                    json::array({0.0, 0.0, 0.0, 0.0})})},
      {"durations", json::array({0.7, 1.3})}};
  const ScenarioFile f = scenario_file_from_json(j);

  scenarios::TwoQubitModel m;
  m.omega = 1.0;
  m.tau1 = 0.7;
  m.tau2 = 1.3;
  m.rho0 = {0.3, 0.7, 0.0};
  const process::Scenario direct = scenarios::build_two_qubit_scenario(m);
  ASSERT_EQ(f.scenario.unitaries.size(), direct.unitaries.size());
  for (std::size_t u = 0; u < direct.unitaries.size(); ++u) {
    EXPECT_LT((f.scenario.unitaries[u] - direct.unitaries[u])
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }

  json bad = j;
  bad["evolutions"]["hamiltonian"][0][1] = 5.0;  // not Hermitian
  const std::string msg =
      message_of([&] { scenario_file_from_json(bad); });
  EXPECT_NE(msg.find("evolutions.hamiltonian"), std::string::npos);
}

TEST(ScenarioFileJson, ShorthandExpandsModelAndPlan) {
  json j;
  j["two_qubit_model"] = {
      {"omega", 1.0},
      {"tau1", 1.5 * 3.14159265358979323846},
      {"tau2", 1.5 * 3.14159265358979323846},
      {"rho0", {{"a", 0.5}, {"b", 0.5}, {"c_re", 0.1}, {"c_im", -0.2}}},
      {"k", 1}};
  j["measurement_theta"] = 0.5;

  const ScenarioFile f = scenario_file_from_json(j);
  ASSERT_TRUE(f.model.has_value());
  EXPECT_EQ(f.model->k, 1);
  EXPECT_EQ(f.model->rho0.c, Complex(0.1, -0.2));
  EXPECT_EQ(f.scenario.dim_env, 2);
  ASSERT_TRUE(f.plan.has_value());
  ASSERT_EQ(f.plan->size(), 3u);
  const auto& edge = std::get<process::Projective>((*f.plan)[0]);
  EXPECT_LT((edge.basis[0] - scenarios::rotated_basis(0.5).vectors[0]).norm(),
            1e-15);

  // Serialization expands to the explicit schema.
  const json out = scenario_file_to_json(f);
  EXPECT_TRUE(out.contains("dim_system"));
  EXPECT_FALSE(out.contains("two_qubit_model"));
  EXPECT_EQ(out, scenario_file_to_json(scenario_file_from_json(out)));
}

TEST(ScenarioFileJson, ShorthandDefaultsAndValidation) {
  json model = {{"omega", 1.0},
                {"tau1", 0.0},
                {"tau2", 0.0},
                {"rho0", {{"a", 0.4}, {"b", 0.6}}}};
  const scenarios::TwoQubitModel m = model_from_json(model, "two_qubit_model");
  EXPECT_EQ(m.rho0.c, Complex(0.0, 0.0));
  EXPECT_EQ(m.k, 1);

  json bad = model;
  bad["rho0"]["a"] = 0.9;
  const std::string msg =
      message_of([&] { model_from_json(bad, "two_qubit_model"); });
  EXPECT_NE(msg.find("rho0"), std::string::npos);
}

TEST(ScenarioFileJson, RejectsConflictingForms) {
  json j;
  j["two_qubit_model"] = {{"omega", 1.0},
                          {"tau1", 0.0},
                          {"tau2", 0.0},
                          {"rho0", {{"a", 0.5}, {"b", 0.5}}}};
  j["dim_system"] = 2;
  EXPECT_THROW(scenario_file_from_json(j), SchemaError);

  json j2;
  j2["two_qubit_model"] = j["two_qubit_model"];
  j2["measurement_theta"] = 0.5;
  j2["plan"] = json::array({"unmeasured", "unmeasured", "unmeasured"});
  EXPECT_THROW(scenario_file_from_json(j2), SchemaError);

  // Out-of-range angle surfaces as a schema problem, not an internal one.
  json j3;
  j3["two_qubit_model"] = j["two_qubit_model"];
  j3["measurement_theta"] = 4.0;
  EXPECT_THROW(scenario_file_from_json(j3), SchemaError);

  // measurement_theta only means something for the shorthand.
  json j4 = explicit_scenario_json();
  j4["measurement_theta"] = 0.5;
  const std::string msg = message_of([&] { scenario_file_from_json(j4); });
  EXPECT_NE(msg.find("measurement_theta"), std::string::npos) << msg;
}

TEST(ScenarioFileJson, RecordsShorthandMeasurementTheta) {
  json j;
  j["two_qubit_model"] = {{"omega", 1.0},
                          {"tau1", 0.4},
                          {"tau2", 0.4},
                          {"rho0", {{"a", 0.5}, {"b", 0.5}}}};
  j["measurement_theta"] = 0.25;
  const ScenarioFile f = scenario_file_from_json(j);
  ASSERT_TRUE(f.measurement_theta.has_value());
  EXPECT_DOUBLE_EQ(*f.measurement_theta, 0.25);
  EXPECT_FALSE(scenario_file_from_json(explicit_scenario_json())
                   .measurement_theta.has_value());
}

TEST(ScenarioFileJson, WrapsPlanValidation) {
  json j = explicit_scenario_json();
  j["plan"] = json::array({"unmeasured", "unmeasured"});
  const std::string msg = message_of([&] { scenario_file_from_json(j); });
  EXPECT_EQ(msg.rfind("plan: ", 0), 0u) << msg;
}

TEST(ScenarioFileJson, ParsesBases) {
  json j = explicit_scenario_json();
  j["bases"] = {
      {"basis1", json::array({json::array({1.0, 0.0}),
                              json::array({0.0, 1.0})})},
      {"basis2", json::array({json::array({1.0, 0.0}),
                              json::array({0.0, 1.0})})}};
  const ScenarioFile f = scenario_file_from_json(j);
  ASSERT_TRUE(f.bases.has_value());
  EXPECT_EQ(f.bases->basis1.size(), 2u);

  json missing = explicit_scenario_json();
  missing["bases"] = {{"basis1", json::array({json::array({1.0, 0.0}),
                                              json::array({0.0, 1.0})})}};
  const std::string msg =
      message_of([&] { scenario_file_from_json(missing); });
  EXPECT_NE(msg.find("bases.basis2"), std::string::npos);
}

lg::ProbabilityTable sample_table() {
  lg::ProbabilityTable t;
  t.axes = {{1, {1.0, -1.0}}, {3, {1.0, -1.0}}};
  t.probabilities = {0.1, 0.2, 0.3, 0.4};
  return t;
}

TEST(TableJson, AxesAndEntries) {
  const json j = table_to_json(sample_table());
  ASSERT_EQ(j.at("axes").size(), 2u);
  EXPECT_EQ(j.at("axes")[0].at("time"), 1);
  EXPECT_EQ(j.at("axes")[1].at("time"), 3);
  ASSERT_EQ(j.at("entries").size(), 4u);
  EXPECT_EQ(j.at("entries")[2].at("outcomes"), json::array({-1.0, 1.0}));
  EXPECT_EQ(j.at("entries")[2].at("p"), 0.3);
}

TEST(TableCsv, ExactLayout) {
  EXPECT_EQ(table_to_csv(sample_table()),
            "x1,x3,p\n"
            "1,1,0.1\n"
            "1,-1,0.2\n"
            "-1,1,0.3\n"
            "-1,-1,0.4\n");
}

TEST(ReportJson, ExactKeys) {
  lg::LGReport r;
  r.c12 = 0.25;
  r.c23 = -0.5;
  r.c13 = 0.125;
  r.k3 = -0.375;
  r.lg_satisfied = true;
  r.correction_terms = {0.01, -0.02};
  r.deviation_norm = 0.3;
  const json j = report_to_json(r);
  const std::vector<std::string> keys{"C12",          "C23",
                                      "C13",          "K3",
                                      "lg_satisfied", "correction_terms",
                                      "deviation_norm"};
  EXPECT_EQ(j.size(), keys.size());
  for (const auto& k : keys) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j.at("K3"), -0.375);
  EXPECT_EQ(j.at("correction_terms"), json::array({0.01, -0.02}));
}

TEST(ClassificationJson, FormStringsAndResiduals) {
  structure::QCClassification c;
  c.residual_1a = 1e-14;
  c.residual_1b = 0.5;
  c.residual_2a = 2e-14;
  c.residual_2b = 0.25;
  c.holds_1a = true;
  c.holds_2a = true;
  c.qc_form = {{structure::Condition::C1A, structure::Condition::C2A}};
  c.markov_product_residual = 0.125;
  ComplexVector e0(2), e1(2);
  e0 << 1.0, 0.0;
  e1 << 0.0, 1.0;
  c.bases = {{e0, e1}, {e0, e1}};
  c.tol = 1e-9;

  const json j = classification_to_json(c);
  EXPECT_EQ(j.at("qc_form"), json::array({"1A+2A"}));
  EXPECT_EQ(j.at("residual_1B"), 0.5);
  EXPECT_TRUE(j.at("holds_1A").get<bool>());
  EXPECT_FALSE(j.at("holds_1B").get<bool>());
  EXPECT_EQ(j.at("markov_product_residual"), 0.125);
  EXPECT_EQ(j.at("tol"), 1e-9);
  EXPECT_TRUE(j.contains("bases"));
}

TEST(DisturbanceJson, AllFields) {
  structure::DisturbanceReport d;
  d.applicable = true;
  d.markov_product_residual = 1e-13;
  d.rho0_residual = 0.0;
  d.rho0_diagonal = true;
  d.step_residual = 0.2;
  d.step_diagonal = false;
  const json j = disturbance_to_json(d);
  EXPECT_TRUE(j.at("applicable").get<bool>());
  EXPECT_FALSE(j.at("step_diagonal").get<bool>());
  EXPECT_EQ(j.at("step_residual"), 0.2);
}

TEST(ProcessStateJson, SlotsAndMatrix) {
  ComplexMatrix rho0 = ComplexMatrix::Zero(2, 2);
  rho0(0, 0) = 0.5;
  rho0(1, 1) = 0.5;
  const process::ProcessState ps = process::markov_product_state(
      {opstate::max_entangled_link(2)}, rho0);
  const json j = process_state_to_json(ps);
  EXPECT_EQ(j.at("n_times"), 2);
  EXPECT_EQ(j.at("dim"), 2);
  ASSERT_EQ(j.at("slots").size(), 3u);
  EXPECT_EQ(j.at("slots")[0].at("label"), "S1");
  EXPECT_EQ(j.at("slots")[1].at("label"), "A1");
  EXPECT_EQ(j.at("slots")[2].at("label"), "S2");
  const ComplexMatrix back = matrix_from_json(j.at("matrix"), "matrix");
  EXPECT_EQ((back - ps.matrix()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(JsonFiles, LoadAndWriteRoundTrip) {
  const std::string dir = ::testing::TempDir();
  const std::string path = dir + "lgps_io_test.json";
  write_text_file(path, "{\"x\": 1}\n");
  const json j = load_json_file(path);
  EXPECT_EQ(j.at("x"), 1);

  EXPECT_THROW(load_json_file(dir + "lgps_io_test_missing.json"), SchemaError);

  const std::string bad = dir + "lgps_io_test_bad.json";
  write_text_file(bad, "{not json");
  EXPECT_THROW(load_json_file(bad), SchemaError);

  EXPECT_THROW(write_text_file("/nonexistent-dir/lgps/x.json", "x"),
               UsageError);
}

}  // namespace
}  // namespace lgps::io
