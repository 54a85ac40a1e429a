// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON and CSV serialization for scenarios, plans, tables, and reports.
// Conventions: complex numbers serialize as [re, im] (plain numbers are
// accepted as purely real on input); matrices as arrays of rows; vectors as
// flat arrays. Parse errors throw SchemaError naming the offending field
// path. CSV floats carry 12 significant digits.

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "lgps/lg.hpp"
#include "lgps/matrix.hpp"
#include "lgps/process.hpp"
#include "lgps/scenarios.hpp"
#include "lgps/structure.hpp"

namespace lgps::io {

using json = nlohmann::json;

// "%.12g"-style formatting used for all CSV numbers.
std::string format_significant(double value, int digits = 12);

json complex_to_json(Complex z);
Complex complex_from_json(const json& j, const std::string& field);
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, const std::string& field);
json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const json& j, const std::string& field);

// Scenario file contents. Either the explicit schema
//   {"dim_system", "dim_env", "rho0_system", "rho0_env",
//    "evolutions": [matrices] | {"hamiltonian": matrix, "durations": [reals]},
//    "plan": [...], "bases": {...}}
// or the two-qubit shorthand
//   {"two_qubit_model": {"omega", "tau1", "tau2",
//                        "rho0": {"a", "b", "c_re", "c_im"}, "k"},
//    "measurement_theta": real, ...}
// where measurement_theta selects the model's standard plan. Plan entries are
// {"basis": [vectors], "values": [reals]} or the string "unmeasured".
struct ScenarioFile {
  process::Scenario scenario;
  std::optional<process::MeasurementPlan> plan;
  std::optional<structure::Bases> bases;
  // Present when the file used the shorthand block.
  std::optional<scenarios::TwoQubitModel> model;
  // Raw angle when the plan came from measurement_theta, so callers that
  // change model.k can re-expand the plan to match.
  std::optional<double> measurement_theta;
};

ScenarioFile scenario_file_from_json(const json& j);
// Serializes in the explicit schema (shorthand inputs are expanded), so
// parse -> serialize is idempotent after one pass.
json scenario_file_to_json(const ScenarioFile& f);

json scenario_to_json(const process::Scenario& s);
process::MeasurementPlan plan_from_json(const json& j,
                                        const std::string& field);
json plan_to_json(const process::MeasurementPlan& plan);
json bases_to_json(const structure::Bases& b);

scenarios::TwoQubitModel model_from_json(const json& j,
                                         const std::string& field);
json model_to_json(const scenarios::TwoQubitModel& m);

// {"axes": [{"time", "values"}...], "entries": [{"outcomes", "p"}...]} with
// outcomes given as the axes' numeric values.
json table_to_json(const lg::ProbabilityTable& t);
// Header x<t1>,x<t2>,...,p; one row per outcome tuple in table order.
std::string table_to_csv(const lg::ProbabilityTable& t);

json report_to_json(const lg::LGReport& r);
json classification_to_json(const structure::QCClassification& c);
json disturbance_to_json(const structure::DisturbanceReport& d);

// Process state export: matrix plus slot metadata.
json process_state_to_json(const process::ProcessState& ps);

// Throws SchemaError naming the path on missing file or invalid JSON.
json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace lgps::io
