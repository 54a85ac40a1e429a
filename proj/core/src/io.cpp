// SPDX-License-Identifier: Apache-2.0
#include "lgps/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>
#include <variant>

#include "lgps/errors.hpp"

namespace lgps::io {

namespace {

const json& require_field(const json& j, const char* key,
                          const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(path.empty() ? std::string(key)
                                   : path + "." + key + ": missing field");
  }
  return j.at(key);
}

double require_number(const json& j, const std::string& field) {
  if (!j.is_number()) {
    throw SchemaError(field + ": expected a number");
  }
  return j.get<double>();
}

int require_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) {
    throw SchemaError(field + ": expected an integer");
  }
  return j.get<int>();
}

double optional_number(const json& j, const char* key,
                       const std::string& path, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return require_number(j.at(key), path + "." + key);
}

std::vector<double> reals_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw SchemaError(field + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(
        require_number(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json reals_to_json(const std::vector<double>& v) {
  return json(v);
}

}  // namespace

std::string format_significant(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return buf;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw SchemaError(field + ": expected a number or an [re, im] pair");
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(complex_to_json(m(r, c)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw SchemaError(field + ": expected a nonempty array of rows");
  }
  const std::size_t n_rows = j.size();
  std::size_t n_cols = 0;
  ComplexMatrix m;
  for (std::size_t r = 0; r < n_rows; ++r) {
    const json& row = j[r];
    const std::string row_path = field + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.empty()) {
      throw SchemaError(row_path + ": expected a nonempty row array");
    }
    if (r == 0) {
      n_cols = row.size();
      m.resize(static_cast<Eigen::Index>(n_rows),
               static_cast<Eigen::Index>(n_cols));
    } else if (row.size() != n_cols) {
      throw SchemaError(row_path + ": ragged matrix rows");
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from_json(row[c],
                            row_path + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(complex_to_json(v(i)));
  }
  return out;
}

ComplexVector vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw SchemaError(field + ": expected a nonempty array");
  }
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        complex_from_json(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

process::MeasurementPlan plan_from_json(const json& j,
                                        const std::string& field) {
  if (!j.is_array()) throw SchemaError(field + ": expected an array");
  process::MeasurementPlan plan;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string entry_path = field + "[" + std::to_string(t) + "]";
    const json& entry = j[t];
    if (entry.is_string()) {
      if (entry.get<std::string>() != "unmeasured") {
        throw SchemaError(entry_path + ": unknown instrument string");
      }
      plan.emplace_back(process::Unmeasured{});
      continue;
    }
    if (!entry.is_object()) {
      throw SchemaError(entry_path +
                        ": expected \"unmeasured\" or a basis object");
    }
    process::Projective p;
    const json& jbasis = require_field(entry, "basis", entry_path);
    if (!jbasis.is_array() || jbasis.empty()) {
      throw SchemaError(entry_path + ".basis: expected an array of vectors");
    }
    for (std::size_t x = 0; x < jbasis.size(); ++x) {
      p.basis.push_back(vector_from_json(
          jbasis[x], entry_path + ".basis[" + std::to_string(x) + "]"));
    }
    p.values =
        reals_from_json(require_field(entry, "values", entry_path),
                        entry_path + ".values");
    if (p.values.size() != p.basis.size()) {
      throw SchemaError(entry_path +
                        ".values: size does not match the basis");
    }
    plan.emplace_back(std::move(p));
  }
  return plan;
}

json plan_to_json(const process::MeasurementPlan& plan) {
  json out = json::array();
  for (const auto& ins : plan) {
    if (const auto* p = std::get_if<process::Projective>(&ins)) {
      json basis = json::array();
      for (const auto& v : p->basis) basis.push_back(vector_to_json(v));
      out.push_back(json{{"basis", std::move(basis)},
                         {"values", reals_to_json(p->values)}});
    } else {
      out.push_back("unmeasured");
    }
  }
  return out;
}

json bases_to_json(const structure::Bases& b) {
  json b1 = json::array();
  for (const auto& v : b.basis1) b1.push_back(vector_to_json(v));
  json b2 = json::array();
  for (const auto& v : b.basis2) b2.push_back(vector_to_json(v));
  return json{{"basis1", std::move(b1)}, {"basis2", std::move(b2)}};
}

namespace {

structure::Bases bases_from_json(const json& j, const std::string& field) {
  structure::Bases b;
  const json& j1 = require_field(j, "basis1", field);
  if (!j1.is_array()) throw SchemaError(field + ".basis1: expected an array");
  for (std::size_t i = 0; i < j1.size(); ++i) {
    b.basis1.push_back(vector_from_json(
        j1[i], field + ".basis1[" + std::to_string(i) + "]"));
  }
  const json& j2 = require_field(j, "basis2", field);
  if (!j2.is_array()) throw SchemaError(field + ".basis2: expected an array");
  for (std::size_t i = 0; i < j2.size(); ++i) {
    b.basis2.push_back(vector_from_json(
        j2[i], field + ".basis2[" + std::to_string(i) + "]"));
  }
  return b;
}

}  // namespace

scenarios::TwoQubitModel model_from_json(const json& j,
                                         const std::string& field) {
  scenarios::TwoQubitModel m;
  m.omega = require_number(require_field(j, "omega", field), field + ".omega");
  m.tau1 = require_number(require_field(j, "tau1", field), field + ".tau1");
  m.tau2 = require_number(require_field(j, "tau2", field), field + ".tau2");
  const json& jr = require_field(j, "rho0", field);
  const std::string rp = field + ".rho0";
  m.rho0.a = require_number(require_field(jr, "a", rp), rp + ".a");
  m.rho0.b = require_number(require_field(jr, "b", rp), rp + ".b");
  m.rho0.c = Complex(optional_number(jr, "c_re", rp, 0.0),
                     optional_number(jr, "c_im", rp, 0.0));
  if (j.contains("k")) {
    m.k = require_int(j.at("k"), field + ".k");
  }
  m.validate();
  return m;
}

json model_to_json(const scenarios::TwoQubitModel& m) {
  return json{{"omega", m.omega},
              {"tau1", m.tau1},
              {"tau2", m.tau2},
              {"rho0",
               {{"a", m.rho0.a},
                {"b", m.rho0.b},
                {"c_re", m.rho0.c.real()},
                {"c_im", m.rho0.c.imag()}}},
              {"k", m.k}};
}

ScenarioFile scenario_file_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("root: expected a JSON object");
  ScenarioFile f;

  const bool shorthand = j.contains("two_qubit_model");
  if (shorthand && j.contains("dim_system")) {
    throw SchemaError(
        "two_qubit_model: conflicts with an explicit scenario schema");
  }

  if (shorthand) {
    f.model = model_from_json(j.at("two_qubit_model"), "two_qubit_model");
    f.scenario = scenarios::build_two_qubit_scenario(*f.model);
    if (j.contains("measurement_theta")) {
      if (j.contains("plan")) {
        throw SchemaError("measurement_theta: conflicts with an explicit plan");
      }
      const double theta =
          require_number(j.at("measurement_theta"), "measurement_theta");
      try {
        f.plan = scenarios::two_qubit_measurement_plan(theta, f.model->k);
      } catch (const UsageError& e) {
        throw SchemaError(std::string("measurement_theta: ") + e.what());
      }
      f.measurement_theta = theta;
    }
  } else {
    if (j.contains("measurement_theta")) {
      throw SchemaError(
          "measurement_theta: requires the two_qubit_model shorthand");
    }
    process::Scenario s;
    s.dim_system =
        require_int(require_field(j, "dim_system", ""), "dim_system");
    s.dim_env = require_int(require_field(j, "dim_env", ""), "dim_env");
    if (s.dim_system < 2) throw SchemaError("dim_system: must be at least 2");
    if (s.dim_env < 1) throw SchemaError("dim_env: must be at least 1");
    s.rho0_system =
        matrix_from_json(require_field(j, "rho0_system", ""), "rho0_system");
    s.rho0_env = matrix_from_json(require_field(j, "rho0_env", ""), "rho0_env");

    const json& je = require_field(j, "evolutions", "");
    if (je.is_array()) {
      for (std::size_t u = 0; u < je.size(); ++u) {
        s.unitaries.push_back(matrix_from_json(
            je[u], "evolutions[" + std::to_string(u) + "]"));
      }
    } else if (je.is_object()) {
      const ComplexMatrix h = matrix_from_json(
          require_field(je, "hamiltonian", "evolutions"),
          "evolutions.hamiltonian");
      const std::vector<double> durations =
          reals_from_json(require_field(je, "durations", "evolutions"),
                          "evolutions.durations");
      try {
        s = process::Scenario::from_hamiltonian(s.dim_system, s.dim_env,
                                                s.rho0_system, s.rho0_env, h,
                                                durations);
      } catch (const SchemaError& e) {
        // Requalify bare field names with their JSON path.
        const std::string what = e.what();
        if (what.rfind("hamiltonian", 0) == 0 ||
            what.rfind("durations", 0) == 0) {
          throw SchemaError("evolutions." + what);
        }
        throw;
      } catch (const ConventionError& e) {
        throw SchemaError(std::string("evolutions.hamiltonian: ") + e.what());
      }
    } else {
      throw SchemaError(
          "evolutions: expected an array of matrices or a "
          "{hamiltonian, durations} object");
    }
    s.validate();
    f.scenario = std::move(s);
  }

  if (j.contains("plan")) {
    auto plan = plan_from_json(j.at("plan"), "plan");
    try {
      process::validate_plan(plan, f.scenario.n_times(),
                             f.scenario.dim_system);
    } catch (const Error& e) {
      throw SchemaError(std::string("plan: ") + e.what());
    }
    f.plan = std::move(plan);
  }
  if (j.contains("bases")) {
    f.bases = bases_from_json(j.at("bases"), "bases");
  }
  return f;
}

json scenario_to_json(const process::Scenario& s) {
  json evolutions = json::array();
  for (const auto& u : s.unitaries) evolutions.push_back(matrix_to_json(u));
  return json{{"dim_system", s.dim_system},
              {"dim_env", s.dim_env},
              {"rho0_system", matrix_to_json(s.rho0_system)},
              {"rho0_env", matrix_to_json(s.rho0_env)},
              {"evolutions", std::move(evolutions)}};
}

json scenario_file_to_json(const ScenarioFile& f) {
  json out = scenario_to_json(f.scenario);
  if (f.plan) out["plan"] = plan_to_json(*f.plan);
  if (f.bases) out["bases"] = bases_to_json(*f.bases);
  return out;
}

json table_to_json(const lg::ProbabilityTable& t) {
  t.check_shape();
  json axes = json::array();
  for (const auto& a : t.axes) {
    axes.push_back(json{{"time", a.time}, {"values", reals_to_json(a.values)}});
  }
  json entries = json::array();
  std::vector<int> idx(t.axes.size(), 0);
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    json outcomes = json::array();
    for (std::size_t a = 0; a < t.axes.size(); ++a) {
      outcomes.push_back(t.axes[a].values[static_cast<std::size_t>(idx[a])]);
    }
    entries.push_back(
        json{{"outcomes", std::move(outcomes)}, {"p", t.probabilities[flat]}});
    for (int a = static_cast<int>(t.axes.size()) - 1; a >= 0; --a) {
      auto ua = static_cast<std::size_t>(a);
      if (++idx[ua] < t.axes[ua].n_outcomes()) break;
      idx[ua] = 0;
    }
  }
  return json{{"axes", std::move(axes)}, {"entries", std::move(entries)}};
}

std::string table_to_csv(const lg::ProbabilityTable& t) {
  t.check_shape();
  std::ostringstream out;
  for (const auto& a : t.axes) out << "x" << a.time << ",";
  out << "p\n";
  std::vector<int> idx(t.axes.size(), 0);
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    for (std::size_t a = 0; a < t.axes.size(); ++a) {
      out << format_significant(
                 t.axes[a].values[static_cast<std::size_t>(idx[a])])
          << ",";
    }
    out << format_significant(t.probabilities[flat]) << "\n";
    for (int a = static_cast<int>(t.axes.size()) - 1; a >= 0; --a) {
      auto ua = static_cast<std::size_t>(a);
      if (++idx[ua] < t.axes[ua].n_outcomes()) break;
      idx[ua] = 0;
    }
  }
  return out.str();
}

json report_to_json(const lg::LGReport& r) {
  return json{{"C12", r.c12},
              {"C23", r.c23},
              {"C13", r.c13},
              {"K3", r.k3},
              {"lg_satisfied", r.lg_satisfied},
              {"correction_terms",
               json::array({r.correction_terms[0], r.correction_terms[1]})},
              {"deviation_norm", r.deviation_norm}};
}

json classification_to_json(const structure::QCClassification& c) {
  json form = json::array();
  for (const auto& [c1, c2] : c.qc_form) {
    form.push_back(std::string(structure::condition_name(c1)) + "+" +
                   structure::condition_name(c2));
  }
  return json{{"residual_1A", c.residual_1a},
              {"residual_1B", c.residual_1b},
              {"residual_2A", c.residual_2a},
              {"residual_2B", c.residual_2b},
              {"holds_1A", c.holds_1a},
              {"holds_1B", c.holds_1b},
              {"holds_2A", c.holds_2a},
              {"holds_2B", c.holds_2b},
              {"qc_form", std::move(form)},
              {"markov_product_residual", c.markov_product_residual},
              {"bases", bases_to_json(c.bases)},
              {"tol", c.tol}};
}

json disturbance_to_json(const structure::DisturbanceReport& d) {
  return json{{"applicable", d.applicable},
              {"markov_product_residual", d.markov_product_residual},
              {"rho0_residual", d.rho0_residual},
              {"rho0_diagonal", d.rho0_diagonal},
              {"step_residual", d.step_residual},
              {"step_diagonal", d.step_diagonal}};
}

json process_state_to_json(const process::ProcessState& ps) {
  json slots = json::array();
  for (const auto& slot : ps.state().slots().slots()) {
    slots.push_back(json{{"label", slot.label}, {"dim", slot.dim}});
  }
  return json{{"n_times", ps.n_times()},
              {"dim", ps.dim()},
              {"slots", std::move(slots)},
              {"matrix", matrix_to_json(ps.matrix())}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("input: cannot open file " + path);
  }
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw SchemaError("input: invalid JSON in " + path);
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw UsageError("output: cannot open file " + path);
  }
  out << content;
}

}  // namespace lgps::io
