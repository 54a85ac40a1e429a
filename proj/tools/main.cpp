// SPDX-License-Identifier: Apache-2.0

// lgps: load a scenario file, compute measurement statistics, K3 reports,
// theta sweeps, and structural classifications.
//
// Exit codes: 0 success, 2 input/schema/usage error, 3 numerical-convention
// error (imaginary probabilities, degenerate conditioning), 1 anything else.

#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lgps/errors.hpp"
#include "lgps/io.hpp"
#include "lgps/lg.hpp"
#include "lgps/process.hpp"
#include "lgps/scenarios.hpp"
#include "lgps/structure.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

struct Options {
  std::string input;
  std::string out;
  std::string format = "json";
  std::optional<double> tol;
  std::optional<int> k;
  double theta_min = -kPi;
  double theta_max = kPi;
  int steps = 181;
};

double resolve_tol(const Options& opt) {
  if (opt.tol) return *opt.tol;
  if (const char* env = std::getenv("LGPS_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0)) {
      throw lgps::SchemaError("LGPS_TOL: expected a positive number");
    }
    return v;
  }
  return lgps::kDefaultTol;
}

lgps::io::ScenarioFile load_input(const Options& opt) {
  lgps::io::ScenarioFile f =
      lgps::io::scenario_file_from_json(lgps::io::load_json_file(opt.input));
  if (opt.k) {
    if (!f.model) {
      throw lgps::UsageError("--k: only applies to two_qubit_model inputs");
    }
    f.model->k = *opt.k;
    f.scenario = lgps::scenarios::build_two_qubit_scenario(*f.model);
    if (f.measurement_theta) {
      // The parsed plan was expanded with the file's k; rebuild it so the
      // middle instrument tracks the override.
      f.plan = lgps::scenarios::two_qubit_measurement_plan(*f.measurement_theta,
                                                       f.model->k);
    }
  }
  return f;
}

void emit(const Options& opt, const std::string& content) {
  if (opt.out.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << "\n";
  } else {
    lgps::io::write_text_file(opt.out, content);
  }
}

bool fully_measured(const lgps::process::MeasurementPlan& plan) {
  for (const auto& ins : plan) {
    if (!lgps::process::is_measured(ins)) return false;
  }
  return true;
}

int cmd_run(const Options& opt) {
  const double tol = resolve_tol(opt);
  const lgps::io::ScenarioFile f = load_input(opt);
  if (!f.plan) {
    throw lgps::SchemaError(
        "plan: missing (provide a plan or measurement_theta)");
  }

  const auto ps = lgps::process::build_process_state(f.scenario, tol);
  const auto table = lgps::lg::joint_probability(ps, *f.plan, tol);

  std::optional<lgps::lg::LGReport> report;
  if (ps.n_times() == 3 && fully_measured(*f.plan) && table.is_dichotomic()) {
    report = lgps::lg::k3(ps, *f.plan, tol);
    std::cout << "K3 = " << lgps::io::format_significant(report->k3) << "\n";
    std::cout << "lg_satisfied = " << (report->lg_satisfied ? "true" : "false")
              << "\n";
  } else {
    std::cout << "K3 not computed: plan is not a fully measured dichotomic "
                 "three-time plan\n";
  }

  if (opt.format == "csv") {
    emit(opt, lgps::io::table_to_csv(table));
  } else {
    lgps::io::json out{{"table", lgps::io::table_to_json(table)}};
    if (report) out["report"] = lgps::io::report_to_json(*report);
    emit(opt, out.dump(2));
  }
  return 0;
}

int cmd_sweep(const Options& opt) {
  const double tol = resolve_tol(opt);
  if (opt.format != "csv") {
    throw lgps::UsageError("--format: sweep emits CSV only");
  }
  if (opt.steps < 2) {
    throw lgps::UsageError("--steps: need at least 2 grid points");
  }
  const lgps::io::ScenarioFile f = load_input(opt);
  if (!f.model) {
    throw lgps::SchemaError(
        "two_qubit_model: sweep requires the shorthand block");
  }

  std::vector<double> thetas(static_cast<std::size_t>(opt.steps));
  const double span = opt.theta_max - opt.theta_min;
  for (int i = 0; i < opt.steps; ++i) {
    thetas[static_cast<std::size_t>(i)] =
        (i == opt.steps - 1) ? opt.theta_max
                             : opt.theta_min + span * i / (opt.steps - 1);
  }

  const auto curve = lgps::scenarios::k3_curve(*f.model, thetas, tol);
  std::ostringstream csv;
  csv << "theta,C12,C23,C13,K3\n";
  for (const auto& pt : curve) {
    csv << lgps::io::format_significant(pt.theta) << ","
        << lgps::io::format_significant(pt.report.c12) << ","
        << lgps::io::format_significant(pt.report.c23) << ","
        << lgps::io::format_significant(pt.report.c13) << ","
        << lgps::io::format_significant(pt.report.k3) << "\n";
  }
  emit(opt, csv.str());
  return 0;
}

int cmd_classify(const Options& opt) {
  const double tol = resolve_tol(opt);
  const lgps::io::ScenarioFile f = load_input(opt);

  lgps::structure::Bases bases;
  if (f.bases) {
    bases = *f.bases;
  } else if (f.plan && f.plan->size() >= 2) {
    const auto* p1 = std::get_if<lgps::process::Projective>(&(*f.plan)[0]);
    const auto* p2 = std::get_if<lgps::process::Projective>(&(*f.plan)[1]);
    if (!p1 || !p2) {
      throw lgps::SchemaError(
          "bases: missing, and the plan's first two instruments are not "
          "projective");
    }
    bases.basis1 = p1->basis;
    bases.basis2 = p2->basis;
  } else {
    throw lgps::SchemaError("bases: missing (provide bases or a plan)");
  }

  const auto ps = lgps::process::build_process_state(f.scenario, tol);
  const auto c = lgps::structure::classify(ps, bases, tol);
  const auto d = lgps::structure::disturbance_conditions(ps, bases, tol);

  lgps::io::json out = lgps::io::classification_to_json(c);
  out["disturbance"] = lgps::io::disturbance_to_json(d);

  std::cout << "qc_form =";
  if (c.qc_form.empty()) {
    std::cout << " (none)";
  } else {
    for (const auto& [c1, c2] : c.qc_form) {
      std::cout << " " << lgps::structure::condition_name(c1) << "+"
                << lgps::structure::condition_name(c2);
    }
  }
  std::cout << "\nmarkov_product_residual = "
            << lgps::io::format_significant(c.markov_product_residual) << "\n";

  emit(opt, out.dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Multitime quantum process statistics: joint probabilities, "
      "Leggett-Garg reports, theta sweeps, structural classification"};
  app.require_subcommand(1);

  Options opt;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input,-i,input", opt.input, "Scenario JSON file")
        ->required();
    sub->add_option("--out,-o", opt.out, "Output file (default: stdout)");
    sub->add_option("--tol", opt.tol,
                    "Numerical tolerance (default: LGPS_TOL or 1e-10)");
    sub->add_option("--k", opt.k, "Override the two-qubit model's k");
  };

  CLI::App* run = app.add_subcommand(
      "run", "Joint probability table and K3 report for the file's plan");
  add_common(run);
  run->add_option("--format", opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* sweep = app.add_subcommand(
      "sweep", "K3(theta) curve of a two-qubit model as CSV");
  add_common(sweep);
  sweep->add_option("--format", opt.format, "csv (sweep emits CSV only)");
  sweep->add_option("--theta-min", opt.theta_min, "Grid start (default -pi)");
  sweep->add_option("--theta-max", opt.theta_max, "Grid end (default pi)");
  sweep->add_option("--steps", opt.steps, "Grid points (default 181)");

  CLI::App* classify = app.add_subcommand(
      "classify", "Structural classification against measurement bases");
  add_common(classify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (sweep->parsed()) {
      if (sweep->count("--format") == 0) opt.format = "csv";
      return cmd_sweep(opt);
    }
    if (run->parsed()) return cmd_run(opt);
    return cmd_classify(opt);
  } catch (const lgps::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lgps::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lgps::ConventionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
