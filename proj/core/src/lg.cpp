// SPDX-License-Identifier: Apache-2.0

#include "lgps/lg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace lgps::lg {

namespace {

using process::Instrument;
using process::MeasurementPlan;
using process::ProcessState;
using process::Projective;
using process::Scenario;
using process::Unmeasured;

constexpr double kValueMatchTol = 1e-12;

// Visit all outcome-index tuples of the given sizes in row-major order
// (last position fastest).
template <typename F>
void for_each_tuple(const std::vector<int>& sizes, F&& visit) {
  std::vector<int> idx(sizes.size(), 0);
  while (true) {
    visit(idx);
    int k = static_cast<int>(sizes.size()) - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] ==
                         sizes[static_cast<std::size_t>(k)]) {
      idx[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
}

std::vector<TableAxis> measured_axes(const MeasurementPlan& plan) {
  std::vector<TableAxis> axes;
  for (std::size_t j = 0; j < plan.size(); ++j) {
    if (const auto* p = std::get_if<Projective>(&plan[j])) {
      axes.push_back({static_cast<int>(j) + 1, p->values});
    }
  }
  return axes;
}

std::vector<int> axis_sizes(const ProbabilityTable& table) {
  std::vector<int> sizes;
  sizes.reserve(table.axes.size());
  for (const auto& a : table.axes) sizes.push_back(a.n_outcomes());
  return sizes;
}

bool dichotomic_axis(const TableAxis& axis) {
  return axis.values.size() == 2 &&
         std::abs(axis.values[0] - 1.0) < kValueMatchTol &&
         std::abs(axis.values[1] + 1.0) < kValueMatchTol;
}

void require_dichotomic(const ProbabilityTable& table, const char* what) {
  if (!table.is_dichotomic()) {
    throw UsageError(std::string(what) +
                     ": outcome values must be dichotomic +1/-1");
  }
}

MeasurementPlan with_unmeasured(MeasurementPlan plan, int time) {
  plan[static_cast<std::size_t>(time - 1)] = Unmeasured{};
  return plan;
}

}  // namespace

int ProbabilityTable::axis_for_time(int time) const {
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (axes[a].time == time) return static_cast<int>(a);
  }
  return -1;
}

std::size_t ProbabilityTable::flat_index(
    const std::vector<int>& outcome_indices) const {
  if (outcome_indices.size() != axes.size()) {
    throw ShapeError("outcome tuple length does not match table axes");
  }
  std::size_t flat = 0;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const int x = outcome_indices[a];
    if (x < 0 || x >= axes[a].n_outcomes()) {
      throw ShapeError("outcome index out of range on axis " +
                       std::to_string(a));
    }
    flat = flat * static_cast<std::size_t>(axes[a].n_outcomes()) +
           static_cast<std::size_t>(x);
  }
  return flat;
}

double ProbabilityTable::at(const std::vector<int>& outcome_indices) const {
  return probabilities[flat_index(outcome_indices)];
}

double ProbabilityTable::sum() const {
  double total = 0.0;
  for (double p : probabilities) total += p;
  return total;
}

bool ProbabilityTable::is_dichotomic() const {
  return std::all_of(axes.begin(), axes.end(), dichotomic_axis);
}

void ProbabilityTable::check_shape() const {
  std::size_t expect = 1;
  for (const auto& a : axes) {
    expect *= static_cast<std::size_t>(a.n_outcomes());
  }
  if (probabilities.size() != expect) {
    throw ShapeError("table has " + std::to_string(probabilities.size()) +
                     " entries, axes give " + std::to_string(expect));
  }
}

ProbabilityTable joint_probability(const ProcessState& ps,
                                   const MeasurementPlan& plan, double tol) {
  const int n = ps.n_times();
  process::validate_plan(plan, n, ps.dim());

  ProbabilityTable table;
  table.axes = measured_axes(plan);

  std::vector<int> sizes = axis_sizes(table);
  std::vector<int> full(static_cast<std::size_t>(n), 0);
  for_each_tuple(sizes, [&](const std::vector<int>& idx) {
    std::fill(full.begin(), full.end(), 0);
    for (std::size_t a = 0; a < table.axes.size(); ++a) {
      full[static_cast<std::size_t>(table.axes[a].time - 1)] = idx[a];
    }
    const auto dual = process::n_point_operation(plan, full, ps.dim());
    const Complex value = opstate::op_inner(dual, ps.state());
    if (std::abs(value.imag()) > tol) {
      throw ConventionError("probability has imaginary part " +
                            std::to_string(value.imag()));
    }
    table.probabilities.push_back(value.real());
  });
  return table;
}

ProbabilityTable sequential_oracle(const Scenario& scenario,
                                   const MeasurementPlan& plan, double tol) {
  scenario.validate(tol);
  const int n = scenario.n_times();
  const int ds = scenario.dim_system;
  const int de = scenario.dim_env;
  process::validate_plan(plan, n, ds);

  // Local Kronecker product; this path deliberately shares no machinery with
  // the slot-based contraction code.
  const auto kron = [](const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
            a(i, j) * b;
      }
    }
    return out;
  };
  const ComplexMatrix eye_env = ComplexMatrix::Identity(de, de);

  struct Branch {
    std::vector<int> outcomes;
    ComplexMatrix rho;
  };
  std::vector<Branch> branches{
      {{}, kron(scenario.rho0_system, scenario.rho0_env)}};

  for (int j = 1; j <= n; ++j) {
    if (const auto* p = std::get_if<Projective>(&plan[static_cast<std::size_t>(j - 1)])) {
      std::vector<Branch> next;
      next.reserve(branches.size() * p->basis.size());
      for (const auto& br : branches) {
        for (std::size_t x = 0; x < p->basis.size(); ++x) {
          const ComplexMatrix proj =
              kron(p->basis[x] * p->basis[x].adjoint(), eye_env);
          Branch nb;
          nb.outcomes = br.outcomes;
          nb.outcomes.push_back(static_cast<int>(x));
          nb.rho = proj * br.rho * proj;
          next.push_back(std::move(nb));
        }
      }
      branches = std::move(next);
    }
    if (j < n) {
      const auto& u = scenario.unitaries[static_cast<std::size_t>(j - 1)];
      for (auto& br : branches) br.rho = u * br.rho * u.adjoint();
    }
  }

  ProbabilityTable table;
  table.axes = measured_axes(plan);
  table.probabilities.reserve(branches.size());
  for (const auto& br : branches) {
    const Complex t = br.rho.trace();
    if (std::abs(t.imag()) > tol) {
      throw ConventionError("oracle probability has imaginary part " +
                            std::to_string(t.imag()));
    }
    table.probabilities.push_back(t.real());
  }
  // Branch enumeration above is row-major with the last measured time
  // fastest, matching the table layout.
  table.check_shape();
  return table;
}

ProbabilityTable marginal_probability(const ProbabilityTable& table, int first,
                                      int second) {
  table.check_shape();
  if (first >= second) throw UsageError("pair times must be ordered");
  const int a1 = table.axis_for_time(first);
  const int a2 = table.axis_for_time(second);
  if (a1 < 0 || a2 < 0) {
    throw UsageError("pair time has no measured axis in the table");
  }
  for (const auto& axis : table.axes) {
    if (axis.time == first || axis.time == second) continue;
    if (axis.time < second) {
      throw UsageError(
          "summing the measured axis at time " + std::to_string(axis.time) +
          " does not give a no-measurement marginal; leave it Unmeasured");
    }
  }

  ProbabilityTable out;
  out.axes = {table.axes[static_cast<std::size_t>(a1)],
              table.axes[static_cast<std::size_t>(a2)]};
  out.probabilities.assign(
      static_cast<std::size_t>(out.axes[0].n_outcomes()) *
          static_cast<std::size_t>(out.axes[1].n_outcomes()),
      0.0);
  for_each_tuple(axis_sizes(table), [&](const std::vector<int>& idx) {
    const std::vector<int> kept{idx[static_cast<std::size_t>(a1)],
                                idx[static_cast<std::size_t>(a2)]};
    out.probabilities[out.flat_index(kept)] += table.at(idx);
  });
  return out;
}

double correlation(const ProbabilityTable& table) {
  table.check_shape();
  if (table.n_axes() != 2) {
    throw UsageError("correlation requires a two-axis table");
  }
  double c = 0.0;
  for_each_tuple(axis_sizes(table), [&](const std::vector<int>& idx) {
    c += table.axes[0].values[static_cast<std::size_t>(idx[0])] *
         table.axes[1].values[static_cast<std::size_t>(idx[1])] *
         table.at(idx);
  });
  return c;
}

LGReport k3(const ProcessState& ps, const MeasurementPlan& plan12,
            const MeasurementPlan& plan23, const MeasurementPlan& plan13,
            double tol) {
  if (ps.n_times() != 3) throw UsageError("k3 requires a three-time state");

  const ProbabilityTable p12 =
      marginal_probability(joint_probability(ps, plan12, tol), 1, 2);
  const ProbabilityTable p23 =
      marginal_probability(joint_probability(ps, plan23, tol), 2, 3);
  const ProbabilityTable p13 =
      marginal_probability(joint_probability(ps, plan13, tol), 1, 3);
  require_dichotomic(p12, "k3");
  require_dichotomic(p23, "k3");
  require_dichotomic(p13, "k3");

  LGReport report;
  report.c12 = correlation(p12);
  report.c23 = correlation(p23);
  report.c13 = correlation(p13);
  report.k3 = report.c12 + report.c23 - report.c13;
  report.lg_satisfied = report.k3 <= 1.0 + tol;
  return report;
}

LGReport k3(const ProcessState& ps, const MeasurementPlan& full_plan,
            double tol) {
  return k3(ps, full_plan, with_unmeasured(full_plan, 1),
            with_unmeasured(full_plan, 2), tol);
}

LGReport k3_with_deviation(const ProcessState& ps, const ProcessState& qc,
                           const MeasurementPlan& plan12,
                           const MeasurementPlan& plan23,
                           const MeasurementPlan& plan13, double tol) {
  if (ps.n_times() != 3 || qc.n_times() != 3 || ps.dim() != qc.dim()) {
    throw UsageError("k3_with_deviation requires matching three-time states");
  }
  for (const auto& ins : plan12) {
    if (!process::is_measured(ins)) {
      throw UsageError("k3_with_deviation requires a fully measured plan12");
    }
  }

  LGReport report = k3(ps, plan12, plan23, plan13, tol);

  const opstate::OperatorState delta(ps.state().slots(),
                                     ps.matrix() - qc.matrix());

  // 1 - sum (x2-x1)(x2-x3) P123 over the fully measured table of ps.
  const ProbabilityTable p123 = joint_probability(ps, plan12, tol);
  require_dichotomic(p123, "k3_with_deviation");
  double base = 1.0;
  for_each_tuple(axis_sizes(p123), [&](const std::vector<int>& idx) {
    const double x1 = p123.axes[0].values[static_cast<std::size_t>(idx[0])];
    const double x2 = p123.axes[1].values[static_cast<std::size_t>(idx[1])];
    const double x3 = p123.axes[2].values[static_cast<std::size_t>(idx[2])];
    base -= (x2 - x1) * (x2 - x3) * p123.at(idx);
  });

  // Correction sums: pairwise dual minus the summed three-point duals,
  // contracted against the deviation.
  const int d = ps.dim();
  const auto dual_value = [&](const MeasurementPlan& plan,
                              const std::vector<int>& outcomes) {
    const auto dual = process::n_point_operation(plan, outcomes, d);
    return opstate::op_inner(dual, delta).real();
  };
  const auto correction = [&](const MeasurementPlan& pair_plan, int t_first,
                              int t_second) {
    double corr = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        std::vector<int> pair_outcomes(3, 0);
        pair_outcomes[static_cast<std::size_t>(t_first - 1)] = a;
        pair_outcomes[static_cast<std::size_t>(t_second - 1)] = b;
        double term = dual_value(pair_plan, pair_outcomes);
        for (int x = 0; x < 2; ++x) {
          std::vector<int> full_outcomes = pair_outcomes;
          for (int t = 1; t <= 3; ++t) {
            if (t != t_first && t != t_second) {
              full_outcomes[static_cast<std::size_t>(t - 1)] = x;
            }
          }
          term -= dual_value(plan12, full_outcomes);
        }
        const double va = (a == 0) ? 1.0 : -1.0;
        const double vb = (b == 0) ? 1.0 : -1.0;
        corr += va * vb * term;
      }
    }
    return corr;
  };
  const double corr23 = correction(plan23, 2, 3);
  const double corr13 = correction(plan13, 1, 3);

  const double reconstructed = base + corr23 - corr13;
  if (std::abs(reconstructed - report.k3) > 1e-8) {
    throw ConventionError(
        "deviation decomposition does not reconstruct K3: the reference state "
        "changes the fully measured statistics");
  }

  report.correction_terms = {corr23, corr13};
  report.deviation_norm = delta.matrix().norm();
  return report;
}

LGReport k3_with_deviation(const ProcessState& ps, const ProcessState& qc,
                           const MeasurementPlan& full_plan, double tol) {
  return k3_with_deviation(ps, qc, full_plan, with_unmeasured(full_plan, 1),
                           with_unmeasured(full_plan, 2), tol);
}

double markov_order_k3(const ProbabilityTable& p3, const ProbabilityTable& p12,
                       const ProbabilityTable& p2, double tol) {
  p3.check_shape();
  p12.check_shape();
  p2.check_shape();
  if (p3.n_axes() != 3 || p3.axes[0].time != 1 || p3.axes[1].time != 2 ||
      p3.axes[2].time != 3) {
    throw UsageError("p3 must be fully measured over times 1, 2, 3");
  }
  if (p12.n_axes() != 2 || p12.axes[0].time != 1 || p12.axes[1].time != 2) {
    throw UsageError("p12 must cover times 1, 2");
  }
  if (p2.n_axes() != 1 || p2.axes[0].time != 2) {
    throw UsageError("p2 must cover time 2 only");
  }
  require_dichotomic(p3, "markov_order_k3");
  require_dichotomic(p12, "markov_order_k3");
  require_dichotomic(p2, "markov_order_k3");

  // Conditioning must be well-defined entrywise.
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) {
      const double den = p12.at({x1, x2});
      if (den > tol) continue;
      for (int x3 = 0; x3 < 2; ++x3) {
        if (p3.at({x1, x2, x3}) > tol) {
          throw DegenerateConditioningError(
              "conditioning on zero-probability entry (x1=" +
              std::to_string(p12.axes[0].values[static_cast<std::size_t>(x1)]) +
              ", x2=" +
              std::to_string(p12.axes[1].values[static_cast<std::size_t>(x2)]) +
              ")");
        }
      }
    }
  }

  const double c12 = correlation(p12);

  // C13 here uses the x2-summed marginal of the fully measured table: this
  // estimator works entirely with measured records, so the intervening
  // measurement stays in place.
  double c13 = 0.0;
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) {
      for (int x3 = 0; x3 < 2; ++x3) {
        c13 += p3.axes[0].values[static_cast<std::size_t>(x1)] *
               p3.axes[2].values[static_cast<std::size_t>(x3)] *
               p3.at({x1, x2, x3});
      }
    }
  }

  // C~23 from the reconstructed pair marginal
  //   P~23(x2, x3) = P2(x2) * [sum_x1 p3] / [sum_x1 p12].
  double c23 = 0.0;
  for (int x2 = 0; x2 < 2; ++x2) {
    double den = 0.0;
    for (int x1 = 0; x1 < 2; ++x1) den += p12.at({x1, x2});
    for (int x3 = 0; x3 < 2; ++x3) {
      double num = 0.0;
      for (int x1 = 0; x1 < 2; ++x1) num += p3.at({x1, x2, x3});
      double reconstructed = 0.0;
      if (den > tol) {
        reconstructed = p2.at({x2}) * num / den;
      } else if (num > tol) {
        throw DegenerateConditioningError(
            "conditioning on zero-probability outcome x2=" +
            std::to_string(p2.axes[0].values[static_cast<std::size_t>(x2)]));
      }
      c23 += p2.axes[0].values[static_cast<std::size_t>(x2)] *
             p3.axes[2].values[static_cast<std::size_t>(x3)] * reconstructed;
    }
  }
  return c12 + c23 - c13;
}

}  // namespace lgps::lg
