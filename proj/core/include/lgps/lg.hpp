// SPDX-License-Identifier: Apache-2.0
#pragma once

// Measurement statistics and Leggett-Garg functionals for three-time
// processes. Probabilities come from contracting outcome duals against a
// process state; the sequential oracle recomputes the same statistics by
// direct density-matrix simulation of the dilation and shares no code with
// that contraction path.

#include <array>
#include <vector>

#include "lgps/matrix.hpp"
#include "lgps/process.hpp"

namespace lgps::lg {

// One table axis: a measured time and the numeric values assigned to its
// outcomes, in instrument order.
struct TableAxis {
  int time = 0;
  std::vector<double> values;

  int n_outcomes() const { return static_cast<int>(values.size()); }
};

// Joint outcome statistics over the measured times of a plan. Unmeasured
// times contribute no axis. Probabilities are stored row-major with the last
// axis fastest.
struct ProbabilityTable {
  std::vector<TableAxis> axes;
  std::vector<double> probabilities;

  int n_axes() const { return static_cast<int>(axes.size()); }
  std::size_t size() const { return probabilities.size(); }

  // Position of the axis for a 1-based time; -1 if that time has no axis.
  int axis_for_time(int time) const;

  std::size_t flat_index(const std::vector<int>& outcome_indices) const;
  double at(const std::vector<int>& outcome_indices) const;
  double sum() const;

  // True when every axis assigns exactly the values +1 and -1.
  bool is_dichotomic() const;

  // Shape consistency: probabilities count matches the axis sizes.
  void check_shape() const;
};

struct LGReport {
  double c12 = 0.0;
  double c23 = 0.0;
  double c13 = 0.0;
  double k3 = 0.0;
  bool lg_satisfied = true;
  // Deviation sums from the two no-measurement marginals (times {2,3} and
  // {1,3}); k3 of the reference state plus correction_terms[0] minus
  // correction_terms[1] reconstructs k3. Zero unless produced by
  // k3_with_deviation.
  std::array<double, 2> correction_terms{0.0, 0.0};
  // Frobenius norm of the deviation from the reference state.
  double deviation_norm = 0.0;
};

// P(outcomes) = (n_point_operation(plan, outcomes) | ps) for every outcome
// tuple of the measured times. Throws ConventionError if any probability has
// an imaginary part above tol (a conjugation bug upstream).
ProbabilityTable joint_probability(const process::ProcessState& ps,
                                   const process::MeasurementPlan& plan,
                                   double tol = kDefaultTol);

// Independent route to the same table: brute-force density-matrix simulation
// of the dilation, alternating projective updates and step unitaries.
ProbabilityTable sequential_oracle(const process::Scenario& scenario,
                                   const process::MeasurementPlan& plan,
                                   double tol = kDefaultTol);

// Project the table onto the measured pair of times (first < second). Axes
// for later times are summed out (valid marginalization: complete
// measurements after the kept pair do not affect it). A measured axis at an
// earlier or intermediate time is a usage error: summing it does not give
// the no-measurement marginal; use a plan with that time Unmeasured.
ProbabilityTable marginal_probability(const ProbabilityTable& table, int first,
                                      int second);

// sum x_i x_j P over a two-axis table. Works for any outcome values; the LG
// bound below assumes dichotomic +1/-1.
double correlation(const ProbabilityTable& table);

// K3 = C12 + C23 - C13 from the three pairwise plans of a three-time state:
//   plan12: times 1, 2 measured (time 3 measured and summed, or unmeasured);
//   plan23: time 1 unmeasured, times 2, 3 measured;
//   plan13: time 2 unmeasured, times 1, 3 measured.
// All instruments must assign dichotomic +1/-1 values.
// lg_satisfied = (K3 <= 1 + tol).
LGReport k3(const process::ProcessState& ps,
            const process::MeasurementPlan& plan12,
            const process::MeasurementPlan& plan23,
            const process::MeasurementPlan& plan13, double tol = kDefaultTol);

// Convenience: derive the pairwise plans from one fully measured three-time
// plan by replacing the complementary slots with Unmeasured.
LGReport k3(const process::ProcessState& ps,
            const process::MeasurementPlan& full_plan, double tol = kDefaultTol);

// K3 decomposed against a reference state (qc, typically a structural
// projection of ps that keeps the fully measured statistics):
//   K3(ps) = [1 - sum (x2-x1)(x2-x3) P123(ps)] + corr23 - corr13,
// with corr23 = sum x2 x3 of (pair dual minus summed three-point duals)
// applied to ps - qc, and corr13 alike. plan12 must be fully measured.
// The stored C's and K3 are those of ps; correction_terms = {corr23, corr13};
// deviation_norm = Frobenius norm of ps - qc. Throws ConventionError if the
// decomposition does not reconstruct K3 (qc does not keep the fully measured
// statistics of ps for these plans).
LGReport k3_with_deviation(const process::ProcessState& ps,
                           const process::ProcessState& qc,
                           const process::MeasurementPlan& plan12,
                           const process::MeasurementPlan& plan23,
                           const process::MeasurementPlan& plan13,
                           double tol = kDefaultTol);

LGReport k3_with_deviation(const process::ProcessState& ps,
                           const process::ProcessState& qc,
                           const process::MeasurementPlan& full_plan,
                           double tol = kDefaultTol);

// K3 with the {2,3} correlator reconstructed from the fully measured table:
//   C~23 = sum x2 x3 P2(x2) * [sum_x1 p3(x1,x2,x3)] / [sum_x1 p12(x1,x2)],
// C12 from p12, C13 from p3 summed over x2. Inputs: p3 fully measured over
// times {1,2,3}, p12 over {1,2}, p2 over {2}; all dichotomic. Entries with
// p12 zero and p3 zero contribute nothing; p12 zero with p3 positive is a
// degenerate-conditioning error naming the entry. Under Markov order 1 this
// equals k3 computed directly.
double markov_order_k3(const ProbabilityTable& p3, const ProbabilityTable& p12,
                       const ProbabilityTable& p2, double tol = kDefaultTol);

}  // namespace lgps::lg
