// SPDX-License-Identifier: Apache-2.0
#pragma once

// A two-qubit exchange model: a system qubit coupled to one environment
// qubit by H = omega(|+-><-+| + |-+><+-|), environment prepared in
// (|+> + |->)/sqrt(2), three measurement times. Basis-order convention for
// this module: index 0 = |->, index 1 = |+>. Step angles theta_j =
// omega * tau_j; at theta_j = (k + 1/2) pi the step swaps system and
// environment up to phases and the process admits closed forms.

#include <vector>

#include "lgps/lg.hpp"
#include "lgps/matrix.hpp"
#include "lgps/process.hpp"

namespace lgps::scenarios {

// Initial system state [[a, c], [conj(c), b]] in the {|->, |+>} layout.
struct InitialState {
  double a = 1.0;
  double b = 0.0;
  Complex c = 0.0;
};

struct TwoQubitModel {
  double omega = 1.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  InitialState rho0;
  // Selects the branch of the half-pi angles theta = (k + 1/2) pi and the
  // sign (-1)^(k-1) in the step's output basis.
  int k = 1;

  double theta1() const { return omega * tau1; }
  double theta2() const { return omega * tau2; }
  ComplexMatrix rho0_matrix() const;
  // a + b = 1, a, b >= 0, |c|^2 <= a b. Throws SchemaError naming the field.
  void validate(double tol = kDefaultTol) const;
};

// Measurement basis {cos t|+> - i sin t|->, cos t|-> - i sin t|+>}; the
// first vector carries outcome value +1. theta must lie in [-pi, pi].
struct RotatedBasis {
  double theta = 0.0;
  std::vector<ComplexVector> vectors;
};
RotatedBasis rotated_basis(double theta);

// Output basis of a half-pi step: {(|+> + i(-1)^(k-1)|->)/sqrt2,
// (|-> + i(-1)^(k-1)|+>)/sqrt2}, first vector is the + outcome.
std::vector<ComplexVector> phi_basis(int k);

// Dilation scenario with U_j = exp(-i H tau_j).
process::Scenario build_two_qubit_scenario(const TwoQubitModel& m);

// Times 1 and 3 measured in rotated_basis(theta), time 2 in phi_basis(k);
// all outcome values +1/-1 with +1 on the first basis vector.
process::MeasurementPlan two_qubit_measurement_plan(double theta, int k);

struct HalfPiReduced {
  // Two-time state over the original times (1, 3), renumbered to (1, 2),
  // obtained by leaving time 2 unmeasured. At the half-pi angles it equals
  // rho0 on S1 tensored with a sign-twisted link (|--> - |++> projector,
  // scaled) on the remaining pair; construction verifies this.
  process::ProcessState reduced;
  // Step-output eigenvectors on (A1, S2): |+> (x) phi_basis first vector and
  // |-> (x) phi_basis second vector.
  ComplexVector phi_plus;
  ComplexVector phi_minus;
};

// Requires theta1 and theta2 at the model's (k + 1/2) pi points within
// angle_tol; use the general builder for other angles.
HalfPiReduced halfpi_reduced_state(const TwoQubitModel& m,
                                   double angle_tol = 1e-12);

struct CurvePoint {
  double theta = 0.0;
  lg::LGReport report;
};

// k3 of the model under two_qubit_measurement_plan(theta, m.k) for each grid
// point; grid values must lie in [-pi, pi]. At half-pi step angles the curve
// follows 2 cos 2 theta - cos 4 theta independently of rho0.
std::vector<CurvePoint> k3_curve(const TwoQubitModel& m,
                                 const std::vector<double>& thetas,
                                 double tol = kDefaultTol);

}  // namespace lgps::scenarios
