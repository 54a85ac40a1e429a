// SPDX-License-Identifier: Apache-2.0
#include "lgps/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "lgps/errors.hpp"
#include "lgps/opstate.hpp"

namespace lgps::scenarios {

namespace {

constexpr double kPi = std::numbers::pi;

// (-1)^(k-1): +1 for odd k.
double branch_sign(int k) { return (k % 2 != 0) ? 1.0 : -1.0; }

}  // namespace

ComplexMatrix TwoQubitModel::rho0_matrix() const {
  ComplexMatrix m(2, 2);
  m << Complex(rho0.a, 0.0), rho0.c, std::conj(rho0.c), Complex(rho0.b, 0.0);
  return m;
}

void TwoQubitModel::validate(double tol) const {
  if (!(rho0.a >= -tol) || !(rho0.b >= -tol)) {
    throw SchemaError("rho0.a/rho0.b: diagonal entries must be nonnegative");
  }
  if (std::abs(rho0.a + rho0.b - 1.0) > tol) {
    throw SchemaError("rho0: a + b must equal 1");
  }
  if (std::norm(rho0.c) > rho0.a * rho0.b + tol) {
    throw SchemaError("rho0.c: |c|^2 exceeds a*b, state not positive");
  }
}

RotatedBasis rotated_basis(double theta) {
  if (!(theta >= -kPi && theta <= kPi)) {
    throw UsageError("rotated_basis: theta outside [-pi, pi]");
  }
  const Complex mi(0.0, -1.0);
  RotatedBasis rb;
  rb.theta = theta;
  ComplexVector plus(2), minus(2);
  // Coordinates are (|-> component, |+> component).
  plus << mi * std::sin(theta), std::cos(theta);
  minus << std::cos(theta), mi * std::sin(theta);
  rb.vectors = {plus, minus};
  return rb;
}

std::vector<ComplexVector> phi_basis(int k) {
  const Complex is(0.0, branch_sign(k));
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector plus(2), minus(2);
  plus << is * r, Complex(r, 0.0);
  minus << Complex(r, 0.0), is * r;
  return {plus, minus};
}

process::Scenario build_two_qubit_scenario(const TwoQubitModel& m) {
  m.validate();
  // Composite index 2*s + e over {|->, |+>}: the exchange terms couple
  // |-+> (index 1) and |+-> (index 2).
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(1, 2) = m.omega;
  h(2, 1) = m.omega;

  ComplexVector psi_env(2);
  psi_env << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);

  return process::Scenario::from_hamiltonian(
      2, 2, m.rho0_matrix(), psi_env * psi_env.adjoint(), h,
      {m.tau1, m.tau2});
}

process::MeasurementPlan two_qubit_measurement_plan(double theta, int k) {
  const std::vector<double> values{1.0, -1.0};
  process::Projective edge{rotated_basis(theta).vectors, values};
  process::Projective middle{phi_basis(k), values};
  return {edge, middle, edge};
}

HalfPiReduced halfpi_reduced_state(const TwoQubitModel& m, double angle_tol) {
  const double sign = branch_sign(m.k);
  for (const double theta : {m.theta1(), m.theta2()}) {
    // theta = (k + 1/2) pi means cos theta = 0 and sin theta = (-1)^k.
    if (std::abs(std::cos(theta)) > angle_tol ||
        std::abs(std::sin(theta) + sign) > angle_tol) {
      throw UsageError(
          "halfpi_reduced_state: step angle is not at the model's "
          "(k + 1/2) pi point");
    }
  }

  const process::ProcessState full =
      process::build_process_state(build_two_qubit_scenario(m));

  // Leave time 2 unmeasured: contract the link on (S2, A2). The link is a
  // sum of product duals Pi_ij (x) Pi_ij, so two single-slot contractions
  // per term suffice.
  const std::string s2 = process::system_slot_label(2);
  const std::string a2 = process::operation_slot_label(2);
  std::optional<opstate::OperatorState> contracted;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(2, 2);
      unit(i, j) = 1.0;
      opstate::OperatorState term = opstate::partial_contract(
          opstate::partial_contract(full.state(), s2, unit), a2, unit);
      if (contracted) {
        contracted->matrix() += term.matrix();
      } else {
        contracted = std::move(term);
      }
    }
  }
  const process::ProcessState reduced(
      opstate::OperatorState(process::ProcessState::canonical_slots(2, 2),
                             contracted->matrix()),
      2, 2);

  // The leftover pair carries the link with a Z twist: the projector onto
  // |--> - |++> scaled to trace 2, independent of rho0 and of k.
  ComplexVector w(4);
  w << 1.0, 0.0, 0.0, -1.0;
  const ComplexMatrix expected = opstate::tensor_product(
      opstate::OperatorState(
          opstate::SlotSystem({{process::system_slot_label(1), 2}}),
          m.rho0_matrix()),
      opstate::OperatorState(
          opstate::SlotSystem({{process::operation_slot_label(1), 2},
                               {process::system_slot_label(2), 2}}),
          ComplexMatrix(w * w.adjoint())))
                                    .matrix();
  if ((reduced.state().matrix() - expected).norm() > 1e-10) {
    throw ConventionError(
        "halfpi_reduced_state: reduced state deviates from the twisted-link "
        "form");
  }

  // phi_plus = |+>_{A1} (x) phi_basis[0], phi_minus = |->_{A1} (x)
  // phi_basis[1]; A1 index is most significant and |-> is index 0.
  const auto phi = phi_basis(m.k);
  ComplexVector phi_plus = ComplexVector::Zero(4);
  ComplexVector phi_minus = ComplexVector::Zero(4);
  phi_plus.segment(2, 2) = phi[0];
  phi_minus.segment(0, 2) = phi[1];
  return HalfPiReduced{reduced, phi_plus, phi_minus};
}

std::vector<CurvePoint> k3_curve(const TwoQubitModel& m,
                                 const std::vector<double>& thetas,
                                 double tol) {
  for (const double theta : thetas) {
    if (!(theta >= -kPi && theta <= kPi)) {
      throw UsageError("k3_curve: grid point outside [-pi, pi]");
    }
  }
  const process::ProcessState ps =
      process::build_process_state(build_two_qubit_scenario(m));
  std::vector<CurvePoint> curve;
  curve.reserve(thetas.size());
  for (const double theta : thetas) {
    curve.push_back(
        {theta, lg::k3(ps, two_qubit_measurement_plan(theta, m.k), tol)});
  }
  return curve;
}

}  // namespace lgps::scenarios
