// SPDX-License-Identifier: Apache-2.0
#pragma once

// Multitime quantum processes in Choi form. An n-time process over a
// d-dimensional system occupies the canonical slot chain
//   S1, A1, S2, A2, ..., Sn
// where Sj carries the state fed to the j-th measurement and Aj carries the
// operation applied at time j. Measurement statistics arise by contracting
// duals against these slots; duals on Aj slots enter complex conjugated.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lgps/matrix.hpp"
#include "lgps/opstate.hpp"

namespace lgps::process {

// Canonical slot labels, 1-based time index.
std::string system_slot_label(int time);
std::string operation_slot_label(int time);

// System-environment dilation of an n-time process: an initial product state
// and n-1 step unitaries on system (x) environment, system factor first.
struct Scenario {
  int dim_system = 0;
  int dim_env = 0;
  ComplexMatrix rho0_system;
  ComplexMatrix rho0_env;
  std::vector<ComplexMatrix> unitaries;

  int n_times() const { return static_cast<int>(unitaries.size()) + 1; }

  // Step unitaries exp(-i h t_j) generated by a fixed Hamiltonian on
  // system (x) environment and per-step durations.
  static Scenario from_hamiltonian(int dim_system, int dim_env,
                                   ComplexMatrix rho0_system,
                                   ComplexMatrix rho0_env,
                                   const ComplexMatrix& hamiltonian,
                                   const std::vector<double>& durations,
                                   double tol = kDefaultTol);

  // Throws SchemaError naming the offending field: states must be Hermitian,
  // positive semidefinite, unit trace; unitaries must be unitary of matching
  // dimension; at least two times.
  void validate(double tol = kDefaultTol) const;
};

// Projective measurement in an orthonormal basis; values[x] is the numeric
// outcome assigned to basis[x] (e.g. +1, -1).
struct Projective {
  std::vector<ComplexVector> basis;
  std::vector<double> values;

  int n_outcomes() const { return static_cast<int>(basis.size()); }
};

// Leave the time slot untouched (identity instrument, single trivial outcome).
struct Unmeasured {};

using Instrument = std::variant<Projective, Unmeasured>;

// One instrument per time, in time order.
using MeasurementPlan = std::vector<Instrument>;

int n_outcomes(const Instrument& instrument);
bool is_measured(const Instrument& instrument);

// Throws SchemaError/ConventionError if the plan does not have n_times
// entries, a basis is not a complete orthonormal basis of dimension dim, or
// outcome values are missing.
void validate_plan(const MeasurementPlan& plan, int n_times, int dim,
                   double tol = kDefaultTol);

// A process state: Choi-form operator on the canonical slot chain.
// Normalization convention: contracting the all-unmeasured dual
//   (Phi^{S1 A1} (x) ... (x) Phi^{S_{n-1} A_{n-1}} (x) I^{Sn}|
// gives 1 for a process built from a trace-one initial state (process_trace).
class ProcessState {
 public:
  // The state must live on the canonical slots for n_times d-dimensional
  // system slots, in canonical order.
  ProcessState(opstate::OperatorState state, int n_times, int dim);

  int n_times() const { return n_times_; }
  int dim() const { return dim_; }
  const opstate::OperatorState& state() const { return state_; }
  const ComplexMatrix& matrix() const { return state_.matrix(); }

  // Contraction with the all-unmeasured dual. Throws ConventionError if the
  // result has an imaginary part above tol.
  double process_trace(double tol = kDefaultTol) const;

  // Throws ConventionError unless Hermitian with process_trace 1 within tol.
  void validate(double tol = kDefaultTol) const;

  static opstate::SlotSystem canonical_slots(int n_times, int dim);

 private:
  opstate::OperatorState state_;
  int n_times_;
  int dim_;
};

// Feed rho0_system through the dilation circuit, inserting a maximally
// entangled link before each step and tracing out the environment at the end.
ProcessState build_process_state(const Scenario& scenario,
                                 double tol = kDefaultTol);

// The dual operator representing one global outcome of the plan, on the
// canonical slots:
//   - measured time j < n contributes Pi_{x_j} on Sj and conj(Pi_{x_j}) on Aj;
//   - unmeasured time j < n contributes the link Phi on (Sj, Aj);
//   - time n contributes Pi_{x_n} on Sn, or the identity if unmeasured.
// outcomes has one entry per time; entries at unmeasured times must be 0.
opstate::OperatorState n_point_operation(const MeasurementPlan& plan,
                                         const std::vector<int>& outcomes,
                                         int dim);

// Contract the first prefix_outcomes.size() times of the state with their
// instruments (outcome entries at unmeasured times must be 0) and renumber
// the remaining times from 1. The result is unnormalized: its process_trace
// is the probability of the contracted prefix.
ProcessState reduce_process_state(const ProcessState& ps,
                                  const MeasurementPlan& plan,
                                  const std::vector<int>& prefix_outcomes);

// Memoryless process assembled from per-step Choi blocks:
//   S = rho0 on S1 (x) step_choi[0] on (A1, S2) (x) step_choi[1] on (A2, S3) ...
// Each block is the Choi state of the step channel, input slot first. Blocks
// must be Hermitian, positive semidefinite, and trace preserving within tol.
ProcessState markov_product_state(const std::vector<ComplexMatrix>& step_choi,
                                  const ComplexMatrix& rho0,
                                  double tol = kDefaultTol);

}  // namespace lgps::process
