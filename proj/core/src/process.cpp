// SPDX-License-Identifier: Apache-2.0

#include "lgps/process.hpp"

#include <cmath>
#include <utility>

namespace lgps::process {

namespace {

using opstate::OperatorState;
using opstate::Slot;
using opstate::SlotSystem;

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

void check_density_matrix(const ComplexMatrix& rho, int dim,
                          const std::string& field, double tol) {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw SchemaError(field + ": expected " + std::to_string(dim) + "x" +
                      std::to_string(dim) + " matrix");
  }
  if (!is_hermitian(rho, tol)) throw SchemaError(field + ": not Hermitian");
  if (!is_positive_semidefinite(rho, tol)) {
    throw SchemaError(field + ": not positive semidefinite");
  }
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > tol) {
    throw SchemaError(field + ": trace is not 1");
  }
}

// Contract the link dual (Phi| = sum_ij (Pi_ij (x) Pi_ij| over a slot pair.
OperatorState contract_link_pair(const OperatorState& s,
                                 const std::string& label_a,
                                 const std::string& label_b) {
  const int d = s.slots().dim_of(label_a);
  if (s.slots().dim_of(label_b) != d) {
    throw ShapeError("link contraction requires equal slot dimensions");
  }
  OperatorState out(SlotSystem(), ComplexMatrix::Zero(1, 1));
  bool first = true;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      OperatorState term =
          partial_contract(partial_contract(s, label_a, unit), label_b, unit);
      if (first) {
        out = std::move(term);
        first = false;
      } else {
        out.matrix() += term.matrix();
      }
    }
  }
  return out;
}

}  // namespace

std::string system_slot_label(int time) { return "S" + std::to_string(time); }
std::string operation_slot_label(int time) { return "A" + std::to_string(time); }

Scenario Scenario::from_hamiltonian(int dim_system, int dim_env,
                                    ComplexMatrix rho0_system,
                                    ComplexMatrix rho0_env,
                                    const ComplexMatrix& hamiltonian,
                                    const std::vector<double>& durations,
                                    double tol) {
  const int d_total = dim_system * dim_env;
  if (hamiltonian.rows() != d_total || hamiltonian.cols() != d_total) {
    throw SchemaError("hamiltonian: expected " + std::to_string(d_total) + "x" +
                      std::to_string(d_total) + " matrix");
  }
  if (!is_hermitian(hamiltonian, tol)) {
    throw SchemaError("hamiltonian: not Hermitian");
  }
  if (durations.empty()) {
    throw SchemaError("durations: at least one step required");
  }
  Scenario sc;
  sc.dim_system = dim_system;
  sc.dim_env = dim_env;
  sc.rho0_system = std::move(rho0_system);
  sc.rho0_env = std::move(rho0_env);
  sc.unitaries.reserve(durations.size());
  for (double t : durations) {
    sc.unitaries.push_back(hermitian_evolution(hamiltonian, t, tol));
  }
  sc.validate(tol);
  return sc;
}

void Scenario::validate(double tol) const {
  if (dim_system <= 0) throw SchemaError("dim_system: must be positive");
  if (dim_env <= 0) throw SchemaError("dim_env: must be positive");
  check_density_matrix(rho0_system, dim_system, "rho0_system", tol);
  check_density_matrix(rho0_env, dim_env, "rho0_env", tol);
  if (unitaries.empty()) {
    throw SchemaError("unitaries: at least one step required");
  }
  const int d_total = dim_system * dim_env;
  for (std::size_t j = 0; j < unitaries.size(); ++j) {
    const auto& u = unitaries[j];
    const std::string field = "unitaries[" + std::to_string(j) + "]";
    if (u.rows() != d_total || u.cols() != d_total) {
      throw SchemaError(field + ": expected " + std::to_string(d_total) + "x" +
                        std::to_string(d_total) + " matrix");
    }
    if (!is_unitary(u, tol)) throw SchemaError(field + ": not unitary");
  }
}

int n_outcomes(const Instrument& instrument) {
  if (std::holds_alternative<Unmeasured>(instrument)) return 1;
  return std::get<Projective>(instrument).n_outcomes();
}

bool is_measured(const Instrument& instrument) {
  return std::holds_alternative<Projective>(instrument);
}

void validate_plan(const MeasurementPlan& plan, int n_times, int dim,
                   double tol) {
  if (static_cast<int>(plan.size()) != n_times) {
    throw SchemaError("plan: expected " + std::to_string(n_times) +
                      " instruments, got " + std::to_string(plan.size()));
  }
  for (std::size_t j = 0; j < plan.size(); ++j) {
    if (const auto* p = std::get_if<Projective>(&plan[j])) {
      const std::string field = "plan[" + std::to_string(j) + "]";
      try {
        opstate::check_orthonormal_basis(p->basis, dim, tol);
      } catch (const ConventionError& e) {
        throw SchemaError(field + ": " + e.what());
      }
      if (p->values.size() != p->basis.size()) {
        throw SchemaError(field + ": values count does not match basis");
      }
    }
  }
}

opstate::SlotSystem ProcessState::canonical_slots(int n_times, int dim) {
  std::vector<Slot> slots;
  slots.reserve(static_cast<std::size_t>(2 * n_times - 1));
  for (int j = 1; j < n_times; ++j) {
    slots.push_back({system_slot_label(j), dim});
    slots.push_back({operation_slot_label(j), dim});
  }
  slots.push_back({system_slot_label(n_times), dim});
  return SlotSystem(std::move(slots));
}

ProcessState::ProcessState(opstate::OperatorState state, int n_times, int dim)
    : state_(std::move(state)), n_times_(n_times), dim_(dim) {
  if (n_times_ < 2) throw UsageError("process state needs at least two times");
  if (!(state_.slots() == canonical_slots(n_times_, dim_))) {
    throw LabelError("process state is not on the canonical slot chain");
  }
}

double ProcessState::process_trace(double tol) const {
  const MeasurementPlan all_unmeasured(static_cast<std::size_t>(n_times_),
                                       Instrument(Unmeasured{}));
  const OperatorState dual = n_point_operation(
      all_unmeasured, std::vector<int>(static_cast<std::size_t>(n_times_), 0),
      dim_);
  const Complex value = op_inner(dual, state_);
  if (std::abs(value.imag()) > tol) {
    throw ConventionError("process trace has imaginary part " +
                          std::to_string(value.imag()));
  }
  return value.real();
}

void ProcessState::validate(double tol) const {
  if (!is_hermitian(state_.matrix(), tol)) {
    throw ConventionError("process state is not Hermitian");
  }
  const double t = process_trace(tol);
  if (std::abs(t - 1.0) > tol) {
    throw ConventionError("process trace is " + std::to_string(t) +
                          ", expected 1");
  }
}

ProcessState build_process_state(const Scenario& scenario, double tol) {
  scenario.validate(tol);
  const int n = scenario.n_times();
  const int d = scenario.dim_system;

  OperatorState state(SlotSystem({{system_slot_label(1), d}}),
                      scenario.rho0_system);
  const ComplexMatrix link = opstate::max_entangled_link(d);
  for (int j = 1; j < n; ++j) {
    OperatorState link_state(
        SlotSystem({{operation_slot_label(j), d}, {system_slot_label(j + 1), d}}),
        link);
    state = tensor_product(state, link_state);
  }
  state = tensor_product(
      state, OperatorState(SlotSystem({{"E", scenario.dim_env}}),
                           scenario.rho0_env));

  for (int j = 1; j < n; ++j) {
    state = apply_conjugation(state, scenario.unitaries[static_cast<std::size_t>(j - 1)],
                              {system_slot_label(j + 1), "E"});
  }
  state = partial_trace(state, "E");
  return ProcessState(std::move(state), n, d);
}

opstate::OperatorState n_point_operation(const MeasurementPlan& plan,
                                         const std::vector<int>& outcomes,
                                         int dim) {
  const int n = static_cast<int>(plan.size());
  if (n < 2) throw UsageError("plan needs at least two times");
  if (static_cast<int>(outcomes.size()) != n) {
    throw ShapeError("outcomes: expected one entry per time");
  }
  for (int j = 0; j < n; ++j) {
    const int count = n_outcomes(plan[static_cast<std::size_t>(j)]);
    const int x = outcomes[static_cast<std::size_t>(j)];
    if (x < 0 || x >= count) {
      throw UsageError("outcome index " + std::to_string(x) +
                       " out of range at time " + std::to_string(j + 1));
    }
  }

  const ComplexMatrix link = opstate::max_entangled_link(dim);
  OperatorState dual(SlotSystem(), ComplexMatrix::Ones(1, 1));
  for (int j = 1; j < n; ++j) {
    if (const auto* p = std::get_if<Projective>(&plan[static_cast<std::size_t>(j - 1)])) {
      const ComplexMatrix pi =
          projector(p->basis[static_cast<std::size_t>(outcomes[static_cast<std::size_t>(j - 1)])]);
      dual = tensor_product(
          dual, OperatorState(SlotSystem({{system_slot_label(j), dim}}), pi));
      dual = tensor_product(
          dual, OperatorState(SlotSystem({{operation_slot_label(j), dim}}),
                              pi.conjugate()));
    } else {
      dual = tensor_product(
          dual, OperatorState(SlotSystem({{system_slot_label(j), dim},
                                          {operation_slot_label(j), dim}}),
                              link));
    }
  }
  ComplexMatrix last;
  if (const auto* p = std::get_if<Projective>(&plan[static_cast<std::size_t>(n - 1)])) {
    last = projector(p->basis[static_cast<std::size_t>(outcomes[static_cast<std::size_t>(n - 1)])]);
  } else {
    last = ComplexMatrix::Identity(dim, dim);
  }
  dual = tensor_product(
      dual, OperatorState(SlotSystem({{system_slot_label(n), dim}}), std::move(last)));
  return dual;
}

ProcessState reduce_process_state(const ProcessState& ps,
                                  const MeasurementPlan& plan,
                                  const std::vector<int>& prefix_outcomes) {
  const int n = ps.n_times();
  const int d = ps.dim();
  validate_plan(plan, n, d);
  const int k = static_cast<int>(prefix_outcomes.size());
  if (k < 1 || k >= n) {
    throw UsageError("prefix must cover between 1 and n_times - 1 times");
  }

  OperatorState state = ps.state();
  for (int j = 1; j <= k; ++j) {
    const Instrument& ins = plan[static_cast<std::size_t>(j - 1)];
    const int x = prefix_outcomes[static_cast<std::size_t>(j - 1)];
    if (const auto* p = std::get_if<Projective>(&ins)) {
      if (x < 0 || x >= p->n_outcomes()) {
        throw UsageError("outcome index " + std::to_string(x) +
                         " out of range at time " + std::to_string(j));
      }
      const ComplexMatrix pi = projector(p->basis[static_cast<std::size_t>(x)]);
      state = partial_contract(state, system_slot_label(j), pi);
      state = partial_contract(state, operation_slot_label(j), pi.conjugate());
    } else {
      if (x != 0) {
        throw UsageError("outcome at unmeasured time " + std::to_string(j) +
                         " must be 0");
      }
      state = contract_link_pair(state, system_slot_label(j),
                                 operation_slot_label(j));
    }
  }

  // Renumber remaining times from 1.
  const SlotSystem remaining = ProcessState::canonical_slots(n - k, d);
  return ProcessState(OperatorState(remaining, state.matrix()), n - k, d);
}

ProcessState markov_product_state(const std::vector<ComplexMatrix>& step_choi,
                                  const ComplexMatrix& rho0, double tol) {
  if (step_choi.empty()) {
    throw UsageError("markov_product_state needs at least one step");
  }
  const int d = static_cast<int>(rho0.rows());
  check_density_matrix(rho0, d, "rho0", tol);
  const int n = static_cast<int>(step_choi.size()) + 1;

  OperatorState state(SlotSystem({{system_slot_label(1), d}}), rho0);
  for (int j = 1; j < n; ++j) {
    const auto& x = step_choi[static_cast<std::size_t>(j - 1)];
    const std::string field = "step_choi[" + std::to_string(j - 1) + "]";
    if (x.rows() != d * d || x.cols() != d * d) {
      throw SchemaError(field + ": expected " + std::to_string(d * d) + "x" +
                        std::to_string(d * d) + " matrix");
    }
    if (!is_positive_semidefinite(x, tol)) {
      throw ConventionError(field + ": not a positive semidefinite Choi block");
    }
    // Trace preservation: tracing the output slot must leave the identity on
    // the input slot.
    OperatorState block(
        SlotSystem({{operation_slot_label(j), d}, {system_slot_label(j + 1), d}}),
        x);
    const OperatorState in_marginal = partial_trace(block, system_slot_label(j + 1));
    if ((in_marginal.matrix() - ComplexMatrix::Identity(d, d)).norm() > tol) {
      throw ConventionError(field + ": step is not trace preserving");
    }
    state = tensor_product(state, block);
  }
  return ProcessState(std::move(state), n, d);
}

}  // namespace lgps::process
