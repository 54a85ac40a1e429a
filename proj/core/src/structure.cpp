// SPDX-License-Identifier: Apache-2.0

#include "lgps/structure.hpp"

#include <cmath>
#include <utility>

namespace lgps::structure {

namespace {

using opstate::OperatorState;
using opstate::SlotSystem;
using process::ProcessState;

ComplexMatrix unit_matrix(const ComplexVector& x, const ComplexVector& y) {
  return x * y.adjoint();
}

std::vector<ComplexVector> conjugate_basis(const std::vector<ComplexVector>& b) {
  std::vector<ComplexVector> out;
  out.reserve(b.size());
  for (const auto& v : b) out.push_back(v.conjugate());
  return out;
}

void check_three_times(const ProcessState& ps, const char* what) {
  if (ps.n_times() != 3) {
    throw UsageError(std::string(what) + " requires a three-time state");
  }
}

void check_bases(const Bases& bases, int dim) {
  opstate::check_orthonormal_basis(bases.basis1, dim);
  opstate::check_orthonormal_basis(bases.basis2, dim);
}

// Jointly reduced time-1 outcome state: contract Pi_{x} on S1 and its
// conjugate on A1.
OperatorState reduced_block(const ProcessState& ps,
                            const std::vector<ComplexVector>& basis1, int x) {
  const ComplexMatrix pi = unit_matrix(basis1[static_cast<std::size_t>(x)],
                                       basis1[static_cast<std::size_t>(x)]);
  return partial_contract(partial_contract(ps.state(), "S1", pi), "A1",
                          pi.conjugate());
}

// Sum of squared Frobenius norms of the off-diagonal blocks of one slot.
double offdiag_sq(const OperatorState& s, const std::string& label,
                  const std::vector<ComplexVector>& basis, bool conjugated) {
  const int d = s.slots().dim_of(label);
  double sq = 0.0;
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) {
      if (x == y) continue;
      ComplexMatrix dual = unit_matrix(basis[static_cast<std::size_t>(x)],
                                       basis[static_cast<std::size_t>(y)]);
      if (conjugated) dual = dual.conjugate();
      const OperatorState block = partial_contract(s, label, dual);
      sq += block.matrix().squaredNorm();
    }
  }
  return sq;
}

// Marginal blocks of the Markov product form: the initial slot normalized to
// trace 1, each step link block normalized to trace d.
std::vector<OperatorState> product_marginals(const ProcessState& ps) {
  const int n = ps.n_times();
  const int d = ps.dim();
  const Complex total = ps.matrix().trace();
  if (std::abs(total) < 1e-14) {
    throw UsageError("markov product form undefined for a traceless state");
  }

  std::vector<std::vector<std::string>> blocks;
  blocks.push_back({process::system_slot_label(1)});
  for (int j = 1; j < n; ++j) {
    blocks.push_back(
        {process::operation_slot_label(j), process::system_slot_label(j + 1)});
  }

  std::vector<OperatorState> marginals;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    OperatorState m = ps.state();
    for (int pos = m.slots().size() - 1; pos >= 0; --pos) {
      const std::string label = m.slots().at(pos).label;
      bool keep = false;
      for (const auto& l : blocks[b]) keep = keep || (l == label);
      if (!keep) m = partial_trace(m, label);
    }
    const double target = (b == 0) ? 1.0 : static_cast<double>(d);
    m.matrix() *= target / total;
    marginals.push_back(std::move(m));
  }
  return marginals;
}

}  // namespace

const char* condition_name(Condition c) {
  switch (c) {
    case Condition::C1A: return "1A";
    case Condition::C1B: return "1B";
    case Condition::C2A: return "2A";
    case Condition::C2B: return "2B";
  }
  return "?";
}

double condition_residual(const ProcessState& ps, Condition which,
                          const Bases& bases) {
  check_three_times(ps, "condition_residual");
  check_bases(bases, ps.dim());
  const int d = ps.dim();

  switch (which) {
    case Condition::C1A:
      return std::sqrt(offdiag_sq(ps.state(), "S1", bases.basis1, false));
    case Condition::C1B:
      return std::sqrt(offdiag_sq(ps.state(), "A1", bases.basis1, true));
    case Condition::C2A:
    case Condition::C2B: {
      double sq = 0.0;
      for (int x1 = 0; x1 < d; ++x1) {
        const OperatorState block = reduced_block(ps, bases.basis1, x1);
        sq += (which == Condition::C2A)
                  ? offdiag_sq(block, "S2", bases.basis2, false)
                  : offdiag_sq(block, "A2", bases.basis2, true);
      }
      return std::sqrt(sq);
    }
  }
  throw UsageError("unknown condition");
}

process::ProcessState qc_projection(const ProcessState& ps,
                                    const std::vector<Condition>& conditions,
                                    const Bases& bases) {
  check_three_times(ps, "qc_projection");
  check_bases(bases, ps.dim());
  if (conditions.empty()) {
    throw UsageError("qc_projection needs at least one condition");
  }
  bool want_1a = false, want_1b = false, want_2a = false, want_2b = false;
  for (Condition c : conditions) {
    switch (c) {
      case Condition::C1A: want_1a = true; break;
      case Condition::C1B: want_1b = true; break;
      case Condition::C2A: want_2a = true; break;
      case Condition::C2B: want_2b = true; break;
    }
  }
  if ((want_1a && want_1b) || (want_2a && want_2b)) {
    throw UsageError(
        "qc_projection takes at most one condition per measurement time");
  }

  const int d = ps.dim();
  OperatorState state = ps.state();

  if (want_1a) state = dephase(state, "S1", bases.basis1);
  if (want_1b) state = dephase(state, "A1", conjugate_basis(bases.basis1));

  if (want_2a || want_2b) {
    // Replace each jointly diagonal time-1 block by its dephased version;
    // off-diagonal block components stay untouched.
    ComplexMatrix updated = state.matrix();
    for (int x1 = 0; x1 < d; ++x1) {
      const ComplexMatrix pi =
          unit_matrix(bases.basis1[static_cast<std::size_t>(x1)],
                      bases.basis1[static_cast<std::size_t>(x1)]);
      const OperatorState block = partial_contract(
          partial_contract(state, "S1", pi), "A1", pi.conjugate());
      OperatorState dephased =
          want_2a ? dephase(block, "S2", bases.basis2)
                  : dephase(block, "A2", conjugate_basis(bases.basis2));
      dephased.matrix() -= block.matrix();

      OperatorState carrier(SlotSystem({{"S1", d}}), pi);
      carrier = tensor_product(
          carrier, OperatorState(SlotSystem({{"A1", d}}), pi.conjugate()));
      updated += tensor_product(carrier, dephased).matrix();
    }
    state = OperatorState(state.slots(), std::move(updated));
  }

  return ProcessState(std::move(state), ps.n_times(), d);
}

double markov_product_residual(const ProcessState& ps) {
  const auto marginals = product_marginals(ps);
  OperatorState product = marginals.front();
  for (std::size_t b = 1; b < marginals.size(); ++b) {
    product = tensor_product(product, marginals[b]);
  }
  return (ps.matrix() - product.matrix()).norm();
}

double fully_classical_residual(const ProcessState& ps, const Bases& bases) {
  check_three_times(ps, "fully_classical_residual");
  check_bases(bases, ps.dim());
  const int d = ps.dim();

  ComplexMatrix kept = ComplexMatrix::Zero(ps.matrix().rows(), ps.matrix().cols());
  for (int x1 = 0; x1 < d; ++x1) {
    const ComplexMatrix pi1 =
        unit_matrix(bases.basis1[static_cast<std::size_t>(x1)],
                    bases.basis1[static_cast<std::size_t>(x1)]);
    for (int x2 = 0; x2 < d; ++x2) {
      const ComplexMatrix pi2 =
          unit_matrix(bases.basis2[static_cast<std::size_t>(x2)],
                      bases.basis2[static_cast<std::size_t>(x2)]);
      OperatorState block = partial_contract(ps.state(), "S1", pi1);
      block = partial_contract(block, "A1", pi1.conjugate());
      block = partial_contract(block, "S2", pi2);
      block = partial_contract(block, "A2", pi2.conjugate());

      OperatorState carrier(SlotSystem({{"S1", d}}), pi1);
      carrier = tensor_product(
          carrier, OperatorState(SlotSystem({{"A1", d}}), pi1.conjugate()));
      carrier = tensor_product(carrier, OperatorState(SlotSystem({{"S2", d}}), pi2));
      carrier = tensor_product(
          carrier, OperatorState(SlotSystem({{"A2", d}}), pi2.conjugate()));
      kept += tensor_product(carrier, block).matrix();
    }
  }
  return (ps.matrix() - kept).norm();
}

DisturbanceReport disturbance_conditions(const ProcessState& ps,
                                         const Bases& bases, double tol) {
  check_three_times(ps, "disturbance_conditions");
  check_bases(bases, ps.dim());
  const int d = ps.dim();

  DisturbanceReport report;
  report.markov_product_residual = markov_product_residual(ps);
  report.applicable = report.markov_product_residual <= tol;

  const auto marginals = product_marginals(ps);
  const ComplexMatrix& rho0 = marginals[0].matrix();
  double sq = 0.0;
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) {
      if (x == y) continue;
      const Complex e = bases.basis1[static_cast<std::size_t>(x)].dot(
          rho0 * bases.basis1[static_cast<std::size_t>(y)]);
      sq += std::norm(e);
    }
  }
  report.rho0_residual = std::sqrt(sq);
  report.rho0_diagonal = report.applicable && report.rho0_residual <= tol;

  // First step block on (A1, S2): contracting the conjugated basis-1
  // projector on A1 yields the step's output state for that input.
  sq = 0.0;
  for (int x1 = 0; x1 < d; ++x1) {
    const ComplexMatrix pi =
        unit_matrix(bases.basis1[static_cast<std::size_t>(x1)],
                    bases.basis1[static_cast<std::size_t>(x1)]);
    const OperatorState out =
        partial_contract(marginals[1], "A1", pi.conjugate());
    for (int x = 0; x < d; ++x) {
      for (int y = 0; y < d; ++y) {
        if (x == y) continue;
        const Complex e = bases.basis2[static_cast<std::size_t>(x)].dot(
            out.matrix() * bases.basis2[static_cast<std::size_t>(y)]);
        sq += std::norm(e);
      }
    }
  }
  report.step_residual = std::sqrt(sq);
  report.step_diagonal = report.applicable && report.step_residual <= tol;
  return report;
}

double markov_order_form_residual(
    const ProcessState& ps,
    const std::array<std::vector<std::string>, 3>& partition,
    const std::vector<MarkovOrderComponent>& components, double tol) {
  // The partition must list the canonical slots in order, split into three
  // contiguous groups.
  std::vector<std::string> flattened;
  for (const auto& group : partition) {
    if (group.empty()) throw UsageError("partition groups must be nonempty");
    for (const auto& l : group) flattened.push_back(l);
  }
  const auto& slots = ps.state().slots();
  if (static_cast<int>(flattened.size()) != slots.size()) {
    throw UsageError("partition does not cover the slot chain");
  }
  for (int i = 0; i < slots.size(); ++i) {
    if (flattened[static_cast<std::size_t>(i)] != slots.at(i).label) {
      throw UsageError("partition must list the canonical slots in order");
    }
  }
  if (components.empty()) {
    throw UsageError("at least one component required");
  }

  std::array<Eigen::Index, 3> dims{1, 1, 1};
  for (std::size_t g = 0; g < 3; ++g) {
    for (const auto& l : partition[g]) dims[g] *= slots.at(slots.position_of(l)).dim;
  }

  double p_total = 0.0;
  for (std::size_t x = 0; x < components.size(); ++x) {
    const auto& c = components[x];
    if (c.probability < -1e-12) {
      throw ConventionError("component " + std::to_string(x) +
                            " has negative probability");
    }
    p_total += c.probability;
    if (c.history.rows() != dims[0] || c.history.cols() != dims[0] ||
        c.memory.rows() != dims[1] || c.memory.cols() != dims[1] ||
        c.future.rows() != dims[2] || c.future.cols() != dims[2] ||
        c.memory_dual.rows() != dims[1] || c.memory_dual.cols() != dims[1]) {
      throw ShapeError("component " + std::to_string(x) +
                       " blocks do not match the partition dimensions");
    }
  }
  if (std::abs(p_total - 1.0) > tol) {
    throw ConventionError("component probabilities sum to " +
                          std::to_string(p_total) + ", expected 1");
  }
  for (std::size_t x = 0; x < components.size(); ++x) {
    for (std::size_t y = 0; y < components.size(); ++y) {
      const Complex g =
          opstate::op_inner(components[x].memory_dual, components[y].memory);
      const Complex expect = (x == y) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      if (std::abs(g - expect) > tol) {
        throw ConventionError("memory duality violated at pair (" +
                              std::to_string(x) + ", " + std::to_string(y) +
                              ")");
      }
    }
  }

  ComplexMatrix form =
      ComplexMatrix::Zero(ps.matrix().rows(), ps.matrix().cols());
  for (const auto& c : components) {
    OperatorState term(SlotSystem(), ComplexMatrix::Ones(1, 1));
    std::array<const ComplexMatrix*, 3> mats{&c.history, &c.memory, &c.future};
    for (std::size_t g = 0; g < 3; ++g) {
      std::vector<opstate::Slot> group_slots;
      for (const auto& l : partition[g]) {
        group_slots.push_back({l, slots.at(slots.position_of(l)).dim});
      }
      term = tensor_product(
          term, OperatorState(SlotSystem(std::move(group_slots)), *mats[g]));
    }
    form += c.probability * term.matrix();
  }
  return (ps.matrix() - form).norm();
}

QCClassification classify(const ProcessState& ps, const Bases& bases,
                          double tol) {
  QCClassification out;
  out.residual_1a = condition_residual(ps, Condition::C1A, bases);
  out.residual_1b = condition_residual(ps, Condition::C1B, bases);
  out.residual_2a = condition_residual(ps, Condition::C2A, bases);
  out.residual_2b = condition_residual(ps, Condition::C2B, bases);
  out.holds_1a = out.residual_1a < tol;
  out.holds_1b = out.residual_1b < tol;
  out.holds_2a = out.residual_2a < tol;
  out.holds_2b = out.residual_2b < tol;
  // Pair order matches the four allowed forms: (1B,2A), (1A,2A), (1B,2B),
  // (1A,2B).
  const std::array<std::pair<Condition, Condition>, 4> pairs{
      std::pair{Condition::C1B, Condition::C2A},
      std::pair{Condition::C1A, Condition::C2A},
      std::pair{Condition::C1B, Condition::C2B},
      std::pair{Condition::C1A, Condition::C2B}};
  const auto holds = [&](Condition c) {
    switch (c) {
      case Condition::C1A: return out.holds_1a;
      case Condition::C1B: return out.holds_1b;
      case Condition::C2A: return out.holds_2a;
      case Condition::C2B: return out.holds_2b;
    }
    return false;
  };
  for (const auto& p : pairs) {
    if (holds(p.first) && holds(p.second)) out.qc_form.push_back(p);
  }
  out.markov_product_residual = markov_product_residual(ps);
  out.bases = bases;
  out.tol = tol;
  return out;
}

}  // namespace lgps::structure
