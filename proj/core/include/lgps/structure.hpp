// SPDX-License-Identifier: Apache-2.0
#pragma once

// Structural classification of three-time process states: diagonality
// conditions on the time-1 and time-2 slots relative to chosen measurement
// bases, dephasing projections onto the allowed forms, Markov product form,
// measurement-disturbance conditions, and the history-memory-future form.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "lgps/matrix.hpp"
#include "lgps/process.hpp"

namespace lgps::structure {

// Diagonality conditions. C1A: the S1 slot is block-diagonal in basis 1.
// C1B: the A1 slot is block-diagonal in the conjugated basis 1. C2A/C2B: the
// same on S2/A2 (basis 2) inside every jointly reduced time-1 outcome block.
enum class Condition { C1A, C1B, C2A, C2B };

const char* condition_name(Condition c);

// Measurement bases for times 1 and 2.
struct Bases {
  std::vector<ComplexVector> basis1;
  std::vector<ComplexVector> basis2;
};

struct QCClassification {
  double residual_1a = 0.0;
  double residual_1b = 0.0;
  double residual_2a = 0.0;
  double residual_2b = 0.0;
  bool holds_1a = false;
  bool holds_1b = false;
  bool holds_2a = false;
  bool holds_2b = false;
  // Condition pairs (one time-1 condition, one time-2 condition) that hold;
  // any such pair makes the two-time marginals Kolmogorov-consistent.
  std::vector<std::pair<Condition, Condition>> qc_form;
  double markov_product_residual = 0.0;
  Bases bases;
  double tol = kDefaultTol;
};

struct DisturbanceReport {
  // False when the state is not in Markov product form within tol; the
  // diagonality checks are still reported for the extracted marginal blocks.
  bool applicable = false;
  double markov_product_residual = 0.0;
  // Off-diagonal norm of the initial state in basis 1.
  double rho0_residual = 0.0;
  bool rho0_diagonal = false;
  // Root-sum-square off-diagonal norm (basis 2) of the first step's output
  // states for all basis-1 inputs.
  double step_residual = 0.0;
  bool step_diagonal = false;
};

// One component of the history-memory-future form: probability weight, the
// three block operators, and the dual that the memory blocks must be
// orthonormal against ((memory_dual_x | memory_y) = delta_xy).
struct MarkovOrderComponent {
  double probability = 0.0;
  ComplexMatrix history;
  ComplexMatrix memory;
  ComplexMatrix memory_dual;
  ComplexMatrix future;
};

// Root-sum-square Frobenius norm of the off-diagonal blocks named by the
// condition. For C2A/C2B the blocks are taken inside every jointly reduced
// time-1 outcome state and summed over outcomes.
double condition_residual(const process::ProcessState& ps, Condition which,
                          const Bases& bases);

// Dephasing projection onto the form allowed by the given conditions (at most
// one of {C1A, C1B} and at most one of {C2A, C2B}): time-1 conditions dephase
// their slot in basis 1; time-2 conditions dephase their slot in basis 2
// inside each jointly diagonal time-1 outcome block, leaving all other block
// components untouched. Idempotent; the output has zero residual for the
// given conditions and keeps every outcome-diagonal contraction of ps.
process::ProcessState qc_projection(const process::ProcessState& ps,
                                    const std::vector<Condition>& conditions,
                                    const Bases& bases);

// Frobenius distance from the product of the state's own marginal blocks
// (initial slot, then one block per step link). Zero iff the state factorizes
// across the canonical step bipartitions.
double markov_product_residual(const process::ProcessState& ps);

// Frobenius distance from the doubly diagonal form: only components jointly
// diagonal on (S1, A1) in basis 1 and on (S2, A2) in basis 2 are kept.
double fully_classical_residual(const process::ProcessState& ps,
                                const Bases& bases);

// Checks that the initial state is diagonal in basis 1 and that the first
// step maps every basis-1 projector to a state diagonal in basis 2. Requires
// Markov product form; otherwise the report is flagged inapplicable.
DisturbanceReport disturbance_conditions(const process::ProcessState& ps,
                                         const Bases& bases,
                                         double tol = kDefaultTol);

// Frobenius distance between ps and sum_x P(x) H_x (x) M_x (x) F_x, where
// the partition lists the slot labels of the history, memory, and future
// groups (contiguous, in canonical order). Component probabilities must be
// nonnegative and sum to 1; memory blocks must satisfy the dual orthogonality
// (memory_dual_x | memory_y) = delta_xy within tol.
double markov_order_form_residual(
    const process::ProcessState& ps,
    const std::array<std::vector<std::string>, 3>& partition,
    const std::vector<MarkovOrderComponent>& components,
    double tol = kDefaultTol);

// All four condition residuals, the satisfied condition pairs, and the Markov
// product residual for the given bases.
QCClassification classify(const process::ProcessState& ps, const Bases& bases,
                          double tol = kDefaultTol);

}  // namespace lgps::structure
