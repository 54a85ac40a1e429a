// SPDX-License-Identifier: Apache-2.0
#pragma once

// Operators as vectors in Hilbert-Schmidt space, carried on named tensor
// slots. Conventions used throughout:
//   - inner product (a|b) = Tr(a^dag b), antilinear in the first argument;
//   - a multi-slot operator is stored as a dense matrix over the tensor
//     product of its slots, first slot most significant (Kronecker order);
//   - duals act by (d| s, i.e. the dual matrix enters conjugated.

#include <string>
#include <string_view>
#include <vector>

#include "lgps/errors.hpp"
#include "lgps/matrix.hpp"

namespace lgps::opstate {

struct Slot {
  std::string label;
  int dim = 0;
};

// Ordered list of uniquely labeled slots. A default-constructed system has no
// slots and total dimension 1 (scalars).
class SlotSystem {
 public:
  SlotSystem() = default;
  explicit SlotSystem(std::vector<Slot> slots);

  int size() const { return static_cast<int>(slots_.size()); }
  int total_dim() const { return total_dim_; }
  const std::vector<Slot>& slots() const { return slots_; }
  const Slot& at(int position) const;

  bool contains(std::string_view label) const;
  // Position of the labeled slot; throws LabelError if absent.
  int position_of(std::string_view label) const;
  int dim_of(std::string_view label) const;

  SlotSystem without(int position) const;
  bool operator==(const SlotSystem& other) const;

  // Composite dimensions to the left of, at, and to the right of a position,
  // so a flat index decomposes as i = (l * dim + p) * right + r.
  struct Split {
    int left = 1;
    int dim = 1;
    int right = 1;
  };
  Split split_at(int position) const;

 private:
  std::vector<Slot> slots_;
  int total_dim_ = 1;
};

// An operator on a slot system, viewed as a Hilbert-Schmidt vector.
class OperatorState {
 public:
  OperatorState(SlotSystem slots, ComplexMatrix matrix);

  const SlotSystem& slots() const { return slots_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  ComplexMatrix& matrix() { return matrix_; }
  int dim() const { return slots_.total_dim(); }

  // Scalar value of a fully contracted state (no slots left).
  Complex scalar() const;

 private:
  SlotSystem slots_;
  ComplexMatrix matrix_;
};

// (a|b) = Tr(a^dag b).
Complex op_inner(const ComplexMatrix& a, const ComplexMatrix& b);
// Slot systems must match exactly (labels, dims, order).
Complex op_inner(const OperatorState& a, const OperatorState& b);

// Unnormalized maximally entangled link on a pair of d-dimensional slots:
//   Phi = sum_ij |i><j| (x) |i><j| = |Omega><Omega|, Omega = sum_i |ii>.
// Trace d, rank 1. Contracting an operator dual (x| on either slot leaves
// conj(x) on the other slot.
ComplexMatrix max_entangled_link(int d);

// Choi-form state of the channel with the given Kraus operators, on the slot
// pair (input, output), input slot first:
//   C = sum_ij |i><j| (x) N(|i><j|) = sum_k (I (x) K_k) Phi (I (x) K_k)^dag.
// Kraus operators may be rectangular (out_dim x in_dim); all must agree.
ComplexMatrix choi_state(const std::vector<ComplexMatrix>& kraus);

// Tensor product; slot label sets must be disjoint. Slots of a precede b.
OperatorState tensor_product(const OperatorState& a, const OperatorState& b);

// Contract the dual (d| against one slot:
//   out = Tr_slot[(d^dag (x) I) s],
// i.e. out[r, c] = sum_pq conj(d[p, q]) s[(p, r), (q, c)] with the slot index
// split out of the row and column multi-indices. The slot is removed from the
// result; contracting the last slot yields a scalar state.
OperatorState partial_contract(const OperatorState& s, std::string_view label,
                               const ComplexMatrix& dual);

// partial_contract with the identity dual (the trace dual).
OperatorState partial_trace(const OperatorState& s, std::string_view label);

// Embed an operator acting on the named slots (in the given order, which may
// differ from the system order) into the full system, identity elsewhere.
ComplexMatrix lift(const SlotSystem& sys, const std::vector<std::string>& labels,
                   const ComplexMatrix& op);

// (U (x) I) s (U (x) I)^dag with u acting on the named slots.
OperatorState apply_conjugation(const OperatorState& s, const ComplexMatrix& u,
                                const std::vector<std::string>& labels);

// sum_x P_x s P_x with P_x the projector onto basis[x], lifted to the named
// slot. The basis must be a complete orthonormal basis of that slot.
OperatorState dephase(const OperatorState& s, std::string_view label,
                      const std::vector<ComplexVector>& basis);

// Throws ConventionError unless the vectors form a complete orthonormal basis
// of a dim-dimensional space.
void check_orthonormal_basis(const std::vector<ComplexVector>& basis, int dim,
                             double tol = kDefaultTol);

}  // namespace lgps::opstate
