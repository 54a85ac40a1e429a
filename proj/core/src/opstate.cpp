// SPDX-License-Identifier: Apache-2.0

#include "lgps/opstate.hpp"

#include <algorithm>
#include <utility>

#include <Eigen/Eigenvalues>

namespace lgps {

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const auto n = m.rows();
  return (m.adjoint() * m - ComplexMatrix::Identity(n, n)).norm() <= tol;
}

bool is_positive_semidefinite(const ComplexMatrix& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

ComplexMatrix hermitian_evolution(const ComplexMatrix& h, double t, double tol) {
  if (!is_hermitian(h, tol)) {
    throw ConventionError("hermitian_evolution: generator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const auto& v = es.eigenvectors();
  ComplexVector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * t));
  }
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace lgps

namespace lgps::opstate {

SlotSystem::SlotSystem(std::vector<Slot> slots) : slots_(std::move(slots)) {
  for (const auto& s : slots_) {
    if (s.label.empty()) throw LabelError("slot label must not be empty");
    if (s.dim <= 0) {
      throw ShapeError("slot '" + s.label + "' has non-positive dimension");
    }
    total_dim_ *= s.dim;
  }
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    for (std::size_t j = i + 1; j < slots_.size(); ++j) {
      if (slots_[i].label == slots_[j].label) {
        throw LabelError("duplicate slot label '" + slots_[i].label + "'");
      }
    }
  }
}

const Slot& SlotSystem::at(int position) const {
  if (position < 0 || position >= size()) {
    throw LabelError("slot position out of range");
  }
  return slots_[static_cast<std::size_t>(position)];
}

bool SlotSystem::contains(std::string_view label) const {
  return std::any_of(slots_.begin(), slots_.end(),
                     [&](const Slot& s) { return s.label == label; });
}

int SlotSystem::position_of(std::string_view label) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].label == label) return static_cast<int>(i);
  }
  throw LabelError("no slot labeled '" + std::string(label) + "'");
}

int SlotSystem::dim_of(std::string_view label) const {
  return slots_[static_cast<std::size_t>(position_of(label))].dim;
}

SlotSystem SlotSystem::without(int position) const {
  if (position < 0 || position >= size()) {
    throw LabelError("slot position out of range");
  }
  std::vector<Slot> rest = slots_;
  rest.erase(rest.begin() + position);
  return SlotSystem(std::move(rest));
}

bool SlotSystem::operator==(const SlotSystem& other) const {
  if (slots_.size() != other.slots_.size()) return false;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].label != other.slots_[i].label ||
        slots_[i].dim != other.slots_[i].dim) {
      return false;
    }
  }
  return true;
}

SlotSystem::Split SlotSystem::split_at(int position) const {
  if (position < 0 || position >= size()) {
    throw LabelError("slot position out of range");
  }
  Split sp;
  for (int i = 0; i < position; ++i) sp.left *= slots_[i].dim;
  sp.dim = slots_[static_cast<std::size_t>(position)].dim;
  for (int i = position + 1; i < size(); ++i) sp.right *= slots_[i].dim;
  return sp;
}

OperatorState::OperatorState(SlotSystem slots, ComplexMatrix matrix)
    : slots_(std::move(slots)), matrix_(std::move(matrix)) {
  const int d = slots_.total_dim();
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw ShapeError("operator matrix is " + std::to_string(matrix_.rows()) +
                     "x" + std::to_string(matrix_.cols()) +
                     " but slots give total dimension " + std::to_string(d));
  }
}

Complex OperatorState::scalar() const {
  if (slots_.size() != 0) {
    throw UsageError("scalar() called on a state with remaining slots");
  }
  return matrix_(0, 0);
}

Complex op_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("op_inner: operand shapes differ");
  }
  // Tr(a^dag b) = sum_ij conj(a_ij) b_ij.
  return a.conjugate().cwiseProduct(b).sum();
}

Complex op_inner(const OperatorState& a, const OperatorState& b) {
  if (!(a.slots() == b.slots())) {
    throw LabelError("op_inner: slot systems differ");
  }
  return op_inner(a.matrix(), b.matrix());
}

ComplexMatrix max_entangled_link(int d) {
  if (d <= 0) throw ShapeError("max_entangled_link: dimension must be positive");
  ComplexVector omega = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) omega(i * d + i) = 1.0;
  return omega * omega.adjoint();
}

ComplexMatrix choi_state(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) throw ShapeError("choi_state: no Kraus operators");
  const Eigen::Index d_out = kraus.front().rows();
  const Eigen::Index d_in = kraus.front().cols();
  for (const auto& k : kraus) {
    if (k.rows() != d_out || k.cols() != d_in) {
      throw ShapeError("choi_state: Kraus operator shapes differ");
    }
  }
  ComplexMatrix c = ComplexMatrix::Zero(d_in * d_out, d_in * d_out);
  for (const auto& k : kraus) {
    // (I (x) K) Omega with Omega = sum_i |ii>: column i block is K|i>.
    ComplexVector v = ComplexVector::Zero(d_in * d_out);
    for (Eigen::Index i = 0; i < d_in; ++i) {
      v.segment(i * d_out, d_out) = k.col(i);
    }
    c += v * v.adjoint();
  }
  return c;
}

OperatorState tensor_product(const OperatorState& a, const OperatorState& b) {
  std::vector<Slot> slots = a.slots().slots();
  for (const auto& s : b.slots().slots()) {
    if (a.slots().contains(s.label)) {
      throw LabelError("tensor_product: duplicate slot label '" + s.label + "'");
    }
    slots.push_back(s);
  }
  const Eigen::Index da = a.dim();
  const Eigen::Index db = b.dim();
  ComplexMatrix m(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return OperatorState(SlotSystem(std::move(slots)), std::move(m));
}

OperatorState partial_contract(const OperatorState& s, std::string_view label,
                               const ComplexMatrix& dual) {
  const int pos = s.slots().position_of(label);
  const auto sp = s.slots().split_at(pos);
  if (dual.rows() != sp.dim || dual.cols() != sp.dim) {
    throw ShapeError("partial_contract: dual shape does not match slot '" +
                     std::string(label) + "'");
  }
  const ComplexMatrix dc = dual.conjugate();
  const auto& m = s.matrix();
  const int rem = sp.left * sp.right;
  ComplexMatrix out = ComplexMatrix::Zero(rem, rem);
  for (int l = 0; l < sp.left; ++l) {
    for (int lp = 0; lp < sp.left; ++lp) {
      for (int p = 0; p < sp.dim; ++p) {
        for (int q = 0; q < sp.dim; ++q) {
          const Complex w = dc(p, q);
          if (w == Complex(0.0, 0.0)) continue;
          out.block(l * sp.right, lp * sp.right, sp.right, sp.right) +=
              w * m.block((l * sp.dim + p) * sp.right,
                          (lp * sp.dim + q) * sp.right, sp.right, sp.right);
        }
      }
    }
  }
  return OperatorState(s.slots().without(pos), std::move(out));
}

OperatorState partial_trace(const OperatorState& s, std::string_view label) {
  const int d = s.slots().dim_of(label);
  return partial_contract(s, label, ComplexMatrix::Identity(d, d));
}

ComplexMatrix lift(const SlotSystem& sys, const std::vector<std::string>& labels,
                   const ComplexMatrix& op) {
  std::vector<int> pos;
  pos.reserve(labels.size());
  Eigen::Index d_sel = 1;
  for (const auto& label : labels) {
    pos.push_back(sys.position_of(label));
    d_sel *= sys.dim_of(label);
  }
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      if (pos[i] == pos[j]) {
        throw LabelError("lift: repeated slot label '" + labels[i] + "'");
      }
    }
  }
  if (op.rows() != d_sel || op.cols() != d_sel) {
    throw ShapeError("lift: operator shape does not match selected slots");
  }

  const int n = sys.size();
  std::vector<int> dims(n), strides(n);
  int acc = 1;
  for (int k = n - 1; k >= 0; --k) {
    dims[k] = sys.at(k).dim;
    strides[k] = acc;
    acc *= dims[k];
  }
  const int total = sys.total_dim();

  ComplexMatrix out = ComplexMatrix::Zero(total, total);
  std::vector<int> digits(n);
  for (int i = 0; i < total; ++i) {
    for (int k = 0; k < n; ++k) digits[k] = (i / strides[k]) % dims[k];
    // Row index of op, selected slots in label order.
    Eigen::Index sel_row = 0;
    for (int k : pos) sel_row = sel_row * dims[k] + digits[k];
    for (Eigen::Index m = 0; m < d_sel; ++m) {
      // Column j = i with the selected digits replaced by those of m.
      Eigen::Index rest = m;
      int j = i;
      for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
        const int k = *it;
        const int digit = static_cast<int>(rest % dims[k]);
        rest /= dims[k];
        j += (digit - digits[k]) * strides[k];
      }
      out(i, j) = op(sel_row, m);
    }
  }
  return out;
}

OperatorState apply_conjugation(const OperatorState& s, const ComplexMatrix& u,
                                const std::vector<std::string>& labels) {
  const ComplexMatrix full = lift(s.slots(), labels, u);
  return OperatorState(s.slots(), full * s.matrix() * full.adjoint());
}

OperatorState dephase(const OperatorState& s, std::string_view label,
                      const std::vector<ComplexVector>& basis) {
  const int d = s.slots().dim_of(label);
  check_orthonormal_basis(basis, d);
  ComplexMatrix out = ComplexMatrix::Zero(s.dim(), s.dim());
  const std::vector<std::string> on{std::string(label)};
  for (const auto& v : basis) {
    const ComplexMatrix p = lift(s.slots(), on, v * v.adjoint());
    out += p * s.matrix() * p;
  }
  return OperatorState(s.slots(), std::move(out));
}

void check_orthonormal_basis(const std::vector<ComplexVector>& basis, int dim,
                             double tol) {
  if (static_cast<int>(basis.size()) != dim) {
    throw ConventionError("basis has " + std::to_string(basis.size()) +
                          " vectors, expected " + std::to_string(dim));
  }
  for (int i = 0; i < dim; ++i) {
    if (basis[static_cast<std::size_t>(i)].size() != dim) {
      throw ConventionError("basis vector " + std::to_string(i) +
                            " has wrong dimension");
    }
    for (int j = 0; j < dim; ++j) {
      const Complex g =
          basis[static_cast<std::size_t>(i)].dot(basis[static_cast<std::size_t>(j)]);
      const Complex expect = (i == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      if (std::abs(g - expect) > tol) {
        throw ConventionError("basis is not orthonormal at pair (" +
                              std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace lgps::opstate
