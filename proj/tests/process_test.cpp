// SPDX-License-Identifier: Apache-2.0
#include "lgps/process.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lgps/errors.hpp"
#include "lgps/opstate.hpp"
#include "test_util.hpp"

namespace lgps::process {
namespace {

constexpr double kPi = std::numbers::pi;

using test::dichotomic_instrument;
using test::kron;
using test::kronv;
using test::make_rng;
using test::random_basis;
using test::random_density;
using test::random_scenario;

// Two-qubit exchange step on system (x) environment in the {-, +} product
// basis, written out by hand so it shares nothing with the library builder.
ComplexMatrix exchange_step(double theta) {
  ComplexMatrix u = ComplexMatrix::Identity(4, 4);
  u(1, 1) = std::cos(theta);
  u(2, 2) = std::cos(theta);
  u(1, 2) = Complex(0.0, -std::sin(theta));
  u(2, 1) = Complex(0.0, -std::sin(theta));
  return u;
}

// Kraus operators K_e = <e| U |psi_E> for the plus-superposition
// environment, again by hand.
std::vector<ComplexMatrix> exchange_kraus(double theta) {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex ms(0.0, -std::sin(theta));
  const double c = std::cos(theta);
  ComplexMatrix k_minus(2, 2), k_plus(2, 2);
  k_minus << r, 0.0, ms * r, c * r;
  k_plus << c * r, ms * r, 0.0, r;
  return {k_minus, k_plus};
}

Scenario two_time_exchange(double theta, const ComplexMatrix& rho0) {
  Scenario s;
  s.dim_system = 2;
  s.dim_env = 2;
  s.rho0_system = rho0;
  ComplexVector psi(2);
  psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  s.rho0_env = psi * psi.adjoint();
  s.unitaries = {exchange_step(theta)};
  return s;
}

TEST(CanonicalSlots, LayoutAndDimensions) {
  const auto sys = ProcessState::canonical_slots(3, 2);
  ASSERT_EQ(sys.size(), 5);
  EXPECT_EQ(sys.at(0).label, "S1");
  EXPECT_EQ(sys.at(1).label, "A1");
  EXPECT_EQ(sys.at(2).label, "S2");
  EXPECT_EQ(sys.at(3).label, "A2");
  EXPECT_EQ(sys.at(4).label, "S3");
  EXPECT_EQ(sys.total_dim(), 32);
}

TEST(ProcessState, RejectsNonCanonicalSlots) {
  const opstate::SlotSystem bad({{"S1", 2}, {"A1", 2}, {"X", 2}});
  EXPECT_THROW(
      ProcessState(opstate::OperatorState(bad, ComplexMatrix::Identity(8, 8)),
                   2, 2),
      LabelError);
}

TEST(ScenarioValidate, NamesOffendingField) {
  auto rng = make_rng(31);
  Scenario s = random_scenario(rng);
  s.rho0_system(0, 1) = 5.0;
  try {
    s.validate();
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("rho0_system"), std::string::npos);
  }

  Scenario t = random_scenario(rng);
  t.unitaries[1] = ComplexMatrix::Ones(4, 4);
  try {
    t.validate();
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("unitaries[1]"), std::string::npos);
  }
}

TEST(ScenarioFromHamiltonian, MatchesClosedFormExchangeUnitary) {
  auto rng = make_rng(32);
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(1, 2) = 1.0;
  h(2, 1) = 1.0;
  ComplexVector psi(2);
  psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Scenario s = Scenario::from_hamiltonian(
      2, 2, random_density(2, rng), psi * psi.adjoint(), h, {0.7, 1.3});
  ASSERT_EQ(s.unitaries.size(), 2u);
  EXPECT_LT((s.unitaries[0] - exchange_step(0.7)).norm(), 1e-12);
  EXPECT_LT((s.unitaries[1] - exchange_step(1.3)).norm(), 1e-12);
}

TEST(BuildProcessState, NormalizationInvariants) {
  auto rng = make_rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const Scenario s = random_scenario(rng);
    const ProcessState ps = build_process_state(s);
    EXPECT_NEAR(ps.process_trace(), 1.0, 1e-10);
    // Total matrix trace is d^(n-1): one unnormalized link per step.
    EXPECT_NEAR(ps.matrix().trace().real(), 4.0, 1e-10);
    EXPECT_NEAR(ps.matrix().trace().imag(), 0.0, 1e-12);
    EXPECT_NO_THROW(ps.validate());
  }
}

// The two-time state must be rho0 (x) sum_e |v_e><v_e| with
// v_e = sum_i |i> (x) K_e |i>, using hand-written Kraus operators.
TEST(BuildProcessState, MatchesHandDerivedTwoTimeAmplitudes) {
  auto rng = make_rng(34);
  const double theta = 0.7;
  const ComplexMatrix rho0 = random_density(2, rng);
  const ProcessState ps = build_process_state(two_time_exchange(theta, rho0));

  ComplexMatrix pair = ComplexMatrix::Zero(4, 4);
  for (const auto& k : exchange_kraus(theta)) {
    ComplexVector v = ComplexVector::Zero(4);
    for (int i = 0; i < 2; ++i) {
      ComplexVector e = ComplexVector::Zero(2);
      e(i) = 1.0;
      v += kronv(e, ComplexVector(k * e));
    }
    pair += v * v.adjoint();
  }
  EXPECT_LT((ps.matrix() - kron(rho0, pair)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BuildProcessState, IdentityDynamicsGivesLinkPair) {
  auto rng = make_rng(35);
  const ComplexMatrix rho0 = random_density(2, rng);
  const ProcessState ps = build_process_state(two_time_exchange(0.0, rho0));
  EXPECT_LT(
      (ps.matrix() - kron(rho0, opstate::max_entangled_link(2))).norm(),
      1e-12);
}

// At a full swap-period angle the step acts as a phase unitary and the pair
// block collapses to the rank-1 twisted link |--> - |++>.
TEST(BuildProcessState, FullPeriodAngleFactorizes) {
  auto rng = make_rng(36);
  const ComplexMatrix rho0 = random_density(2, rng);
  const ProcessState ps = build_process_state(two_time_exchange(kPi, rho0));
  ComplexVector w = ComplexVector::Zero(4);
  w(0) = 1.0;
  w(3) = -1.0;
  EXPECT_LT((ps.matrix() - kron(rho0, ComplexMatrix(w * w.adjoint()))).norm(),
            1e-12);
}

TEST(NPointOperation, AllUnmeasuredDualIsLinkChain) {
  const MeasurementPlan plan{Unmeasured{}, Unmeasured{}, Unmeasured{}};
  const auto dual = n_point_operation(plan, {0, 0, 0}, 2);
  const ComplexMatrix phi = opstate::max_entangled_link(2);
  const ComplexMatrix expected =
      kron(kron(phi, phi), ComplexMatrix::Identity(2, 2));
  EXPECT_LT((dual.matrix() - expected).norm(), 1e-12);
}

TEST(NPointOperation, MeasuredDualUsesConjugateOnOperationSlot) {
  auto rng = make_rng(37);
  const auto b1 = random_basis(2, rng);
  const auto b2 = random_basis(2, rng);
  const auto b3 = random_basis(2, rng);
  const MeasurementPlan plan{dichotomic_instrument(b1),
                             dichotomic_instrument(b2),
                             dichotomic_instrument(b3)};
  const auto dual = n_point_operation(plan, {1, 0, 1}, 2);
  const ComplexMatrix p1 = b1[1] * b1[1].adjoint();
  const ComplexMatrix p2 = b2[0] * b2[0].adjoint();
  const ComplexMatrix p3 = b3[1] * b3[1].adjoint();
  const ComplexMatrix expected =
      kron(kron(kron(kron(p1, p1.conjugate()), p2), p2.conjugate()), p3);
  EXPECT_LT((dual.matrix() - expected).norm(), 1e-12);
}

TEST(NPointOperation, RejectsNonzeroOutcomeAtUnmeasuredTime) {
  auto rng = make_rng(38);
  const MeasurementPlan plan{Unmeasured{},
                             dichotomic_instrument(random_basis(2, rng)),
                             Unmeasured{}};
  EXPECT_NO_THROW(n_point_operation(plan, {0, 1, 0}, 2));
  EXPECT_THROW(n_point_operation(plan, {1, 0, 0}, 2), UsageError);
  EXPECT_THROW(n_point_operation(plan, {0, 5, 0}, 2), UsageError);
}

TEST(ReduceProcessState, PrefixTraceIsPrefixProbability) {
  auto rng = make_rng(39);
  const Scenario s = random_scenario(rng);
  const ProcessState ps = build_process_state(s);
  const auto basis = random_basis(2, rng);
  const MeasurementPlan plan{dichotomic_instrument(basis), Unmeasured{},
                             Unmeasured{}};

  for (int x = 0; x < 2; ++x) {
    const ProcessState reduced = reduce_process_state(ps, plan, {x});
    EXPECT_EQ(reduced.n_times(), 2);
    // Probability of the first outcome via an independent route: the full
    // n-point contraction with the remaining times unmeasured.
    const auto dual = n_point_operation(plan, {x, 0, 0}, 2);
    const double p = opstate::op_inner(dual, ps.state()).real();
    EXPECT_NEAR(reduced.process_trace(1e-8) , p, 1e-10);
  }
}

TEST(ReduceProcessState, UnmeasuredPrefixRenumbersTimes) {
  auto rng = make_rng(40);
  const Scenario s = random_scenario(rng);
  const ProcessState ps = build_process_state(s);
  const MeasurementPlan plan{Unmeasured{}, Unmeasured{}, Unmeasured{}};
  const ProcessState reduced = reduce_process_state(ps, plan, {0});
  EXPECT_EQ(reduced.n_times(), 2);
  EXPECT_EQ(reduced.state().slots().at(0).label, "S1");
  EXPECT_EQ(reduced.state().slots().at(2).label, "S2");
  EXPECT_NEAR(reduced.process_trace(), 1.0, 1e-10);
}

TEST(ReduceProcessState, RejectsFullPrefix) {
  auto rng = make_rng(41);
  const ProcessState ps = build_process_state(random_scenario(rng));
  const MeasurementPlan plan{Unmeasured{}, Unmeasured{}, Unmeasured{}};
  EXPECT_THROW(reduce_process_state(ps, plan, {0, 0, 0}), UsageError);
}

TEST(MarkovProductState, BuildsNormalizedProcess) {
  auto rng = make_rng(42);
  // Choi blocks of unitary channels are trace preserving by construction.
  const ComplexMatrix u1 = test::haar_unitary(2, rng);
  const ComplexMatrix u2 = test::haar_unitary(2, rng);
  const ProcessState ps = markov_product_state(
      {opstate::choi_state({u1}), opstate::choi_state({u2})},
      random_density(2, rng));
  EXPECT_EQ(ps.n_times(), 3);
  EXPECT_NEAR(ps.process_trace(), 1.0, 1e-10);
}

TEST(MarkovProductState, RejectsNonPositiveBlock) {
  auto rng = make_rng(43);
  ComplexMatrix bad = opstate::max_entangled_link(2);
  bad(0, 0) = -1.0;
  EXPECT_THROW(
      markov_product_state({bad, opstate::choi_state({ComplexMatrix::Identity(
                                     2, 2)})},
                           random_density(2, rng)),
      ConventionError);
}

TEST(MarkovProductState, RejectsNonTracePreservingBlock) {
  auto rng = make_rng(44);
  // Halving the Choi block keeps positivity but breaks trace preservation.
  const ComplexMatrix half = 0.5 * opstate::choi_state(
                                       {ComplexMatrix::Identity(2, 2)});
  EXPECT_THROW(markov_product_state(
                   {half, opstate::choi_state({ComplexMatrix::Identity(2, 2)})},
                   random_density(2, rng)),
               ConventionError);
}

// With a trivial one-dimensional environment every step is a system unitary
// and the dilation build must agree with the memoryless product build.
TEST(MarkovProductState, MatchesDilationForTrivialEnvironment) {
  auto rng = make_rng(45);
  Scenario s;
  s.dim_system = 2;
  s.dim_env = 1;
  s.rho0_system = random_density(2, rng);
  s.rho0_env = ComplexMatrix::Identity(1, 1);
  const ComplexMatrix u1 = test::haar_unitary(2, rng);
  const ComplexMatrix u2 = test::haar_unitary(2, rng);
  s.unitaries = {u1, u2};

  const ProcessState via_dilation = build_process_state(s);
  const ProcessState via_product = markov_product_state(
      {opstate::choi_state({u1}), opstate::choi_state({u2})}, s.rho0_system);
  EXPECT_LT((via_dilation.matrix() - via_product.matrix()).norm(), 1e-10);
}

TEST(ValidatePlan, RejectsBadShapes) {
  auto rng = make_rng(46);
  const auto basis = random_basis(2, rng);
  MeasurementPlan plan{dichotomic_instrument(basis),
                       dichotomic_instrument(basis)};
  EXPECT_THROW(validate_plan(plan, 3, 2), SchemaError);

  MeasurementPlan short_values{
      Projective{basis, {1.0}},
      dichotomic_instrument(basis),
      Unmeasured{}};
  EXPECT_THROW(validate_plan(short_values, 3, 2), SchemaError);

  ComplexVector bad(2);
  bad << 1.0, 1.0;
  MeasurementPlan bad_basis{Projective{{bad, basis[1]}, {1.0, -1.0}},
                            dichotomic_instrument(basis), Unmeasured{}};
  EXPECT_THROW(validate_plan(bad_basis, 3, 2), SchemaError);
}

}  // namespace
}  // namespace lgps::process
