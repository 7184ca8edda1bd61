#include "sarlab/matrix_core.h"

#include <gtest/gtest.h>

#include <array>
#include <stdexcept>

namespace sarlab {
namespace {

TEST(MatrixCore, PauliAlgebra) {
  const Complex i(0.0, 1.0);
  EXPECT_TRUE((pauli_x() * pauli_y()).isApprox(i * pauli_z(), 1e-15));
  EXPECT_TRUE((hadamard() * pauli_z() * hadamard()).isApprox(pauli_x(), 1e-15));
  EXPECT_TRUE(is_unitary(hadamard()));
}

TEST(MatrixCore, KronOrdering) {
  CVector v = kron(basis_ket(2, 1), basis_ket(3, 2));
  EXPECT_EQ(v.size(), 6);
  EXPECT_EQ(v(1 * 3 + 2), Complex(1.0));
  EXPECT_DOUBLE_EQ(v.norm(), 1.0);
}

TEST(MatrixCore, PartialTraceOfProduct) {
  std::mt19937_64 rng(3);
  CMatrix a = ginibre(2, 2, rng);
  CMatrix b = ginibre(3, 3, rng);
  CMatrix ab = kron(a, b);
  EXPECT_TRUE(partial_trace(ab, 2, 3, Subsystem::B).isApprox(a * b.trace(), 1e-12));
  EXPECT_TRUE(partial_trace(ab, 2, 3, Subsystem::A).isApprox(b * a.trace(), 1e-12));
  EXPECT_THROW(partial_trace(ab, 4, 2, Subsystem::A), std::invalid_argument);
}

TEST(MatrixCore, DoubleKetRoundTrip) {
  std::mt19937_64 rng(5);
  CMatrix a = ginibre(3, 2, rng);
  CVector v = double_ket(a);
  EXPECT_EQ(v.size(), 6);
  EXPECT_EQ(v(1 * 3 + 2), a(2, 1));
  EXPECT_TRUE(from_double_ket(v, 2, 3).isApprox(a, 1e-15));
}

TEST(MatrixCore, DoubleKetIsIdentityTimesOperatorOnMaxEntangled) {
  std::mt19937_64 rng(6);
  CMatrix a = ginibre(2, 2, rng);
  CVector phi = double_ket(identity(2));
  EXPECT_TRUE((kron(identity(2), a) * phi).isApprox(double_ket(a), 1e-14));
}

TEST(MatrixCore, PsdProjectionClipsNegativeEigenvalues) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -0.5;
  CMatrix p = project_to_psd(m);
  EXPECT_NEAR(p(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(p(1, 1)), 0.0, 1e-15);
  EXPECT_TRUE(is_psd(p));
  EXPECT_FALSE(is_psd(m));
  EXPECT_NEAR(min_eigenvalue(m), -0.5, 1e-15);
  EXPECT_NEAR(max_eigenvalue(m), 1.0, 1e-15);
}

TEST(MatrixCore, PsdSqrtSquaresBack) {
  std::mt19937_64 rng(7);
  CMatrix g = ginibre(4, 4, rng);
  CMatrix m = g * g.adjoint();
  CMatrix s = psd_sqrt(m);
  EXPECT_TRUE((s * s).isApprox(m, 1e-10));
}

TEST(MatrixCore, WrapPhase) {
  EXPECT_DOUBLE_EQ(wrap_phase(kPi), kPi);
  EXPECT_NEAR(wrap_phase(-kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_phase(3 * kPi / 2), -kPi / 2, 1e-15);
  EXPECT_NEAR(wrap_phase(0.25), 0.25, 1e-15);
}

TEST(MatrixCore, UnitaryEigenReconstructs) {
  std::mt19937_64 rng(11);
  for (int d : {2, 3, 5}) {
    CMatrix u = haar_random_unitary(d, rng);
    ASSERT_TRUE(is_unitary(u));
    UnitaryEigen e = unitary_eigen(u);
    CMatrix diag = CMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) diag(k, k) = std::polar(1.0, e.phases(k));
    EXPECT_TRUE(is_unitary(e.vectors));
    EXPECT_LT((e.vectors * diag * e.vectors.adjoint() - u).norm(), 1e-12);
  }
}

TEST(MatrixCore, UnitaryEigenOfDiagonalKeepsBasis) {
  CMatrix u = CMatrix::Zero(2, 2);
  u(0, 0) = std::polar(1.0, 0.3);
  u(1, 1) = std::polar(1.0, -0.3);
  UnitaryEigen e = unitary_eigen(u);
  EXPECT_LT((e.vectors.cwiseAbs() - identity(2).cwiseAbs()).norm(), 1e-15);
}

TEST(MatrixCore, UnitaryEigenDegenerate) {
  UnitaryEigen e = unitary_eigen(identity(3));
  EXPECT_TRUE(is_unitary(e.vectors));
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(e.phases(k), 0.0, 1e-15);
}

TEST(ChoiOperatorTest, UnitaryChoiIsRankOneProjector) {
  ChoiOperator c = ChoiOperator::unitary(hadamard());
  EXPECT_NEAR(c.matrix().trace().real(), 2.0, 1e-14);
  EXPECT_TRUE(partial_trace(c.matrix(), 2, 2, Subsystem::B).isApprox(identity(2), 1e-14));
  EXPECT_TRUE((c.matrix() * c.matrix()).isApprox(2.0 * c.matrix(), 1e-14));
}

TEST(ChoiOperatorTest, ValidationRejectsNonChannels) {
  CMatrix bad = 2.0 * ChoiOperator::identity(2).matrix();
  EXPECT_THROW(ChoiOperator(bad, 2, 2, ChoiKind::Channel), std::invalid_argument);
  EXPECT_THROW(ChoiOperator(bad, 2, 2, ChoiKind::Operation), std::invalid_argument);
  CMatrix half = 0.5 * ChoiOperator::identity(2).matrix();
  EXPECT_THROW(ChoiOperator(half, 2, 2, ChoiKind::Channel), std::invalid_argument);
  EXPECT_NO_THROW(ChoiOperator(half, 2, 2, ChoiKind::Operation));
  CMatrix neg = -ChoiOperator::identity(2).matrix();
  EXPECT_THROW(ChoiOperator(neg, 2, 2, ChoiKind::Operation), std::invalid_argument);
  EXPECT_THROW(ChoiOperator(CMatrix::Identity(3, 3), 2, 2, ChoiKind::Channel),
               std::invalid_argument);
}

TEST(ChoiOperatorTest, ApplyMatchesKrausAction) {
  std::mt19937_64 rng(13);
  CMatrix u = haar_random_unitary(3, rng);
  ChoiOperator c = ChoiOperator::unitary(u);
  CMatrix g = ginibre(3, 3, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  EXPECT_TRUE(apply_choi(c, rho).isApprox(u * rho * u.adjoint(), 1e-12));
  CMatrix offdiag = basis_ket(3, 0) * basis_ket(3, 2).adjoint();
  EXPECT_TRUE(apply_choi(c, offdiag).isApprox(u * offdiag * u.adjoint(), 1e-12));
}

TEST(ChoiOperatorTest, FromKrausAmplitudeDamping) {
  const double g = 0.3;
  CMatrix k0 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1 - g);
  CMatrix k1 = CMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(g);
  std::array<CMatrix, 2> ks{k0, k1};
  ChoiOperator c = ChoiOperator::from_kraus(ks, 2, 2, ChoiKind::Channel);
  CMatrix excited = basis_ket(2, 1) * basis_ket(2, 1).adjoint();
  CMatrix out = apply_choi(c, excited);
  EXPECT_NEAR(out(0, 0).real(), g, 1e-14);
  EXPECT_NEAR(out(1, 1).real(), 1 - g, 1e-14);
}

TEST(ChoiOperatorTest, ComposeUnitaries) {
  std::mt19937_64 rng(17);
  CMatrix a = haar_random_unitary(2, rng);
  CMatrix b = haar_random_unitary(2, rng);
  ChoiOperator c = compose(ChoiOperator::unitary(a), ChoiOperator::unitary(b));
  EXPECT_LT((c.matrix() - ChoiOperator::unitary(b * a).matrix()).norm(), 1e-12);
}

TEST(MatrixCore, StateFidelity) {
  CMatrix zero = basis_ket(2, 0) * basis_ket(2, 0).adjoint();
  CMatrix mixed = identity(2) / 2.0;
  EXPECT_NEAR(state_fidelity(zero, zero), 1.0, 1e-12);
  EXPECT_NEAR(state_fidelity(zero, mixed), 0.5, 1e-12);
  EXPECT_THROW(state_fidelity(2.0 * zero, zero), std::invalid_argument);
}

TEST(MatrixCore, HaarStateDeterministicGivenSeed) {
  CVector a = haar_random_state(4, 99);
  CVector b = haar_random_state(4, 99);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(a.norm(), 1.0, 1e-14);
}

TEST(MatrixCore, HaarUnitaryFirstMomentVanishes) {
  std::mt19937_64 rng(23);
  CMatrix mean = CMatrix::Zero(2, 2);
  const int samples = 20000;
  for (int s = 0; s < samples; ++s) mean += haar_random_unitary(2, rng);
  mean /= samples;
  EXPECT_LT(mean.cwiseAbs().maxCoeff(), 0.03);
}

}  // namespace
}  // namespace sarlab
