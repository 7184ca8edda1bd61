#include "sarlab/optics_compiler.h"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "sarlab/analytics.h"
#include "sarlab/canonical_pair.h"
#include "sarlab/retrieval_circuits.h"

namespace sarlab {
namespace {

TEST(WavePlate, JonesMatrices) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int k = 0; k < 50; ++k) EXPECT_TRUE(is_unitary(wave_plate(angle(rng), angle(rng))));
  // Half-wave plate at 22.5 degrees acts as a Hadamard up to a phase.
  CMatrix h = wave_plate(kPi / 8, kPi);
  EXPECT_LT((h - hadamard()).norm(), 1e-12);
  // Quarter-wave plate at 0 is diag(1, -i).
  CMatrix q = wave_plate(0.0, kPi / 2);
  EXPECT_NEAR(std::abs(q(1, 1) - Complex(0.0, -1.0)), 0.0, 1e-15);
  EXPECT_EQ((WavePlate{0.3, 0.7}.jones()), wave_plate(0.3, 0.7));
}

TEST(Transition, EqualsChiForFirstFiveN) {
  EXPECT_NEAR(alpha_transition(1), kPi / 8, 1e-12);
  for (int n = 1; n <= 5; ++n) EXPECT_NEAR(alpha_transition(n), chi(n), 1e-10);
}

TEST(TargetCoefficients, MatchCircuitCoefficients) {
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 10; ++k) {
      const double a = chi(n) + (kPi / (4 * n) - chi(n)) * k / 11.0;
      TargetCoefficients t = target_coefficients(n, a);
      QutritIsometryM m = build_isometry_M(n, a);
      EXPECT_NEAR(t.lambda_a, m.lambda_a, 1e-12);
      EXPECT_NEAR(t.lambda_b, m.lambda_b, 1e-12);
      EXPECT_NEAR(t.nu_p, m.nu_plus, 1e-12);
      EXPECT_NEAR(t.nu_n, m.nu_minus, 1e-12);
    }
  }
}

TEST(TargetMatrix, EqualsCircuitIsometryTimesHadamard) {
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 50; ++k) {
      const double a = k * kPi / (4.0 * n * 50);
      OpticsMode mode;
      CMatrix target = target_matrix(n, a, &mode);
      CMatrix m = build_isometry_M(n, a).matrix;
      EXPECT_LT((target - m * hadamard().adjoint()).norm(), 1e-10) << n << " " << a;
      if (mode == OpticsMode::IsometrySmall) EXPECT_LT(target.row(1).norm(), 1e-15);
    }
  }
}

TEST(CompileAngles, GridResidual) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 50; ++k) {
      PovmCompilation c = compile_angles(n, k * kPi / (4.0 * n * 50));
      worst = std::max(worst, c.residual);
      EXPECT_LT((c.C_matrix.adjoint() * c.C_matrix - identity(2)).norm(), 1e-8);
    }
  }
  EXPECT_LE(worst, 1e-8);
  PovmCompilation c = compile_angles(1, kPi / 6);
  EXPECT_EQ(c.mode, OpticsMode::IsometryLarge);
  EXPECT_LE(c.residual, 1e-8);
  EXPECT_THROW(compile_angles(1, 0.0), std::invalid_argument);
}

TEST(CompileAngles, TransferStructure) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int k = 0; k < 50; ++k) {
    OpticalSettings s{angle(rng), angle(rng), angle(rng), 0.0, 0.0};
    CMatrix c = optical_transfer(s);
    CMatrix r = Complex(0.0, 1.0) * c;
    EXPECT_LT(r.imag().norm(), 1e-12);
    EXPECT_NEAR(r(2, 0).real(), -std::cos(2 * s.Gamma) * std::sin(2 * s.B), 1e-12);
    EXPECT_NEAR(r(2, 1).real(), std::cos(2 * s.Gamma) * std::cos(2 * s.B), 1e-12);
    EXPECT_NEAR(r.real().block(0, 0, 2, 2).determinant(), -std::sin(2 * s.Gamma), 1e-12);
  }
}

TEST(CompileUsd, SpotAngle) {
  PovmCompilation c = compile_usd(kPi / 8);
  EXPECT_NEAR(c.settings.Gamma, 0.5 * std::asin(std::sqrt(2.0) - 1.0), 1e-12);
  EXPECT_NEAR(c.settings.Gamma, 0.213539, 1e-6);
  EXPECT_EQ(c.mode, OpticsMode::Usd);
  EXPECT_THROW(compile_usd(kPi / 4), std::invalid_argument);
}

TEST(CompileUsd, UnambiguousOnStorageStates) {
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 9; ++k) {
      const double a = k * kPi / (4.0 * n * 10);
      CanonicalPair p = CanonicalPair::from_parameters(2, n, a);
      PovmCompilation c = compile_usd(n * a);
      auto p0 = simulate_optical_block(c, storage_state(p, 0));
      auto p1 = simulate_optical_block(c, storage_state(p, 1));
      EXPECT_LE(p0[1], 1e-10);
      EXPECT_LE(p1[0], 1e-10);
      EXPECT_NEAR(p0[0], 1 - std::cos(2 * n * a), 1e-10);
      EXPECT_NEAR(p1[1], 1 - std::cos(2 * n * a), 1e-10);
      EXPECT_NEAR(p0[0] + p0[1] + p0[2], 1.0, 1e-10);
    }
  }
}

TEST(CompileUsd, ZeroSeparationNeverSucceeds) {
  PovmCompilation c = compile_usd(1e-9);
  CanonicalPair p = CanonicalPair::from_parameters(2, 1, 1e-9);
  auto probs = simulate_optical_block(c, storage_state(p, 0));
  EXPECT_NEAR(probs[2], 1.0, 1e-8);
}

TEST(OpticalBlock, FailureProbabilityMatchesAnalytics) {
  for (int n = 1; n <= 3; ++n) {
    for (double a : {0.5 * chi(n), chi(n), 0.5 * (chi(n) + kPi / (4 * n))}) {
      CanonicalPair p = CanonicalPair::from_parameters(2, n, a);
      PovmCompilation c = compile_angles(n, a);
      auto probs = simulate_optical_block(c, storage_state(p, 0));
      EXPECT_NEAR(probs[2], 1 - success_probability(n, a).value, 1e-8);
      EXPECT_NEAR(probs[0] + probs[1] + probs[2], 1.0, 1e-10);
    }
  }
}

TEST(OpticalBlock, ReproducesInstrumentEndToEnd) {
  std::mt19937_64 rng(9);
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 8; ++k) {
      const double a = k * kPi / (4.0 * n * 9);
      CanonicalPair p = CanonicalPair::from_parameters(2, n, a);
      PovmCompilation c = compile_angles(n, a);
      CMatrix full = kron(CMatrix(c.C_matrix * hadamard()), identity(2)) * storage_cnot();
      for (int which = 0; which < 2; ++which) {
        RetrievalInstrument instr = simulate_qubit_retrieval(p, which);
        CVector xi = haar_random_state(2, rng);
        CVector out = full * kron(storage_state(p, which), xi);
        for (int j = 0; j < 3; ++j) {
          EXPECT_NEAR(out.segment(2 * j, 2).squaredNorm(),
                      (instr.branches[j].kraus * xi).squaredNorm(), 1e-8);
        }
      }
    }
  }
}

}  // namespace
}  // namespace sarlab
