#pragma once

#include <array>
#include <string>
#include <vector>

#include "sarlab/analytics.h"
#include "sarlab/canonical_pair.h"
#include "sarlab/matrix_core.h"

namespace sarlab {

/// Three-outcome measurement gate M = |a_1><+| + |a_2><-| (3 x 2 isometry).
struct QutritIsometryM {
  CMatrix matrix;
  /// K = M H^dagger = [a_1 a_2].
  CMatrix columns;
  Regime regime = Regime::LargeAlpha;
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  double nu_plus = 0.0;
  double nu_minus = 0.0;
  /// Small-alpha coefficients, a + b = 1.
  double a = 0.0;
  double b = 0.0;
};

/// Throws std::invalid_argument unless 0 < 4 n alpha <= pi.
QutritIsometryM build_isometry_M(int n, double alpha);

/// Controlled-NOT on H_0 (x) H_1 with the input qubit H_1 as control and the
/// storage qubit H_0 as target.
CMatrix storage_cnot();

enum class BranchLabel { Success0, Success1Corrected, Fail };

std::string to_string(BranchLabel label);

struct RetrievalBranch {
  BranchLabel label = BranchLabel::Fail;
  /// Kraus operator on the input qubit, conditioned on the stored state.
  CMatrix kraus;
  /// Kraus operator from H_0 (x) H_1 to the output qubit.
  CMatrix full_kraus;
};

struct RetrievalInstrument {
  int n = 1;
  double alpha = 0.0;
  int which = 0;
  Regime regime = Regime::LargeAlpha;
  std::vector<RetrievalBranch> branches;

  double success_probability() const;
};

/// Storage state, CNOT, M and the conditional sigma_z correction on branch 1.
/// Success Kraus phases are fixed so that Tr(U_which^dagger K) >= 0.
RetrievalInstrument simulate_qubit_retrieval(const CanonicalPair& p, int which);

/// Unnormalised Choi operator of the success operation on H_0 (x) H_1 (x) H_2.
CMatrix success_operation_choi(const RetrievalInstrument& instr);

struct DeterministicRetrieval {
  ChoiOperator choi_0;
  ChoiOperator choi_1;
  double fidelity = 0.0;
  double a = 0.0;
  double b = 0.0;
  /// Probability of the |up> outcome for each stored unitary.
  std::array<double, 2> p_up{};
};

/// Measure-and-prepare: measure the storage qubit in (|+> +- i|->)/sqrt(2) and
/// prepare a I +- i b sigma_z, with (a, b) the minimum-error optimum.
DeterministicRetrieval simulate_deterministic_retrieval(const CanonicalPair& p);

struct QuditIsometryG {
  int d = 2;
  int n = 1;
  double alpha = 0.0;
  Regime regime = Regime::LargeAlpha;
  double p_succ = 0.0;
  Complex x;
  std::vector<Complex> y_diag;
  /// beta_{k,0}, beta_{k,1}.
  std::vector<std::array<double, 2>> betas;
  /// Isometry from H_1 (x) span{|0>, |d-1>} (index 2k + s) to H_2 (x) H_3 (x) H_4
  /// (index 4k + 2 h_3 + h_4).
  CMatrix matrix;
};

/// Throws std::runtime_error if an overlap leaves the unit disc by more than 1e-12.
QuditIsometryG build_qudit_isometry(const CanonicalPair& p);

/// Normalised success channel. Throws std::invalid_argument when the success
/// probability vanishes.
ChoiOperator retrieved_channel_on_success(const RetrievalInstrument& instr);
ChoiOperator retrieved_channel_on_success(const QuditIsometryG& g, const CanonicalPair& p,
                                          int which);

/// Success probability of the qudit isometry for stored U_which.
double qudit_success_probability(const QuditIsometryG& g, const CanonicalPair& p, int which);

}  // namespace sarlab
