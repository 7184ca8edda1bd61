#pragma once

#include <variant>
#include <vector>

#include "sarlab/matrix_core.h"

namespace sarlab {

/// A pair of d-dimensional unitaries in diagonal normal form
///   U_0 = diag(e^{i alpha}, e^{i beta_1}, ..., e^{i beta_{d-2}}, e^{-i alpha}),  U_1 = conj(U_0),
/// together with the conjugation that produced it:
///   e^{i global_phase}  W U_0^orig V = U_0,
///   e^{-i global_phase} W U_1^orig V = U_1.
struct CanonicalPair {
  int d = 2;
  int n = 1;
  double alpha = 0.0;
  /// Interior phases, sorted in descending order, each in [-alpha, alpha].
  std::vector<double> betas;
  CMatrix V;
  CMatrix W;
  double global_phase = 0.0;
  /// alpha == 0: the two unitaries coincide up to a global phase.
  bool degenerate = false;

  /// Builds an already-canonical pair with V = W = I. Throws std::invalid_argument
  /// when d < 2, n < 1, betas has the wrong length or leaves [-alpha, alpha], or
  /// 4 n alpha >= pi.
  static CanonicalPair from_parameters(int d, int n, double alpha, std::vector<double> betas = {});

  /// Phases of the diagonal of canonical U_0, from |0> to |d-1>.
  RVector phases() const;
  /// Canonical U_which (diagonal).
  CMatrix unitary(int which) const;
  /// Canonical U_which mapped back through the stored conjugation.
  CMatrix original_unitary(int which) const;
};

struct PerfectlyDistinguishable {
  int d = 2;
  int n = 1;
  double alpha = 0.0;
};

using CanonicalizeResult = std::variant<CanonicalPair, PerfectlyDistinguishable>;

/// Reduces (u0, u1) to normal form. The covering arc of the eigenphases of
/// U_1^dagger U_0 is the complement of the largest circular gap (ties go to the
/// lowest sorted index) and has length 4 alpha. Throws std::invalid_argument for
/// non-unitary or mismatched inputs, or n < 1.
CanonicalizeResult canonicalize(const CMatrix& u0, const CMatrix& u1, int n);

/// U_which^uses |+>, |+> = (|0> + |d-1>)/sqrt(2).
CVector storage_state(const CanonicalPair& p, int which, int uses);
/// U_which^n |+>.
CVector storage_state(const CanonicalPair& p, int which);

}  // namespace sarlab
