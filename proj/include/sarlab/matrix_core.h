#pragma once

// Small dense complex linear algebra and channel calculus.
//
// Basis convention used everywhere in the library: for an operator
// A = sum_ij A_ij |i><j| mapping H_in -> H_out, the double ket is
//     |A>> = sum_ij A_ij |j>|i> = (I (x) A)|I>>,
// i.e. the input index is the slow (first) tensor factor. Choi operators
// live on H_in (x) H_out with the same ordering, so the Choi operator of
// a unitary channel is |U>><<U|.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sarlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

namespace tol {
/// Structural predicates (unitary, PSD, trace preservation).
inline constexpr double kStructural = 1e-10;
/// Exact algebraic identities.
inline constexpr double kAlgebraic = 1e-12;
/// Brute-force optimisation vs closed form.
inline constexpr double kOptimization = 1e-6;
}  // namespace tol

CMatrix identity(int d);
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
CMatrix hadamard();
CVector basis_ket(int d, int k);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

enum class Subsystem { A, B };

/// Partial trace of an operator on H_a (x) H_b over the named factor.
/// Throws std::invalid_argument when the dimensions do not factor.
CMatrix partial_trace(const CMatrix& m, int dim_a, int dim_b, Subsystem traced);

CVector double_ket(const CMatrix& op);
CMatrix from_double_ket(const CVector& v, int d_in, int d_out);
/// |A>><<A|
CMatrix double_ket_projector(const CMatrix& op);

double operator_norm(const CMatrix& m);
bool is_unitary(const CMatrix& m, double tolerance = tol::kStructural);
bool is_hermitian(const CMatrix& m, double tolerance = tol::kStructural);
bool is_psd(const CMatrix& m, double tolerance = tol::kStructural);
/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const CMatrix& m);
double max_eigenvalue(const CMatrix& m);
CMatrix psd_sqrt(const CMatrix& m);
/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
CMatrix project_to_psd(const CMatrix& m);

/// Wraps an angle into (-pi, pi].
double wrap_phase(double phi);

struct UnitaryEigen {
  /// Eigenphases in (-pi, pi].
  RVector phases;
  /// Orthonormal eigenvectors as columns (u = vectors * diag(e^{i phases}) * vectors^dagger).
  CMatrix vectors;
};

/// Eigendecomposition of a unitary through the complex Schur form, which is
/// diagonal for normal matrices and keeps degenerate eigenvectors orthonormal.
UnitaryEigen unitary_eigen(const CMatrix& u);

enum class ChoiKind { Channel, Operation };

class ChoiOperator {
 public:
  /// Validates positivity and the trace condition for `kind`; throws
  /// std::invalid_argument on violation beyond tol::kStructural.
  ChoiOperator(CMatrix matrix, int d_in, int d_out, ChoiKind kind);

  static ChoiOperator from_kraus(std::span<const CMatrix> kraus, int d_in, int d_out,
                                 ChoiKind kind);
  static ChoiOperator unitary(const CMatrix& u);
  static ChoiOperator identity(int d);

  const CMatrix& matrix() const { return matrix_; }
  int d_in() const { return d_in_; }
  int d_out() const { return d_out_; }
  ChoiKind kind() const { return kind_; }

 private:
  CMatrix matrix_;
  int d_in_;
  int d_out_;
  ChoiKind kind_;
};

/// Tr_in[(rho^T (x) I) C]. Linear in rho; any d_in x d_in operator is accepted.
CMatrix apply_choi(const ChoiOperator& c, const CMatrix& rho);

/// Choi operator of `second` after `first`.
ChoiOperator compose(const ChoiOperator& first, const ChoiOperator& second);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. Throws
/// std::invalid_argument for non-PSD or non-normalised inputs.
double state_fidelity(const CMatrix& rho, const CMatrix& sigma);

CMatrix ginibre(int rows, int cols, std::mt19937_64& rng);
CVector haar_random_state(int d, std::mt19937_64& rng);
CVector haar_random_state(int d, std::uint64_t seed);
CMatrix haar_random_unitary(int d, std::mt19937_64& rng);

}  // namespace sarlab
