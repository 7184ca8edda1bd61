#pragma once

// Brute-force ground truth for the optimality claims. Nothing in this module
// calls the closed forms in analytics.h; comparisons happen in the callers.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sarlab/canonical_pair.h"
#include "sarlab/matrix_core.h"

namespace sarlab {

using RVector2 = Eigen::Vector2d;

/// Two-state reduction of the qubit retrieval problem:
///   u = (cos(n a) cos a, sin(n a) sin a),  v = (cos(n a) sin a, -sin(n a) cos a).
struct ReducedProblem {
  RVector2 u;
  RVector2 v;
  double eta_u = 0.0;
  double eta_v = 0.0;
  /// |<u~|v~>| for the normalised vectors (0 when either vector vanishes).
  double mu = 0.0;
};

ReducedProblem reduced_problem(int n, double alpha);

/// Minimum-error discrimination of the unnormalised real states u, v with
/// A = |phi_a><phi_a|, B = I - A. phi_a is the top eigenvector of uu^T - vv^T
/// with phi_a(0) >= 0.
struct HelstromSolution {
  RVector2 phi_a;
  double value = 0.0;
};

HelstromSolution helstrom(const RVector2& u, const RVector2& v);

/// Projectors P, P' onto the invariant blocks of H_0 (x) H_1 (x) H_2, built from
/// |e_1>> = |+>|I>>, |e_2>> = |->|sz>>, |e'_1>> = |+>|sz>>, |e'_2>> = |->|I>>.
CVector block_vector(int which_block, int index);
CMatrix block_projector(int which_block);

struct BlockChoi {
  CMatrix A;
  CMatrix B;
  /// R = sum A_ij |e_i>><<e_j| + sum B_ij |e'_i>><<e'_j| (8 x 8).
  CMatrix R;
};

BlockChoi assemble_block_choi(const CMatrix& A, const CMatrix& B);

/// W(beta, gamma, l) = s^l (x) s^l Z (x) s^l Z^*, Z = diag(e^{i beta}, e^{i gamma}), s = sigma_x.
CMatrix group_element(double beta, double gamma, int l);

struct PerformanceOperatorD {
  CMatrix matrix;
  int n = 1;
  double alpha = 0.0;
};

/// D = (1/(2 d^2)) sum_i |psi*_i><psi*_i| (x) |U_i>><<U_i| for a canonical qubit pair.
PerformanceOperatorD build_D(const CanonicalPair& p);

/// max <u|A|u> + <v|B|v> over 0 <= A, B, A + B <= I, by a projector-angle scan
/// with `resolution` points and golden-section refinement.
double brute_force_deterministic(int n, double alpha, int resolution = 1024);

/// Largest objective found over `samples` random feasible (A, B) pairs.
double random_feasible_deterministic(int n, double alpha, int samples, std::uint64_t seed);

/// Same objective with <v|A|v> = <u|B|u> = 0, scanning (t_A, t_B).
double brute_force_unambiguous(int n, double alpha, int resolution = 1024);

struct PerfectRetrievalReport {
  double lambda_0 = 0.0;
  double lambda_1 = 0.0;
  double residual_0 = 0.0;
  double residual_1 = 0.0;
  double qrq_norm = 0.0;
  bool passed = false;
};

/// Checks <psi*_i| R_s |psi*_i> = lambda_i |U_i>><<U_i| for both i, lambda_0 = lambda_1
/// and Q R_s Q = 0. r_s is the 8 x 8 Choi operator of the success branch on
/// H_0 (x) H_1 (x) H_2.
PerfectRetrievalReport verify_perfect_retrieval_condition(const CMatrix& r_s,
                                                          const CanonicalPair& p,
                                                          double tolerance = 1e-9);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Haar average over input states of (1/2) sum_i <U_i phi| R_i(phi) |U_i phi>, where
/// R_i is the retrieved channel when U_i was stored. Throws std::invalid_argument
/// for fewer than 10^4 samples. Samples are drawn in 8 chunks seeded seed + chunk.
MonteCarloEstimate monte_carlo_F_avg(const ChoiOperator& r0, const ChoiOperator& r1,
                                     const CanonicalPair& p, std::size_t samples,
                                     std::uint64_t seed);

/// Ginibre-based PSD matrix scaled to operator norm u ~ U[0, 1].
CMatrix random_psd(int d, std::mt19937_64& rng);

struct LemmaResult {
  std::string name;
  int instances = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Randomised checks of the block-reduction lemmas and the symmetry of D.
std::vector<LemmaResult> run_lemma_battery(int instances, std::uint64_t seed);

}  // namespace sarlab
