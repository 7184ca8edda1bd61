#include "sarlab/canonical_pair.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sarlab {

namespace {

constexpr double kDistinguishableSlack = 1e-12;

void require_which(int which) {
  if (which != 0 && which != 1) throw std::invalid_argument("which must be 0 or 1");
}

}  // namespace

CanonicalPair CanonicalPair::from_parameters(int d, int n, double alpha, std::vector<double> betas) {
  if (d < 2) throw std::invalid_argument("from_parameters: d must be at least 2");
  if (n < 1) throw std::invalid_argument("from_parameters: n must be at least 1");
  if (alpha < 0.0 || 4.0 * n * alpha >= kPi - kDistinguishableSlack) {
    throw std::invalid_argument("from_parameters: alpha outside [0, pi/(4n))");
  }
  if (static_cast<int>(betas.size()) != d - 2) {
    throw std::invalid_argument("from_parameters: expected d-2 interior phases");
  }
  for (double b : betas) {
    if (std::abs(b) > alpha + tol::kAlgebraic) {
      throw std::invalid_argument("from_parameters: interior phase outside [-alpha, alpha]");
    }
  }
  std::sort(betas.begin(), betas.end(), std::greater<>());
  CanonicalPair p;
  p.d = d;
  p.n = n;
  p.alpha = alpha;
  p.betas = std::move(betas);
  p.V = CMatrix::Identity(d, d);
  p.W = CMatrix::Identity(d, d);
  p.global_phase = 0.0;
  p.degenerate = alpha < tol::kAlgebraic;
  return p;
}

RVector CanonicalPair::phases() const {
  RVector ph(d);
  ph(0) = alpha;
  for (int k = 0; k < d - 2; ++k) ph(k + 1) = betas[k];
  ph(d - 1) = -alpha;
  return ph;
}

CMatrix CanonicalPair::unitary(int which) const {
  require_which(which);
  const double sign = which == 0 ? 1.0 : -1.0;
  RVector ph = phases();
  CMatrix u = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) u(k, k) = std::polar(1.0, sign * ph(k));
  return u;
}

CMatrix CanonicalPair::original_unitary(int which) const {
  const double phase = which == 0 ? global_phase : -global_phase;
  return std::polar(1.0, -phase) * W.adjoint() * unitary(which) * V.adjoint();
}

CanonicalizeResult canonicalize(const CMatrix& u0, const CMatrix& u1, int n) {
  if (n < 1) throw std::invalid_argument("canonicalize: n must be at least 1");
  if (u0.rows() != u1.rows() || u0.cols() != u1.cols()) {
    throw std::invalid_argument("canonicalize: dimension mismatch");
  }
  if (u0.rows() < 2) throw std::invalid_argument("canonicalize: dimension must be at least 2");
  if (!is_unitary(u0) || !is_unitary(u1)) {
    throw std::invalid_argument("canonicalize: input is not unitary");
  }
  const int d = static_cast<int>(u0.rows());

  // Eigenphases omega of T = U_1 U_0^dagger; U_1^dagger U_0 has phases theta = -omega.
  UnitaryEigen eig = unitary_eigen(u1 * u0.adjoint());
  RVector theta = -eig.phases;

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return theta(a) < theta(b); });

  int gap_index = 0;
  double max_gap = -1.0;
  for (int k = 0; k < d; ++k) {
    double gap = k + 1 < d ? theta(order[k + 1]) - theta(order[k])
                           : theta(order[0]) + 2.0 * kPi - theta(order[d - 1]);
    if (gap > max_gap + 1e-15) {
      max_gap = gap;
      gap_index = k;
    }
  }
  const double arc = std::max(0.0, 2.0 * kPi - max_gap);
  const double alpha = arc / 4.0;
  if (4.0 * n * alpha >= kPi - kDistinguishableSlack) {
    return PerfectlyDistinguishable{d, n, alpha};
  }

  const double start = theta(order[(gap_index + 1) % d]);
  const double mid = start + arc / 2.0;
  RVector psi(d);
  for (int k = 0; k < d; ++k) {
    double offset = std::fmod(theta(k) - start, 2.0 * kPi);
    if (offset < 0) offset += 2.0 * kPi;
    if (offset > arc + 1e-9) offset -= 2.0 * kPi;
    psi(k) = std::clamp(start + offset - mid, -arc / 2.0, arc / 2.0);
  }

  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return psi(a) > psi(b); });

  CMatrix ep(d, d);
  CMatrix lambda = CMatrix::Zero(d, d);
  for (int c = 0; c < d; ++c) {
    ep.col(c) = eig.vectors.col(perm[c]);
    lambda(c, c) = std::polar(1.0, psi(perm[c]) / 2.0);
  }

  CanonicalPair p;
  p.d = d;
  p.n = n;
  p.alpha = alpha;
  p.betas.resize(d - 2);
  for (int c = 1; c + 1 < d; ++c) p.betas[c - 1] = psi(perm[c]) / 2.0;
  p.V = u0.adjoint() * ep;
  p.W = std::polar(1.0, mid / 2.0) * lambda * ep.adjoint();
  p.global_phase = -mid / 2.0;
  p.degenerate = alpha < tol::kAlgebraic;
  return p;
}

CVector storage_state(const CanonicalPair& p, int which, int uses) {
  require_which(which);
  if (uses < 0) throw std::invalid_argument("storage_state: uses must be nonnegative");
  const double sign = which == 0 ? 1.0 : -1.0;
  CVector v = CVector::Zero(p.d);
  v(0) = std::polar(1.0 / std::sqrt(2.0), sign * uses * p.alpha);
  v(p.d - 1) = std::polar(1.0 / std::sqrt(2.0), -sign * uses * p.alpha);
  return v;
}

CVector storage_state(const CanonicalPair& p, int which) { return storage_state(p, which, p.n); }

}  // namespace sarlab
