#include "sarlab/retrieval_circuits.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sarlab/verification_oracle.h"

namespace sarlab {

namespace {

constexpr double kOverlapSlack = 1e-12;

void require_alpha(int n, double alpha, const char* what) {
  if (n < 1 || !(alpha > 0.0) || 4.0 * n * alpha > kPi + 1e-12) {
    throw std::invalid_argument(std::string(what) + ": need 0 < 4 n alpha <= pi");
  }
}

CMatrix phase_fixed(const CMatrix& k, const CMatrix& u) {
  Complex t = (u.adjoint() * k).trace();
  double mag = std::abs(t);
  if (mag == 0.0) return k;
  return k * (std::conj(t) / mag);
}

CVector restricted_state(const CanonicalPair& p, int which) {
  CVector full = storage_state(p, which);
  CVector v(2);
  v << full(0), full(p.d - 1);
  return v;
}

std::vector<CMatrix> qudit_success_kraus(const QuditIsometryG& g, const CanonicalPair& p,
                                         int which) {
  CVector psi = restricted_state(p, which);
  std::vector<CMatrix> out;
  for (int h3 = 0; h3 < 2; ++h3) {
    CMatrix k = CMatrix::Zero(g.d, g.d);
    for (int kp = 0; kp < g.d; ++kp) {
      for (int kk = 0; kk < g.d; ++kk) {
        for (int s = 0; s < 2; ++s) k(kp, kk) += g.matrix(4 * kp + 2 * h3, 2 * kk + s) * psi(s);
      }
    }
    out.push_back(std::move(k));
  }
  return out;
}

}  // namespace

QutritIsometryM build_isometry_M(int n, double alpha) {
  require_alpha(n, alpha, "build_isometry_M");
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  const double cn = std::cos(n * alpha);
  const double sn = std::sin(n * alpha);
  const double ct = std::cos(2.0 * alpha);
  const double st = std::sin(2.0 * alpha);
  const double ctn = std::cos(2.0 * n * alpha);

  QutritIsometryM m;
  m.columns = CMatrix::Zero(3, 2);
  if (alpha >= chi(n)) {
    m.regime = Regime::LargeAlpha;
    m.lambda_a = std::max(0.0, 0.5 * (1.0 + ctn * (ct - st)));
    m.lambda_b = std::max(0.0, 0.5 * (1.0 - ctn * (ct + st)));
    m.nu_plus = std::max(0.0, ctn * (1.0 - ct * ct + st) / (1.0 + ctn));
    m.nu_minus = std::max(0.0, ctn * (ct * ct - 1.0 + st) / (1.0 - ctn));
    const double la = std::sqrt(m.lambda_a);
    const double lb = std::sqrt(m.lambda_b);
    m.columns(0, 0) = la * c / cn;
    m.columns(1, 0) = lb * s / cn;
    m.columns(2, 0) = std::sqrt(m.nu_plus);
    m.columns(0, 1) = la * s / sn;
    m.columns(1, 1) = -lb * c / sn;
    m.columns(2, 1) = -std::sqrt(m.nu_minus);
  } else {
    m.regime = Regime::SmallAlpha;
    // 2 (1 - cos 2a cos 2na), written without cancellation for small alpha.
    const double lo = std::sin((n - 1) * alpha);
    const double hi = std::sin((n + 1) * alpha);
    const double denom = 2.0 * (lo * lo + hi * hi);
    const double stn = std::sin(2.0 * n * alpha);
    m.a = 4.0 * c * c * sn * sn / denom;
    m.b = 4.0 * s * s * cn * cn / denom;
    m.lambda_a = stn * stn / denom;
    m.columns(0, 0) = std::sqrt(m.a);
    m.columns(2, 0) = std::sqrt(m.b);
    m.columns(0, 1) = std::sqrt(m.b);
    m.columns(2, 1) = -std::sqrt(m.a);
  }
  m.matrix = m.columns * hadamard();
  return m;
}

CMatrix storage_cnot() {
  CMatrix p0 = CMatrix::Zero(2, 2);
  CMatrix p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  return kron(identity(2), p0) + kron(pauli_x(), p1);
}

std::string to_string(BranchLabel label) {
  switch (label) {
    case BranchLabel::Success0:
      return "success_0";
    case BranchLabel::Success1Corrected:
      return "success_1_corrected";
    case BranchLabel::Fail:
      return "fail";
  }
  return "unknown";
}

double RetrievalInstrument::success_probability() const {
  double total = 0.0;
  for (const auto& b : branches) {
    if (b.label == BranchLabel::Fail) continue;
    total += (b.kraus.adjoint() * b.kraus).trace().real() / 2.0;
  }
  return total;
}

RetrievalInstrument simulate_qubit_retrieval(const CanonicalPair& p, int which) {
  if (p.d != 2) throw std::invalid_argument("simulate_qubit_retrieval: requires d = 2");
  if (which != 0 && which != 1) throw std::invalid_argument("which must be 0 or 1");
  QutritIsometryM m = build_isometry_M(p.n, p.alpha);
  CMatrix full = kron(m.matrix, identity(2)) * storage_cnot();
  CMatrix bind = kron(CMatrix(storage_state(p, which)), identity(2));
  const CMatrix u = p.unitary(which);

  RetrievalInstrument instr;
  instr.n = p.n;
  instr.alpha = p.alpha;
  instr.which = which;
  instr.regime = m.regime;
  const BranchLabel labels[3] = {BranchLabel::Success0, BranchLabel::Success1Corrected,
                                 BranchLabel::Fail};
  for (int j = 0; j < 3; ++j) {
    RetrievalBranch b;
    b.label = labels[j];
    b.full_kraus = full.block(2 * j, 0, 2, 4);
    if (j == 1) b.full_kraus = pauli_z() * b.full_kraus;
    b.kraus = b.full_kraus * bind;
    if (j < 2) b.kraus = phase_fixed(b.kraus, u);
    instr.branches.push_back(std::move(b));
  }
  return instr;
}

CMatrix success_operation_choi(const RetrievalInstrument& instr) {
  CMatrix c = CMatrix::Zero(8, 8);
  for (const auto& b : instr.branches) {
    if (b.label == BranchLabel::Fail) continue;
    c += double_ket_projector(b.full_kraus);
  }
  return c;
}

DeterministicRetrieval simulate_deterministic_retrieval(const CanonicalPair& p) {
  if (p.d != 2) throw std::invalid_argument("simulate_deterministic_retrieval: requires d = 2");
  ReducedProblem rp = reduced_problem(p.n, p.alpha);
  HelstromSolution h = helstrom(rp.u, rp.v);
  const double a = h.phi_a(0);
  const double b = h.phi_a(1);
  const Complex i(0.0, 1.0);
  const CMatrix u_plus = a * identity(2) + i * b * pauli_z();
  const CMatrix u_minus = a * identity(2) - i * b * pauli_z();
  const CVector plus = (basis_ket(2, 0) + basis_ket(2, 1)) / std::sqrt(2.0);
  const CVector minus = (basis_ket(2, 0) - basis_ket(2, 1)) / std::sqrt(2.0);
  const CVector up = (plus + i * minus) / std::sqrt(2.0);

  std::array<CMatrix, 2> chois;
  std::array<double, 2> p_up{};
  double fidelity = 0.0;
  for (int w = 0; w < 2; ++w) {
    CVector psi = storage_state(p, w);
    p_up[w] = std::norm(up.dot(psi));
    chois[w] = p_up[w] * double_ket_projector(u_plus) +
               (1.0 - p_up[w]) * double_ket_projector(u_minus);
    CVector target = double_ket(p.unitary(w));
    fidelity += (target.adjoint() * chois[w] * target)(0, 0).real() / 8.0;
  }
  return DeterministicRetrieval{ChoiOperator(chois[0], 2, 2, ChoiKind::Channel),
                                ChoiOperator(chois[1], 2, 2, ChoiKind::Channel),
                                fidelity,
                                a,
                                b,
                                p_up};
}

QuditIsometryG build_qudit_isometry(const CanonicalPair& p) {
  require_alpha(p.n, p.alpha, "build_qudit_isometry");
  const int d = p.d;
  const double ct = std::cos(2.0 * p.alpha);
  const double st = std::sin(2.0 * p.alpha);
  const double ctn = std::cos(2.0 * p.n * p.alpha);

  QuditIsometryG g;
  g.d = d;
  g.n = p.n;
  g.alpha = p.alpha;
  const bool large = p.alpha >= chi(p.n);
  g.regime = large ? Regime::LargeAlpha : Regime::SmallAlpha;
  const double lo = std::sin((p.n - 1) * p.alpha);
  const double hi = std::sin((p.n + 1) * p.alpha);
  const double stn = std::sin(2.0 * p.n * p.alpha);
  g.p_succ = large ? 1.0 - ctn * st : stn * stn / (2.0 * (lo * lo + hi * hi));
  g.x = large ? Complex(ctn * ct / (1.0 - ctn * st), 0.0) : Complex(1.0, 0.0);

  RVector ph = p.phases();
  g.betas.resize(d);
  g.y_diag.resize(d);
  for (int k = 0; k < d; ++k) {
    g.betas[k] = {ph(k), -ph(k)};
    Complex zeta = std::polar(1.0, g.betas[k][1] - g.betas[k][0]);
    g.y_diag[k] = large ? (1.0 - ct * zeta) / st : (ctn - g.p_succ * zeta) / (1.0 - g.p_succ);
  }

  auto embed = [](Complex overlap) {
    double mag = std::abs(overlap);
    if (mag > 1.0 + kOverlapSlack) {
      throw std::runtime_error("build_qudit_isometry: overlap outside the unit disc");
    }
    CVector v(2);
    v << overlap, std::sqrt(std::max(0.0, 1.0 - mag * mag));
    return v;
  };
  const CVector phi[2] = {basis_ket(2, 0), embed(g.x)};

  CMatrix states = CMatrix::Zero(2 * d, 2 * d);
  CMatrix images = CMatrix::Zero(4 * d, 2 * d);
  const double ps = std::sqrt(g.p_succ);
  const double pf = std::sqrt(std::max(0.0, 1.0 - g.p_succ));
  for (int w = 0; w < 2; ++w) {
    CVector psi = restricted_state(p, w);
    const CVector eta = w == 0 ? basis_ket(2, 0) : CVector();
    for (int k = 0; k < d; ++k) {
      const int col = 2 * k + w;
      states.block(2 * k, col, 2, 1) = psi;
      CVector eta_k = w == 0 ? eta : embed(g.y_diag[k]);
      Complex phase = std::polar(1.0, g.betas[k][w]);
      for (int h3 = 0; h3 < 2; ++h3) {
        images(4 * k + 2 * h3 + 0, col) = ps * phase * phi[w](h3);
        images(4 * k + 2 * h3 + 1, col) = pf * eta_k(h3);
      }
    }
  }
  g.matrix = images * states.inverse();
  return g;
}

ChoiOperator retrieved_channel_on_success(const RetrievalInstrument& instr) {
  double prob = instr.success_probability();
  if (prob <= 0.0) throw std::invalid_argument("retrieved_channel_on_success: zero success probability");
  CMatrix c = CMatrix::Zero(4, 4);
  for (const auto& b : instr.branches) {
    if (b.label == BranchLabel::Fail) continue;
    c += double_ket_projector(b.kraus);
  }
  return ChoiOperator(c / prob, 2, 2, ChoiKind::Channel);
}

double qudit_success_probability(const QuditIsometryG& g, const CanonicalPair& p, int which) {
  double total = 0.0;
  for (const CMatrix& k : qudit_success_kraus(g, p, which)) {
    total += (k.adjoint() * k).trace().real() / g.d;
  }
  return total;
}

ChoiOperator retrieved_channel_on_success(const QuditIsometryG& g, const CanonicalPair& p,
                                          int which) {
  double prob = qudit_success_probability(g, p, which);
  if (prob <= 0.0) throw std::invalid_argument("retrieved_channel_on_success: zero success probability");
  CMatrix c = CMatrix::Zero(g.d * g.d, g.d * g.d);
  for (const CMatrix& k : qudit_success_kraus(g, p, which)) c += double_ket_projector(k);
  return ChoiOperator(c / prob, g.d, g.d, ChoiKind::Channel);
}

}  // namespace sarlab
