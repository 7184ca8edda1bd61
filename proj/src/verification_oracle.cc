#include "sarlab/verification_oracle.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace sarlab {

namespace {

constexpr double kGolden = 0.6180339887498949;

double golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                       double width = 1e-10) {
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > width) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max({f1, f2, f(0.5 * (lo + hi))});
}

CVector ket_plus() { return (basis_ket(2, 0) + basis_ket(2, 1)) / std::sqrt(2.0); }
CVector ket_minus() { return (basis_ket(2, 0) - basis_ket(2, 1)) / std::sqrt(2.0); }

double real_quadratic(const CMatrix& m, const RVector2& x) {
  CVector cx = x.cast<Complex>();
  return (cx.adjoint() * m * cx)(0, 0).real();
}

RVector2 perpendicular(const RVector2& x) {
  RVector2 p(-x(1), x(0));
  return p / p.norm();
}

}  // namespace

ReducedProblem reduced_problem(int n, double alpha) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  const double cn = std::cos(n * alpha);
  const double sn = std::sin(n * alpha);
  ReducedProblem r;
  r.u = RVector2(cn * c, sn * s);
  r.v = RVector2(cn * s, -sn * c);
  r.eta_u = r.u.squaredNorm();
  r.eta_v = r.v.squaredNorm();
  const double nu = r.u.norm();
  const double nv = r.v.norm();
  r.mu = (nu > 0 && nv > 0) ? std::abs(r.u.dot(r.v)) / (nu * nv) : 0.0;
  return r;
}

HelstromSolution helstrom(const RVector2& u, const RVector2& v) {
  Eigen::Matrix2d gamma = u * u.transpose() - v * v.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gamma);
  RVector2 phi = es.eigenvectors().col(1);
  if (phi(0) < 0 || (phi(0) == 0 && phi(1) < 0)) phi = -phi;
  HelstromSolution h;
  h.phi_a = phi;
  h.value = es.eigenvalues()(1) + v.squaredNorm();
  return h;
}

CVector block_vector(int which_block, int index) {
  if ((which_block != 0 && which_block != 1) || (index != 0 && index != 1)) {
    throw std::invalid_argument("block_vector: block and index must be 0 or 1");
  }
  const CVector id = double_ket(identity(2));
  const CVector z = double_ket(pauli_z());
  if (which_block == 0) return index == 0 ? kron(ket_plus(), id) : kron(ket_minus(), z);
  return index == 0 ? kron(ket_plus(), z) : kron(ket_minus(), id);
}

CMatrix block_projector(int which_block) {
  CVector e1 = block_vector(which_block, 0);
  CVector e2 = block_vector(which_block, 1);
  return 0.5 * (e1 * e1.adjoint() + e2 * e2.adjoint());
}

BlockChoi assemble_block_choi(const CMatrix& A, const CMatrix& B) {
  if (A.rows() != 2 || A.cols() != 2 || B.rows() != 2 || B.cols() != 2) {
    throw std::invalid_argument("assemble_block_choi: blocks must be 2 x 2");
  }
  BlockChoi bc;
  bc.A = A;
  bc.B = B;
  bc.R = CMatrix::Zero(8, 8);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      bc.R += A(i, j) * block_vector(0, i) * block_vector(0, j).adjoint();
      bc.R += B(i, j) * block_vector(1, i) * block_vector(1, j).adjoint();
    }
  }
  return bc;
}

CMatrix group_element(double beta, double gamma, int l) {
  if (l != 0 && l != 1) throw std::invalid_argument("group_element: l must be 0 or 1");
  CMatrix s = l == 0 ? identity(2) : pauli_x();
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = std::polar(1.0, beta);
  z(1, 1) = std::polar(1.0, gamma);
  return kron(kron(s, s * z), s * z.conjugate());
}

PerformanceOperatorD build_D(const CanonicalPair& p) {
  if (p.d != 2) throw std::invalid_argument("build_D: only d = 2 is supported");
  PerformanceOperatorD out;
  out.n = p.n;
  out.alpha = p.alpha;
  out.matrix = CMatrix::Zero(8, 8);
  for (int i = 0; i < 2; ++i) {
    CVector psi = storage_state(p, i).conjugate();
    out.matrix += kron(CMatrix(psi * psi.adjoint()), double_ket_projector(p.unitary(i)));
  }
  out.matrix /= 8.0;
  return out;
}

double brute_force_deterministic(int n, double alpha, int resolution) {
  if (resolution < 2) throw std::invalid_argument("brute_force_deterministic: resolution too small");
  ReducedProblem rp = reduced_problem(n, alpha);
  auto objective = [&](double theta) {
    RVector2 phi(std::cos(theta), std::sin(theta));
    double pu = phi.dot(rp.u);
    double pv = phi.dot(rp.v);
    return pu * pu + rp.eta_v - pv * pv;
  };
  const double step = kPi / resolution;
  int best = 0;
  double best_val = objective(0.0);
  for (int k = 1; k < resolution; ++k) {
    double val = objective(k * step);
    if (val > best_val) {
      best_val = val;
      best = k;
    }
  }
  double refined = golden_maximize(objective, (best - 1) * step, (best + 1) * step);
  return std::max(best_val, refined);
}

double random_feasible_deterministic(int n, double alpha, int samples, std::uint64_t seed) {
  ReducedProblem rp = reduced_problem(n, alpha);
  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    CMatrix a = random_psd(2, rng);
    CMatrix b = random_psd(2, rng);
    double top = max_eigenvalue(a + b);
    if (top > 1.0) {
      a /= top;
      b /= top;
    }
    best = std::max(best, real_quadratic(a, rp.u) + real_quadratic(b, rp.v));
  }
  return best;
}

double brute_force_unambiguous(int n, double alpha, int resolution) {
  if (resolution < 2) throw std::invalid_argument("brute_force_unambiguous: resolution too small");
  ReducedProblem rp = reduced_problem(n, alpha);
  const double nu = rp.u.norm();
  const double nv = rp.v.norm();
  if (nv < 1e-300) return rp.eta_u;
  if (nu < 1e-300) return rp.eta_v;
  const RVector2 phi_a = perpendicular(rp.v);
  const RVector2 phi_b = perpendicular(rp.u);
  const double gain_a = std::pow(phi_a.dot(rp.u), 2);
  const double gain_b = std::pow(phi_b.dot(rp.v), 2);
  const Eigen::Matrix2d pa = phi_a * phi_a.transpose();
  const Eigen::Matrix2d pb = phi_b * phi_b.transpose();

  auto feasible = [&](double ta, double tb) {
    Eigen::Matrix2d rest = Eigen::Matrix2d::Identity() - ta * pa - tb * pb;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(rest, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) >= 0.0;
  };
  auto max_tb = [&](double ta) {
    if (!feasible(ta, 0.0)) return -1.0;
    if (feasible(ta, 1.0)) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      double mid = 0.5 * (lo + hi);
      if (feasible(ta, mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  };
  auto objective = [&](double ta) {
    double tb = max_tb(ta);
    if (tb < 0) return -1.0;
    return ta * gain_a + tb * gain_b;
  };

  const double step = 1.0 / resolution;
  int best = 0;
  double best_val = objective(0.0);
  for (int k = 1; k <= resolution; ++k) {
    double val = objective(k * step);
    if (val > best_val) {
      best_val = val;
      best = k;
    }
  }
  double lo = std::max(0.0, (best - 1) * step);
  double hi = std::min(1.0, (best + 1) * step);
  return std::max(best_val, golden_maximize(objective, lo, hi));
}

PerfectRetrievalReport verify_perfect_retrieval_condition(const CMatrix& r_s,
                                                          const CanonicalPair& p,
                                                          double tolerance) {
  if (p.d != 2 || r_s.rows() != 8 || r_s.cols() != 8) {
    throw std::invalid_argument("verify_perfect_retrieval_condition: expected an 8 x 8 qubit Choi");
  }
  PerfectRetrievalReport rep;
  double lambda[2];
  double residual[2];
  for (int i = 0; i < 2; ++i) {
    CVector psi = storage_state(p, i).conjugate();
    CMatrix contract = kron(CMatrix(psi), identity(4));
    CMatrix m = contract.adjoint() * r_s * contract;
    lambda[i] = m.trace().real() / 2.0;
    residual[i] = operator_norm(m - lambda[i] * double_ket_projector(p.unitary(i)));
  }
  rep.lambda_0 = lambda[0];
  rep.lambda_1 = lambda[1];
  rep.residual_0 = residual[0];
  rep.residual_1 = residual[1];
  CMatrix q = identity(8) - block_projector(0) - block_projector(1);
  rep.qrq_norm = operator_norm(q * r_s * q);
  rep.passed = residual[0] <= tolerance && residual[1] <= tolerance &&
               std::abs(lambda[0] - lambda[1]) <= tolerance && rep.qrq_norm <= tolerance;
  return rep;
}

MonteCarloEstimate monte_carlo_F_avg(const ChoiOperator& r0, const ChoiOperator& r1,
                                     const CanonicalPair& p, std::size_t samples,
                                     std::uint64_t seed) {
  if (samples < 10000) throw std::invalid_argument("monte_carlo_F_avg: need at least 10^4 samples");
  if (r0.d_in() != p.d || r1.d_in() != p.d || r0.d_out() != p.d || r1.d_out() != p.d) {
    throw std::invalid_argument("monte_carlo_F_avg: dimension mismatch");
  }
  constexpr int kChunks = 8;
  const CMatrix u[2] = {p.unitary(0), p.unitary(1)};
  const ChoiOperator* r[2] = {&r0, &r1};
  std::vector<double> sum(kChunks, 0.0);
  std::vector<double> sum_sq(kChunks, 0.0);
  std::vector<std::size_t> count(kChunks, 0);
  for (int c = 0; c < kChunks; ++c) {
    count[c] = samples / kChunks + (static_cast<std::size_t>(c) < samples % kChunks ? 1 : 0);
  }
  auto work = [&](int c) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(c));
    for (std::size_t k = 0; k < count[c]; ++k) {
      CVector phi = haar_random_state(p.d, rng);
      CMatrix rho = phi * phi.adjoint();
      double f = 0.0;
      for (int i = 0; i < 2; ++i) {
        CVector target = u[i] * phi;
        f += 0.5 * (target.adjoint() * apply_choi(*r[i], rho) * target)(0, 0).real();
      }
      sum[c] += f;
      sum_sq[c] += f * f;
    }
  };
  std::vector<std::thread> workers;
  workers.reserve(kChunks);
  for (int c = 0; c < kChunks; ++c) workers.emplace_back(work, c);
  for (auto& w : workers) w.join();

  double total = 0.0;
  double total_sq = 0.0;
  for (int c = 0; c < kChunks; ++c) {
    total += sum[c];
    total_sq += sum_sq[c];
  }
  const double n = static_cast<double>(samples);
  MonteCarloEstimate est;
  est.samples = samples;
  est.mean = total / n;
  double var = std::max(0.0, (total_sq - n * est.mean * est.mean) / (n - 1.0));
  est.standard_error = std::sqrt(var / n);
  return est;
}

CMatrix random_psd(int d, std::mt19937_64& rng) {
  CMatrix g = ginibre(d, d, rng);
  CMatrix a = g * g.adjoint();
  a = 0.5 * (a + a.adjoint());
  double top = max_eigenvalue(a);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double scale = unit(rng);
  return top > 0 ? CMatrix(a * (scale / top)) : a;
}

std::vector<LemmaResult> run_lemma_battery(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick_n(1, 5);
  std::uniform_int_distribution<int> pick_l(0, 1);
  auto random_point = [&]() {
    int n = pick_n(rng);
    double alpha = unit(rng) * kPi / (4.0 * n) * 0.999;
    return CanonicalPair::from_parameters(2, n, alpha);
  };
  auto random_group = [&]() {
    return group_element(2.0 * kPi * unit(rng), 2.0 * kPi * unit(rng), pick_l(rng));
  };

  LemmaResult lemma4{"partial_trace_block_equivalence", instances, 0.0, 1e-10, true};
  LemmaResult lemma5{"figure_of_merit_block_formula", instances, 0.0, 1e-12, true};
  LemmaResult lemma6{"perfect_retrieval_orthogonality", instances, 0.0, 1e-12, true};
  LemmaResult commute{"performance_operator_symmetry", instances, 0.0, 1e-12, true};
  LemmaResult blocks{"block_projector_reconstruction", instances, 0.0, 1e-12, true};
  LemmaResult holevo{"symmetrised_retrieval_not_worse", instances, 0.0, 1e-12, true};

  const CMatrix p0 = block_projector(0);
  const CMatrix p1 = block_projector(1);
  int sign_mismatches = 0;

  for (int t = 0; t < instances; ++t) {
    CMatrix a = random_psd(2, rng);
    CMatrix b = random_psd(2, rng);
    BlockChoi bc = assemble_block_choi(a, b);

    double block_min = min_eigenvalue(identity(2) - a - b);
    double full_min = min_eigenvalue(identity(4) - partial_trace(bc.R, 4, 2, Subsystem::B));
    lemma4.max_residual = std::max(lemma4.max_residual, std::abs(block_min - full_min));
    bool block_ok = block_min >= -tol::kStructural;
    bool full_ok = full_min >= -tol::kStructural;
    if (block_ok != full_ok) ++sign_mismatches;

    CanonicalPair p = random_point();
    PerformanceOperatorD d = build_D(p);
    ReducedProblem rp = reduced_problem(p.n, p.alpha);
    double full = (bc.R * d.matrix).trace().real();
    double reduced = real_quadratic(a, rp.u) + real_quadratic(b, rp.v);
    lemma5.max_residual = std::max(lemma5.max_residual, std::abs(full - reduced));

    const double c = std::cos(p.alpha);
    const double s = std::sin(p.alpha);
    const double cn = std::cos(p.n * p.alpha);
    const double sn = std::sin(p.n * p.alpha);
    RVector2 phi_a(c / cn, s / sn);
    RVector2 phi_b(s / cn, -c / sn);
    double orth = std::max(std::abs(rp.u.dot(phi_b)), std::abs(rp.v.dot(phi_a)));
    lemma6.max_residual = std::max(lemma6.max_residual, orth);

    CMatrix w = random_group();
    commute.max_residual =
        std::max(commute.max_residual, operator_norm(d.matrix * w - w * d.matrix));

    double recon = operator_norm(bc.R - (p0 * bc.R * p0 + p1 * bc.R * p1));
    recon = std::max(recon, operator_norm(p0 * p0 - p0));
    recon = std::max(recon, operator_norm(p0 * p1));
    blocks.max_residual = std::max(blocks.max_residual, recon);

    if (t < std::max(1, instances / 5)) {
      CMatrix r = random_psd(8, rng);
      double top = max_eigenvalue(partial_trace(r, 4, 2, Subsystem::B));
      if (top > 1.0) r /= top;
      CMatrix avg = CMatrix::Zero(8, 8);
      constexpr int kGroupSamples = 200;
      for (int g = 0; g < kGroupSamples; ++g) {
        CMatrix wg = random_group();
        avg += wg.adjoint() * r * wg;
      }
      avg /= static_cast<double>(kGroupSamples);
      double before = (r * d.matrix).trace().real();
      double after = (avg * d.matrix).trace().real();
      holevo.max_residual = std::max(holevo.max_residual, before - after);
      if (max_eigenvalue(partial_trace(avg, 4, 2, Subsystem::B)) > 1.0 + tol::kStructural) {
        holevo.max_residual = std::max(holevo.max_residual, 1.0);
      }
    }
  }
  holevo.instances = std::max(1, instances / 5);

  lemma4.passed = sign_mismatches == 0 && lemma4.max_residual <= lemma4.tolerance;
  for (LemmaResult* r : {&lemma5, &lemma6, &commute, &blocks, &holevo}) {
    r->passed = r->max_residual <= r->tolerance;
  }
  return {lemma4, lemma5, lemma6, commute, blocks, holevo};
}

}  // namespace sarlab
