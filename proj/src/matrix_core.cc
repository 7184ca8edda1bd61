#include "sarlab/matrix_core.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace sarlab {

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> hermitian_eigen(const CMatrix& m) {
  CMatrix h = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<CMatrix>(h);
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
  }
}

}  // namespace

CMatrix identity(int d) { return CMatrix::Identity(d, d); }

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix hadamard() {
  CMatrix m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

CVector basis_ket(int d, int k) {
  if (k < 0 || k >= d) throw std::invalid_argument("basis_ket: index out of range");
  CVector v = CVector::Zero(d);
  v(k) = 1.0;
  return v;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

CMatrix partial_trace(const CMatrix& m, int dim_a, int dim_b, Subsystem traced) {
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b) {
    throw std::invalid_argument("partial_trace: dimension mismatch");
  }
  if (traced == Subsystem::A) {
    CMatrix out = CMatrix::Zero(dim_b, dim_b);
    for (int a = 0; a < dim_a; ++a) out += m.block(a * dim_b, a * dim_b, dim_b, dim_b);
    return out;
  }
  CMatrix out(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i) {
    for (int j = 0; j < dim_a; ++j) {
      out(i, j) = m.block(i * dim_b, j * dim_b, dim_b, dim_b).trace();
    }
  }
  return out;
}

CVector double_ket(const CMatrix& op) {
  const Eigen::Index d_out = op.rows();
  const Eigen::Index d_in = op.cols();
  CVector v(d_in * d_out);
  for (Eigen::Index j = 0; j < d_in; ++j) {
    for (Eigen::Index i = 0; i < d_out; ++i) v(j * d_out + i) = op(i, j);
  }
  return v;
}

CMatrix from_double_ket(const CVector& v, int d_in, int d_out) {
  if (v.size() != static_cast<Eigen::Index>(d_in) * d_out) {
    throw std::invalid_argument("from_double_ket: dimension mismatch");
  }
  CMatrix op(d_out, d_in);
  for (int j = 0; j < d_in; ++j) {
    for (int i = 0; i < d_out; ++i) op(i, j) = v(j * d_out + i);
  }
  return op;
}

CMatrix double_ket_projector(const CMatrix& op) {
  CVector v = double_ket(op);
  return v * v.adjoint();
}

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

bool is_unitary(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <=
         tolerance;
}

bool is_hermitian(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

bool is_psd(const CMatrix& m, double tolerance) {
  if (!is_hermitian(m, tolerance)) return false;
  if (m.size() == 0) return true;
  return min_eigenvalue(m) >= -tolerance;
}

double min_eigenvalue(const CMatrix& m) {
  require_square(m, "min_eigenvalue");
  return hermitian_eigen(m).eigenvalues().minCoeff();
}

double max_eigenvalue(const CMatrix& m) {
  require_square(m, "max_eigenvalue");
  return hermitian_eigen(m).eigenvalues().maxCoeff();
}

CMatrix psd_sqrt(const CMatrix& m) {
  require_square(m, "psd_sqrt");
  auto es = hermitian_eigen(m);
  RVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix project_to_psd(const CMatrix& m) {
  require_square(m, "project_to_psd");
  auto es = hermitian_eigen(m);
  RVector ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double wrap_phase(double phi) {
  double r = std::remainder(phi, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

UnitaryEigen unitary_eigen(const CMatrix& u) {
  if (!is_unitary(u)) throw std::invalid_argument("unitary_eigen: input is not unitary");
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& t = schur.matrixT();
  UnitaryEigen out;
  out.phases.resize(u.rows());
  for (Eigen::Index k = 0; k < u.rows(); ++k) out.phases(k) = wrap_phase(std::arg(t(k, k)));
  out.vectors = schur.matrixU();
  return out;
}

ChoiOperator::ChoiOperator(CMatrix matrix, int d_in, int d_out, ChoiKind kind)
    : matrix_(std::move(matrix)), d_in_(d_in), d_out_(d_out), kind_(kind) {
  if (d_in <= 0 || d_out <= 0 || matrix_.rows() != static_cast<Eigen::Index>(d_in) * d_out ||
      matrix_.cols() != matrix_.rows()) {
    throw std::invalid_argument("ChoiOperator: dimension mismatch");
  }
  if (!is_psd(matrix_)) throw std::invalid_argument("ChoiOperator: not positive semidefinite");
  CMatrix marginal = partial_trace(matrix_, d_in, d_out, Subsystem::B);
  CMatrix id = CMatrix::Identity(d_in, d_in);
  if (kind == ChoiKind::Channel) {
    if ((marginal - id).cwiseAbs().maxCoeff() > tol::kStructural) {
      throw std::invalid_argument("ChoiOperator: channel is not trace preserving");
    }
  } else if (!is_psd(id - marginal)) {
    throw std::invalid_argument("ChoiOperator: operation is trace increasing");
  }
}

ChoiOperator ChoiOperator::from_kraus(std::span<const CMatrix> kraus, int d_in, int d_out,
                                      ChoiKind kind) {
  CMatrix c = CMatrix::Zero(d_in * d_out, d_in * d_out);
  for (const CMatrix& k : kraus) {
    if (k.rows() != d_out || k.cols() != d_in) {
      throw std::invalid_argument("from_kraus: Kraus operator has wrong shape");
    }
    c += double_ket_projector(k);
  }
  return ChoiOperator(std::move(c), d_in, d_out, kind);
}

ChoiOperator ChoiOperator::unitary(const CMatrix& u) {
  if (!is_unitary(u)) throw std::invalid_argument("ChoiOperator::unitary: not unitary");
  const int d = static_cast<int>(u.rows());
  return ChoiOperator(double_ket_projector(u), d, d, ChoiKind::Channel);
}

ChoiOperator ChoiOperator::identity(int d) { return unitary(CMatrix::Identity(d, d)); }

CMatrix apply_choi(const ChoiOperator& c, const CMatrix& rho) {
  const int din = c.d_in();
  const int dout = c.d_out();
  if (rho.rows() != din || rho.cols() != din) {
    throw std::invalid_argument("apply_choi: input has wrong dimension");
  }
  const CMatrix& m = c.matrix();
  CMatrix out = CMatrix::Zero(dout, dout);
  for (int j = 0; j < din; ++j) {
    for (int k = 0; k < din; ++k) {
      if (rho(j, k) == Complex(0.0)) continue;
      out += rho(j, k) * m.block(j * dout, k * dout, dout, dout);
    }
  }
  return out;
}

ChoiOperator compose(const ChoiOperator& first, const ChoiOperator& second) {
  if (first.d_out() != second.d_in()) throw std::invalid_argument("compose: dimension mismatch");
  const int din = first.d_in();
  const int dout = second.d_out();
  CMatrix c = CMatrix::Zero(din * dout, din * dout);
  for (int j = 0; j < din; ++j) {
    for (int k = 0; k < din; ++k) {
      CMatrix e = CMatrix::Zero(din, din);
      e(j, k) = 1.0;
      c.block(j * dout, k * dout, dout, dout) = apply_choi(second, apply_choi(first, e));
    }
  }
  ChoiKind kind = (first.kind() == ChoiKind::Channel && second.kind() == ChoiKind::Channel)
                      ? ChoiKind::Channel
                      : ChoiKind::Operation;
  return ChoiOperator(std::move(c), din, dout, kind);
}

double state_fidelity(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() || rho.rows() != rho.cols()) {
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  }
  if (!is_psd(rho) || !is_psd(sigma)) {
    throw std::invalid_argument("state_fidelity: input is not positive semidefinite");
  }
  if (std::abs(rho.trace() - 1.0) > 1e-8 || std::abs(sigma.trace() - 1.0) > 1e-8) {
    throw std::invalid_argument("state_fidelity: input does not have unit trace");
  }
  CMatrix sr = psd_sqrt(rho);
  CMatrix inner = sr * sigma * sr;
  auto es = hermitian_eigen(inner);
  double s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, s * s);
}

CMatrix ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      double re = normal(rng);
      double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

CVector haar_random_state(int d, std::mt19937_64& rng) {
  if (d <= 0) throw std::invalid_argument("haar_random_state: dimension must be positive");
  CVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

CVector haar_random_state(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_random_state(d, rng);
}

CMatrix haar_random_unitary(int d, std::mt19937_64& rng) {
  CMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    Complex rk = r(k, k);
    double a = std::abs(rk);
    if (a > 0) q.col(k) *= rk / a;
  }
  return q;
}

}  // namespace sarlab
