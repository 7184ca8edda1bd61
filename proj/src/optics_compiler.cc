#include "sarlab/optics_compiler.h"

#include <cmath>
#include <stdexcept>

namespace sarlab {

namespace {

CMatrix upper_mode(const CMatrix& w) {
  CMatrix m = CMatrix::Identity(3, 3);
  m.block(0, 0, 2, 2) = w;
  return m;
}

}  // namespace

CMatrix WavePlate::jones() const { return wave_plate(axis, retardance); }

CMatrix wave_plate(double axis, double retardance) {
  CVector l(2);
  l << std::cos(axis), std::sin(axis);
  CVector lp(2);
  lp << -std::sin(axis), std::cos(axis);
  return l * l.adjoint() + std::polar(1.0, -retardance) * lp * lp.adjoint();
}

std::string to_string(OpticsMode mode) {
  switch (mode) {
    case OpticsMode::IsometrySmall:
      return "isometry_small";
    case OpticsMode::IsometryLarge:
      return "isometry_large";
    case OpticsMode::Usd:
      return "usd";
  }
  return "unknown";
}

CMatrix optical_transfer(const OpticalSettings& s, double arm_phase) {
  // Four internal modes: up H, up V, down H, down V.
  CMatrix d1 = CMatrix::Zero(4, 2);
  d1(0, 0) = 1.0;
  d1(3, 1) = 1.0;
  CMatrix arms = CMatrix::Zero(4, 4);
  arms.block(0, 0, 2, 2) = pauli_x();
  arms.block(2, 2, 2, 2) = std::polar(1.0, arm_phase) * wave_plate(s.Gamma, kPi);
  CMatrix d2 = CMatrix::Zero(3, 4);
  d2(1, 1) = 1.0;
  d2(0, 2) = 1.0;
  d2(2, 3) = 1.0;
  return upper_mode(wave_plate(s.Delta, kPi)) * upper_mode(wave_plate(s.qwp2, kPi / 2)) * d2 *
         arms * d1 * wave_plate(s.qwp1, kPi / 2) * wave_plate(s.B, kPi);
}

double alpha_transition(int n) {
  if (n < 1) throw std::invalid_argument("alpha_transition: n must be at least 1");
  auto g = [n](double a) {
    return std::cos(2.0 * n * a) * std::cos(2.0 * a - kPi / 4.0) - std::sqrt(2.0) / 2.0;
  };
  double lo = 1e-6;
  double hi = kPi / (4.0 * n);
  if (g(lo) <= 0.0) return lo;
  while (hi - lo > 1e-15) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TargetCoefficients target_coefficients(int n, double alpha) {
  const double ct = std::cos(2.0 * alpha);
  const double st = std::sin(2.0 * alpha);
  const double ctn = std::cos(2.0 * n * alpha);
  TargetCoefficients t;
  t.lambda_a = 0.5 * (1.0 + ctn * (ct - st));
  t.lambda_b = 0.5 * (1.0 - ctn * (ct + st));
  t.nu_p = (1.0 - ct * ct + st) * ctn / (1.0 + ctn);
  t.nu_n = (-1.0 + ct * ct + st) * ctn / (1.0 - ctn);
  return t;
}

CMatrix target_matrix(int n, double alpha, OpticsMode* mode) {
  if (n < 1 || !(alpha > 0.0) || 4.0 * n * alpha > kPi + 1e-12) {
    throw std::invalid_argument("target_matrix: need 0 < 4 n alpha <= pi");
  }
  const double ct = std::cos(2.0 * alpha);
  const double ctn = std::cos(2.0 * n * alpha);
  CMatrix k = CMatrix::Zero(3, 2);
  if (alpha < alpha_transition(n)) {
    const double lo = std::sin((n - 1) * alpha);
    const double hi = std::sin((n + 1) * alpha);
    const double denom = 2.0 * (lo * lo + hi * hi);
    const double k11 = 2.0 * std::abs(std::cos(alpha) * std::sin(n * alpha)) / std::sqrt(denom);
    const double k31 = 2.0 * std::abs(std::sin(alpha) * std::cos(n * alpha)) / std::sqrt(denom);
    k(0, 0) = k11;
    k(0, 1) = k31;
    k(2, 0) = k31;
    k(2, 1) = -k11;
    if (mode) *mode = OpticsMode::IsometrySmall;
    return k;
  }
  TargetCoefficients t = target_coefficients(n, alpha);
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  const double cn = std::cos(n * alpha);
  const double sn = std::sin(n * alpha);
  const double la = std::sqrt(std::max(0.0, t.lambda_a));
  const double lb = std::sqrt(std::max(0.0, t.lambda_b));
  k(0, 0) = la * c / cn;
  k(0, 1) = la * s / sn;
  k(1, 0) = lb * s / cn;
  k(1, 1) = -lb * c / sn;
  k(2, 0) = std::sqrt(std::max(0.0, t.nu_p));
  k(2, 1) = -std::sqrt(std::max(0.0, t.nu_n));
  if (mode) *mode = OpticsMode::IsometryLarge;
  return k;
}

double phase_aligned_residual(const CMatrix& c, const CMatrix& k) {
  Complex overlap = (c.conjugate().cwiseProduct(k)).sum();
  Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (phase * c - k).norm();
}

PovmCompilation compile_angles(int n, double alpha) {
  PovmCompilation comp;
  comp.n = n;
  comp.alpha = alpha;
  comp.K_matrix = target_matrix(n, alpha, &comp.mode);
  const Eigen::MatrixXd k = comp.K_matrix.real();

  // With real K the compiled block is -i times a real matrix whose last row is
  // cos(2 Gamma)(-sin 2B, cos 2B) and whose upper 2 x 2 block has determinant
  // -sin(2 Gamma).
  const Eigen::Vector2d r = k.row(2).transpose();
  const double rho = r.norm();
  double c2g = 0.0;
  double two_b = 0.0;
  if (rho > 1e-12) {
    c2g = rho;
    two_b = std::atan2(-r(0), r(1));
  }
  const Eigen::Matrix2d ku = k.block(0, 0, 2, 2);
  const double s2g = -ku.determinant();
  const double c2b = std::cos(two_b);
  const double s2b = std::sin(two_b);
  double two_d = 0.0;
  if (std::abs(s2g) > 1e-9) {
    Eigen::Matrix2d x;
    x << s2g * s2b, -s2g * c2b, c2b, s2b;
    Eigen::Matrix2d mx = ku * x.inverse();
    two_d = std::atan2(mx(0, 1), mx(0, 0));
  } else {
    Eigen::Vector2d w = ku * Eigen::Vector2d(c2b, s2b);
    two_d = std::atan2(w(0), -w(1));
  }
  comp.settings.B = two_b / 2.0;
  comp.settings.Gamma = std::atan2(s2g, c2g) / 2.0;
  comp.settings.Delta = two_d / 2.0;
  comp.C_matrix = optical_transfer(comp.settings);
  comp.residual = phase_aligned_residual(comp.C_matrix, comp.K_matrix);
  return comp;
}

PovmCompilation compile_usd(double theta) {
  const double t = std::tan(std::abs(theta));
  if (!(t < 1.0 - 1e-12)) throw std::invalid_argument("compile_usd: tan|theta| must be below 1");
  PovmCompilation comp;
  comp.n = 1;
  comp.alpha = theta;
  comp.mode = OpticsMode::Usd;
  comp.settings.B = kPi / 4.0;
  comp.settings.Gamma = 0.5 * std::asin(t);
  comp.settings.Delta = -kPi / 8.0;
  comp.settings.qwp1 = 0.0;
  comp.settings.qwp2 = kPi / 4.0;
  comp.C_matrix = optical_transfer(comp.settings);
  return comp;
}

std::array<double, 3> simulate_optical_block(const PovmCompilation& comp, const CVector& input,
                                             double arm_phase) {
  if (input.size() != 2) throw std::invalid_argument("simulate_optical_block: expected a qubit state");
  CMatrix c = arm_phase == 0.0 ? comp.C_matrix : optical_transfer(comp.settings, arm_phase);
  CVector amp = c * hadamard() * input;
  return {std::norm(amp(0)), std::norm(amp(1)), std::norm(amp(2))};
}

}  // namespace sarlab
