#include "sarlab/analytics.h"

#include <cmath>
#include <stdexcept>

#include "sarlab/matrix_core.h"

namespace sarlab {

namespace {

constexpr double kRangeSlack = 1e-12;
constexpr double kBoundaryWidth = 1e-12;

void require_range(int n, double alpha, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": n must be at least 1");
  if (!(alpha >= 0.0) || 4.0 * n * alpha > kPi + kRangeSlack) {
    throw std::invalid_argument(std::string(what) + ": alpha outside [0, pi/(4n)]");
  }
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::SmallAlpha:
      return "small_alpha";
    case Regime::LargeAlpha:
      return "large_alpha";
    case Regime::Boundary:
      return "boundary";
    case Regime::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

double deterministic_fidelity(int n, double alpha) {
  require_range(n, alpha, "deterministic_fidelity");
  double x = std::sin(2.0 * alpha) * std::cos(2.0 * n * alpha);
  return 0.5 + 0.5 * std::sqrt(std::max(0.0, 1.0 - x * x));
}

double chi(int n) {
  if (n < 1) throw std::invalid_argument("chi: n must be at least 1");
  auto g = [n](double a) {
    return std::cos(2.0 * n * a) * (std::cos(2.0 * a) + std::sin(2.0 * a)) - 1.0;
  };
  double lo = 1e-6;
  double hi = kPi / (4.0 * n);
  if (g(lo) <= 0.0) return lo;
  while (hi - lo > 1e-15) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

// 1 - cos(2n a) cos(2a) without cancellation near a = 0.
double one_minus_cn_c(int n, double alpha) {
  const double lo = std::sin((n - 1) * alpha);
  const double hi = std::sin((n + 1) * alpha);
  return lo * lo + hi * hi;
}

}  // namespace

double success_small_branch(int n, double alpha) {
  const double sn = std::sin(2.0 * n * alpha);
  return sn * sn / (2.0 * one_minus_cn_c(n, alpha));
}

double success_large_branch(int n, double alpha) {
  return 1.0 - std::cos(2.0 * n * alpha) * std::sin(2.0 * alpha);
}

SuccessProbability success_probability(int n, double alpha) {
  require_range(n, alpha, "success_probability");
  if (alpha == 0.0) {
    double n2 = static_cast<double>(n) * n;
    return {n2 / (n2 + 1.0), Regime::Degenerate};
  }
  const double x = chi(n);
  if (alpha < x) {
    Regime r = x - alpha < kBoundaryWidth ? Regime::Boundary : Regime::SmallAlpha;
    return {success_small_branch(n, alpha), r};
  }
  Regime r = alpha - x < kBoundaryWidth ? Regime::Boundary : Regime::LargeAlpha;
  return {success_large_branch(n, alpha), r};
}

Lambdas lambdas(int n, double alpha) {
  require_range(n, alpha, "lambdas");
  if (alpha == 0.0) return {success_probability(n, 0.0).value, 0.0};
  const double cn = std::cos(2.0 * n * alpha);
  const double c = std::cos(2.0 * alpha);
  const double s = std::sin(2.0 * alpha);
  if (alpha >= chi(n)) {
    return {0.5 * (1.0 + cn * (c - s)), 0.5 * (1.0 - cn * (c + s))};
  }
  return {success_small_branch(n, alpha), 0.0};
}

double asymptotic_success(int n, double alpha) {
  const double n2 = static_cast<double>(n) * n;
  const double n4 = n2 * n2;
  const double n6 = n4 * n2;
  return 1.0 - 1.0 / (n2 + 1.0) +
         (n2 + 2.0 * n4 - 3.0 * n6) / (3.0 * (n2 + 1.0) * (n2 + 1.0)) * alpha * alpha;
}

double group_baseline(int d, int n, bool phase_gate) {
  if (d < 2 || n < 1) throw std::invalid_argument("group_baseline: need d >= 2 and n >= 1");
  if (phase_gate) return 1.0 - 1.0 / (n + 1.0);
  const double d2 = static_cast<double>(d) * d;
  return 1.0 - (d2 - 1.0) / (n + d2 - 1.0);
}

double processor_fidelity(double alpha, double beta) {
  double x = std::sin(2.0 * alpha) * std::cos(beta);
  return 0.5 + 0.5 * std::sqrt(std::max(0.0, 1.0 - x * x));
}

double beta_boundary(double alpha) {
  double r = 1.0 / (std::cos(2.0 * alpha) + std::sin(2.0 * alpha));
  return std::acos(std::min(1.0, r));
}

double processor_success(double alpha, double beta) {
  const double cb = std::cos(beta);
  const double c = std::cos(2.0 * alpha);
  const double s = std::sin(2.0 * alpha);
  if (beta >= beta_boundary(alpha)) return 1.0 - cb * s;
  return (1.0 - cb * cb) / (2.0 * (1.0 - cb * c));
}

double eta_u(int n, double alpha) {
  return 0.5 * (1.0 + std::cos(2.0 * n * alpha) * std::cos(2.0 * alpha));
}

double average_fidelity(int d, double process_fidelity) {
  return 1.0 / (d + 1.0) + d * process_fidelity / (d + 1.0);
}

ProtocolReport protocol_report(int d, int n, double alpha) {
  if (d < 2) throw std::invalid_argument("protocol_report: d must be at least 2");
  ProtocolReport r;
  r.d = d;
  r.n = n;
  r.alpha = alpha;
  SuccessProbability sp = success_probability(n, alpha);
  r.P_succ = sp.value;
  r.regime = sp.regime;
  Lambdas l = lambdas(n, alpha);
  r.lambda_a = l.lambda_a;
  r.lambda_b = l.lambda_b;
  r.chi_n = chi(n);
  if (d == 2) {
    r.F_e = deterministic_fidelity(n, alpha);
    r.F_avg = average_fidelity(d, *r.F_e);
  }
  return r;
}

}  // namespace sarlab
