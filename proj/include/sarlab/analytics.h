#pragma once

#include <optional>
#include <string>

namespace sarlab {

enum class Regime { SmallAlpha, LargeAlpha, Boundary, Degenerate };

std::string to_string(Regime r);

/// Optimal process fidelity of approximate deterministic retrieval (qubits).
/// Throws std::invalid_argument unless 0 <= 4 n alpha <= pi.
double deterministic_fidelity(int n, double alpha);

/// Regime transition angle: the root of cos(2 n a)(cos 2a + sin 2a) = 1 in (0, pi/4n].
double chi(int n);

struct SuccessProbability {
  double value = 0.0;
  Regime regime = Regime::Degenerate;
};

/// Optimal success probability of perfect probabilistic retrieval. At alpha = 0
/// the limit n^2/(n^2+1) is returned with Regime::Degenerate. Throws
/// std::invalid_argument unless 0 <= 4 n alpha <= pi.
SuccessProbability success_probability(int n, double alpha);

/// The two branch formulas, evaluated unconditionally (alpha > 0).
double success_small_branch(int n, double alpha);
double success_large_branch(int n, double alpha);

struct Lambdas {
  double lambda_a = 0.0;
  double lambda_b = 0.0;
};

/// (lambda_A, lambda_B) in the large-alpha regime, (q, 0) in the small-alpha regime.
Lambdas lambdas(int n, double alpha);

/// Expansion of the success probability through second order in alpha.
double asymptotic_success(int n, double alpha);

/// Success probability of storage and retrieval for a completely unknown unitary
/// (phase_gate = false) or an unknown phase gate (phase_gate = true).
double group_baseline(int d, int n, bool phase_gate);

/// Processor forms in terms of the program overlap angle beta (beta = 2 n alpha).
double processor_fidelity(double alpha, double beta);
double processor_success(double alpha, double beta);
double beta_boundary(double alpha);

/// Prior weight <u|u> of the reduced discrimination problem.
double eta_u(int n, double alpha);

/// Average fidelity from process fidelity in dimension d.
double average_fidelity(int d, double process_fidelity);

struct ProtocolReport {
  int d = 2;
  int n = 1;
  double alpha = 0.0;
  /// Only set for d = 2.
  std::optional<double> F_e;
  std::optional<double> F_avg;
  double P_succ = 0.0;
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  Regime regime = Regime::Degenerate;
  double chi_n = 0.0;
};

ProtocolReport protocol_report(int d, int n, double alpha);

}  // namespace sarlab
