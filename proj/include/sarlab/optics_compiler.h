#pragma once

#include <array>
#include <string>

#include "sarlab/matrix_core.h"

namespace sarlab {

/// Jones matrix W(x, y) = |L_x><L_x| + e^{-iy} |L_{x+pi/2}><L_{x+pi/2}|,
/// |L_x> = cos x |H> + sin x |V>.
struct WavePlate {
  double axis = 0.0;
  double retardance = 0.0;
  CMatrix jones() const;
};

CMatrix wave_plate(double axis, double retardance);

enum class OpticsMode { IsometrySmall, IsometryLarge, Usd };

std::string to_string(OpticsMode mode);

struct OpticalSettings {
  double B = 0.0;
  double Gamma = 0.0;
  double Delta = 0.0;
  double qwp1 = 0.0;
  double qwp2 = 0.0;
};

/// 3 x 2 transfer matrix from input polarisation (H, V) to the detector modes
/// (up H -> D0, up V -> D1, down V -> D2). arm_phase is an extra phase on the
/// lower interferometer arm.
CMatrix optical_transfer(const OpticalSettings& s, double arm_phase = 0.0);

struct PovmCompilation {
  int n = 1;
  double alpha = 0.0;
  OpticsMode mode = OpticsMode::IsometryLarge;
  OpticalSettings settings;
  /// Target M H^dagger (isometry modes); empty in USD mode.
  CMatrix K_matrix;
  CMatrix C_matrix;
  /// min_phi || e^{i phi} C - K ||_F (0 in USD mode).
  double residual = 0.0;
};

/// Transition point: root of cos(2 n a) cos(2a - pi/4) = sqrt(2)/2 in (0, pi/4n].
double alpha_transition(int n);

struct TargetCoefficients {
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  double nu_p = 0.0;
  double nu_n = 0.0;
};

TargetCoefficients target_coefficients(int n, double alpha);

/// Target K = M H^dagger for the regime picked by alpha against alpha_transition.
CMatrix target_matrix(int n, double alpha, OpticsMode* mode = nullptr);

/// Solves C(B, Gamma, Delta) = K up to a global phase. Throws std::invalid_argument
/// unless 0 < 4 n alpha <= pi.
PovmCompilation compile_angles(int n, double alpha);

/// Unambiguous discrimination of (e^{i theta}|0> + e^{-i theta}|1>)/sqrt(2) against
/// its conjugate, theta = n alpha. Throws std::invalid_argument if tan|theta| >= 1.
PovmCompilation compile_usd(double theta);

/// Outcome probabilities {D0, D1, D2} for input state `input` entering through
/// the Hadamard pre-gate.
std::array<double, 3> simulate_optical_block(const PovmCompilation& comp, const CVector& input,
                                             double arm_phase = 0.0);

double phase_aligned_residual(const CMatrix& c, const CMatrix& k);

}  // namespace sarlab
