#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sarlab/canonical_pair.h"
#include "sarlab/matrix_core.h"

namespace sarlab {

ChoiOperator ideal_cnot_choi();

/// <<U|C|U>> / d_in^2.
double process_fidelity(const ChoiOperator& c, const CMatrix& u);

struct NoiseModel {
  /// Channel on H_0 (x) H_1 applied in place of the storage CNOT.
  ChoiOperator cnot_choi = ideal_cnot_choi();
  /// Phase on the lower interferometer arm of the optical measurement block.
  double measurement_misalignment = 0.0;
  /// Added to alpha when the stored unitary is applied.
  double phase_error = 0.0;
  std::string tag = "ideal";

  static NoiseModel ideal();
  /// (1 - e) CNOT + e * full depolarisation, with e set by the target process fidelity.
  static NoiseModel depolarized_cnot(double fidelity);
  static NoiseModel misaligned(double delta);
  /// Accepts "ideal", "cnot929" and "misaligned"; throws std::invalid_argument otherwise.
  static NoiseModel from_tag(const std::string& tag);
};

inline constexpr int kTomoSigns = 2;
inline constexpr int kTomoInputs = 6;
inline constexpr int kTomoBases = 3;
inline constexpr int kTomoOutcomes = 2;
inline constexpr int kTomoBranches = 3;

/// Counts indexed by (stored sign, input Pauli eigenstate, basis X/Y/Z, outcome +/-,
/// detector D0/D1/D2). Inputs are ordered +x, -x, +y, -y, +z, -z. With shots = 0
/// the entries are exact probabilities.
struct Tomogram {
  int n = 1;
  double alpha = 0.0;
  int shots = 0;
  std::uint64_t seed = 0;
  /// D1 readings still need the X/Y sign flip that stands in for the sigma_z correction.
  bool d1_needs_flip = true;
  std::vector<double> counts;

  static std::size_t index(int sign, int input, int basis, int outcome, int branch);
  double& at(int sign, int input, int basis, int outcome, int branch);
  double at(int sign, int input, int basis, int outcome, int branch) const;
};

struct ExperimentOptions {
  /// Apply sigma_z to the D1 branch physically instead of flipping readings.
  bool physical_correction = false;
};

/// Throws std::invalid_argument for 0 < shots < 100 or a qubit pair with alpha = 0.
Tomogram run_virtual_experiment(const CanonicalPair& p, const NoiseModel& noise, int shots,
                                std::uint64_t seed, const ExperimentOptions& options = {});

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

struct EstimatedReport {
  double P_succ_hat = 0.0;
  double P_succ_stderr = 0.0;
  Interval P_succ_interval;
  /// Unset when no success events were recorded.
  std::optional<double> F_exp;
  Interval F_interval;
  std::array<CMatrix, 2> C_exp;
};

/// Linear-inversion estimate with PSD projection. Throws std::invalid_argument for
/// an incomplete tomogram.
EstimatedReport estimate(const Tomogram& t, int bootstrap_samples = 200);

/// Reconstructs a qubit channel Choi operator from the output Bloch vectors for
/// the six Pauli eigenstate inputs.
CMatrix choi_from_bloch_data(const std::array<Eigen::Vector3d, 6>& outputs);

/// USD of the storage state followed by conditional preparation of U_0 or U_1.
EstimatedReport measure_and_prepare_arm(const CanonicalPair& p, const NoiseModel& noise,
                                        int shots, std::uint64_t seed,
                                        int bootstrap_samples = 200);

struct SweepRow {
  std::string figure_id;
  int n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::string quantity;
  double value = 0.0;
  double stderr_low = 0.0;
  double stderr_high = 0.0;
  std::string arm;
  std::string noise_tag;
};

using SweepTable = std::vector<SweepRow>;

struct SweepConfig {
  int figure = 4;
  std::vector<int> ns = {1, 2, 3};
  int alpha_points = 21;
  int beta_points = 21;
  int shots = 0;
  std::uint64_t seed = 1;
};

/// Throws std::invalid_argument for an unknown figure or an empty grid.
SweepTable sweep_figures(const SweepConfig& config);

}  // namespace sarlab
