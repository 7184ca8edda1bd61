#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sarlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitUsage = 2;

/// Resolves `requested` against $SARLAB_OUTPUT_DIR (or the working directory)
/// when it is empty; "-" means standard output.
std::string resolve_output(const std::string& requested, const std::string& default_name);

struct SweepOptions {
  int figure = 4;
  std::vector<int> ns = {1, 2, 3};
  int alpha_points = 21;
  int beta_points = 21;
  int shots = 0;
  std::optional<std::uint64_t> seed;
  std::string output;
};

struct VerifyOptions {
  std::vector<int> ns = {1, 2, 3, 4, 5};
  int alpha_points = 20;
  bool lemmas = false;
  int lemma_instances = 500;
  bool inject_error = false;
  std::uint64_t seed = 20240229;
  std::string output;
};

struct CircuitOptions {
  int n = 1;
  std::optional<double> alpha;
  std::optional<double> alpha_frac;
  int which = 0;
  std::string output;
};

struct OpticsOptions {
  std::vector<int> ns = {1};
  int alpha_points = 10;
  std::string output;
};

struct ExperimentOptionsCli {
  std::vector<int> ns = {1};
  int alpha_points = 5;
  int shots = 0;
  std::optional<std::uint64_t> seed;
  std::string noise = "ideal";
  std::string output;
};

int cmd_sweep(const SweepOptions& o, std::ostream& log);
int cmd_verify(const VerifyOptions& o, std::ostream& log);
int cmd_circuit(const CircuitOptions& o, std::ostream& log);
int cmd_optics(const OpticsOptions& o, std::ostream& log);
int cmd_experiment(const ExperimentOptionsCli& o, std::ostream& log);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, char** argv);

}  // namespace sarlab::cli
