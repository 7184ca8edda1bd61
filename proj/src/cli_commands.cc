#include "sarlab/cli_commands.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "sarlab/analytics.h"
#include "sarlab/canonical_pair.h"
#include "sarlab/experiment_harness.h"
#include "sarlab/optics_compiler.h"
#include "sarlab/retrieval_circuits.h"
#include "sarlab/serialization.h"
#include "sarlab/verification_oracle.h"

namespace sarlab::cli {

namespace {

using nlohmann::json;

constexpr double kOracleTolerance = tol::kOptimization;
constexpr double kCircuitTolerance = 1e-10;
constexpr double kInjectedAlphaError = 1e-3;

void emit(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

void require_ns(const std::vector<int>& ns) {
  if (ns.empty()) throw std::invalid_argument("n list is empty");
  for (int n : ns) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
  }
}

double kraus_phase_residual(const CMatrix& k, const CMatrix& u) {
  double prob = (k.adjoint() * k).trace().real() / 2.0;
  return (k - std::sqrt(prob) * u).cwiseAbs().maxCoeff();
}

json check_row(int n, double alpha, const std::string& name, double analytic, double oracle,
               double tolerance) {
  json r;
  r["n"] = n;
  r["alpha"] = alpha;
  r["check"] = name;
  r["analytic"] = analytic;
  r["oracle"] = oracle;
  double residual = std::abs(analytic - oracle);
  r["residual"] = residual;
  r["tolerance"] = tolerance;
  r["pass"] = residual <= tolerance;
  return r;
}

}  // namespace

std::string resolve_output(const std::string& requested, const std::string& default_name) {
  if (!requested.empty()) return requested;
  const char* dir = std::getenv("SARLAB_OUTPUT_DIR");
  std::filesystem::path base = dir && *dir ? std::filesystem::path(dir) : std::filesystem::path(".");
  return (base / default_name).string();
}

int cmd_sweep(const SweepOptions& o, std::ostream& log) {
  SweepConfig cfg;
  cfg.figure = o.figure;
  cfg.ns = o.ns;
  cfg.alpha_points = o.alpha_points;
  cfg.beta_points = o.beta_points;
  cfg.shots = o.shots;
  if (o.figure == 8 || o.figure == 4) require_ns(o.ns);
  if (o.shots > 0 && !o.seed) throw std::invalid_argument("--seed is required when --shots > 0");
  cfg.seed = o.seed.value_or(1);
  SweepTable table = sweep_figures(cfg);
  std::ostringstream csv;
  write_sweep_csv(csv, table);
  const std::string path = resolve_output(o.output, "sweep_fig" + std::to_string(o.figure) + ".csv");
  emit(path, csv.str());
  log << "wrote " << table.size() << " rows to " << path << '\n';
  return kExitOk;
}

int cmd_verify(const VerifyOptions& o, std::ostream& log) {
  require_ns(o.ns);
  if (o.alpha_points < 1) throw std::invalid_argument("--alpha-points must be positive");
  json report;
  json grid = json::array();
  double max_residual = 0.0;
  bool all_pass = true;
  auto record = [&](json row) {
    max_residual = std::max(max_residual, row["residual"].get<double>());
    all_pass = all_pass && row["pass"].get<bool>();
    grid.push_back(std::move(row));
  };

  for (int n : o.ns) {
    const double top = kPi / (4.0 * n);
    for (int k = 1; k <= o.alpha_points; ++k) {
      const double alpha = top * k / (o.alpha_points + 1);
      const double claimed = o.inject_error ? alpha + kInjectedAlphaError : alpha;
      record(check_row(n, alpha, "deterministic_fidelity",
                       deterministic_fidelity(n, std::min(claimed, top)),
                       brute_force_deterministic(n, alpha), kOracleTolerance));
      record(check_row(n, alpha, "success_probability",
                       success_probability(n, std::min(claimed, top)).value,
                       brute_force_unambiguous(n, alpha), kOracleTolerance));

      CanonicalPair p = CanonicalPair::from_parameters(2, n, alpha);
      double kraus_res = 0.0;
      double completeness = 0.0;
      double p_circuit = 0.0;
      for (int which = 0; which < 2; ++which) {
        RetrievalInstrument instr = simulate_qubit_retrieval(p, which);
        CMatrix sum = CMatrix::Zero(2, 2);
        for (const auto& b : instr.branches) {
          sum += b.kraus.adjoint() * b.kraus;
          if (b.label != BranchLabel::Fail) {
            kraus_res = std::max(kraus_res, kraus_phase_residual(b.kraus, p.unitary(which)));
          }
        }
        completeness = std::max(completeness, (sum - identity(2)).cwiseAbs().maxCoeff());
        p_circuit = instr.success_probability();
        PerfectRetrievalReport pr = verify_perfect_retrieval_condition(success_operation_choi(instr), p);
        json row = check_row(n, alpha, "perfect_retrieval_condition_" + std::to_string(which), 0.0,
                             std::max({pr.residual_0, pr.residual_1, pr.qrq_norm,
                                       std::abs(pr.lambda_0 - pr.lambda_1)}),
                             1e-9);
        record(std::move(row));
      }
      record(check_row(n, alpha, "kraus_proportional_to_unitary", 0.0, kraus_res, kCircuitTolerance));
      record(check_row(n, alpha, "instrument_completeness", 0.0, completeness, kCircuitTolerance));
      record(check_row(n, alpha, "circuit_success_probability",
                       success_probability(n, std::min(claimed, top)).value, p_circuit,
                       kCircuitTolerance));
    }
  }
  report["grid"] = std::move(grid);

  if (o.lemmas) {
    json lemmas = json::array();
    for (const LemmaResult& r : run_lemma_battery(o.lemma_instances, o.seed)) {
      json l;
      l["name"] = r.name;
      l["instances"] = r.instances;
      l["max_residual"] = r.max_residual;
      l["tolerance"] = r.tolerance;
      l["pass"] = r.passed;
      all_pass = all_pass && r.passed;
      lemmas.push_back(std::move(l));
    }
    report["lemmas"] = std::move(lemmas);
  }
  report["max_residual"] = max_residual;
  report["inject_error"] = o.inject_error;
  report["seed"] = o.seed;
  report["passed"] = all_pass;

  const std::string path = resolve_output(o.output, "verify_report.json");
  emit(path, report.dump(2) + "\n");
  log << (all_pass ? "verification passed" : "verification FAILED") << ", max residual "
      << format_number(max_residual) << ", report " << path << '\n';
  return all_pass ? kExitOk : kExitVerificationFailure;
}

int cmd_circuit(const CircuitOptions& o, std::ostream& log) {
  if (o.alpha.has_value() == o.alpha_frac.has_value()) {
    throw std::invalid_argument("exactly one of --alpha and --alpha-frac is required");
  }
  if (o.n < 1) throw std::invalid_argument("--n must be at least 1");
  const double alpha = o.alpha ? *o.alpha : *o.alpha_frac * kPi / (4.0 * o.n);
  CanonicalPair p = CanonicalPair::from_parameters(2, o.n, alpha);
  QutritIsometryM m = build_isometry_M(o.n, alpha);
  RetrievalInstrument instr = simulate_qubit_retrieval(p, o.which);
  const std::string path = resolve_output(o.output, "circuit.json");
  emit(path, instrument_to_json(instr, m).dump(2) + "\n");
  log << "wrote circuit dump to " << path << '\n';
  return kExitOk;
}

int cmd_optics(const OpticsOptions& o, std::ostream& log) {
  require_ns(o.ns);
  if (o.alpha_points < 1) throw std::invalid_argument("--alpha-points must be positive");
  std::vector<PovmCompilation> rows;
  for (int n : o.ns) {
    for (int k = 1; k <= o.alpha_points; ++k) {
      rows.push_back(compile_angles(n, k * kPi / (4.0 * n * o.alpha_points)));
    }
  }
  std::ostringstream csv;
  write_optics_csv(csv, rows);
  const std::string path = resolve_output(o.output, "optics_angles.csv");
  emit(path, csv.str());
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.residual);
  log << "wrote " << rows.size() << " rows to " << path << ", max residual "
      << format_number(worst) << '\n';
  return kExitOk;
}

int cmd_experiment(const ExperimentOptionsCli& o, std::ostream& log) {
  require_ns(o.ns);
  if (o.alpha_points < 1) throw std::invalid_argument("--alpha-points must be positive");
  if (o.shots > 0 && !o.seed) throw std::invalid_argument("--seed is required when --shots > 0");
  const NoiseModel noise = NoiseModel::from_tag(o.noise);
  const std::uint64_t seed = o.seed.value_or(0);
  SweepTable table;
  std::uint64_t run = 0;
  for (int n : o.ns) {
    const double top = kPi / (4.0 * n);
    for (int k = 1; k <= o.alpha_points; ++k) {
      const double alpha = top * k / (o.alpha_points + 1);
      const double beta = 2.0 * n * alpha;
      CanonicalPair p = CanonicalPair::from_parameters(2, n, alpha);
      const double theory = success_probability(n, alpha).value;
      table.push_back({"experiment", n, alpha, beta, "P_succ", theory, theory, theory, "theory", "ideal"});
      Tomogram t = run_virtual_experiment(p, noise, o.shots, seed + run++);
      EstimatedReport r = estimate(t);
      table.push_back({"experiment", n, alpha, beta, "P_succ", r.P_succ_hat, r.P_succ_interval.low,
                       r.P_succ_interval.high, "optimal", noise.tag});
      if (r.F_exp) {
        table.push_back({"experiment", n, alpha, beta, "F_exp", *r.F_exp, r.F_interval.low,
                         r.F_interval.high, "optimal", noise.tag});
      }
      EstimatedReport mp = measure_and_prepare_arm(p, noise, o.shots, seed + run++);
      table.push_back({"experiment", n, alpha, beta, "P_succ", mp.P_succ_hat, mp.P_succ_interval.low,
                       mp.P_succ_interval.high, "measure_prepare", noise.tag});
      if (mp.F_exp) {
        table.push_back({"experiment", n, alpha, beta, "F_exp", *mp.F_exp, mp.F_interval.low,
                         mp.F_interval.high, "measure_prepare", noise.tag});
      }
    }
  }
  std::ostringstream csv;
  write_sweep_csv(csv, table);
  const std::string path = resolve_output(o.output, "experiment.csv");
  emit(path, csv.str());
  log << "wrote " << table.size() << " rows to " << path << '\n';
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Storage and retrieval of two unitary channels: closed forms, oracles, circuits"};
  app.require_subcommand(1);

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Write figure data tables as CSV");
  sweep_cmd->add_option("--figure", sweep.figure, "Figure id: 4, 6, 7 or 8")->check(CLI::IsMember({4, 6, 7, 8}));
  sweep_cmd->add_option("--n", sweep.ns, "Numbers of uses")->delimiter(',');
  sweep_cmd->add_option("--alpha-points", sweep.alpha_points, "Alpha grid size");
  sweep_cmd->add_option("--beta-points", sweep.beta_points, "Beta grid size");
  sweep_cmd->add_option("--shots", sweep.shots, "Shots per setting for figure 8 (0: exact)");
  sweep_cmd->add_option("--seed", sweep.seed, "Random seed");
  sweep_cmd->add_option("--output,-o", sweep.output, "Output file ('-' for stdout)");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Compare closed forms against brute-force oracles");
  verify_cmd->add_option("--n", verify.ns, "Numbers of uses")->delimiter(',');
  verify_cmd->add_option("--alpha-points", verify.alpha_points, "Alpha values per n");
  verify_cmd->add_flag("--lemmas", verify.lemmas, "Also run the block-structure lemma battery");
  verify_cmd->add_option("--lemma-instances", verify.lemma_instances, "Random instances per lemma");
  verify_cmd->add_flag("--inject-error", verify.inject_error, "Perturb alpha on the closed-form side");
  verify_cmd->add_option("--seed", verify.seed, "Seed for the lemma battery");
  verify_cmd->add_option("--output,-o", verify.output, "Report file ('-' for stdout)");

  CircuitOptions circuit;
  auto* circuit_cmd = app.add_subcommand("circuit", "Dump the Kraus operators of the qubit retrieval circuit");
  circuit_cmd->add_option("--n", circuit.n, "Number of uses");
  auto* alpha_opt = circuit_cmd->add_option("--alpha", circuit.alpha, "Alpha in radians");
  auto* frac_opt = circuit_cmd->add_option("--alpha-frac", circuit.alpha_frac, "Alpha as k, meaning k*pi/(4n)");
  alpha_opt->excludes(frac_opt);
  circuit_cmd->add_option("--which", circuit.which, "Stored unitary (0 or 1)")->check(CLI::IsMember({0, 1}));
  circuit_cmd->add_option("--output,-o", circuit.output, "Output file ('-' for stdout)");

  OpticsOptions optics;
  auto* optics_cmd = app.add_subcommand("optics", "Compile wave-plate angles");
  optics_cmd->add_option("--n", optics.ns, "Numbers of uses")->delimiter(',');
  optics_cmd->add_option("--alpha-points", optics.alpha_points, "Alpha values per n");
  optics_cmd->add_option("--output,-o", optics.output, "Output file ('-' for stdout)");

  ExperimentOptionsCli experiment;
  auto* experiment_cmd = app.add_subcommand("experiment", "Simulate the tomography experiment");
  experiment_cmd->add_option("--n", experiment.ns, "Numbers of uses")->delimiter(',');
  experiment_cmd->add_option("--alpha-points", experiment.alpha_points, "Alpha values per n");
  experiment_cmd->add_option("--shots", experiment.shots, "Shots per setting (0: exact probabilities)");
  experiment_cmd->add_option("--seed", experiment.seed, "Random seed (required when shots > 0)");
  experiment_cmd->add_option("--noise", experiment.noise, "ideal, cnot929 or misaligned")
      ->check(CLI::IsMember({"ideal", "cnot929", "misaligned"}));
  experiment_cmd->add_option("--output,-o", experiment.output, "Output file ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sweep_cmd) return cmd_sweep(sweep, std::cerr);
    if (*verify_cmd) return cmd_verify(verify, std::cerr);
    if (*circuit_cmd) return cmd_circuit(circuit, std::cerr);
    if (*optics_cmd) return cmd_optics(optics, std::cerr);
    if (*experiment_cmd) return cmd_experiment(experiment, std::cerr);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerificationFailure;
  }
  return kExitUsage;
}

}  // namespace sarlab::cli
