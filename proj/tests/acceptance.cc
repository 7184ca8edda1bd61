// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "sarlab/analytics.h"
#include "sarlab/canonical_pair.h"
#include "sarlab/cli_commands.h"
#include "sarlab/experiment_harness.h"
#include "sarlab/optics_compiler.h"
#include "sarlab/retrieval_circuits.h"
#include "sarlab/verification_oracle.h"

namespace {

using namespace sarlab;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome closed_forms() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = std::abs(deterministic_fidelity(1, kPi / 8) - (0.5 + std::sqrt(3.0) / 4));
  worst = std::max(worst, std::abs(success_probability(2, 0.0).value - 0.8));
  for (int n = 1; n <= 5; ++n) {
    worst = std::max(worst, std::abs(success_probability(n, kPi / (4 * n)).value - 1.0));
  }
  const double rounded = std::abs(deterministic_fidelity(1, kPi / 8) - 0.933013);
  const double dt = seconds_since(t0);
  return {worst <= 1e-9 && rounded <= 1e-6 && dt < 1.0,
          fmt::format("max residual {:.2e}, F_e(1,pi/8) = {:.6f}, {:.3f} s", worst,
                      deterministic_fidelity(1, kPi / 8), dt)};
}

Outcome oracle_equivalence() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n = 1; n <= 5; ++n) {
    for (int k = 1; k <= 20; ++k) {
      const double a = k * kPi / (4.0 * n * 21);
      worst = std::max(worst, std::abs(brute_force_deterministic(n, a) - deterministic_fidelity(n, a)));
      worst = std::max(worst, std::abs(brute_force_unambiguous(n, a) - success_probability(n, a).value));
    }
  }
  const double dt = seconds_since(t0);
  return {worst <= 1e-6 && dt < 120.0, fmt::format("max residual {:.2e} over 100 points, {:.2f} s", worst, dt)};
}

Outcome circuit_exactness() {
  auto t0 = std::chrono::steady_clock::now();
  double phase = 0.0, completeness = 0.0, prob = 0.0;
  for (int n = 1; n <= 5; ++n) {
    for (int k = 1; k <= 20; ++k) {
      const double a = k * kPi / (4.0 * n * 20) * (k == 20 ? 1.0 - 1e-12 : 1.0);
      CanonicalPair p = CanonicalPair::from_parameters(2, n, a);
      for (int which = 0; which < 2; ++which) {
        RetrievalInstrument instr = simulate_qubit_retrieval(p, which);
        const CMatrix u = p.unitary(which);
        CMatrix sum = CMatrix::Zero(2, 2);
        for (const auto& b : instr.branches) {
          sum += b.kraus.adjoint() * b.kraus;
          if (b.label == BranchLabel::Fail) continue;
          const double lambda = (b.kraus.adjoint() * b.kraus).trace().real() / 2.0;
          if (lambda < 1e-14) continue;
          const Complex t = (u.adjoint() * b.kraus).trace();
          phase = std::max(phase, (b.kraus - (t / std::abs(t)) * std::sqrt(lambda) * u).norm());
        }
        completeness = std::max(completeness, (sum - identity(2)).norm());
        prob = std::max(prob, std::abs(instr.success_probability() - success_probability(n, a).value));
      }
    }
  }
  const double dt = seconds_since(t0);
  return {phase <= 1e-10 && completeness <= 1e-10 && prob <= 1e-10 && dt < 30.0,
          fmt::format("phase {:.2e}, completeness {:.2e}, P_succ {:.2e}, {:.3f} s", phase, completeness,
                      prob, dt)};
}

Outcome qudit_generalization() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double iso = 0.0, prob = 0.0;
  for (int d = 2; d <= 4; ++d) {
    for (int n = 1; n <= 3; ++n) {
      for (double f : {0.15, 0.45, 0.75, 0.95}) {
        const double a = f * kPi / (4 * n);
        std::vector<double> betas;
        for (int k = 0; k < d - 2; ++k) betas.push_back(a * unit(rng));
        CanonicalPair p = CanonicalPair::from_parameters(d, n, a, betas);
        QuditIsometryG g = build_qudit_isometry(p);
        iso = std::max(iso, (g.matrix.adjoint() * g.matrix - identity(g.matrix.cols())).norm());
        for (int which = 0; which < 2; ++which) {
          prob = std::max(prob, std::abs(qudit_success_probability(g, p, which) -
                                         success_probability(n, a).value));
        }
      }
    }
  }
  double extremal = 0.0;
  for (double a : {0.45, 0.6, 0.7}) {
    QuditIsometryG g = build_qudit_isometry(CanonicalPair::from_parameters(3, 1, a, {a}));
    extremal = std::max(extremal, std::abs(std::abs(g.y_diag[1]) - 1.0));
  }
  return {iso <= 1e-10 && prob <= 1e-10 && extremal <= 1e-10,
          fmt::format("G^dag G {:.2e}, P_succ {:.2e}, extremal |y| {:.2e}", iso, prob, extremal)};
}

Outcome boundary_identities() {
  double transition = 0.0, seam = 0.0;
  for (int n = 1; n <= 5; ++n) {
    transition = std::max(transition, std::abs(chi(n) - alpha_transition(n)));
    seam = std::max(seam, std::abs(success_small_branch(n, chi(n)) - success_large_branch(n, chi(n))));
  }
  const double first = std::abs(chi(1) - kPi / 8);
  return {transition <= 1e-10 && first <= 1e-12 && seam <= 1e-10,
          fmt::format("chi vs alpha_t {:.2e}, chi_1 {:.2e}, seam {:.2e}", transition, first, seam)};
}

Outcome lemma_battery() {
  bool pass = true;
  int least = 1 << 30;
  double worst = 0.0;
  for (const LemmaResult& r : run_lemma_battery(500, 20240229)) {
    pass = pass && r.passed;
    if (r.name != "symmetrised_retrieval_not_worse") least = std::min(least, r.instances);
    worst = std::max(worst, r.max_residual);
  }
  return {pass && least >= 500, fmt::format("{} instances per lemma, max residual {:.2e}", least, worst)};
}

Outcome optics() {
  double worst = 0.0;
  bool small = false, large = false;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 50; ++k) {
      PovmCompilation c = compile_angles(n, k * kPi / (4.0 * n * 50));
      worst = std::max(worst, c.residual);
      small = small || c.mode == OpticsMode::IsometrySmall;
      large = large || c.mode == OpticsMode::IsometryLarge;
    }
  }
  double wrong = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 9; ++k) {
      const double a = k * kPi / (4.0 * n * 10);
      CanonicalPair p = CanonicalPair::from_parameters(2, n, a);
      PovmCompilation usd = compile_usd(n * a);
      wrong = std::max(wrong, simulate_optical_block(usd, storage_state(p, 0))[1]);
      wrong = std::max(wrong, simulate_optical_block(usd, storage_state(p, 1))[0]);
    }
  }
  return {worst <= 1e-8 && small && large && wrong <= 1e-10,
          fmt::format("max ||C - M H^dag|| {:.2e}, USD wrong-outcome probability {:.2e}", worst, wrong)};
}

Outcome average_fidelity_identity() {
  CanonicalPair p = CanonicalPair::from_parameters(2, 1, kPi / 8);
  DeterministicRetrieval det = simulate_deterministic_retrieval(p);
  MonteCarloEstimate e = monte_carlo_F_avg(det.choi_0, det.choi_1, p, 100000, 20240229);
  const double expected = 1.0 / 3 + 2.0 / 3 * deterministic_fidelity(1, kPi / 8);
  const double z = std::abs(e.mean - expected) / e.standard_error;
  return {z <= 3.0, fmt::format("MC {:.6f} +- {:.1e} vs {:.6f} ({:.2f} sigma)", e.mean, e.standard_error,
                                expected, z)};
}

Outcome experiment_claims() {
  // (a) infinite-shot estimators
  double est = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 9; ++k) {
      const double a = k * kPi / (4.0 * n * 10);
      EstimatedReport r =
          estimate(run_virtual_experiment(CanonicalPair::from_parameters(2, n, a), NoiseModel::ideal(), 0, 0));
      est = std::max({est, std::abs(r.P_succ_hat - success_probability(n, a).value),
                      std::abs(r.F_exp.value_or(0.0) - 1.0)});
    }
  }
  const bool a_ok = est <= 1e-12;
  // (b) noisy CNOT fidelity drop in the small-alpha regime
  const double alpha_small = kPi / 16;
  CanonicalPair ps = CanonicalPair::from_parameters(2, 1, alpha_small);
  const double f_ideal = *estimate(run_virtual_experiment(ps, NoiseModel::ideal(), 0, 0)).F_exp;
  const double f_noisy = *estimate(run_virtual_experiment(ps, NoiseModel::from_tag("cnot929"), 0, 0)).F_exp;
  const double drop = f_ideal - f_noisy;
  const bool b_ok = std::abs(drop - 0.03) <= 0.01;
  // (c) optimal beats measure-and-prepare
  double gap = 1.0;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 20; ++k) {
      const double a = k * kPi / (4.0 * n * 20) * (k == 20 ? 1.0 - 1e-9 : 1.0);
      CanonicalPair p = CanonicalPair::from_parameters(2, n, a);
      const double opt = estimate(run_virtual_experiment(p, NoiseModel::ideal(), 0, 0)).P_succ_hat;
      const double mp = measure_and_prepare_arm(p, NoiseModel::ideal(), 0, 0).P_succ_hat;
      gap = std::min(gap, opt - mp);
    }
  }
  const bool c_ok = gap >= -1e-12;
  // (d) group baselines
  const bool d_ok = group_baseline(2, 1, true) == 0.5 && group_baseline(2, 3, true) == 0.75;
  return {a_ok && b_ok && c_ok && d_ok,
          fmt::format("(a) {} residual {:.1e}; (b) {} drop {:.4f} vs 0.03 +- 0.01; (c) {} min gap {:.2e}; (d) {}",
                      a_ok ? "ok" : "FAIL", est, b_ok ? "ok" : "FAIL", drop, c_ok ? "ok" : "FAIL", gap,
                      d_ok ? "ok" : "FAIL")};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sarlab_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream sink;
  bool ok = true;
  for (const char* name : {"v1.json", "v2.json"}) {
    cli::VerifyOptions v;
    v.lemmas = true;
    v.lemma_instances = 100;
    v.output = (dir / name).string();
    ok = ok && cli::cmd_verify(v, sink) == cli::kExitOk;
  }
  for (const char* name : {"e1.csv", "e2.csv"}) {
    cli::ExperimentOptionsCli e;
    e.ns = {1, 2, 3};
    e.shots = 1000;
    e.seed = 7;
    e.noise = "cnot929";
    e.output = (dir / name).string();
    ok = ok && cli::cmd_experiment(e, sink) == cli::kExitOk;
  }
  const bool same_v = slurp(dir / "v1.json") == slurp(dir / "v2.json") && !slurp(dir / "v1.json").empty();
  const bool same_e = slurp(dir / "e1.csv") == slurp(dir / "e2.csv") && !slurp(dir / "e1.csv").empty();
  fs::remove_all(dir);
  return {ok && same_v && same_e,
          fmt::format("verify {}, experiment {}", same_v ? "identical" : "DIFFER", same_e ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"closed-form reproduction", closed_forms},
      {"oracle equivalence", oracle_equivalence},
      {"circuit exactness", circuit_exactness},
      {"qudit generalization", qudit_generalization},
      {"boundary identities", boundary_identities},
      {"block-structure lemmas", lemma_battery},
      {"optics compilation", optics},
      {"average-fidelity identity", average_fidelity_identity},
      {"experiment qualitative claims", experiment_claims},
      {"determinism", determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    failures += o.pass ? 0 : 1;
    fmt::print("{} {:2d} {}: {}\n", o.pass ? "PASS" : "FAIL", index, name, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
