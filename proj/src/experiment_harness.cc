#include "sarlab/experiment_harness.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sarlab/analytics.h"
#include "sarlab/optics_compiler.h"
#include "sarlab/retrieval_circuits.h"

namespace sarlab {

namespace {

constexpr std::uint64_t kBootstrapSalt = 0x9E3779B97F4A7C15ULL;
constexpr double kQuantileLow = 0.159;
constexpr double kQuantileHigh = 0.841;
constexpr double kMisalignedDelta = 0.05;
constexpr double kNoisyCnotFidelity = 0.929;

std::array<CVector, 6> pauli_inputs() {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  std::array<CVector, 6> s;
  for (auto& v : s) v = CVector(2);
  s[0] << r, r;
  s[1] << r, -r;
  s[2] << r, i * r;
  s[3] << r, -i * r;
  s[4] << 1.0, 0.0;
  s[5] << 0.0, 1.0;
  return s;
}

std::array<CMatrix, 3> pauli_basis() { return {pauli_x(), pauli_y(), pauli_z()}; }

/// Multinomial draw by sequential binomials.
std::vector<double> sample_counts(const std::vector<double>& probs, int shots,
                                  std::mt19937_64& rng) {
  std::vector<double> out(probs.size(), 0.0);
  double mass = 0.0;
  for (double p : probs) mass += std::max(0.0, p);
  long remaining = shots;
  for (std::size_t k = 0; k < probs.size() && remaining > 0; ++k) {
    double pk = std::max(0.0, probs[k]);
    if (k + 1 == probs.size() || mass <= 0.0) {
      out[k] = static_cast<double>(remaining);
      break;
    }
    double q = std::clamp(pk / mass, 0.0, 1.0);
    std::binomial_distribution<long> draw(remaining, q);
    long c = draw(rng);
    out[k] = static_cast<double>(c);
    remaining -= c;
    mass -= pk;
  }
  return out;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double pos = q * (v.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

CMatrix applied_unitary(double alpha, int which) {
  const double sign = which == 0 ? 1.0 : -1.0;
  CMatrix u = CMatrix::Zero(2, 2);
  u(0, 0) = std::polar(1.0, sign * alpha);
  u(1, 1) = std::polar(1.0, -sign * alpha);
  return u;
}

CVector applied_storage(double alpha, int n, int which) {
  const double sign = which == 0 ? 1.0 : -1.0;
  CVector v(2);
  v << std::polar(1.0 / std::sqrt(2.0), sign * n * alpha),
      std::polar(1.0 / std::sqrt(2.0), -sign * n * alpha);
  return v;
}

double channel_fidelity_average(const std::array<CMatrix, 2>& chois, double alpha) {
  double f = 0.0;
  for (int i = 0; i < 2; ++i) {
    CVector u = double_ket(applied_unitary(alpha, i));
    f += (u.adjoint() * chois[i] * u)(0, 0).real() / 8.0;
  }
  return f;
}

struct PointEstimate {
  double p_succ = 0.0;
  double p_var = 0.0;
  std::optional<double> fidelity;
  std::array<CMatrix, 2> chois;
};

PointEstimate estimate_counts(const Tomogram& t, const std::vector<double>& counts) {
  auto at = [&](int s, int e, int b, int o, int j) {
    return counts[Tomogram::index(s, e, b, o, j)];
  };
  PointEstimate pe;
  bool fidelity_defined = true;
  for (int s = 0; s < kTomoSigns; ++s) {
    double branch[3] = {0.0, 0.0, 0.0};
    for (int e = 0; e < kTomoInputs; ++e) {
      for (int b = 0; b < kTomoBases; ++b) {
        for (int o = 0; o < kTomoOutcomes; ++o) {
          for (int j = 0; j < kTomoBranches; ++j) branch[j] += at(s, e, b, o, j);
        }
      }
    }
    const double a = branch[0] + branch[1];
    const double total = a + branch[2];
    if (total <= 0.0) throw std::invalid_argument("estimate: tomogram has no counts for a sign");
    pe.p_succ += 0.5 * a / total;
    pe.p_var += 0.25 * a * branch[2] / (total * total * total);

    std::array<Eigen::Vector3d, 6> bloch;
    for (int e = 0; e < kTomoInputs && fidelity_defined; ++e) {
      for (int b = 0; b < kTomoBases; ++b) {
        const bool flip = t.d1_needs_flip && b < 2;
        double plus = at(s, e, b, 0, 0) + at(s, e, b, flip ? 1 : 0, 1);
        double minus = at(s, e, b, 1, 0) + at(s, e, b, flip ? 0 : 1, 1);
        if (plus + minus <= 0.0) {
          fidelity_defined = false;
          break;
        }
        bloch[e](b) = (plus - minus) / (plus + minus);
      }
    }
    if (fidelity_defined) pe.chois[s] = choi_from_bloch_data(bloch);
  }
  if (fidelity_defined) pe.fidelity = channel_fidelity_average(pe.chois, t.alpha);
  return pe;
}

}  // namespace

ChoiOperator ideal_cnot_choi() {
  return ChoiOperator(double_ket_projector(storage_cnot()), 4, 4, ChoiKind::Channel);
}

double process_fidelity(const ChoiOperator& c, const CMatrix& u) {
  CVector v = double_ket(u);
  return (v.adjoint() * c.matrix() * v)(0, 0).real() / (double(c.d_in()) * c.d_in());
}

NoiseModel NoiseModel::ideal() { return NoiseModel{}; }

NoiseModel NoiseModel::depolarized_cnot(double fidelity) {
  if (fidelity < 1.0 / 16.0 || fidelity > 1.0) {
    throw std::invalid_argument("depolarized_cnot: fidelity outside [1/16, 1]");
  }
  const double eps = (1.0 - fidelity) * 16.0 / 15.0;
  CMatrix c = (1.0 - eps) * double_ket_projector(storage_cnot()) + eps * identity(16) / 4.0;
  NoiseModel m;
  m.cnot_choi = ChoiOperator(c, 4, 4, ChoiKind::Channel);
  m.tag = "cnot929";
  return m;
}

NoiseModel NoiseModel::misaligned(double delta) {
  NoiseModel m;
  m.measurement_misalignment = delta;
  m.tag = "misaligned";
  return m;
}

NoiseModel NoiseModel::from_tag(const std::string& tag) {
  if (tag == "ideal") return ideal();
  if (tag == "cnot929") return depolarized_cnot(kNoisyCnotFidelity);
  if (tag == "misaligned") return misaligned(kMisalignedDelta);
  throw std::invalid_argument("unknown noise tag: " + tag);
}

std::size_t Tomogram::index(int sign, int input, int basis, int outcome, int branch) {
  return (((static_cast<std::size_t>(sign) * kTomoInputs + input) * kTomoBases + basis) *
              kTomoOutcomes +
          outcome) *
             kTomoBranches +
         branch;
}

double& Tomogram::at(int sign, int input, int basis, int outcome, int branch) {
  return counts[index(sign, input, basis, outcome, branch)];
}

double Tomogram::at(int sign, int input, int basis, int outcome, int branch) const {
  return counts[index(sign, input, basis, outcome, branch)];
}

Tomogram run_virtual_experiment(const CanonicalPair& p, const NoiseModel& noise, int shots,
                                std::uint64_t seed, const ExperimentOptions& options) {
  if (p.d != 2) throw std::invalid_argument("run_virtual_experiment: requires d = 2");
  if (shots < 0 || (shots > 0 && shots < 100)) {
    throw std::invalid_argument("run_virtual_experiment: shots must be 0 or at least 100");
  }
  PovmCompilation comp = compile_angles(p.n, p.alpha);
  const CMatrix povm = optical_transfer(comp.settings, noise.measurement_misalignment) * hadamard();
  const double applied_alpha = p.alpha + noise.phase_error;
  const auto inputs = pauli_inputs();
  const auto bases = pauli_basis();

  Tomogram t;
  t.n = p.n;
  t.alpha = p.alpha;
  t.shots = shots;
  t.seed = seed;
  t.d1_needs_flip = !options.physical_correction;
  t.counts.assign(kTomoSigns * kTomoInputs * kTomoBases * kTomoOutcomes * kTomoBranches, 0.0);
  std::mt19937_64 rng(seed);

  for (int s = 0; s < kTomoSigns; ++s) {
    CVector psi = applied_storage(applied_alpha, p.n, s);
    for (int e = 0; e < kTomoInputs; ++e) {
      CVector in = kron(psi, inputs[e]);
      CMatrix rho = apply_choi(noise.cnot_choi, in * in.adjoint());
      std::array<CMatrix, 3> out;
      for (int j = 0; j < kTomoBranches; ++j) {
        CMatrix k = kron(CMatrix(povm.row(j)), identity(2));
        out[j] = k * rho * k.adjoint();
        if (j == 1 && options.physical_correction) out[j] = pauli_z() * out[j] * pauli_z();
      }
      for (int b = 0; b < kTomoBases; ++b) {
        std::vector<double> probs;
        for (int o = 0; o < kTomoOutcomes; ++o) {
          const double sign = o == 0 ? 1.0 : -1.0;
          CMatrix proj = 0.5 * (identity(2) + sign * bases[b]);
          for (int j = 0; j < kTomoBranches; ++j) {
            probs.push_back(std::max(0.0, (proj * out[j]).trace().real()));
          }
        }
        std::vector<double> cells = shots == 0 ? probs : sample_counts(probs, shots, rng);
        for (int o = 0; o < kTomoOutcomes; ++o) {
          for (int j = 0; j < kTomoBranches; ++j) {
            t.at(s, e, b, o, j) = cells[o * kTomoBranches + j];
          }
        }
      }
    }
  }
  return t;
}

CMatrix choi_from_bloch_data(const std::array<Eigen::Vector3d, 6>& outputs) {
  Eigen::Vector3d shift = Eigen::Vector3d::Zero();
  for (const auto& r : outputs) shift += r / 6.0;
  Eigen::Matrix3d linear;
  for (int j = 0; j < 3; ++j) linear.col(j) = 0.5 * (outputs[2 * j] - outputs[2 * j + 1]);
  const auto sigma = pauli_basis();
  auto channel = [&](const CMatrix& a) {
    CMatrix out = a.trace() * identity(2);
    for (int k = 0; k < 3; ++k) out += a.trace() * shift(k) * sigma[k];
    for (int j = 0; j < 3; ++j) {
      Complex coeff = (a * sigma[j]).trace();
      for (int k = 0; k < 3; ++k) out += coeff * linear(k, j) * sigma[k];
    }
    return CMatrix(0.5 * out);
  };
  CMatrix c = CMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      CMatrix e = CMatrix::Zero(2, 2);
      e(a, b) = 1.0;
      c.block(2 * a, 2 * b, 2, 2) = channel(e);
    }
  }
  CMatrix projected = project_to_psd(c);
  double tr = projected.trace().real();
  if (tr > 0.0) projected *= 2.0 / tr;
  return projected;
}

EstimatedReport estimate(const Tomogram& t, int bootstrap_samples) {
  const std::size_t expected =
      static_cast<std::size_t>(kTomoSigns) * kTomoInputs * kTomoBases * kTomoOutcomes * kTomoBranches;
  if (t.counts.size() != expected) throw std::invalid_argument("estimate: incomplete tomogram");
  for (int s = 0; s < kTomoSigns; ++s) {
    for (int e = 0; e < kTomoInputs; ++e) {
      for (int b = 0; b < kTomoBases; ++b) {
        double total = 0.0;
        for (int o = 0; o < kTomoOutcomes; ++o) {
          for (int j = 0; j < kTomoBranches; ++j) {
            double c = t.at(s, e, b, o, j);
            if (c < 0.0) throw std::invalid_argument("estimate: negative count");
            total += c;
          }
        }
        if (total <= 0.0) throw std::invalid_argument("estimate: incomplete tomogram");
      }
    }
  }

  PointEstimate pe = estimate_counts(t, t.counts);
  EstimatedReport rep;
  rep.P_succ_hat = pe.p_succ;
  rep.P_succ_stderr = std::sqrt(pe.p_var);
  rep.P_succ_interval = {pe.p_succ, pe.p_succ};
  rep.F_exp = pe.fidelity;
  if (pe.fidelity) {
    rep.C_exp = pe.chois;
    rep.F_interval = {*pe.fidelity, *pe.fidelity};
  }
  if (t.shots == 0 || bootstrap_samples <= 0) return rep;

  std::mt19937_64 rng(t.seed ^ kBootstrapSalt);
  std::vector<double> ps;
  std::vector<double> fs;
  std::vector<double> resampled(t.counts.size());
  for (int r = 0; r < bootstrap_samples; ++r) {
    for (std::size_t k = 0; k < t.counts.size(); ++k) {
      if (t.counts[k] <= 0.0) {
        resampled[k] = 0.0;
        continue;
      }
      std::poisson_distribution<long> draw(t.counts[k]);
      resampled[k] = static_cast<double>(draw(rng));
    }
    try {
      PointEstimate b = estimate_counts(t, resampled);
      ps.push_back(b.p_succ);
      if (b.fidelity) fs.push_back(*b.fidelity);
    } catch (const std::invalid_argument&) {
    }
  }
  if (!ps.empty()) rep.P_succ_interval = {quantile(ps, kQuantileLow), quantile(ps, kQuantileHigh)};
  if (!fs.empty() && rep.F_exp) rep.F_interval = {quantile(fs, kQuantileLow), quantile(fs, kQuantileHigh)};
  return rep;
}

EstimatedReport measure_and_prepare_arm(const CanonicalPair& p, const NoiseModel& noise,
                                        int shots, std::uint64_t seed, int bootstrap_samples) {
  if (p.d != 2) throw std::invalid_argument("measure_and_prepare_arm: requires d = 2");
  if (shots < 0 || (shots > 0 && shots < 100)) {
    throw std::invalid_argument("measure_and_prepare_arm: shots must be 0 or at least 100");
  }
  PovmCompilation usd = compile_usd(p.n * p.alpha);
  const double applied_alpha = p.alpha + noise.phase_error;
  const std::array<CMatrix, 2> direct = {double_ket_projector(applied_unitary(applied_alpha, 0)),
                                         double_ket_projector(applied_unitary(applied_alpha, 1))};
  std::mt19937_64 rng(seed);
  std::array<std::vector<double>, 2> freq;
  for (int s = 0; s < 2; ++s) {
    auto probs = simulate_optical_block(usd, applied_storage(applied_alpha, p.n, s),
                                        noise.measurement_misalignment);
    std::vector<double> pv(probs.begin(), probs.end());
    freq[s] = shots == 0 ? pv : sample_counts(pv, shots, rng);
  }

  auto evaluate = [&](const std::array<std::vector<double>, 2>& f, double* p_out, double* var_out,
                      std::optional<double>* fid_out, std::array<CMatrix, 2>* chois) {
    double psum = 0.0;
    double var = 0.0;
    bool defined = true;
    std::array<CMatrix, 2> c;
    for (int s = 0; s < 2; ++s) {
      const double good = f[s][0] + f[s][1];
      const double total = good + f[s][2];
      if (total <= 0.0) throw std::invalid_argument("measure_and_prepare_arm: no events");
      psum += 0.5 * good / total;
      var += 0.25 * good * f[s][2] / (total * total * total);
      if (good <= 0.0) {
        defined = false;
        continue;
      }
      c[s] = (f[s][0] * direct[0] + f[s][1] * direct[1]) / good;
    }
    *p_out = psum;
    *var_out = var;
    if (defined) {
      *fid_out = channel_fidelity_average(c, p.alpha);
      if (chois) *chois = c;
    } else {
      fid_out->reset();
    }
  };

  EstimatedReport rep;
  double var = 0.0;
  evaluate(freq, &rep.P_succ_hat, &var, &rep.F_exp, &rep.C_exp);
  rep.P_succ_stderr = std::sqrt(var);
  rep.P_succ_interval = {rep.P_succ_hat, rep.P_succ_hat};
  if (rep.F_exp) rep.F_interval = {*rep.F_exp, *rep.F_exp};
  if (shots == 0 || bootstrap_samples <= 0) return rep;

  std::mt19937_64 boot(seed ^ kBootstrapSalt);
  std::vector<double> ps;
  std::vector<double> fs;
  for (int r = 0; r < bootstrap_samples; ++r) {
    std::array<std::vector<double>, 2> f = freq;
    for (auto& row : f) {
      for (double& c : row) {
        if (c <= 0.0) continue;
        std::poisson_distribution<long> draw(c);
        c = static_cast<double>(draw(boot));
      }
    }
    try {
      double pb = 0.0;
      double vb = 0.0;
      std::optional<double> fb;
      evaluate(f, &pb, &vb, &fb, nullptr);
      ps.push_back(pb);
      if (fb) fs.push_back(*fb);
    } catch (const std::invalid_argument&) {
    }
  }
  if (!ps.empty()) rep.P_succ_interval = {quantile(ps, kQuantileLow), quantile(ps, kQuantileHigh)};
  if (!fs.empty() && rep.F_exp) rep.F_interval = {quantile(fs, kQuantileLow), quantile(fs, kQuantileHigh)};
  return rep;
}

SweepTable sweep_figures(const SweepConfig& config) {
  if (config.alpha_points < 1 || config.beta_points < 1) {
    throw std::invalid_argument("sweep_figures: grid must have at least one point");
  }
  SweepTable rows;
  auto analytic = [](std::string fig, int n, double alpha, double beta, std::string quantity,
                     double value, std::string arm) {
    return SweepRow{std::move(fig), n,     alpha, beta, std::move(quantity),
                    value,          value, value, std::move(arm), "ideal"};
  };
  auto grid = [](int points, double top, int k) {
    return points == 1 ? 0.0 : top * k / (points - 1);
  };

  switch (config.figure) {
    case 4: {
      if (config.ns.empty()) throw std::invalid_argument("sweep_figures: empty n list");
      for (int n : config.ns) {
        if (n < 1) throw std::invalid_argument("sweep_figures: n must be at least 1");
        const double top = kPi / (4.0 * n);
        for (int k = 0; k < config.alpha_points; ++k) {
          const double a = grid(config.alpha_points, top, k);
          const double beta = 2.0 * n * a;
          rows.push_back(analytic("4", n, a, beta, "P_succ", success_probability(n, a).value, "optimal"));
          rows.push_back(analytic("4", n, a, beta, "P_succ", 1.0 - std::cos(2.0 * n * a), "usd"));
          rows.push_back(analytic("4", n, a, beta, "P_succ", group_baseline(2, n, false), "group_baseline_unitary"));
          rows.push_back(analytic("4", n, a, beta, "P_succ", group_baseline(2, n, true), "group_baseline_phase"));
        }
        const double x = chi(n);
        rows.push_back(analytic("4", n, x, 2.0 * n * x, "chi_marker", success_probability(n, x).value, "optimal"));
      }
      break;
    }
    case 6:
    case 7: {
      const std::string fig = std::to_string(config.figure);
      for (int i = 0; i < config.alpha_points; ++i) {
        const double a = grid(config.alpha_points, kPi / 4.0, i);
        for (int j = 0; j < config.beta_points; ++j) {
          const double b = grid(config.beta_points, kPi / 2.0, j);
          if (config.figure == 6) {
            rows.push_back(analytic(fig, 0, a, b, "F_e", processor_fidelity(a, b), "optimal"));
          } else {
            rows.push_back(analytic(fig, 0, a, b, "P_succ", processor_success(a, b), "optimal"));
          }
        }
      }
      break;
    }
    case 8: {
      if (config.ns.empty()) throw std::invalid_argument("sweep_figures: empty n list");
      std::uint64_t run = 0;
      const NoiseModel ideal = NoiseModel::ideal();
      const NoiseModel noisy = NoiseModel::from_tag("cnot929");
      const NoiseModel misaligned = NoiseModel::from_tag("misaligned");
      for (int n : config.ns) {
        if (n < 1) throw std::invalid_argument("sweep_figures: n must be at least 1");
        const double top = kPi / (4.0 * n);
        for (int k = 1; k <= config.alpha_points; ++k) {
          const double a = top * k / config.alpha_points;
          const double beta = 2.0 * n * a;
          CanonicalPair p = CanonicalPair::from_parameters(2, n, std::min(a, top * (1.0 - 1e-9)));
          rows.push_back(analytic("8", n, a, beta, "P_succ", success_probability(n, a).value, "theory"));
          rows.push_back(analytic("8", n, a, beta, "F_exp", 1.0, "theory"));
          rows.push_back(analytic("8", n, a, beta, "P_succ", group_baseline(2, n, true), "phase_gate_baseline"));
          for (const NoiseModel* noise : {&ideal, &noisy}) {
            Tomogram t = run_virtual_experiment(p, *noise, config.shots, config.seed + run++);
            EstimatedReport r = estimate(t);
            rows.push_back(SweepRow{"8", n, a, beta, "P_succ", r.P_succ_hat,
                                    r.P_succ_hat - r.P_succ_stderr, r.P_succ_hat + r.P_succ_stderr,
                                    "optimal", noise->tag});
            if (r.F_exp) {
              rows.push_back(SweepRow{"8", n, a, beta, "F_exp", *r.F_exp, r.F_interval.low,
                                      r.F_interval.high, "optimal", noise->tag});
            }
          }
          for (const NoiseModel* noise : {&ideal, &misaligned}) {
            EstimatedReport r = measure_and_prepare_arm(p, *noise, config.shots, config.seed + run++);
            rows.push_back(SweepRow{"8", n, a, beta, "P_succ", r.P_succ_hat,
                                    r.P_succ_hat - r.P_succ_stderr, r.P_succ_hat + r.P_succ_stderr,
                                    "measure_prepare", noise->tag});
            if (r.F_exp) {
              rows.push_back(SweepRow{"8", n, a, beta, "F_exp", *r.F_exp, r.F_interval.low,
                                      r.F_interval.high, "measure_prepare", noise->tag});
            }
          }
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("sweep_figures: figure must be 4, 6, 7 or 8");
  }
  return rows;
}

}  // namespace sarlab
