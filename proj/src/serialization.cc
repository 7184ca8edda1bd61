#include "sarlab/serialization.h"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace sarlab {

using nlohmann::json;

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw std::invalid_argument("matrix_from_json: expected a nested array");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw std::invalid_argument("matrix_from_json: ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = j[r][c];
      if (!e.is_array() || e.size() != 2) throw std::invalid_argument("matrix_from_json: bad entry");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json instrument_to_json(const RetrievalInstrument& instr, const QutritIsometryM& m) {
  json j;
  j["n"] = instr.n;
  j["alpha"] = instr.alpha;
  j["which"] = instr.which;
  j["regime"] = to_string(instr.regime);
  j["lambda_a"] = m.lambda_a;
  j["lambda_b"] = m.lambda_b;
  j["success_probability"] = instr.success_probability();
  j["M"] = matrix_to_json(m.matrix);
  json branches = json::array();
  for (const auto& b : instr.branches) {
    json e;
    e["label"] = to_string(b.label);
    e["probability"] = (b.kraus.adjoint() * b.kraus).trace().real() / 2.0;
    e["kraus"] = matrix_to_json(b.kraus);
    branches.push_back(std::move(e));
  }
  j["branches"] = std::move(branches);
  return j;
}

std::vector<CMatrix> kraus_from_json(const json& j) {
  if (!j.contains("branches") || !j["branches"].is_array()) {
    throw std::invalid_argument("kraus_from_json: missing branches");
  }
  std::vector<CMatrix> out;
  for (const auto& b : j["branches"]) out.push_back(matrix_from_json(b.at("kraus")));
  return out;
}

std::string format_number(double x) {
  if (x == 0.0) return "0";
  return fmt::format("{:.15g}", x);
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "figure_id,n,alpha,beta,quantity,value,stderr_low,stderr_high,arm,noise_tag\n";
  for (const auto& r : table) {
    out << r.figure_id << ',' << r.n << ',' << format_number(r.alpha) << ','
        << format_number(r.beta) << ',' << r.quantity << ',' << format_number(r.value) << ','
        << format_number(r.stderr_low) << ',' << format_number(r.stderr_high) << ',' << r.arm
        << ',' << r.noise_tag << '\n';
  }
}

namespace {

std::string fixed12(double x) {
  if (std::abs(x) < 5e-13) x = 0.0;
  return fmt::format("{:.12f}", x);
}

}  // namespace

void write_optics_csv(std::ostream& out, const std::vector<PovmCompilation>& rows) {
  out << "n,alpha,regime,B,Gamma,Delta,residual_norm\n";
  for (const auto& c : rows) {
    out << c.n << ',' << fixed12(c.alpha) << ',' << to_string(c.mode) << ','
        << fixed12(c.settings.B) << ',' << fixed12(c.settings.Gamma)
        << ',' << fixed12(c.settings.Delta) << ','
        << fmt::format("{:.12e}", c.residual) << '\n';
  }
}

}  // namespace sarlab
