#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sarlab/experiment_harness.h"
#include "sarlab/matrix_core.h"
#include "sarlab/optics_compiler.h"
#include "sarlab/retrieval_circuits.h"

namespace sarlab {

/// Row-major nested arrays with complex entries as [re, im].
nlohmann::json matrix_to_json(const CMatrix& m);
/// Throws std::invalid_argument on malformed input.
CMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json instrument_to_json(const RetrievalInstrument& instr, const QutritIsometryM& m);

/// Kraus operators of every branch in file order.
std::vector<CMatrix> kraus_from_json(const nlohmann::json& j);

std::string format_number(double x);

void write_sweep_csv(std::ostream& out, const SweepTable& table);
void write_optics_csv(std::ostream& out, const std::vector<PovmCompilation>& rows);

}  // namespace sarlab
