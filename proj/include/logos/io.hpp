#pragma once

#include <string>
#include <vector>

#include "json.hpp"  // vendored nlohmann/json

#include "logos/chsh.hpp"
#include "logos/psa.hpp"
#include "logos/relations.hpp"
#include "logos/states.hpp"

namespace logos::io {

using nlohmann::json;

// --- complex encoding -------------------------------------------------
// Every complex scalar is the pair [re, im] of decimal floats; matrices are
// row-major arrays of rows.

json complex_to_json(const Complex& z);
json matrix_to_json(const CMatrix& m);
json vector_to_json(const CVector& v);
CMatrix matrix_from_json(const json& j, const std::string& field);
CVector vector_from_json(const json& j, const std::string& field);

// --- state files -------------------------------------------------------
// {"factor_dims": [2,2], "matrix": [[[re,im],...],...]}

DensityOperator state_from_json(const json& j, const Tolerances& tol = {});
json state_to_json(const DensityOperator& rho);
DensityOperator load_state(const std::string& path, const Tolerances& tol = {});

// --- projector-set files -----------------------------------------------
// A JSON array of unit vectors, each an array of [re,im] pairs.

std::vector<PureState> projector_set_from_json(const json& j, const Tolerances& tol = {});
std::vector<PureState> load_projector_set(const std::string& path, const Tolerances& tol = {});
json projector_set_to_json(const std::vector<PureState>& vectors);

// --- CHSH settings files -------------------------------------------------
// {"A0": matrix, "A1": matrix, "B0": matrix, "B1": matrix}

bell::ChshSetting setting_from_json(const json& j, const Tolerances& tol = {});
bell::ChshSetting load_setting(const std::string& path, const Tolerances& tol = {});
json setting_to_json(const bell::ChshSetting& s);

// --- PSA files -----------------------------------------------------------
// {"projectors": [...vectors...] | "projector_file": "path", "values": [...]}

struct PsaFile {
  std::vector<PureState> projectors;
  std::vector<double> values;
};
PsaFile load_psa_file(const std::string& path, const Tolerances& tol = {});

// --- reports -------------------------------------------------------------

json report_to_json(const relations::ComparisonReport& report);
json run_statistics_to_json(const bell::RunStatistics& stats);
std::string run_statistics_to_csv(const bell::RunStatistics& stats);

// Parses text, translating json exceptions into ParseError with a
// line/column diagnostic.
json parse_json_text(const std::string& text, const std::string& source_name);
json parse_json_file(const std::string& path);
std::string read_file(const std::string& path);

}  // namespace logos::io
