#include "logos/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "logos/errors.hpp"

namespace logos::io {

namespace {

// nlohmann reports byte offsets; turn one into a line/column pair.
std::pair<long, long> line_column(const std::string& text, std::size_t byte) {
  long line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double number_from(const json& j, const std::string& field) {
  if (!j.is_number())
    throw ParseError("field '" + field + "' must be a number, got " + std::string(j.type_name()));
  return j.get<double>();
}

Complex complex_from(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError("field '" + field + "' must be a [re, im] pair");
  return {number_from(j[0], field + "[0]"), number_from(j[1], field + "[1]")};
}

}  // namespace

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ParseError("field '" + field + "' must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const json& first = j[0];
  if (!first.is_array() || first.empty())
    throw ParseError("field '" + field + "[0]' must be a non-empty array of [re, im] pairs");
  const std::size_t cols = first.size();
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols)
      throw ParseError("field '" + row_field + "' has " + std::to_string(j[i].size()) +
                       " entries, expected " + std::to_string(cols));
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          complex_from(j[i][k], row_field + "[" + std::to_string(k) + "]");
  }
  return m;
}

CVector vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ParseError("field '" + field + "' must be a non-empty array of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = complex_from(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

DensityOperator state_from_json(const json& j, const Tolerances& tol) {
  if (!j.is_object()) throw ParseError("state document must be a JSON object");
  if (!j.contains("matrix")) throw ParseError("state document is missing field 'matrix'");
  CMatrix m = matrix_from_json(j.at("matrix"), "matrix");
  if (m.rows() != m.cols())
    throw ParseError("field 'matrix' must be square, got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  std::vector<int> dims;
  if (j.contains("factor_dims")) {
    const json& fd = j.at("factor_dims");
    if (!fd.is_array() || fd.empty())
      throw ParseError("field 'factor_dims' must be a non-empty array of integers");
    long prod = 1;
    for (std::size_t i = 0; i < fd.size(); ++i) {
      if (!fd[i].is_number_integer() || fd[i].get<long>() < 1)
        throw ParseError("field 'factor_dims[" + std::to_string(i) +
                         "]' must be a positive integer");
      dims.push_back(fd[i].get<int>());
      prod *= dims.back();
    }
    if (prod != m.rows())
      throw ParseError("field 'factor_dims' product " + std::to_string(prod) +
                       " does not match 'matrix' dimension " + std::to_string(m.rows()));
  }
  return DensityOperator(std::move(dims), std::move(m), tol);
}

json state_to_json(const DensityOperator& rho) {
  return json{{"factor_dims", rho.factor_dims()}, {"matrix", matrix_to_json(rho.matrix())}};
}

DensityOperator load_state(const std::string& path, const Tolerances& tol) {
  return state_from_json(parse_json_file(path), tol);
}

std::vector<PureState> projector_set_from_json(const json& j, const Tolerances& tol) {
  if (!j.is_array() || j.empty())
    throw ParseError("projector set must be a non-empty JSON array of vectors");
  std::vector<PureState> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string field = "[" + std::to_string(i) + "]";
    CVector v = vector_from_json(j[i], field);
    if (i > 0 && v.size() != out.front().amplitudes().size())
      throw ValidationError("projector set vectors have mixed dimensions: entry " +
                            std::to_string(i) + " has dim " + std::to_string(v.size()) +
                            ", expected " + std::to_string(out.front().dim()));
    out.emplace_back(std::move(v), tol);
  }
  return out;
}

std::vector<PureState> load_projector_set(const std::string& path, const Tolerances& tol) {
  return projector_set_from_json(parse_json_file(path), tol);
}

json projector_set_to_json(const std::vector<PureState>& vectors) {
  json out = json::array();
  for (const auto& v : vectors) out.push_back(vector_to_json(v.amplitudes()));
  return out;
}

bell::ChshSetting setting_from_json(const json& j, const Tolerances& tol) {
  if (!j.is_object()) throw ParseError("settings document must be a JSON object");
  auto get = [&](const char* name) {
    if (!j.contains(name))
      throw ParseError(std::string("settings document is missing field '") + name + "'");
    return bell::DichotomicObservable(matrix_from_json(j.at(name), name), tol);
  };
  return bell::ChshSetting{get("A0"), get("A1"), get("B0"), get("B1")};
}

bell::ChshSetting load_setting(const std::string& path, const Tolerances& tol) {
  return setting_from_json(parse_json_file(path), tol);
}

json setting_to_json(const bell::ChshSetting& s) {
  return json{{"A0", matrix_to_json(s.a0.matrix())},
              {"A1", matrix_to_json(s.a1.matrix())},
              {"B0", matrix_to_json(s.b0.matrix())},
              {"B1", matrix_to_json(s.b1.matrix())}};
}

PsaFile load_psa_file(const std::string& path, const Tolerances& tol) {
  const json j = parse_json_file(path);
  if (!j.is_object()) throw ParseError("PSA document must be a JSON object");
  PsaFile out;
  if (j.contains("projectors")) {
    out.projectors = projector_set_from_json(j.at("projectors"), tol);
  } else if (j.contains("projector_file")) {
    if (!j.at("projector_file").is_string())
      throw ParseError("field 'projector_file' must be a string path");
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    out.projectors =
        load_projector_set((base / j.at("projector_file").get<std::string>()).string(), tol);
  } else {
    throw ParseError("PSA document needs field 'projectors' or 'projector_file'");
  }
  if (!j.contains("values") || !j.at("values").is_array())
    throw ParseError("PSA document is missing array field 'values'");
  for (std::size_t i = 0; i < j.at("values").size(); ++i)
    out.values.push_back(number_from(j.at("values")[i], "values[" + std::to_string(i) + "]"));
  if (out.values.size() != out.projectors.size())
    throw ValidationError("PSA document has " + std::to_string(out.values.size()) +
                          " values for " + std::to_string(out.projectors.size()) + " projectors");
  return out;
}

namespace {

json verdict_to_json(const relations::RelationVerdict& v) {
  json intensive{{"related", v.intensive.related},
                 {"spectrum_side1", v.intensive.witness.spectrum_left},
                 {"spectrum_side2", v.intensive.witness.spectrum_right}};
  if (!v.intensive.witness.matching.empty())
    intensive["matching"] = v.intensive.witness.matching;
  if (!v.intensive.witness.note.empty()) intensive["note"] = v.intensive.witness.note;

  json effective{{"related", v.effective.related}};
  json partners = json::array();
  for (const auto& p : v.effective.partners) {
    if (!p) {
      partners.push_back(nullptr);
      continue;
    }
    json basis = json::array();
    for (const auto& vec : *p) basis.push_back(vector_to_json(vec.amplitudes()));
    partners.push_back(std::move(basis));
  }
  effective["partners"] = std::move(partners);
  if (v.effective.first_failure)
    effective["first_failing_context"] = *v.effective.first_failure;
  if (!v.effective.note.empty()) effective["note"] = v.effective.note;
  if (v.effective.analytic_equal_schmidt) {
    effective["analytic_equal_schmidt"] = *v.effective.analytic_equal_schmidt;
    effective["analytic_agrees"] = *v.effective.analytic_agrees;
  }

  return json{{"classification", relations::classification_name(v.classification)},
              {"intensive", std::move(intensive)},
              {"effective", std::move(effective)},
              {"family_fingerprint", v.family_fingerprint},
              {"tolerance", v.tolerance}};
}

}  // namespace

json report_to_json(const relations::ComparisonReport& report) {
  json out{{"schema", "comparison_report/1"},
           {"factor_dims", report.factor_dims},
           {"purity", report.purity},
           {"pure", report.pure},
           {"tolerance", report.tolerance}};
  out["ppt"] = json{{"verdict", report.ppt.verdict == PptVerdict::NPT ? "NPT" : "PPT"},
                    {"min_eigenvalue", report.ppt.min_eigenvalue},
                    {"conclusive", report.ppt_conclusive},
                    {"role", report.ppt_conclusive ? "necessary-and-sufficient"
                                                   : "necessary-only"}};
  if (report.standard_separable)
    out["standard_separable"] = *report.standard_separable;
  else
    out["standard_separable"] = nullptr;
  if (report.schmidt_coefficients)
    out["schmidt_coefficients"] = *report.schmidt_coefficients;
  else
    out["schmidt_coefficients"] = nullptr;
  out["verdict"] = verdict_to_json(report.verdict);
  out["epr_certainty_nodes"] = report.epr_certainty_nodes;
  json table = json::array();
  for (const auto& row : report.psa_table)
    table.push_back(json{{"node_index", row.node_index},
                         {"vector_fingerprint", row.fingerprint},
                         {"potentia", row.potentia},
                         {"description", row.description}});
  out["psa_table"] = std::move(table);
  out["report_graph_fingerprint"] = report.report_graph_fingerprint;
  out["divergences"] = report.divergences;
  return out;
}

json run_statistics_to_json(const bell::RunStatistics& stats) {
  json settings = json::array();
  for (std::size_t s = 0; s < 4; ++s) {
    json outcomes;
    for (std::size_t o = 0; o < 4; ++o)
      outcomes[bell::kOutcomeNames[o]] = stats.counts[s][o];
    settings.push_back(json{{"setting", bell::kSettingNames[s]},
                            {"counts", std::move(outcomes)}});
  }
  return json{{"shots", stats.shots},
              {"seed", stats.seed},
              {"settings", std::move(settings)},
              {"empirical_chsh", stats.empirical_chsh()}};
}

std::string run_statistics_to_csv(const bell::RunStatistics& stats) {
  std::ostringstream os;
  os << "setting,outcome,count\n";
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t o = 0; o < 4; ++o)
      os << bell::kSettingNames[s] << "," << bell::kOutcomeNames[o] << ","
         << stats.counts[s][o] << "\n";
  return os.str();
}

json parse_json_text(const std::string& text, const std::string& source_name) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(source_name + ":" + std::to_string(line) + ":" + std::to_string(col) +
                         ": " + e.what(),
                     line, col);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json parse_json_file(const std::string& path) {
  return parse_json_text(read_file(path), path);
}

}  // namespace logos::io
