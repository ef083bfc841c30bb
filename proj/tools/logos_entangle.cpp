// Command-line front end: state ingestion, entanglement classification,
// binary-valuation search, CHSH evaluation, PSA dumps and reconstruction.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "logos/chsh.hpp"
#include "logos/errors.hpp"
#include "logos/io.hpp"
#include "logos/psa.hpp"
#include "logos/relations.hpp"

using namespace logos;
using json = nlohmann::json;

namespace {

struct CliConfig {
  double tol = Tolerances{}.relation;
  int family_haar = 20;
  std::uint64_t seed = relations::kDefaultFamilySeed;
  std::uint64_t shots = 0;
  std::string format = "text";
  Tolerances tolerances;
};

int thread_cap() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("LOGOS_ENTANGLE_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end && *end == '\0' && parsed >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(parsed));
  }
  return static_cast<int>(n);
}

std::string fmt(double v, int precision = 12) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---- classify -------------------------------------------------------------

void print_report_text(const relations::ComparisonReport& r) {
  std::cout << "factor dims: " << r.factor_dims[0] << " x " << r.factor_dims[1] << "\n";
  std::cout << "purity: " << fmt(r.purity) << (r.pure ? "  [pure]" : "  [mixed]") << "\n";
  std::cout << "PPT: " << (r.ppt.verdict == PptVerdict::NPT ? "NPT" : "PPT")
            << " (min eigenvalue " << fmt(r.ppt.min_eigenvalue, 6) << ", "
            << (r.ppt_conclusive ? "necessary-and-sufficient" : "necessary-only") << ")\n";
  std::cout << "standard separability: ";
  if (r.standard_separable)
    std::cout << (*r.standard_separable ? "separable" : "entangled");
  else
    std::cout << "inconclusive";
  std::cout << "\n";
  if (r.schmidt_coefficients) {
    std::cout << "schmidt coefficients:";
    for (double c : *r.schmidt_coefficients) std::cout << " " << fmt(c, 10);
    std::cout << "\n";
  }
  const auto& v = r.verdict;
  std::cout << "intensive relation: " << (v.intensive.related ? "yes" : "no") << "\n";
  std::cout << "  spectra side1:";
  for (double s : v.intensive.witness.spectrum_left) std::cout << " " << fmt(s, 10);
  std::cout << "\n  spectra side2:";
  for (double s : v.intensive.witness.spectrum_right) std::cout << " " << fmt(s, 10);
  std::cout << "\n";
  if (!v.intensive.witness.note.empty())
    std::cout << "  note: " << v.intensive.witness.note << "\n";
  std::cout << "effective relation: " << (v.effective.related ? "yes" : "no") << "\n";
  std::size_t correlated = 0;
  for (const auto& p : v.effective.partners)
    if (p) ++correlated;
  std::cout << "  correlated contexts: " << correlated << " of " << v.effective.partners.size()
            << "\n";
  if (v.effective.first_failure)
    std::cout << "  first failing context: " << *v.effective.first_failure << "\n";
  if (v.effective.analytic_equal_schmidt)
    std::cout << "  analytic equal-schmidt flag: "
              << (*v.effective.analytic_equal_schmidt ? "yes" : "no") << " ("
              << (*v.effective.analytic_agrees ? "agrees" : "DISAGREES")
              << " with the sampled answer)\n";
  std::cout << "classification: " << relations::classification_name(v.classification) << "\n";
  std::cout << "family fingerprint: " << v.family_fingerprint << "\n";
  std::cout << "EPR-certainty nodes:";
  if (r.epr_certainty_nodes.empty()) std::cout << " none";
  for (std::size_t idx : r.epr_certainty_nodes)
    std::cout << " " << idx << " (" << r.psa_table[idx].description << ")";
  std::cout << "\n";
  std::cout << "intensive prediction table (node, fingerprint, potentia, description):\n";
  for (const auto& row : r.psa_table)
    std::cout << "  " << row.node_index << "  " << row.fingerprint << "  "
              << fmt(row.potentia, 10) << "  " << row.description << "\n";
  if (r.divergences.empty()) {
    std::cout << "divergences: none\n";
  } else {
    std::cout << "divergences:\n";
    for (const auto& d : r.divergences) std::cout << "  - " << d << "\n";
  }
}

int cmd_classify(const std::string& state_path, const CliConfig& cfg) {
  const auto rho = io::load_state(state_path, cfg.tolerances);
  const auto family =
      relations::default_context_family(rho, cfg.family_haar, cfg.seed, cfg.tolerances);
  const auto report =
      relations::compare_with_standard(rho, family, cfg.tol, cfg.tolerances, thread_cap());
  if (cfg.format == "json") {
    emit(io::report_to_json(report));
  } else if (cfg.format == "csv") {
    std::cout << "node_index,vector_fingerprint,potentia\n";
    for (const auto& row : report.psa_table)
      std::cout << row.node_index << "," << row.fingerprint << "," << fmt(row.potentia) << "\n";
  } else {
    print_report_text(report);
  }
  return 0;
}

// ---- ks ---------------------------------------------------------------------

int cmd_ks(const std::string& set_path, const CliConfig& cfg) {
  const auto vectors = io::load_projector_set(set_path, cfg.tolerances);
  const auto graph = powers::graph_from_vectors(vectors, cfg.tolerances.commutation,
                                                cfg.tolerances);
  const auto result = powers::find_global_binary_valuation(graph);
  const auto parity = powers::parity_obstruction(graph);

  if (cfg.format == "json") {
    json out{{"schema", "ks_result/1"},
             {"nodes", graph.size()},
             {"graph_fingerprint", graph.fingerprint()},
             {"constraint_contexts", result.constraint_contexts},
             {"nodes_expanded", result.nodes_expanded},
             {"backtracks", result.backtracks},
             {"valuation_exists", result.valuation.has_value()}};
    if (result.valuation) {
      json vals = json::array();
      for (auto v : result.valuation->values) vals.push_back(static_cast<int>(v));
      out["valuation"] = std::move(vals);
    } else {
      out["valuation"] = nullptr;
      out["exhausted"] = true;
    }
    if (parity)
      out["parity_obstruction"] = json{{"resolving_contexts", parity->resolving_contexts},
                                       {"incidence_per_node", parity->incidence_per_node}};
    else
      out["parity_obstruction"] = nullptr;
    emit(out);
    return 0;
  }

  std::cout << "nodes: " << graph.size() << "\n";
  std::cout << "identity-resolving maximal contexts: " << result.constraint_contexts << "\n";
  std::cout << "graph fingerprint: " << graph.fingerprint() << "\n";
  if (result.valuation) {
    std::cout << "global binary valuation found:";
    for (auto v : result.valuation->values) std::cout << " " << static_cast<int>(v);
    std::cout << "\n";
  } else {
    std::cout << "no global binary valuation (search space exhausted)\n";
  }
  std::cout << "search: " << result.nodes_expanded << " nodes expanded, " << result.backtracks
            << " backtracks\n";
  if (parity)
    std::cout << "parity cross-check: " << parity->resolving_contexts
              << " resolving contexts (odd), every node in " << parity->incidence_per_node
              << " of them (even) -- no valuation can exist\n";
  return 0;
}

// ---- chsh ---------------------------------------------------------------------

int cmd_chsh(const std::string& state_path, const std::string& settings_path, bool optimal,
             const CliConfig& cfg) {
  const auto rho = io::load_state(state_path, cfg.tolerances);

  bell::ChshSetting setting = bell::canonical_setting();
  double s_exact = 0.0;
  json extra;
  if (optimal) {
    const auto best = bell::optimal_chsh(rho, cfg.tolerances);
    setting = best.setting;
    s_exact = best.s_grid;
    if (std::abs(best.s_grid - best.s_formula) > 1e-6)
      throw ValidationError("optimal_chsh cross-check failed: grid " + fmt(best.s_grid) +
                            " vs formula " + fmt(best.s_formula));
    extra["s_formula"] = best.s_formula;
    extra["s_grid"] = best.s_grid;
  } else {
    setting = io::load_setting(settings_path, cfg.tolerances);
    s_exact = bell::chsh_value(rho, setting, cfg.tolerances);
  }

  const auto bound = bell::classical_bound_check(s_exact, cfg.tolerances.chsh_bound);

  std::optional<bell::RunStatistics> stats;
  if (cfg.shots > 0)
    stats = bell::simulate_epr_run(rho, setting, cfg.shots, cfg.seed, cfg.tolerances);

  if (cfg.format == "json") {
    json out{{"schema", "chsh_result/1"},
             {"s_exact", s_exact},
             {"violates_classical_bound", bound.violates},
             {"margin", bound.margin},
             {"tsirelson_headroom", bound.tsirelson_headroom},
             {"setting", io::setting_to_json(setting)}};
    for (auto& [k, v] : extra.items()) out[k] = v;
    if (stats) out["run"] = io::run_statistics_to_json(*stats);
    emit(out);
    return 0;
  }
  if (cfg.format == "csv") {
    if (!stats)
      throw ValidationError("csv output for chsh needs --shots (it exports run counts)");
    std::cout << io::run_statistics_to_csv(*stats);
    return 0;
  }

  if (optimal)
    std::cout << "S_max (grid search): " << fmt(s_exact) << "\n"
              << "S_max (correlation-matrix formula): " << fmt(extra["s_formula"].get<double>())
              << "\n";
  else
    std::cout << "S: " << fmt(s_exact) << "\n";
  std::cout << "classical bound: " << (bound.violates ? "violated" : "satisfied")
            << " (margin " << fmt(bound.margin, 6) << ", Tsirelson headroom "
            << fmt(bound.tsirelson_headroom, 6) << ")\n";
  if (stats) {
    std::cout << "empirical S (" << stats->shots << " shots/setting, seed " << stats->seed
              << "): " << fmt(stats->empirical_chsh(), 6) << "\n";
  }
  return 0;
}

// ---- psa ---------------------------------------------------------------------

int cmd_psa(const std::string& state_path, const std::string& set_path, const CliConfig& cfg) {
  const auto rho = io::load_state(state_path, cfg.tolerances);
  const auto vectors = io::load_projector_set(set_path, cfg.tolerances);
  auto graph = std::make_shared<const powers::PowerGraph>(
      powers::graph_from_vectors(vectors, cfg.tolerances.commutation, cfg.tolerances));
  const auto psa = powers::psa_from_state(rho, graph, cfg.tolerances);

  struct ContextRow {
    std::string nodes;
    bool resolves;
    double sum;
  };
  std::vector<ContextRow> context_rows;
  for (const auto& c : graph->maximal_contexts()) {
    ContextRow row;
    row.resolves = c.resolves_identity;
    double sum = 0.0;
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
      row.nodes += (i ? "|" : "") + std::to_string(c.nodes[i]);
      sum += psa.value(c.nodes[i]);
    }
    row.sum = sum;
    context_rows.push_back(std::move(row));
  }

  if (cfg.format == "json") {
    json nodes = json::array();
    for (std::size_t i = 0; i < graph->size(); ++i)
      nodes.push_back(json{{"node_index", i},
                           {"vector_fingerprint", to_hex(graph->node(i).fingerprint())},
                           {"potentia", psa.value(i)}});
    json contexts = json::array();
    for (const auto& row : context_rows)
      contexts.push_back(json{{"nodes", row.nodes},
                              {"resolves_identity", row.resolves},
                              {"potentia_sum", row.sum}});
    emit(json{{"schema", "psa_dump/1"},
              {"graph_fingerprint", graph->fingerprint()},
              {"nodes", std::move(nodes)},
              {"contexts", std::move(contexts)}});
    return 0;
  }

  // text and csv share the tabular layout
  std::cout << "node_index,vector_fingerprint,potentia\n";
  for (std::size_t i = 0; i < graph->size(); ++i)
    std::cout << i << "," << to_hex(graph->node(i).fingerprint()) << "," << fmt(psa.value(i))
              << "\n";
  std::cout << "\ncontext_nodes,resolves_identity,potentia_sum\n";
  for (const auto& row : context_rows)
    std::cout << row.nodes << "," << (row.resolves ? "true" : "false") << "," << fmt(row.sum)
              << "\n";
  return 0;
}

// ---- reconstruct ----------------------------------------------------------------

int cmd_reconstruct(const std::string& psa_path, const CliConfig& cfg) {
  const auto file = io::load_psa_file(psa_path, cfg.tolerances);
  auto graph = std::make_shared<const powers::PowerGraph>(
      powers::graph_from_vectors(file.projectors, cfg.tolerances.commutation, cfg.tolerances));
  const powers::Psa psa(graph, file.values, cfg.tolerances);
  const auto result = powers::reconstruct_state(psa, cfg.tolerances);

  if (cfg.format == "json") {
    emit(json{{"schema", "reconstruct_result/1"},
              {"state", io::state_to_json(result.state)},
              {"residual", result.residual},
              {"lstsq_residual", result.lstsq_residual},
              {"graph_fingerprint", graph->fingerprint()}});
    return 0;
  }
  std::cout << "reconstructed state:\n" << io::state_to_json(result.state).dump(1) << "\n";
  std::cout << "residual (max Born mismatch): " << fmt(result.residual, 6) << "\n";
  std::cout << "least-squares residual: " << fmt(result.lstsq_residual, 6) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-state analysis: power graphs, intensive valuations, "
               "entanglement classification, and orthodox diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  CliConfig cfg;
  app.add_option("--tol", cfg.tol, "relation tolerance (conditional-state checks)")
      ->check(CLI::PositiveNumber);
  app.add_option("--family-haar", cfg.family_haar, "number of Haar bases in the context family")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "seed for Haar sampling and simulated runs");
  app.add_option("--shots", cfg.shots, "samples per setting for simulated runs");
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  std::string state_path, set_path, settings_path, psa_path;

  auto* classify = app.add_subcommand(
      "classify", "relational entanglement classification vs orthodox criteria");
  classify->add_option("state", state_path, "bipartite density-operator JSON file")->required();

  auto* ks = app.add_subcommand("ks", "search for a global binary valuation");
  ks->add_option("projectors", set_path, "projector-set JSON file (unit vectors)")->required();

  auto* chsh = app.add_subcommand("chsh", "CHSH inequality evaluation");
  chsh->add_option("state", state_path, "bipartite density-operator JSON file")->required();
  auto* settings_opt =
      chsh->add_option("--settings", settings_path, "CHSH settings JSON file (A0,A1,B0,B1)");
  auto* optimal_flag =
      chsh->add_flag("--optimal", "maximize over settings (2x2 states only)");
  settings_opt->excludes(optimal_flag);

  auto* psa = app.add_subcommand("psa", "dump the intensive valuation over a projector set");
  psa->add_option("state", state_path, "density-operator JSON file")->required();
  psa->add_option("projectors", set_path, "projector-set JSON file")->required();

  auto* reconstruct =
      app.add_subcommand("reconstruct", "invert a PSA dump back to a density operator");
  reconstruct->add_option("psa", psa_path, "PSA JSON file (projectors or projector_file + values)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  cfg.tolerances.relation = cfg.tol;

  try {
    if (classify->parsed()) return cmd_classify(state_path, cfg);
    if (ks->parsed()) return cmd_ks(set_path, cfg);
    if (chsh->parsed()) {
      if (!*settings_opt && !*optimal_flag)
        throw ValidationError("chsh needs either --settings FILE or --optimal");
      return cmd_chsh(state_path, settings_path, optimal_flag->count() > 0, cfg);
    }
    if (psa->parsed()) return cmd_psa(state_path, set_path, cfg);
    if (reconstruct->parsed()) return cmd_reconstruct(psa_path, cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const UnsupportedStructureError& e) {
    std::cerr << "unsupported structure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
