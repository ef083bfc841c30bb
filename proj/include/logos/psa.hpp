#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "logos/power_graph.hpp"

namespace logos::powers {

// Intensive valuation: the map node → potentia ∈ [0,1]. Over every
// identity-resolving context the values sum to 1 (within d·trace
// tolerance); this is validated at construction.
class Psa {
 public:
  Psa(std::shared_ptr<const PowerGraph> graph, std::vector<double> values,
      const Tolerances& tol = {});

  const PowerGraph& graph() const { return *graph_; }
  std::shared_ptr<const PowerGraph> graph_ptr() const { return graph_; }
  double value(std::size_t node) const { return values_[node]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::shared_ptr<const PowerGraph> graph_;
  std::vector<double> values_;
};

// Born-rule valuation of every node.
Psa psa_from_state(const DensityOperator& rho, std::shared_ptr<const PowerGraph> graph,
                   const Tolerances& tol = {});

struct ReconstructionResult {
  DensityOperator state;
  double lstsq_residual;  // ||A x - y||₂ of the unconstrained solve
  double residual;        // max |Tr(ρ Pᵢ) - Ψ(Pᵢ)| after cone projection
};

// Least-squares inversion of the Born system, then projection to the
// PSD trace-1 cone (eigenvalue clipping + trace renormalization). Requires
// the nodes to span the real space of Hermitian operators; a rank-deficient
// system raises an UnsupportedStructureError carrying the deficit.
ReconstructionResult reconstruct_state(const Psa& psa, const Tolerances& tol = {});

// {0,1} assignment with exactly one node true in every identity-resolving
// maximal context.
struct BinaryValuation {
  std::vector<std::uint8_t> values;
};

struct ValuationSearchResult {
  std::optional<BinaryValuation> valuation;  // empty = exhaustion proof
  std::uint64_t nodes_expanded = 0;
  std::uint64_t backtracks = 0;
  std::size_t constraint_contexts = 0;
};

// Backtracking search for a global binary valuation, in node order with
// 0 tried before 1 (so the lexicographically smallest assignment is found
// first). The "exactly one true" constraint applies to identity-resolving
// maximal contexts; the graph is unsupported if it has none or if some
// node lies outside all of them.
ValuationSearchResult find_global_binary_valuation(const PowerGraph& g);

// Counting obstruction to a global binary valuation: if every node lies in
// the same even number of resolving contexts while the number of resolving
// contexts is odd, no valuation can exist.
struct ParityObstruction {
  std::size_t resolving_contexts;
  std::size_t incidence_per_node;
};
std::optional<ParityObstruction> parity_obstruction(const PowerGraph& g);

// One sampled actualization over a context: node k selected with
// probability Ψ(P_k). Reproducible per seed.
struct EffectiveValuation {
  Context context;
  std::size_t selected;  // node index within the graph
  std::uint64_t seed;
};

EffectiveValuation sample_effective_valuation(const Psa& psa, const Context& c,
                                              std::uint64_t seed, const Tolerances& tol = {});

}  // namespace logos::powers
