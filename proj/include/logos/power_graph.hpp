#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logos/states.hpp"
#include "logos/tolerances.hpp"

namespace logos::powers {

// Complete subgraph of a power graph. Maximal identity-resolving contexts
// are exactly the orthonormal bases under rank-1 node granularity.
struct Context {
  std::vector<std::size_t> nodes;  // sorted ascending
  bool is_maximal = false;
  bool resolves_identity = false;
};

// Rank-1 projector nodes with the commutation relation: an edge joins two
// nodes iff the Frobenius norm of their commutator is below the tolerance.
// The relation is reflexive and symmetric, and can be recomputed from the
// stored nodes at any time.
class PowerGraph {
 public:
  PowerGraph(std::vector<Projector> nodes, double commutation_tol = Tolerances{}.commutation,
             const Tolerances& tol = {}, std::size_t node_cap = kDefaultNodeCap);

  static constexpr std::size_t kDefaultNodeCap = 64;

  std::size_t size() const { return nodes_.size(); }
  const Projector& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<Projector>& nodes() const { return nodes_; }
  bool adjacent(std::size_t i, std::size_t j) const { return adj_[i * nodes_.size() + j]; }
  double commutation_tolerance() const { return commutation_tol_; }
  const Tolerances& tolerances() const { return tol_; }

  // All maximal cliques (Bron-Kerbosch with pivoting), lexicographic by
  // sorted node indices, each marked for identity resolution. Computed once
  // and cached.
  const std::vector<Context>& maximal_contexts() const;

  // Hash of the ordered node matrices; stamps every verdict derived from
  // this sampled node set.
  std::string fingerprint() const { return fingerprint_; }

 private:
  std::vector<Projector> nodes_;
  std::vector<char> adj_;
  double commutation_tol_;
  Tolerances tol_;
  std::string fingerprint_;
  mutable std::vector<Context> contexts_;
  mutable bool contexts_ready_ = false;
};

PowerGraph build_power_graph(std::vector<Projector> projectors,
                             double commutation_tol = Tolerances{}.commutation,
                             const Tolerances& tol = {});

// Convenience: rank-1 nodes from unit vectors.
PowerGraph graph_from_vectors(const std::vector<PureState>& vectors,
                              double commutation_tol = Tolerances{}.commutation,
                              const Tolerances& tol = {});

std::vector<Context> enumerate_maximal_contexts(const PowerGraph& g);

}  // namespace logos::powers
