#include "logos/power_graph.hpp"

#include <algorithm>
#include <bit>

#include "logos/errors.hpp"

namespace logos::powers {

PowerGraph::PowerGraph(std::vector<Projector> nodes, double commutation_tol,
                       const Tolerances& tol, std::size_t node_cap)
    : nodes_(std::move(nodes)), commutation_tol_(commutation_tol), tol_(tol) {
  if (nodes_.size() > node_cap)
    throw UnsupportedStructureError("power graph has " + std::to_string(nodes_.size()) +
                                    " nodes, above the cap of " + std::to_string(node_cap) +
                                    " (clique enumeration is exponential in the worst case)");
  const std::size_t n = nodes_.size();
  for (const auto& p : nodes_)
    if (p.dim() != nodes_.front().dim())
      throw ValidationError("power graph nodes have mismatched dimensions");
  adj_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    adj_[i * n + i] = 1;  // reflexive
    for (std::size_t j = i + 1; j < n; ++j) {
      const CMatrix comm = nodes_[i].matrix() * nodes_[j].matrix() -
                           nodes_[j].matrix() * nodes_[i].matrix();
      const char edge = comm.norm() <= commutation_tol_ ? 1 : 0;
      adj_[i * n + j] = edge;
      adj_[j * n + i] = edge;
    }
  }
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& p : nodes_) h = matrix_fingerprint(p.matrix(), h);
  h = fnv1a(&commutation_tol_, sizeof commutation_tol_, h);
  fingerprint_ = to_hex(h);
}

namespace {

// Bron-Kerbosch with pivoting over bitset-encoded vertex sets (node count
// is capped at 64).
class CliqueEnumerator {
 public:
  explicit CliqueEnumerator(const PowerGraph& g) : g_(g), n_(g.size()) {
    neighbors_.resize(n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i != j && g.adjacent(i, j)) neighbors_[i] |= (1ull << j);
  }

  std::vector<std::vector<std::size_t>> run() {
    const std::uint64_t all = n_ == 64 ? ~0ull : ((1ull << n_) - 1);
    expand(0, all, 0);
    std::sort(found_.begin(), found_.end());
    return found_;
  }

 private:
  void expand(std::uint64_t r, std::uint64_t p, std::uint64_t x) {
    if (p == 0 && x == 0) {
      std::vector<std::size_t> clique;
      for (std::size_t i = 0; i < n_; ++i)
        if (r & (1ull << i)) clique.push_back(i);
      found_.push_back(std::move(clique));
      return;
    }
    // Pivot on the vertex of P ∪ X with the most neighbors in P.
    std::uint64_t pux = p | x;
    std::size_t pivot = 0;
    int best = -1;
    for (std::size_t u = 0; u < n_; ++u)
      if (pux & (1ull << u)) {
        const int c = std::popcount(p & neighbors_[u]);
        if (c > best) {
          best = c;
          pivot = u;
        }
      }
    std::uint64_t candidates = p & ~neighbors_[pivot];
    for (std::size_t v = 0; v < n_; ++v) {
      const std::uint64_t bit = 1ull << v;
      if (!(candidates & bit)) continue;
      expand(r | bit, p & neighbors_[v], x & neighbors_[v]);
      p &= ~bit;
      x |= bit;
      candidates &= ~bit;
    }
  }

  const PowerGraph& g_;
  std::size_t n_;
  std::vector<std::uint64_t> neighbors_;
  std::vector<std::vector<std::size_t>> found_;
};

}  // namespace

const std::vector<Context>& PowerGraph::maximal_contexts() const {
  if (!contexts_ready_) {
    contexts_ = enumerate_maximal_contexts(*this);
    contexts_ready_ = true;
  }
  return contexts_;
}

std::vector<Context> enumerate_maximal_contexts(const PowerGraph& g) {
  std::vector<Context> out;
  if (g.size() == 0) return out;
  const int dim = g.node(0).dim();
  for (auto& nodes : CliqueEnumerator(g).run()) {
    Context c;
    c.nodes = std::move(nodes);
    c.is_maximal = true;
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (std::size_t i : c.nodes) sum += g.node(i).matrix();
    c.resolves_identity = (sum - CMatrix::Identity(dim, dim)).norm() <= g.tolerances().recon;
    out.push_back(std::move(c));
  }
  return out;
}

PowerGraph build_power_graph(std::vector<Projector> projectors, double commutation_tol,
                             const Tolerances& tol) {
  return PowerGraph(std::move(projectors), commutation_tol, tol);
}

PowerGraph graph_from_vectors(const std::vector<PureState>& vectors, double commutation_tol,
                              const Tolerances& tol) {
  std::vector<Projector> nodes;
  nodes.reserve(vectors.size());
  for (const auto& v : vectors) nodes.emplace_back(v);
  return PowerGraph(std::move(nodes), commutation_tol, tol);
}

}  // namespace logos::powers
