#include "logos/psa.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "logos/errors.hpp"
#include "logos/hermitian_eig.hpp"
#include "logos/rng.hpp"

namespace logos::powers {

Psa::Psa(std::shared_ptr<const PowerGraph> graph, std::vector<double> values,
         const Tolerances& tol)
    : graph_(std::move(graph)), values_(std::move(values)) {
  if (!graph_) throw ValidationError("PSA needs a graph");
  if (values_.size() != graph_->size())
    throw ValidationError("PSA has " + std::to_string(values_.size()) + " values for " +
                          std::to_string(graph_->size()) + " nodes");
  for (double v : values_)
    if (!(v >= 0.0 && v <= 1.0))
      throw ValidationError("PSA value outside [0,1]: " + std::to_string(v));
  const int dim = graph_->size() ? graph_->node(0).dim() : 0;
  for (const auto& c : graph_->maximal_contexts()) {
    if (!c.resolves_identity) continue;
    double sum = 0.0;
    for (std::size_t i : c.nodes) sum += values_[i];
    if (std::abs(sum - 1.0) > dim * tol.trace)
      throw ValidationError("PSA values over an identity-resolving context sum to " +
                            std::to_string(sum) + ", expected 1");
  }
}

Psa psa_from_state(const DensityOperator& rho, std::shared_ptr<const PowerGraph> graph,
                   const Tolerances& tol) {
  if (!graph) throw ValidationError("psa_from_state needs a graph");
  if (graph->size() && graph->node(0).dim() != rho.dim())
    throw ValidationError("psa_from_state: state dimension " + std::to_string(rho.dim()) +
                          " does not match graph node dimension " +
                          std::to_string(graph->node(0).dim()));
  std::vector<double> values;
  values.reserve(graph->size());
  for (std::size_t i = 0; i < graph->size(); ++i)
    values.push_back(born(rho, graph->node(i), tol));
  return Psa(std::move(graph), std::move(values), tol);
}

namespace {

// Real orthogonal-ish basis of Hermitian d×d matrices: diagonal units,
// then (|k⟩⟨l| + |l⟩⟨k|) and i(|k⟩⟨l| - |l⟩⟨k|) for k < l.
std::vector<CMatrix> hermitian_basis(int d) {
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  for (int k = 0; k < d; ++k) {
    CMatrix m = CMatrix::Zero(d, d);
    m(k, k) = 1.0;
    basis.push_back(std::move(m));
  }
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      CMatrix re = CMatrix::Zero(d, d);
      re(k, l) = re(l, k) = 1.0;
      basis.push_back(std::move(re));
      CMatrix im = CMatrix::Zero(d, d);
      im(k, l) = Complex(0, 1);
      im(l, k) = Complex(0, -1);
      basis.push_back(std::move(im));
    }
  return basis;
}

}  // namespace

ReconstructionResult reconstruct_state(const Psa& psa, const Tolerances& tol) {
  const PowerGraph& g = psa.graph();
  if (g.size() == 0) throw UnsupportedStructureError("reconstruction from an empty graph");
  const int d = g.node(0).dim();
  const auto basis = hermitian_basis(d);
  const int dd = d * d;
  const int n = static_cast<int>(g.size());

  // Tr(ρ Pᵢ) is linear in the real coordinates of ρ over the Hermitian basis.
  RMatrix a(n, dd);
  RVector y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dd; ++j)
      a(i, j) = (g.node(static_cast<std::size_t>(i)).matrix() * basis[static_cast<std::size_t>(j)])
                    .trace()
                    .real();
    y(i) = psa.value(static_cast<std::size_t>(i));
  }

  Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  const int rank = static_cast<int>(svd.rank());
  if (rank < dd)
    throw UnsupportedStructureError(
        "projector set is informationally incomplete: Born system rank " + std::to_string(rank) +
        " of required " + std::to_string(dd) + " (deficit " + std::to_string(dd - rank) + ")");

  const RVector x = svd.solve(y);
  const double lstsq_residual = (a * x - y).norm();

  CMatrix rho_raw = CMatrix::Zero(d, d);
  for (int j = 0; j < dd; ++j) rho_raw += x(j) * basis[static_cast<std::size_t>(j)];

  // Projection to the PSD trace-1 cone: clip negative eigenvalues, renormalize.
  HermitianEigen eig = hermitian_eigen((rho_raw + rho_raw.adjoint()) / 2.0);
  RVector clipped = eig.eigenvalues.cwiseMax(0.0);
  const double total = clipped.sum();
  if (total <= 0.0)
    throw UnsupportedStructureError("reconstruction collapsed to the zero operator");
  clipped /= total;
  CMatrix rho = eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.adjoint();
  rho = (rho + rho.adjoint()) / 2.0;

  DensityOperator state({d}, std::move(rho), tol);
  double residual = 0.0;
  for (int i = 0; i < n; ++i) {
    const double fit =
        (state.matrix() * g.node(static_cast<std::size_t>(i)).matrix()).trace().real();
    residual = std::max(residual, std::abs(fit - y(i)));
  }
  return {std::move(state), lstsq_residual, residual};
}

namespace {

struct ValuationProblem {
  std::vector<std::vector<std::size_t>> contexts;         // resolving maximal contexts
  std::vector<std::vector<std::size_t>> node_contexts;    // node -> context ids
};

ValuationProblem valuation_problem(const PowerGraph& g) {
  ValuationProblem p;
  p.node_contexts.resize(g.size());
  for (const auto& c : g.maximal_contexts()) {
    if (!c.resolves_identity) continue;
    const std::size_t id = p.contexts.size();
    p.contexts.push_back(c.nodes);
    for (std::size_t n : c.nodes) p.node_contexts[n].push_back(id);
  }
  if (p.contexts.empty())
    throw UnsupportedStructureError(
        "graph has no identity-resolving maximal context; the exactly-one-true "
        "constraint is not meaningful here");
  for (std::size_t n = 0; n < g.size(); ++n)
    if (p.node_contexts[n].empty())
      throw UnsupportedStructureError("node " + std::to_string(n) +
                                      " lies in no identity-resolving maximal context");
  return p;
}

class ValuationSearch {
 public:
  ValuationSearch(const PowerGraph& g, ValuationProblem p)
      : n_(g.size()), problem_(std::move(p)) {
    ones_.assign(problem_.contexts.size(), 0);
    unassigned_.resize(problem_.contexts.size());
    for (std::size_t c = 0; c < problem_.contexts.size(); ++c)
      unassigned_[c] = problem_.contexts[c].size();
    assignment_.assign(n_, 0);
  }

  ValuationSearchResult run() {
    ValuationSearchResult out;
    out.constraint_contexts = problem_.contexts.size();
    if (search(0, out)) out.valuation = BinaryValuation{assignment_};
    return out;
  }

 private:
  bool feasible(std::size_t ctx) const {
    if (ones_[ctx] > 1) return false;
    if (unassigned_[ctx] == 0 && ones_[ctx] != 1) return false;
    return true;
  }

  bool search(std::size_t node, ValuationSearchResult& stats) {
    if (node == n_) return true;
    ++stats.nodes_expanded;
    for (std::uint8_t value : {std::uint8_t{0}, std::uint8_t{1}}) {
      assignment_[node] = value;
      bool ok = true;
      for (std::size_t ctx : problem_.node_contexts[node]) {
        --unassigned_[ctx];
        ones_[ctx] += value;
        if (!feasible(ctx)) ok = false;
      }
      if (ok && search(node + 1, stats)) return true;
      for (std::size_t ctx : problem_.node_contexts[node]) {
        ++unassigned_[ctx];
        ones_[ctx] -= value;
      }
      ++stats.backtracks;
    }
    return false;
  }

  std::size_t n_;
  ValuationProblem problem_;
  std::vector<std::size_t> ones_;
  std::vector<std::size_t> unassigned_;
  std::vector<std::uint8_t> assignment_;
};

}  // namespace

ValuationSearchResult find_global_binary_valuation(const PowerGraph& g) {
  return ValuationSearch(g, valuation_problem(g)).run();
}

std::optional<ParityObstruction> parity_obstruction(const PowerGraph& g) {
  std::vector<std::size_t> incidence(g.size(), 0);
  std::size_t resolving = 0;
  for (const auto& c : g.maximal_contexts()) {
    if (!c.resolves_identity) continue;
    ++resolving;
    for (std::size_t n : c.nodes) ++incidence[n];
  }
  if (resolving == 0 || g.size() == 0) return std::nullopt;
  // Σ over contexts of "exactly one true" counts each true node once per
  // membership; with uniform even incidence the total is even, so an odd
  // number of contexts is contradictory.
  const std::size_t k = incidence.front();
  for (std::size_t v : incidence)
    if (v != k) return std::nullopt;
  if (k % 2 == 0 && resolving % 2 == 1) return ParityObstruction{resolving, k};
  return std::nullopt;
}

EffectiveValuation sample_effective_valuation(const Psa& psa, const Context& c,
                                              std::uint64_t seed, const Tolerances& tol) {
  if (!c.resolves_identity)
    throw ValidationError("effective valuations need an identity-resolving context");
  const int dim = psa.graph().node(0).dim();
  std::vector<double> weights;
  weights.reserve(c.nodes.size());
  double sum = 0.0;
  for (std::size_t n : c.nodes) {
    weights.push_back(psa.value(n));
    sum += weights.back();
  }
  if (std::abs(sum - 1.0) > dim * tol.trace)
    throw ValidationError("PSA values over the context sum to " + std::to_string(sum) +
                          ", expected 1");
  Rng rng(seed);
  const std::size_t pick = rng.sample_discrete(weights);
  return {c, c.nodes[pick], seed};
}

}  // namespace logos::powers
