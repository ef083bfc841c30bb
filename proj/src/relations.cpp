#include "logos/relations.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include "logos/errors.hpp"
#include "logos/hermitian_eig.hpp"
#include "logos/rng.hpp"

namespace logos::relations {

namespace {

void require_bipartite(const DensityOperator& rho, const char* op) {
  if (rho.factor_dims().size() != 2)
    throw ValidationError(std::string(op) + " needs a bipartite state, got " +
                          std::to_string(rho.factor_dims().size()) + " factors");
}

// Reduced state of the second factor after the side-1 outcome P. Returns
// the outcome probability and the (unnormalized) conditional matrix.
std::pair<double, CMatrix> conditional_block(const DensityOperator& rho, const CMatrix& p) {
  const int d2 = rho.factor_dims()[1];
  const CMatrix embedded = kron(p, CMatrix::Identity(d2, d2));
  const CMatrix sandwich = embedded * rho.matrix() * embedded;
  CMatrix block = partial_trace_matrix(sandwich, rho.factor_dims(), 1);
  return {block.trace().real(), std::move(block)};
}

void check_side1_basis(const std::vector<PureState>& basis, int d1, const Tolerances& tols) {
  if (static_cast<int>(basis.size()) != d1)
    throw ValidationError("side-1 context has " + std::to_string(basis.size()) +
                          " vectors for dimension " + std::to_string(d1));
  CMatrix sum = CMatrix::Zero(d1, d1);
  for (const auto& v : basis) {
    if (v.dim() != d1) throw ValidationError("side-1 context vector has wrong dimension");
    sum += v.amplitudes() * v.amplitudes().adjoint();
  }
  if ((sum - CMatrix::Identity(d1, d1)).norm() > tols.recon)
    throw ValidationError("side-1 context does not resolve the identity");
}

std::vector<PureState> dft_basis(int d) {
  std::vector<PureState> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    CVector v(d);
    for (int j = 0; j < d; ++j) {
      const double phase = 2.0 * std::numbers::pi * j * k / d;
      v(j) = Complex(std::cos(phase), std::sin(phase)) / std::sqrt(static_cast<double>(d));
    }
    out.emplace_back(std::move(v));
  }
  return out;
}

// Gram-Schmidt completion of k orthonormal vectors to a full basis,
// deterministic against the canonical directions.
std::vector<PureState> complete_basis(std::vector<CVector> partial, int d) {
  for (int e = 0; e < d && static_cast<int>(partial.size()) < d; ++e) {
    CVector cand = CVector::Zero(d);
    cand(e) = 1.0;
    for (const auto& u : partial) cand -= u.dot(cand) * u;
    const double n = cand.norm();
    if (n > 1e-6) partial.push_back(cand / n);
  }
  std::vector<PureState> out;
  out.reserve(partial.size());
  for (auto& v : partial) {
    v /= v.norm();
    out.emplace_back(std::move(v));
  }
  return out;
}

}  // namespace

const char* provenance_name(BasisProvenance p) {
  switch (p) {
    case BasisProvenance::CanonicalComputational: return "canonical-computational";
    case BasisProvenance::ReducedEigenbasis: return "reduced-eigenbasis";
    case BasisProvenance::Fourier: return "fourier";
    case BasisProvenance::Haar: return "haar";
  }
  return "?";
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::Strong: return "Strong";
    case Classification::Weak: return "Weak";
    case Classification::Separable: return "Separable";
  }
  return "?";
}

ContextFamily::ContextFamily(std::vector<FamilyBasis> entries, const Tolerances& tol)
    : entries_(std::move(entries)) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& e : entries_) {
    if (e.vectors.empty()) throw ValidationError("context family entry is empty");
    const int d = e.vectors.front().dim();
    check_side1_basis(e.vectors, d, tol);
    const int tag = static_cast<int>(e.provenance);
    h = fnv1a(&tag, sizeof tag, h);
    h = fnv1a(&e.seed, sizeof e.seed, h);
    for (const auto& v : e.vectors) h = matrix_fingerprint(v.amplitudes(), h);
  }
  fingerprint_ = to_hex(h);
}

ContextFamily default_context_family(const DensityOperator& rho_joint, int haar_count,
                                     std::uint64_t seed, const Tolerances& tol) {
  require_bipartite(rho_joint, "default_context_family");
  const int d1 = rho_joint.factor_dims()[0];
  std::vector<FamilyBasis> entries;

  std::vector<PureState> canonical;
  for (int i = 0; i < d1; ++i) {
    CVector v = CVector::Zero(d1);
    v(i) = 1.0;
    canonical.emplace_back(std::move(v));
  }
  entries.push_back({std::move(canonical), BasisProvenance::CanonicalComputational, 0});

  const DensityOperator rho1 = partial_trace(rho_joint, 0, tol);
  HermitianEigen eig = hermitian_eigen(rho1.matrix());
  std::vector<PureState> eigenbasis;
  for (int i = 0; i < d1; ++i) {
    CVector v = eig.eigenvectors.col(i);
    v /= v.norm();
    eigenbasis.emplace_back(std::move(v));
  }
  entries.push_back({std::move(eigenbasis), BasisProvenance::ReducedEigenbasis, 0});

  entries.push_back({dft_basis(d1), BasisProvenance::Fourier, 0});

  for (int k = 0; k < haar_count; ++k) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(k));
    entries.push_back({random_haar_basis(d1, s), BasisProvenance::Haar, s});
  }
  return ContextFamily(std::move(entries), tol);
}

IntensiveResult intensive_related(const DensityOperator& rho_joint, double tol,
                                  const Tolerances& tols) {
  require_bipartite(rho_joint, "intensive_related");
  const DensityOperator rho1 = partial_trace(rho_joint, 0, tols);
  const DensityOperator rho2 = partial_trace(rho_joint, 1, tols);
  IntensiveResult out;
  const RVector s1 = hermitian_eigenvalues(rho1.matrix());
  const RVector s2 = hermitian_eigenvalues(rho2.matrix());
  out.witness.spectrum_left.assign(s1.data(), s1.data() + s1.size());
  out.witness.spectrum_right.assign(s2.data(), s2.data() + s2.size());
  if (rho1.dim() != rho2.dim()) {
    // No bijection between rank-1 node sets of different dimensions can
    // exist, so the graphs cannot be isomorphic.
    out.related = false;
    out.witness.note = "factor dimensions differ; no graph isomorphism possible";
    return out;
  }
  out.related = true;
  for (Eigen::Index i = 0; i < s1.size(); ++i)
    if (std::abs(s1(i) - s2(i)) > tol) out.related = false;
  if (out.related) {
    out.witness.matching.resize(static_cast<std::size_t>(s1.size()));
    for (std::size_t i = 0; i < out.witness.matching.size(); ++i)
      out.witness.matching[i] = i;
  } else {
    out.witness.note = "sorted reduced spectra differ beyond tolerance";
  }
  return out;
}

namespace {

class IsomorphismSearch {
 public:
  IsomorphismSearch(const powers::Psa& a, const powers::Psa& b, double value_tol)
      : a_(a), b_(b), tol_(value_tol), n_(a.graph().size()) {
    map_.assign(n_, SIZE_MAX);
    used_.assign(n_, false);
  }

  std::optional<std::vector<std::size_t>> run() {
    if (b_.graph().size() != n_) return std::nullopt;
    // Multiset prefilter: sorted values must match pairwise.
    std::vector<double> va = a_.values(), vb = b_.values();
    std::sort(va.begin(), va.end());
    std::sort(vb.begin(), vb.end());
    for (std::size_t i = 0; i < n_; ++i)
      if (std::abs(va[i] - vb[i]) > tol_) return std::nullopt;
    if (extend(0)) return map_;
    return std::nullopt;
  }

 private:
  bool extend(std::size_t i) {
    if (i == n_) return true;
    for (std::size_t j = 0; j < n_; ++j) {
      if (used_[j]) continue;
      if (std::abs(a_.value(i) - b_.value(j)) > tol_) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i; ++k)
        if (a_.graph().adjacent(i, k) != b_.graph().adjacent(j, map_[k])) {
          ok = false;
          break;
        }
      if (!ok) continue;
      map_[i] = j;
      used_[j] = true;
      if (extend(i + 1)) return true;
      used_[j] = false;
      map_[i] = SIZE_MAX;
    }
    return false;
  }

  const powers::Psa& a_;
  const powers::Psa& b_;
  double tol_;
  std::size_t n_;
  std::vector<std::size_t> map_;
  std::vector<bool> used_;
};

}  // namespace

FiniteIntensiveResult intensive_related_finite(const powers::Psa& a, const powers::Psa& b,
                                               double value_tol) {
  FiniteIntensiveResult out;
  auto iso = IsomorphismSearch(a, b, value_tol).run();
  out.related = iso.has_value();
  out.isomorphism = std::move(iso);
  return out;
}

std::optional<std::vector<PureState>> correlated_partner_context(
    const DensityOperator& rho_joint, const std::vector<PureState>& side1_basis, double tol,
    const Tolerances& tols) {
  require_bipartite(rho_joint, "correlated_partner_context");
  const int d1 = rho_joint.factor_dims()[0];
  const int d2 = rho_joint.factor_dims()[1];
  check_side1_basis(side1_basis, d1, tols);

  std::vector<double> probs(side1_basis.size());
  std::vector<CMatrix> blocks(side1_basis.size());
  for (std::size_t i = 0; i < side1_basis.size(); ++i) {
    const CMatrix p = side1_basis[i].amplitudes() * side1_basis[i].amplitudes().adjoint();
    auto [prob, block] = conditional_block(rho_joint, p);
    probs[i] = prob;
    blocks[i] = std::move(block);
  }

  const std::size_t dominant =
      static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
  if (probs[dominant] >= 1.0 - tol) {
    // Deterministic side-1 distribution: a constant random variable is
    // vacuously correlated. Return the dominant conditional's eigenbasis.
    const CMatrix sigma = blocks[dominant] / probs[dominant];
    HermitianEigen eig = hermitian_eigen((sigma + sigma.adjoint()) / 2.0);
    std::vector<CVector> cols;
    for (int j = 0; j < d2; ++j) {
      CVector v = eig.eigenvectors.col(j);
      cols.push_back(v / v.norm());
    }
    return complete_basis(std::move(cols), d2);
  }

  std::vector<std::size_t> significant;
  for (std::size_t i = 0; i < probs.size(); ++i)
    if (probs[i] > tols.prob_floor) significant.push_back(i);

  std::vector<CMatrix> sigmas(side1_basis.size());
  for (std::size_t i : significant) {
    sigmas[i] = blocks[i] / probs[i];
    const double pur = (sigmas[i] * sigmas[i]).trace().real();
    if (pur < 1.0 - tol) return std::nullopt;  // mixed conditional
  }
  for (std::size_t a = 0; a < significant.size(); ++a)
    for (std::size_t b = a + 1; b < significant.size(); ++b) {
      const double overlap =
          std::abs((sigmas[significant[a]] * sigmas[significant[b]]).trace());
      if (overlap > tol) return std::nullopt;  // outcomes do not discriminate
    }

  // Partner basis: the conditional states' top eigenvectors, orthonormalized
  // in outcome order and completed to a full side-2 basis.
  std::vector<CVector> partner;
  for (std::size_t i : significant) {
    HermitianEigen eig = hermitian_eigen((sigmas[i] + sigmas[i].adjoint()) / 2.0);
    CVector v = eig.eigenvectors.col(0);
    for (const auto& u : partner) v -= u.dot(v) * u;
    const double n = v.norm();
    if (n < 0.5) return std::nullopt;  // collapsed under orthogonalization
    partner.push_back(v / n);
  }
  return complete_basis(std::move(partner), d2);
}

EffectiveCertificate effective_related(const DensityOperator& rho_joint,
                                       const ContextFamily& family, double tol,
                                       const Tolerances& tols, int max_threads) {
  require_bipartite(rho_joint, "effective_related");
  if (family.size() == 0) throw ValidationError("context family is empty");
  EffectiveCertificate out;
  out.partners.resize(family.size());

  const int d1 = rho_joint.factor_dims()[0];
  const int d2 = rho_joint.factor_dims()[1];
  if (d1 != d2) {
    // Perfect correlation needs a bijection between a d1-outcome and a
    // d2-outcome valuation, which cannot exist.
    out.related = false;
    out.note = "factor dimensions differ; no outcome bijection possible";
  } else {
    auto check = [&](std::size_t i) {
      return correlated_partner_context(rho_joint, family.entries()[i].vectors, tol, tols);
    };
    if (max_threads > 1 && family.size() > 1) {
      std::vector<std::future<std::optional<std::vector<PureState>>>> futures;
      futures.reserve(family.size());
      for (std::size_t i = 0; i < family.size(); ++i)
        futures.push_back(std::async(std::launch::async, check, i));
      for (std::size_t i = 0; i < family.size(); ++i) out.partners[i] = futures[i].get();
    } else {
      for (std::size_t i = 0; i < family.size(); ++i) out.partners[i] = check(i);
    }
    out.related = true;
    for (std::size_t i = 0; i < family.size(); ++i)
      if (!out.partners[i].has_value()) {
        out.related = false;
        if (!out.first_failure) out.first_failure = i;
      }
  }

  if (is_pure(rho_joint, tols)) {
    HermitianEigen eig = hermitian_eigen(rho_joint.matrix());
    CVector top = eig.eigenvectors.col(0);
    top /= top.norm();
    const auto sd = schmidt(PureState(top, tols), d1, d2, tols);
    double lo = sd.coefficients.front(), hi = sd.coefficients.front();
    for (double c : sd.coefficients) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    const bool analytic = (hi - lo) <= tol && static_cast<int>(sd.coefficients.size()) == d1 &&
                          d1 == d2;
    out.analytic_equal_schmidt = analytic;
    out.analytic_agrees = (analytic == out.related);
  }
  return out;
}

RelationVerdict classify_entanglement(const DensityOperator& rho_joint,
                                      const ContextFamily& family, double tol,
                                      const Tolerances& tols, int max_threads) {
  RelationVerdict v;
  v.intensive = intensive_related(rho_joint, tol, tols);
  v.effective = effective_related(rho_joint, family, tol, tols, max_threads);
  v.family_fingerprint = family.fingerprint();
  v.tolerance = tol;
  if (v.effective.related && !v.intensive.related)
    throw std::logic_error(
        "internal consistency violation: an effective relation was detected without an "
        "intensive relation, contradicting the implication between the two");
  if (v.effective.related)
    v.classification = Classification::Strong;
  else if (v.intensive.related)
    v.classification = Classification::Weak;
  else
    v.classification = Classification::Separable;
  return v;
}

ComparisonReport compare_with_standard(const DensityOperator& rho_joint,
                                       const ContextFamily& family, double tol,
                                       const Tolerances& tols, int max_threads) {
  require_bipartite(rho_joint, "compare_with_standard");
  ComparisonReport report;
  report.factor_dims = rho_joint.factor_dims();
  report.tolerance = tol;
  report.purity = purity(rho_joint);
  report.pure = is_pure(rho_joint, tols);
  report.ppt = ppt_check(rho_joint, 1, tols);

  const int d1 = rho_joint.factor_dims()[0];
  const int d2 = rho_joint.factor_dims()[1];
  const int dmin = std::min(d1, d2), dmax = std::max(d1, d2);
  report.ppt_conclusive = (dmin == 2 && dmax <= 3);
  if (report.ppt_conclusive)
    report.standard_separable = (report.ppt.verdict == PptVerdict::PPT);
  else if (report.ppt.verdict == PptVerdict::NPT)
    report.standard_separable = false;  // NPT is sufficient for entanglement

  HermitianEigen joint_eig = hermitian_eigen(rho_joint.matrix());
  if (report.pure) {
    CVector top = joint_eig.eigenvectors.col(0);
    top /= top.norm();
    report.schmidt_coefficients = schmidt(PureState(top, tols), d1, d2, tols).coefficients;
  }

  report.verdict = classify_entanglement(rho_joint, family, tol, tols, max_threads);

  // Report graph: the computational product basis plus the joint
  // eigenbasis, so certainty shows up both for product-basis outcomes and
  // for the state's own eigenprojectors.
  std::vector<Projector> nodes;
  std::vector<std::string> labels;
  const int d = rho_joint.dim();
  for (int i = 0; i < d; ++i) {
    CVector v = CVector::Zero(d);
    v(i) = 1.0;
    nodes.emplace_back(PureState(v, tols));
    labels.push_back("computational |" + std::to_string(i / d2) + std::to_string(i % d2) + ">");
  }
  for (int i = 0; i < d; ++i) {
    CVector v = joint_eig.eigenvectors.col(i);
    v /= v.norm();
    nodes.emplace_back(PureState(v, tols));
    labels.push_back("joint eigenvector " + std::to_string(i));
  }
  auto graph = std::make_shared<const powers::PowerGraph>(std::move(nodes), tols.commutation,
                                                          tols);
  report.report_graph_fingerprint = graph->fingerprint();
  const powers::Psa psa = powers::psa_from_state(rho_joint, graph, tols);
  for (std::size_t i = 0; i < graph->size(); ++i) {
    PsaTableRow row;
    row.node_index = i;
    row.fingerprint = to_hex(graph->node(i).fingerprint());
    row.potentia = psa.value(i);
    row.description = labels[i];
    report.psa_table.push_back(std::move(row));
    if (psa.value(i) >= 1.0 - tol) report.epr_certainty_nodes.push_back(i);
  }

  const char* cls = classification_name(report.verdict.classification);
  if (report.standard_separable.has_value()) {
    if (*report.standard_separable &&
        report.verdict.classification != Classification::Separable)
      report.divergences.push_back(std::string("standard-separable state classified ") + cls +
                                   " by the relational taxonomy");
    if (!*report.standard_separable &&
        report.verdict.classification == Classification::Separable)
      report.divergences.push_back(
          "standard-entangled (NPT) state classified Separable by the relational taxonomy");
  }
  return report;
}

}  // namespace logos::relations
