#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logos/psa.hpp"
#include "logos/states.hpp"
#include "logos/tolerances.hpp"

namespace logos::relations {

enum class BasisProvenance { CanonicalComputational, ReducedEigenbasis, Fourier, Haar };

const char* provenance_name(BasisProvenance p);

struct FamilyBasis {
  std::vector<PureState> vectors;  // orthonormal, resolves identity on side 1
  BasisProvenance provenance;
  std::uint64_t seed = 0;  // meaningful for Haar entries
};

// Finite stand-in for the universal quantifier over side-1 contexts. Every
// verdict derived from a family is stamped with its fingerprint.
class ContextFamily {
 public:
  ContextFamily(std::vector<FamilyBasis> entries, const Tolerances& tol = {});

  const std::vector<FamilyBasis>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::string fingerprint() const { return fingerprint_; }

 private:
  std::vector<FamilyBasis> entries_;
  std::string fingerprint_;
};

inline constexpr std::uint64_t kDefaultFamilySeed = 0x1057a11u;

// Default family: canonical computational + eigenbasis of the side-1
// reduced state + Fourier + `haar_count` seeded bases.
ContextFamily default_context_family(const DensityOperator& rho_joint, int haar_count = 20,
                                     std::uint64_t seed = kDefaultFamilySeed,
                                     const Tolerances& tol = {});

struct IntensiveWitness {
  std::vector<double> spectrum_left;   // descending
  std::vector<double> spectrum_right;  // descending
  // matching[i] = index into the right spectrum paired with left value i
  // (identity when related, since both are sorted).
  std::vector<std::size_t> matching;
  std::string note;
};

struct IntensiveResult {
  bool related = false;
  IntensiveWitness witness;
};

// Spectral criterion: the reduced states have equal spectra iff a unitary
// maps one onto the other, and conjugation by that unitary is a
// valuation-preserving isomorphism of the full power graphs.
IntensiveResult intensive_related(const DensityOperator& rho_joint, double tol,
                                  const Tolerances& tols = {});

struct FiniteIntensiveResult {
  bool related = false;
  std::optional<std::vector<std::size_t>> isomorphism;  // node map G1 -> G2
};

// Exact backtracking check on finite sampled graphs: adjacency preserved
// both ways and values matched within value_tol.
FiniteIntensiveResult intensive_related_finite(const powers::Psa& a, const powers::Psa& b,
                                               double value_tol = Tolerances{}.value_match);

// For a side-1 basis, the side-2 basis its outcomes are perfectly
// (anti)correlated with, if one exists: every significant conditional state
// must be pure and the conditionals pairwise orthogonal. A deterministic
// side-1 distribution is vacuously correlated and returns a completion
// basis (the dominant conditional's eigenbasis).
std::optional<std::vector<PureState>> correlated_partner_context(
    const DensityOperator& rho_joint, const std::vector<PureState>& side1_basis, double tol,
    const Tolerances& tols = {});

struct EffectiveCertificate {
  bool related = false;
  // Aligned with the family entries; an entry is set iff a partner exists.
  std::vector<std::optional<std::vector<PureState>>> partners;
  std::optional<std::size_t> first_failure;  // family index
  std::string note;
  // For bipartite pure inputs: the analytic equal-Schmidt-coefficient
  // criterion, and whether the sampled answer agrees with it.
  std::optional<bool> analytic_equal_schmidt;
  std::optional<bool> analytic_agrees;
};

// True iff every family member has a correlated partner context. Family
// members are independent and may be checked concurrently (`max_threads`);
// the verdict and certificate are order-independent.
EffectiveCertificate effective_related(const DensityOperator& rho_joint,
                                       const ContextFamily& family, double tol,
                                       const Tolerances& tols = {}, int max_threads = 1);

enum class Classification { Strong, Weak, Separable };

const char* classification_name(Classification c);

struct RelationVerdict {
  IntensiveResult intensive;
  EffectiveCertificate effective;
  Classification classification;
  std::string family_fingerprint;
  double tolerance;
};

// Strong iff intensive ∧ effective; Weak iff intensive ∧ ¬effective;
// Separable iff neither. The remaining cell contradicts the implication
// "effectively related ⇒ intensively related" and raises std::logic_error.
RelationVerdict classify_entanglement(const DensityOperator& rho_joint,
                                      const ContextFamily& family, double tol,
                                      const Tolerances& tols = {}, int max_threads = 1);

struct PsaTableRow {
  std::size_t node_index;
  std::string fingerprint;
  double potentia;
  std::string description;
};

struct ComparisonReport {
  std::vector<int> factor_dims;
  double purity = 0.0;
  bool pure = false;
  PptResult ppt{PptVerdict::PPT, 0.0};
  bool ppt_conclusive = false;  // dims 2x2 / 2x3 / 3x2 only
  std::optional<bool> standard_separable;
  std::optional<std::vector<double>> schmidt_coefficients;  // pure states only
  RelationVerdict verdict;
  // Certainty-based prediction: nodes of the report graph with potentia 1.
  std::vector<std::size_t> epr_certainty_nodes;
  // Probabilistic prediction: the full PSA table over the report graph
  // (computational product basis + eigenbasis of the joint state).
  std::vector<PsaTableRow> psa_table;
  std::string report_graph_fingerprint;
  std::vector<std::string> divergences;
  double tolerance = 0.0;
};

// Orthodox diagnostics (purity, PPT, Schmidt) side by side with the
// relational classification; divergences between the two taxonomies are
// flagged, never normalized away.
ComparisonReport compare_with_standard(const DensityOperator& rho_joint,
                                       const ContextFamily& family, double tol,
                                       const Tolerances& tols = {}, int max_threads = 1);

}  // namespace logos::relations
