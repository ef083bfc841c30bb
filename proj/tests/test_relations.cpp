#include <numbers>

#include "doctest.h"
#include "logos/errors.hpp"
#include "logos/relations.hpp"
#include "test_helpers.hpp"

using namespace logos;
using namespace logos::powers;
using namespace logos::relations;
using namespace logos::testing;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
const double kTol = Tolerances{}.relation;

DensityOperator diag_state(std::vector<int> dims, std::vector<double> entries) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(entries.size()),
                            static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i)
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = entries[i];
  return DensityOperator(std::move(dims), std::move(m));
}

DensityOperator classical_corr() { return diag_state({2, 2}, {0.5, 0.0, 0.0, 0.5}); }

DensityOperator asym_product() {
  return tensor(diag_state({2}, {0.75, 0.25}), diag_state({2}, {0.5, 0.5}));
}

std::vector<PureState> computational_basis(int d) {
  std::vector<PureState> out;
  for (int i = 0; i < d; ++i) {
    CVector v = CVector::Zero(d);
    v(i) = 1.0;
    out.emplace_back(std::move(v));
  }
  return out;
}

ContextFamily small_family(const DensityOperator& rho, int haar = 6) {
  return default_context_family(rho, haar, 0xfeedbeef);
}

}  // namespace

TEST_CASE("intensive relation: equal reduced spectra") {
  CHECK(intensive_related(bell_state(), kTol).related);

  const auto ir = intensive_related(asym_product(), kTol);
  CHECK_FALSE(ir.related);
  CHECK(ir.witness.spectrum_left[0] == doctest::Approx(0.75));
  CHECK(ir.witness.spectrum_right[0] == doctest::Approx(0.5));

  for (std::uint64_t seed = 5; seed <= 9; ++seed) {
    const auto rho = random_density({2}, 2, seed);
    CHECK(intensive_related(tensor(rho, rho), kTol).related);
  }
}

TEST_CASE("intensive relation refuses unequal factor dimensions") {
  const auto rho = tensor(diag_state({2}, {0.5, 0.5}), diag_state({3}, {0.5, 0.3, 0.2}));
  const auto ir = intensive_related(rho, kTol);
  CHECK_FALSE(ir.related);
  CHECK(ir.witness.note.find("dimension") != std::string::npos);
}

TEST_CASE("finite intensive check: identity, multiset prefilter, relabeling") {
  auto graph = std::make_shared<const PowerGraph>(graph_from_vectors([] {
    auto v = computational_basis(2);
    CVector plus(2), minus(2);
    plus << kInvSqrt2, kInvSqrt2;
    minus << kInvSqrt2, -kInvSqrt2;
    v.emplace_back(plus);
    v.emplace_back(minus);
    return v;
  }()));
  const auto rho = random_density({2}, 2, 17);
  const auto psa = psa_from_state(rho, graph);

  const auto self = intensive_related_finite(psa, psa);
  REQUIRE(self.related);
  CHECK(*self.isomorphism == std::vector<std::size_t>{0, 1, 2, 3});

  // Different value multisets fail without search.
  CVector e0(2);
  e0 << 1, 0;
  const auto psa_other = psa_from_state(density_from_ket(PureState(e0)), graph);
  CHECK_FALSE(intensive_related_finite(psa, psa_other).related);

  // Unitarily relabeled graph: nodes U Pᵢ U†, state U ρ U†.
  const CMatrix u = haar_unitary(2, 4242);
  std::vector<Projector> rotated;
  for (std::size_t i = 0; i < graph->size(); ++i)
    rotated.emplace_back(CMatrix(u * graph->node(i).matrix() * u.adjoint()));
  auto graph2 = std::make_shared<const PowerGraph>(std::move(rotated));
  const DensityOperator rho2({2}, u * rho.matrix() * u.adjoint());
  const auto psa2 = psa_from_state(rho2, graph2);
  const auto res = intensive_related_finite(psa, psa2);
  REQUIRE(res.related);
  // Verify the witness really is a valuation-preserving isomorphism.
  const auto& map = *res.isomorphism;
  for (std::size_t i = 0; i < graph->size(); ++i) {
    CHECK(std::abs(psa.value(i) - psa2.value(map[i])) <= 1e-9);
    for (std::size_t j = 0; j < graph->size(); ++j)
      CHECK(graph->adjacent(i, j) == graph2->adjacent(map[i], map[j]));
  }
}

TEST_CASE("finite intensive check agrees with brute force on permuted graphs") {
  auto base_vectors = [] {
    std::vector<PureState> v = computational_basis(2);
    for (auto& h : random_haar_basis(2, 31)) v.push_back(h);
    return v;
  }();
  auto g1 = std::make_shared<const PowerGraph>(graph_from_vectors(base_vectors));
  const std::vector<std::size_t> perm = {2, 0, 3, 1};
  std::vector<PureState> permuted;
  for (std::size_t i : perm) permuted.push_back(base_vectors[i]);
  auto g2 = std::make_shared<const PowerGraph>(graph_from_vectors(permuted));

  const auto rho = random_density({2}, 3, 55);
  const auto psa1 = psa_from_state(rho, g1);
  const auto psa2 = psa_from_state(rho, g2);
  const auto res = intensive_related_finite(psa1, psa2);
  REQUIRE(res.related);

  // Brute-force oracle over all 4! maps.
  std::vector<std::size_t> idx = {0, 1, 2, 3};
  bool oracle_found = false;
  std::sort(idx.begin(), idx.end());
  do {
    bool ok = true;
    for (std::size_t i = 0; i < 4 && ok; ++i) {
      if (std::abs(psa1.value(i) - psa2.value(idx[i])) > 1e-9) ok = false;
      for (std::size_t j = 0; j < 4 && ok; ++j)
        if (g1->adjacent(i, j) != g2->adjacent(idx[i], idx[j])) ok = false;
    }
    if (ok) oracle_found = true;
  } while (std::next_permutation(idx.begin(), idx.end()));
  CHECK(oracle_found == res.related);
}

TEST_CASE("correlated partner context: bell state pairings") {
  // Conditioning ρ_ent on |0⟩/|1⟩ gives conditionals |0⟩⟨0| and |1⟩⟨1|.
  const auto partner = correlated_partner_context(bell_state(), computational_basis(2), kTol);
  REQUIRE(partner.has_value());
  CHECK((*partner)[0].approx_equal(computational_basis(2)[0], 1e-7));
  CHECK((*partner)[1].approx_equal(computational_basis(2)[1], 1e-7));

  CVector plus(2), minus(2);
  plus << kInvSqrt2, kInvSqrt2;
  minus << kInvSqrt2, -kInvSqrt2;
  const auto conj_partner =
      correlated_partner_context(bell_state(), {PureState(plus), PureState(minus)}, kTol);
  REQUIRE(conj_partner.has_value());
  // For the corner state the conjugate pairing is the same real basis.
  CHECK((*conj_partner)[0].approx_equal(PureState(plus), 1e-7));
  CHECK((*conj_partner)[1].approx_equal(PureState(minus), 1e-7));
}

TEST_CASE("correlated partner context: identical conditionals fail") {
  CVector plus(2), e0(2);
  plus << kInvSqrt2, kInvSqrt2;
  e0 << 1, 0;
  const auto rho = tensor(density_from_ket(PureState(plus)), density_from_ket(PureState(e0)));
  // σ₀ = σ₁ = |0⟩⟨0|: pure but not orthogonal.
  CHECK_FALSE(correlated_partner_context(rho, computational_basis(2), kTol).has_value());

  // The |±⟩ basis is deterministic on side 1 and therefore vacuously
  // correlated.
  CVector minus(2);
  minus << kInvSqrt2, -kInvSqrt2;
  CHECK(correlated_partner_context(rho, {PureState(plus), PureState(minus)}, kTol).has_value());

  // Non-resolving side-1 context is rejected.
  CHECK_THROWS_AS(
      correlated_partner_context(rho, {PureState(plus), PureState(plus)}, kTol),
      ValidationError);
}

TEST_CASE("effective relation across a family") {
  const auto bell_family = small_family(bell_state());
  const auto eff_bell = effective_related(bell_state(), bell_family, kTol);
  CHECK(eff_bell.related);
  REQUIRE(eff_bell.analytic_equal_schmidt.has_value());
  CHECK(*eff_bell.analytic_equal_schmidt);
  CHECK(*eff_bell.analytic_agrees);

  // Classically correlated mixture: the computational basis passes, a Haar
  // basis fails (mixed conditionals).
  const auto corr = classical_corr();
  const auto corr_family = small_family(corr);
  const auto eff_corr = effective_related(corr, corr_family, kTol);
  CHECK_FALSE(eff_corr.related);
  CHECK(eff_corr.partners[0].has_value());  // canonical entry
  REQUIRE(eff_corr.first_failure.has_value());
  bool haar_failed = false;
  for (std::size_t i = 0; i < corr_family.size(); ++i)
    if (corr_family.entries()[i].provenance == BasisProvenance::Haar &&
        !eff_corr.partners[i].has_value())
      haar_failed = true;
  CHECK(haar_failed);

  // Products of mixed factors fail everywhere the distribution is spread.
  for (std::uint64_t seed = 91; seed <= 94; ++seed) {
    const auto prod = tensor(random_density({2}, 2, seed), random_density({2}, 2, seed + 7));
    CHECK_FALSE(effective_related(prod, small_family(prod), kTol).related);
  }

  CHECK_THROWS_AS(effective_related(bell_state(), ContextFamily({}), kTol), ValidationError);
}

TEST_CASE("effective relation is deterministic across thread counts") {
  const auto corr = classical_corr();
  const auto family = small_family(corr);
  const auto seq = effective_related(corr, family, kTol, Tolerances{}, 1);
  const auto par = effective_related(corr, family, kTol, Tolerances{}, 4);
  CHECK(seq.related == par.related);
  REQUIRE(seq.first_failure.has_value());
  REQUIRE(par.first_failure.has_value());
  CHECK(*seq.first_failure == *par.first_failure);
  for (std::size_t i = 0; i < family.size(); ++i)
    CHECK(seq.partners[i].has_value() == par.partners[i].has_value());
}

TEST_CASE("classification triple") {
  const auto bell = bell_state();
  CHECK(classify_entanglement(bell, small_family(bell), kTol).classification ==
        Classification::Strong);

  const auto corr = classical_corr();
  const auto corr_verdict = classify_entanglement(corr, small_family(corr), kTol);
  CHECK(corr_verdict.classification == Classification::Weak);
  CHECK(corr_verdict.intensive.related);
  CHECK_FALSE(corr_verdict.effective.related);

  const auto prod = asym_product();
  CHECK(classify_entanglement(prod, small_family(prod), kTol).classification ==
        Classification::Separable);
}

TEST_CASE("effective implies intensive on random mixtures") {
  for (std::uint64_t seed = 200; seed < 260; ++seed) {
    const auto rho = random_density({2, 2}, 1 + static_cast<int>(seed % 4), seed);
    const auto family = small_family(rho);
    const auto eff = effective_related(rho, family, kTol);
    if (eff.related) CHECK(intensive_related(rho, kTol).related);
  }
}

TEST_CASE("pure states: sampled effective matches the Schmidt criterion") {
  for (std::uint64_t seed = 300; seed < 312; ++seed) {
    const auto psi = random_pure(4, seed);
    const auto rho = density_from_ket(psi, {2, 2});
    const auto eff = effective_related(rho, small_family(rho), kTol);
    REQUIRE(eff.analytic_equal_schmidt.has_value());
    CHECK(*eff.analytic_agrees);
  }
}

TEST_CASE("classification is invariant under covariant local unitaries") {
  for (std::uint64_t seed = 400; seed < 406; ++seed) {
    const auto rho = random_density({2, 2}, 2, seed);
    const auto family = small_family(rho);
    const CMatrix u = haar_unitary(2, derive_seed(seed, 1));
    const CMatrix v = haar_unitary(2, derive_seed(seed, 2));
    const CMatrix uv = kron(u, v);
    const DensityOperator rotated({2, 2}, uv * rho.matrix() * uv.adjoint());

    std::vector<FamilyBasis> mapped;
    for (const auto& entry : family.entries()) {
      FamilyBasis fb;
      fb.provenance = entry.provenance;
      fb.seed = entry.seed;
      for (const auto& vec : entry.vectors) fb.vectors.emplace_back(CVector(u * vec.amplitudes()));
      mapped.push_back(std::move(fb));
    }
    const ContextFamily family_rotated(std::move(mapped));

    const auto a = classify_entanglement(rho, family, kTol);
    const auto b = classify_entanglement(rotated, family_rotated, kTol);
    CHECK(a.classification == b.classification);
  }
}

TEST_CASE("unequal factor dimensions classify as separable, implication intact") {
  // 2⊗3 embedding of the corner state: intensive is ruled out by dimension,
  // and an outcome bijection cannot exist either.
  CVector psi = CVector::Zero(6);
  psi(0) = kInvSqrt2;   // |0⟩|0⟩
  psi(4) = kInvSqrt2;   // |1⟩|1⟩
  const auto rho = density_from_ket(PureState(psi), {2, 3});
  const auto verdict = classify_entanglement(rho, small_family(rho), kTol);
  CHECK_FALSE(verdict.intensive.related);
  CHECK_FALSE(verdict.effective.related);
  CHECK(verdict.classification == Classification::Separable);
}

TEST_CASE("comparison report: bell state") {
  const auto bell = bell_state();
  const auto report = compare_with_standard(bell, small_family(bell), kTol);
  CHECK(report.purity == doctest::Approx(1.0));
  CHECK(report.pure);
  CHECK(report.ppt.verdict == PptVerdict::NPT);
  CHECK(report.ppt.min_eigenvalue == doctest::Approx(-0.5));
  CHECK(report.ppt_conclusive);
  REQUIRE(report.standard_separable.has_value());
  CHECK_FALSE(*report.standard_separable);
  REQUIRE(report.schmidt_coefficients.has_value());
  CHECK((*report.schmidt_coefficients)[0] == doctest::Approx(kInvSqrt2));
  CHECK((*report.schmidt_coefficients)[1] == doctest::Approx(kInvSqrt2));
  CHECK(report.verdict.classification == Classification::Strong);
  CHECK(report.divergences.empty());
  // The joint eigenprojector of a pure state is an EPR-certainty node.
  CHECK_FALSE(report.epr_certainty_nodes.empty());
  CHECK(report.psa_table.size() == 8);
}

TEST_CASE("comparison report: divergence on tensor squares") {
  const auto rho = diag_state({2}, {0.75, 0.25});
  const auto prod = tensor(rho, rho);
  const auto report = compare_with_standard(prod, small_family(prod), kTol);
  CHECK(report.ppt.verdict == PptVerdict::PPT);
  REQUIRE(report.standard_separable.has_value());
  CHECK(*report.standard_separable);
  CHECK(report.verdict.classification == Classification::Weak);
  REQUIRE_FALSE(report.divergences.empty());
  CHECK(report.divergences[0].find("standard-separable") != std::string::npos);
  CHECK(report.divergences[0].find("Weak") != std::string::npos);
}

TEST_CASE("comparison report: the paper's separable construction stays PPT") {
  // 1/3 (all-half ⊗ all-half) + 2/3 (all-half ⊗ all-half) with every
  // amplitude 1/√2: the all-quarter matrix.
  CVector plus(2);
  plus << kInvSqrt2, kInvSqrt2;
  const auto component = tensor(density_from_ket(PureState(plus)),
                                density_from_ket(PureState(plus)));
  const auto sep = convex_mix({{1.0 / 3.0, component}, {2.0 / 3.0, component}});
  const auto report = compare_with_standard(sep, small_family(sep), kTol);
  CHECK(report.ppt.verdict == PptVerdict::PPT);
  REQUIRE(report.standard_separable.has_value());
  CHECK(*report.standard_separable);
}
