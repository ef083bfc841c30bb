#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "logos/matrix.hpp"
#include "logos/tolerances.hpp"

namespace logos {

// Normalized state vector. Equality is defined up to global phase; the
// canonical form makes the first non-negligible amplitude real positive.
class PureState {
 public:
  explicit PureState(CVector amplitudes, const Tolerances& tol = {});

  int dim() const { return static_cast<int>(amp_.size()); }
  const CVector& amplitudes() const { return amp_; }
  CVector canonical() const;
  bool approx_equal(const PureState& other, double tol) const;

 private:
  CVector amp_;
};

// Hermitian idempotent. The rank-1 constructor covers the graph nodes; the
// matrix constructor validates and records the rank.
class Projector {
 public:
  explicit Projector(const PureState& axis);
  Projector(CMatrix m, const Tolerances& tol = {});

  int dim() const { return static_cast<int>(m_.rows()); }
  int rank() const { return rank_; }
  const CMatrix& matrix() const { return m_; }
  std::uint64_t fingerprint() const { return matrix_fingerprint(m_); }

 private:
  CMatrix m_;
  int rank_;
};

// Hermitian, positive semidefinite, trace-1 operator on a factored space.
class DensityOperator {
 public:
  DensityOperator(std::vector<int> factor_dims, CMatrix m, const Tolerances& tol = {});

  int dim() const { return static_cast<int>(m_.rows()); }
  const std::vector<int>& factor_dims() const { return dims_; }
  const CMatrix& matrix() const { return m_; }

 private:
  std::vector<int> dims_;
  CMatrix m_;
};

struct SchmidtDecomposition {
  std::vector<double> coefficients;  // non-negative, descending, Σ c² = 1
  std::vector<CVector> left_basis;
  std::vector<CVector> right_basis;
};

struct WeightedState {
  double weight;
  DensityOperator state;
};

enum class PptVerdict { PPT, NPT };

struct PptResult {
  PptVerdict verdict;
  double min_eigenvalue;
};

// v v† as a density operator. `factor_dims` defaults to the single factor
// {dim}.
DensityOperator density_from_ket(const PureState& v, std::vector<int> factor_dims = {},
                                 const Tolerances& tol = {});

// Tr(ρ²) ∈ (0, 1].
double purity(const DensityOperator& rho);
bool is_pure(const DensityOperator& rho, const Tolerances& tol = {});

// Kronecker product; factor lists concatenate.
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b,
                       const Tolerances& tol = {});

// Σ tᵢ ρᵢ with tᵢ ≥ 0 summing to 1.
DensityOperator convex_mix(const std::vector<WeightedState>& parts, const Tolerances& tol = {});

// The maximally entangled two-qubit state (½ at the four corners).
DensityOperator bell_state();

// Reduced state on factor `keep` (0-based), all other factors traced out.
DensityOperator partial_trace(const DensityOperator& rho, int keep, const Tolerances& tol = {});

// v = Σ λᵢ |lᵢ⟩|rᵢ⟩ for the split dim_left · dim_right.
SchmidtDecomposition schmidt(const PureState& v, int dim_left, int dim_right,
                             const Tolerances& tol = {});

// Partial transpose on the factors after `split_after`, then eigenvalue
// scan. NPT iff the minimum eigenvalue is below -tol.psd.
PptResult ppt_check(const DensityOperator& rho, int split_after = 1, const Tolerances& tol = {});

// Tr(ρP), clamped to [0,1] when within tol.psd of the boundary; larger
// excursions raise a validation error.
double born(const DensityOperator& rho, const Projector& p, const Tolerances& tol = {});

// Orthonormal basis drawn from the unitarily invariant distribution
// (Ginibre + QR with phase fixing). Deterministic per seed.
std::vector<PureState> random_haar_basis(int dim, std::uint64_t seed);

// ½ ||a - b||₁ (diagnostic metric used by reconstruction checks).
double trace_distance(const DensityOperator& a, const DensityOperator& b);

}  // namespace logos
