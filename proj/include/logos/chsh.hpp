#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "logos/states.hpp"
#include "logos/tolerances.hpp"

namespace logos::bell {

// Hermitian observable with spectrum {+1, -1} (equivalently M² = I).
class DichotomicObservable {
 public:
  explicit DichotomicObservable(CMatrix m, const Tolerances& tol = {});

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }

 private:
  CMatrix m_;
};

struct ChshSetting {
  DichotomicObservable a0, a1;  // side 1
  DichotomicObservable b0, b1;  // side 2
};

// S = |E(A0,B0) + E(A0,B1) + E(A1,B0) - E(A1,B1)| with E(A,B) = Tr(ρ (A⊗B)).
double chsh_value(const DensityOperator& rho, const ChshSetting& s, const Tolerances& tol = {});

struct BoundCheck {
  bool violates;              // S exceeds the classical bound 2
  double margin;              // S - 2
  double tsirelson_headroom;  // 2√2 - S
};

BoundCheck classical_bound_check(double s, double bound_tol = Tolerances{}.chsh_bound);

struct OptimalChsh {
  double s_grid;     // coarse grid + coordinate-descent refinement
  double s_formula;  // 2·sqrt(t1² + t2²) from the correlation matrix
  ChshSetting setting;
};

// Maximum CHSH value of a 2⊗2 state, computed two ways that must agree:
// a numerical angle search and the closed form from the two largest
// singular values of T_ij = Tr(ρ σᵢ⊗σⱼ).
OptimalChsh optimal_chsh(const DensityOperator& rho, const Tolerances& tol = {});

// Z, X on side 1; (Z±X)/√2 on side 2 — the setting that is optimal for the
// maximally entangled two-qubit state.
ChshSetting canonical_setting();

// Per-setting joint outcome counts of a simulated run. Settings are indexed
// A0B0, A0B1, A1B0, A1B1; outcomes ++, +-, -+, --.
struct RunStatistics {
  std::array<std::array<std::uint64_t, 4>, 4> counts{};
  std::uint64_t shots = 0;  // per setting
  std::uint64_t seed = 0;

  std::array<double, 4> empirical_correlations() const;
  double empirical_chsh() const;
};

extern const std::array<const char*, 4> kSettingNames;
extern const std::array<const char*, 4> kOutcomeNames;

// Samples `shots` joint outcomes per setting from the Born joint
// distribution. Shots are generated in fixed-size chunks with derived
// per-chunk seeds; counts merge commutatively, so the result is
// independent of chunk scheduling and identical for identical seeds.
RunStatistics simulate_epr_run(const DensityOperator& rho, const ChshSetting& s,
                               std::uint64_t shots, std::uint64_t seed,
                               const Tolerances& tol = {});

}  // namespace logos::bell
