#include "logos/chsh.hpp"

#include <cmath>
#include <numbers>

#include "logos/errors.hpp"
#include "logos/hermitian_eig.hpp"
#include "logos/rng.hpp"

namespace logos::bell {

namespace {

const CMatrix& pauli(int i) {
  static const std::array<CMatrix, 3> sigma = [] {
    std::array<CMatrix, 3> s;
    s[0] = CMatrix(2, 2);
    s[0] << 0, 1, 1, 0;
    s[1] = CMatrix(2, 2);
    s[1] << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    s[2] = CMatrix(2, 2);
    s[2] << 1, 0, 0, -1;
    return s;
  }();
  return sigma[static_cast<std::size_t>(i)];
}

CMatrix bloch_observable(double theta, double phi) {
  return std::sin(theta) * std::cos(phi) * pauli(0) +
         std::sin(theta) * std::sin(phi) * pauli(1) + std::cos(theta) * pauli(2);
}

double correlation(const DensityOperator& rho, const CMatrix& a, const CMatrix& b) {
  return (rho.matrix() * kron(a, b)).trace().real();
}

void require_22(const DensityOperator& rho, const char* op) {
  if (rho.factor_dims() != std::vector<int>{2, 2})
    throw ValidationError(std::string(op) + " needs a 2⊗2 state");
}

}  // namespace

DichotomicObservable::DichotomicObservable(CMatrix m, const Tolerances& tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("observable matrix is not square");
  if (!m_.allFinite()) throw ValidationError("observable contains non-finite entries");
  const double herm = hermiticity_defect(m_);
  if (herm > tol.herm)
    throw ValidationError("observable is not Hermitian: defect = " + std::to_string(herm));
  const double invol = (m_ * m_ - CMatrix::Identity(m_.rows(), m_.cols())).norm();
  if (invol > tol.idem)
    throw ValidationError("observable is not dichotomic: ||M² - I|| = " + std::to_string(invol));
}

double chsh_value(const DensityOperator& rho, const ChshSetting& s, const Tolerances& tol) {
  const auto& dims = rho.factor_dims();
  if (dims.size() != 2) throw ValidationError("chsh_value needs a bipartite state");
  if (s.a0.dim() != dims[0] || s.a1.dim() != dims[0] || s.b0.dim() != dims[1] ||
      s.b1.dim() != dims[1])
    throw ValidationError("chsh_value: observable dimensions do not match the state split");
  (void)tol;
  const double e00 = correlation(rho, s.a0.matrix(), s.b0.matrix());
  const double e01 = correlation(rho, s.a0.matrix(), s.b1.matrix());
  const double e10 = correlation(rho, s.a1.matrix(), s.b0.matrix());
  const double e11 = correlation(rho, s.a1.matrix(), s.b1.matrix());
  return std::abs(e00 + e01 + e10 - e11);
}

BoundCheck classical_bound_check(double s, double bound_tol) {
  if (s < 0.0) throw ValidationError("classical_bound_check needs S >= 0");
  BoundCheck out;
  out.violates = s > 2.0 + bound_tol;
  out.margin = s - 2.0;
  out.tsirelson_headroom = 2.0 * std::numbers::sqrt2 - s;
  return out;
}

ChshSetting canonical_setting() {
  const double r = 1.0 / std::numbers::sqrt2;
  return ChshSetting{DichotomicObservable(pauli(2)), DichotomicObservable(pauli(0)),
                     DichotomicObservable(r * (pauli(2) + pauli(0))),
                     DichotomicObservable(r * (pauli(2) - pauli(0)))};
}

namespace {

// The search runs over the Bloch parametrization: S(angles) factors through
// the 3×3 correlation matrix, which keeps an evaluation at ~30 flops.
struct AngleObjective {
  Eigen::Matrix3d t;

  static Eigen::Vector3d unit(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }

  double operator()(const std::array<double, 8>& angles) const {
    const Eigen::Vector3d a0 = unit(angles[0], angles[1]);
    const Eigen::Vector3d a1 = unit(angles[2], angles[3]);
    const Eigen::Vector3d b0 = unit(angles[4], angles[5]);
    const Eigen::Vector3d b1 = unit(angles[6], angles[7]);
    return std::abs(a0.dot(t * (b0 + b1)) + a1.dot(t * (b0 - b1)));
  }
};

constexpr int kGridPoints = 64;
constexpr double kStepFloor = 1e-8;
constexpr int kRestarts = 16;
constexpr int kMaxSweeps = 200;

double coordinate_descent(const AngleObjective& f, std::array<double, 8>& angles) {
  double best = f(angles);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double before = best;
    for (int c = 0; c < 8; ++c) {
      const bool is_theta = c % 2 == 0;
      const double range = is_theta ? std::numbers::pi : 2.0 * std::numbers::pi;
      // Coarse grid over the full coordinate range.
      double x = angles[c];
      for (int k = 0; k < kGridPoints; ++k) {
        const double cand = range * k / kGridPoints;
        angles[c] = cand;
        const double v = f(angles);
        if (v > best) {
          best = v;
          x = cand;
        }
      }
      angles[c] = x;
      // Local refinement with halving steps.
      for (double step = range / kGridPoints; step > kStepFloor; step /= 2.0) {
        for (double cand : {x - step, x + step}) {
          angles[c] = cand;
          const double v = f(angles);
          if (v > best) {
            best = v;
            x = cand;
          }
        }
        angles[c] = x;
      }
    }
    if (best - before < 1e-13) break;
  }
  return best;
}

}  // namespace

OptimalChsh optimal_chsh(const DensityOperator& rho, const Tolerances& tol) {
  require_22(rho, "optimal_chsh");

  AngleObjective f;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) f.t(i, j) = correlation(rho, pauli(i), pauli(j));

  std::array<double, 8> best_angles{};
  double best = -1.0;
  Rng rng(0x5eedcafeull);
  for (int r = 0; r < kRestarts; ++r) {
    std::array<double, 8> angles;
    if (r == 0) {
      // Canonical start: Z/X on side 1, diagonal directions on side 2.
      angles = {0.0, 0.0, std::numbers::pi / 2, 0.0, std::numbers::pi / 4, 0.0,
                3 * std::numbers::pi / 4, 0.0};
    } else {
      for (int c = 0; c < 8; ++c)
        angles[static_cast<std::size_t>(c)] =
            (c % 2 == 0 ? std::numbers::pi : 2 * std::numbers::pi) * rng.uniform();
    }
    const double v = coordinate_descent(f, angles);
    if (v > best) {
      best = v;
      best_angles = angles;
    }
  }

  OptimalChsh out{
      0.0, 0.0,
      ChshSetting{DichotomicObservable(bloch_observable(best_angles[0], best_angles[1]), tol),
                  DichotomicObservable(bloch_observable(best_angles[2], best_angles[3]), tol),
                  DichotomicObservable(bloch_observable(best_angles[4], best_angles[5]), tol),
                  DichotomicObservable(bloch_observable(best_angles[6], best_angles[7]), tol)}};
  // Evaluate the winning setting through the full trace route rather than
  // trusting the Bloch-space objective.
  out.s_grid = chsh_value(rho, out.setting, tol);

  const RVector sv = singular_values(f.t);
  out.s_formula = 2.0 * std::sqrt(sv(0) * sv(0) + sv(1) * sv(1));
  return out;
}

const std::array<const char*, 4> kSettingNames = {"A0B0", "A0B1", "A1B0", "A1B1"};
const std::array<const char*, 4> kOutcomeNames = {"++", "+-", "-+", "--"};

std::array<double, 4> RunStatistics::empirical_correlations() const {
  std::array<double, 4> e{};
  for (std::size_t s = 0; s < 4; ++s) {
    const auto& c = counts[s];
    const double n = static_cast<double>(shots);
    e[s] = (static_cast<double>(c[0]) - static_cast<double>(c[1]) -
            static_cast<double>(c[2]) + static_cast<double>(c[3])) /
           n;
  }
  return e;
}

double RunStatistics::empirical_chsh() const {
  const auto e = empirical_correlations();
  return std::abs(e[0] + e[1] + e[2] - e[3]);
}

RunStatistics simulate_epr_run(const DensityOperator& rho, const ChshSetting& s,
                               std::uint64_t shots, std::uint64_t seed, const Tolerances& tol) {
  const auto& dims = rho.factor_dims();
  if (dims.size() != 2) throw ValidationError("simulate_epr_run needs a bipartite state");
  if (shots < 1) throw ValidationError("simulate_epr_run needs shots >= 1");

  const std::array<const DichotomicObservable*, 2> aside = {&s.a0, &s.a1};
  const std::array<const DichotomicObservable*, 2> bside = {&s.b0, &s.b1};

  RunStatistics stats;
  stats.shots = shots;
  stats.seed = seed;

  constexpr std::uint64_t kChunk = 4096;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      // Joint Born distribution over (±1, ±1) for this setting, from the
      // observables' spectral projectors onto the +1/-1 eigenspaces.
      HermitianEigen ea = hermitian_eigen(aside[static_cast<std::size_t>(x)]->matrix());
      HermitianEigen eb = hermitian_eigen(bside[static_cast<std::size_t>(y)]->matrix());
      const int da = dims[0], db = dims[1];
      CMatrix pa_plus = CMatrix::Zero(da, da), pb_plus = CMatrix::Zero(db, db);
      for (int i = 0; i < da; ++i)
        if (ea.eigenvalues(i) > 0)
          pa_plus += ea.eigenvectors.col(i) * ea.eigenvectors.col(i).adjoint();
      for (int i = 0; i < db; ++i)
        if (eb.eigenvalues(i) > 0)
          pb_plus += eb.eigenvectors.col(i) * eb.eigenvectors.col(i).adjoint();
      const CMatrix pa_minus = CMatrix::Identity(da, da) - pa_plus;
      const CMatrix pb_minus = CMatrix::Identity(db, db) - pb_plus;

      std::array<double, 4> probs{};
      const std::array<const CMatrix*, 2> pa = {&pa_plus, &pa_minus};
      const std::array<const CMatrix*, 2> pb = {&pb_plus, &pb_minus};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double p = (rho.matrix() * kron(*pa[static_cast<std::size_t>(a)],
                                          *pb[static_cast<std::size_t>(b)]))
                         .trace()
                         .real();
          probs[static_cast<std::size_t>(a * 2 + b)] = std::max(p, 0.0);
        }

      const std::size_t setting = static_cast<std::size_t>(x * 2 + y);
      std::uint64_t remaining = shots;
      std::uint64_t chunk_index = 0;
      while (remaining > 0) {
        const std::uint64_t batch = std::min(kChunk, remaining);
        Rng rng(derive_seed(seed, (static_cast<std::uint64_t>(setting) << 32) | chunk_index));
        for (std::uint64_t i = 0; i < batch; ++i)
          ++stats.counts[setting][rng.sample_discrete(probs)];
        remaining -= batch;
        ++chunk_index;
      }
    }
  (void)tol;
  return stats;
}

}  // namespace logos::bell
