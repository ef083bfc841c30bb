#include "logos/states.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "logos/errors.hpp"
#include "logos/hermitian_eig.hpp"
#include "logos/rng.hpp"

namespace logos {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void require_finite(const CMatrix& m, const char* what) {
  if (!m.allFinite())
    throw ValidationError(std::string(what) + " contains non-finite entries");
}

}  // namespace

PureState::PureState(CVector amplitudes, const Tolerances& tol) : amp_(std::move(amplitudes)) {
  if (amp_.size() == 0) throw ValidationError("state vector is empty");
  if (!amp_.allFinite()) throw ValidationError("state vector contains non-finite entries");
  const double defect = std::abs(amp_.norm() - 1.0);
  if (defect > tol.norm)
    throw ValidationError("state vector is not normalized: |norm - 1| = " + fmt(defect));
}

CVector PureState::canonical() const {
  CVector v = amp_;
  const double cutoff = 1e-12 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > cutoff) {
      v *= std::conj(v(i)) / mag;
      break;
    }
  }
  return v;
}

bool PureState::approx_equal(const PureState& other, double tol) const {
  if (dim() != other.dim()) return false;
  return (canonical() - other.canonical()).norm() <= tol;
}

Projector::Projector(const PureState& axis)
    : m_(axis.amplitudes() * axis.amplitudes().adjoint()), rank_(1) {}

Projector::Projector(CMatrix m, const Tolerances& tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("projector matrix is not square");
  require_finite(m_, "projector matrix");
  const double herm = hermiticity_defect(m_);
  if (herm > tol.herm)
    throw ValidationError("projector is not Hermitian: defect = " + fmt(herm));
  const double idem = (m_ * m_ - m_).norm();
  if (idem > tol.idem)
    throw ValidationError("projector is not idempotent: ||P² - P|| = " + fmt(idem));
  rank_ = static_cast<int>(std::lround(m_.trace().real()));
}

DensityOperator::DensityOperator(std::vector<int> factor_dims, CMatrix m, const Tolerances& tol)
    : dims_(std::move(factor_dims)), m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw ValidationError("density matrix is not square: " + std::to_string(m_.rows()) + "x" +
                          std::to_string(m_.cols()));
  require_finite(m_, "density matrix");
  if (dims_.empty()) dims_ = {static_cast<int>(m_.rows())};
  long prod = 1;
  for (int d : dims_) {
    if (d < 1) throw ValidationError("factor_dims entries must be positive");
    prod *= d;
  }
  if (prod != m_.rows())
    throw ValidationError("factor_dims product " + std::to_string(prod) +
                          " does not match matrix dimension " + std::to_string(m_.rows()));
  const double herm = hermiticity_defect(m_);
  if (herm > tol.herm)
    throw ValidationError("density matrix is not Hermitian: defect = " + fmt(herm));
  const double tr_defect = std::abs(m_.trace().real() - 1.0);
  if (tr_defect > tol.trace)
    throw ValidationError("density matrix trace deviates from 1 by " + fmt(tr_defect));
  const RVector evals = hermitian_eigenvalues(m_);
  const double min_eval = evals(evals.size() - 1);
  if (min_eval < -tol.psd)
    throw ValidationError("density matrix is not positive semidefinite: min eigenvalue = " +
                          fmt(min_eval));
}

DensityOperator density_from_ket(const PureState& v, std::vector<int> factor_dims,
                                 const Tolerances& tol) {
  if (factor_dims.empty()) factor_dims = {v.dim()};
  return DensityOperator(std::move(factor_dims), v.amplitudes() * v.amplitudes().adjoint(), tol);
}

double purity(const DensityOperator& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

bool is_pure(const DensityOperator& rho, const Tolerances& tol) {
  return purity(rho) >= 1.0 - tol.trace;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b,
                       const Tolerances& tol) {
  std::vector<int> dims = a.factor_dims();
  dims.insert(dims.end(), b.factor_dims().begin(), b.factor_dims().end());
  return DensityOperator(std::move(dims), kron(a.matrix(), b.matrix()), tol);
}

DensityOperator convex_mix(const std::vector<WeightedState>& parts, const Tolerances& tol) {
  if (parts.empty()) throw ValidationError("convex mixture needs at least one component");
  double weight_sum = 0.0;
  for (const auto& p : parts) {
    if (p.weight < 0.0)
      throw ValidationError("convex mixture weight is negative: " + fmt(p.weight));
    weight_sum += p.weight;
    if (p.state.factor_dims() != parts.front().state.factor_dims())
      throw ValidationError("convex mixture components have mismatched factor_dims");
  }
  if (std::abs(weight_sum - 1.0) > tol.trace)
    throw ValidationError("convex mixture weights sum to " + fmt(weight_sum) + ", expected 1");
  CMatrix acc = CMatrix::Zero(parts.front().state.dim(), parts.front().state.dim());
  for (const auto& p : parts) acc += p.weight * p.state.matrix();
  return DensityOperator(parts.front().state.factor_dims(), std::move(acc), tol);
}

DensityOperator bell_state() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
  return DensityOperator({2, 2}, std::move(m));
}

DensityOperator partial_trace(const DensityOperator& rho, int keep, const Tolerances& tol) {
  const auto& dims = rho.factor_dims();
  if (dims.size() < 2)
    throw ValidationError("partial trace needs a state with at least two factors");
  if (keep < 0 || keep >= static_cast<int>(dims.size()))
    throw ValidationError("partial trace factor index " + std::to_string(keep) +
                          " out of range for " + std::to_string(dims.size()) + " factors");
  return DensityOperator({dims[static_cast<std::size_t>(keep)]},
                         partial_trace_matrix(rho.matrix(), dims, keep), tol);
}

SchmidtDecomposition schmidt(const PureState& v, int dim_left, int dim_right,
                             const Tolerances& tol) {
  if (dim_left * dim_right != v.dim())
    throw ValidationError("schmidt split " + std::to_string(dim_left) + "x" +
                          std::to_string(dim_right) + " does not match vector dimension " +
                          std::to_string(v.dim()));
  CMatrix m(dim_left, dim_right);
  for (int i = 0; i < dim_left; ++i)
    for (int j = 0; j < dim_right; ++j) m(i, j) = v.amplitudes()(i * dim_right + j);

  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const int k = std::min(dim_left, dim_right);
  SchmidtDecomposition out;
  out.coefficients.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    out.coefficients[static_cast<std::size_t>(i)] = svd.singularValues()(i);
    out.left_basis.push_back(svd.matrixU().col(i));
    // m = U Σ V†, so the right Schmidt vectors are the conjugated V columns.
    out.right_basis.push_back(svd.matrixV().col(i).conjugate());
  }
  CVector recon = CVector::Zero(v.dim());
  for (int i = 0; i < k; ++i)
    recon += out.coefficients[static_cast<std::size_t>(i)] *
             kron(CMatrix(out.left_basis[static_cast<std::size_t>(i)]),
                  CMatrix(out.right_basis[static_cast<std::size_t>(i)]))
                 .col(0);
  // Global phase: align the reconstruction with the input before comparing.
  Complex overlap = recon.dot(v.amplitudes());
  if (std::abs(overlap) > 0.0) recon *= overlap / std::abs(overlap);
  if ((recon - v.amplitudes()).norm() > tol.recon)
    throw ValidationError("schmidt reconstruction error exceeds tolerance");
  return out;
}

PptResult ppt_check(const DensityOperator& rho, int split_after, const Tolerances& tol) {
  const auto& dims = rho.factor_dims();
  if (dims.size() < 2) throw ValidationError("ppt_check needs a bipartite state");
  if (split_after < 1 || split_after >= static_cast<int>(dims.size()))
    throw ValidationError("ppt_check split index " + std::to_string(split_after) +
                          " does not induce a bipartition");
  int da = 1, db = 1;
  for (int f = 0; f < static_cast<int>(dims.size()); ++f)
    (f < split_after ? da : db) *= dims[static_cast<std::size_t>(f)];

  CMatrix pt(da * db, da * db);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b)
      for (int ap = 0; ap < da; ++ap)
        for (int bp = 0; bp < db; ++bp)
          pt(a * db + b, ap * db + bp) = rho.matrix()(a * db + bp, ap * db + b);

  const RVector evals = hermitian_eigenvalues(pt);
  const double min_eval = evals(evals.size() - 1);
  return {min_eval < -tol.psd ? PptVerdict::NPT : PptVerdict::PPT, min_eval};
}

double born(const DensityOperator& rho, const Projector& p, const Tolerances& tol) {
  if (rho.dim() != p.dim())
    throw ValidationError("born: state dimension " + std::to_string(rho.dim()) +
                          " does not match projector dimension " + std::to_string(p.dim()));
  const Complex raw = (rho.matrix() * p.matrix()).trace();
  if (std::abs(raw.imag()) > tol.psd)
    throw ValidationError("born value has non-real trace: imag = " + fmt(raw.imag()));
  double v = raw.real();
  if (v < 0.0) {
    if (v < -tol.psd) throw ValidationError("born value below 0 by " + fmt(-v));
    v = 0.0;
  } else if (v > 1.0) {
    if (v > 1.0 + tol.psd) throw ValidationError("born value above 1 by " + fmt(v - 1.0));
    v = 1.0;
  }
  return v;
}

std::vector<PureState> random_haar_basis(int dim, std::uint64_t seed) {
  if (dim < 1) throw ValidationError("random_haar_basis needs dim >= 1");
  Rng rng(seed);
  CMatrix ginibre(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) ginibre(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<CMatrix> qr(ginibre);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fixing the R-diagonal phases makes the distribution unitarily invariant.
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  std::vector<PureState> out;
  out.reserve(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) out.emplace_back(q.col(j));
  return out;
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim())
    throw ValidationError("trace_distance: dimension mismatch");
  const RVector evals = hermitian_eigenvalues(a.matrix() - b.matrix());
  return 0.5 * evals.cwiseAbs().sum();
}

}  // namespace logos
