#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace logos {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// ||M - M†||_F
double hermiticity_defect(const CMatrix& m);

// Kronecker product, row-major block convention: (a ⊗ b)[(i*rb+k),(j*cb+l)] = a(i,j) b(k,l)
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Partial trace of a (not necessarily Hermitian) matrix over all factors
// except `keep` (0-based index into `dims`).
CMatrix partial_trace_matrix(const CMatrix& m, const std::vector<int>& dims, int keep);

// FNV-1a over the raw entry bytes, row-major. Identifies a concrete sampled
// node set / matrix bit-exactly.
std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t matrix_fingerprint(const CMatrix& m, std::uint64_t seed = 0xcbf29ce484222325ull);
std::string to_hex(std::uint64_t v);

}  // namespace logos
