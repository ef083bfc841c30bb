#include "logos/matrix.hpp"

#include <cstring>

namespace logos {

double hermiticity_defect(const CMatrix& m) { return (m - m.adjoint()).norm(); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix partial_trace_matrix(const CMatrix& m, const std::vector<int>& dims, int keep) {
  int total = 1;
  for (int d : dims) total *= d;
  const int dk = dims[static_cast<std::size_t>(keep)];
  // Row index decomposes as (left, k, right) with strides over the factor list.
  int left = 1, right = 1;
  for (int f = 0; f < keep; ++f) left *= dims[static_cast<std::size_t>(f)];
  for (std::size_t f = static_cast<std::size_t>(keep) + 1; f < dims.size(); ++f)
    right *= dims[f];
  (void)total;

  CMatrix out = CMatrix::Zero(dk, dk);
  for (int a = 0; a < dk; ++a)
    for (int b = 0; b < dk; ++b) {
      Complex sum = 0.0;
      for (int l = 0; l < left; ++l)
        for (int r = 0; r < right; ++r) {
          const int row = (l * dk + a) * right + r;
          const int col = (l * dk + b) * right + r;
          sum += m(row, col);
        }
      out(a, b) = sum;
    }
  return out;
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t matrix_fingerprint(const CMatrix& m, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = m(i, j).real(), im = m(i, j).imag();
      h = fnv1a(&re, sizeof re, h);
      h = fnv1a(&im, sizeof im, h);
    }
  return h;
}

std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace logos
