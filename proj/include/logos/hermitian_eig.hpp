#pragma once

#include "logos/matrix.hpp"

namespace logos {

// Eigendecomposition of a Hermitian matrix with reproducible output:
// eigenvalues sorted descending; each eigenvector rescaled so its first
// component of non-negligible magnitude is real positive.
struct HermitianEigen {
  RVector eigenvalues;   // descending
  CMatrix eigenvectors;  // columns aligned with eigenvalues
};

HermitianEigen hermitian_eigen(const CMatrix& m);

// Eigenvalues only, descending.
RVector hermitian_eigenvalues(const CMatrix& m);

// Singular values of an arbitrary complex matrix, descending.
RVector singular_values(const CMatrix& m);

}  // namespace logos
