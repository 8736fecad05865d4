#pragma once

#include "grda/numerics/linalg.hpp"

namespace grda::num {

/// Eigendecomposition of a symmetric matrix. `values` are sorted ascending and
/// the columns of `vectors` are the matching orthonormal eigenvectors.
struct EigenPair {
  Vec values;
  Matrix vectors;
};

/// Cyclic Jacobi eigendecomposition. Rejects matrices whose asymmetry exceeds
/// 1e-10 * max|A| and fails if the off-diagonal mass has not dropped below
/// 1e-12 * ||A||_F after 100 sweeps.
EigenPair sym_eig(const Matrix& a);

/// Reassembles P * diag(values) * P^T, mostly for tests.
Matrix eig_reconstruct(const EigenPair& e);

}  // namespace grda::num
