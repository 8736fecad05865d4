#pragma once

#include <cstdint>

#include "grda/numerics/linalg.hpp"
#include "grda/numerics/rng.hpp"
#include "grda/optimizer/schedule.hpp"

namespace grda::models {

/// Streaming sparse-PCA model: X ~ N(0, C), the leading k eigenvalues of C
/// are positive with unit multiplicity, and U_star holds the corresponding
/// orthonormal eigenvectors.
class SpcaModel {
 public:
  SpcaModel(num::Matrix C, num::Matrix U_star, num::Vec eigvals);

  const num::Matrix& C() const { return C_; }
  const num::Matrix& U_star() const { return U_star_; }
  const num::Vec& eigvals() const { return eigvals_; }
  std::size_t dim() const { return C_.rows(); }
  std::size_t k() const { return U_star_.cols(); }

  /// Factor F with F F^T = C, for Gaussian sampling.
  const num::Matrix& factor() const { return factor_; }

 private:
  num::Matrix C_;
  num::Matrix U_star_;
  num::Vec eigvals_;
  num::Matrix factor_;
};

/// Draw x ~ N(0, C).
num::Vec sample_pca(const SpcaModel& model, num::RngStream& rng);

/// Oja deflation matrix for component j (1-based):
/// A_j = I - U_j U_j^T - 2 sum_{i<j} U_i U_i^T.
num::Matrix deflation_matrix(const num::Matrix& U, std::size_t j);

/// Dual accumulator U_tilde with primal U = prox_l1(U_tilde, g(n, gamma))
/// column-wise.
struct PcaState {
  num::Matrix U_tilde;
  num::Matrix U;
  std::uint64_t n = 0;
  double gamma = 0.0;
};

PcaState make_pca_state(const num::Matrix& U0, double gamma);

/// One OSPCA step on a fresh sample x: for every column j,
/// U_tilde_j += gamma * A_j x x^T U_j with A and the gradient built from the
/// current primal U, then U_j = prox_l1(U_tilde_j, g(n+1, gamma)). With the
/// Zero schedule this is plain deflated Oja (OPCA).
void ospca_step(PcaState& state, const num::Vec& x, const opt::TuningSchedule& schedule);

}  // namespace grda::models
