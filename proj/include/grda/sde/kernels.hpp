#pragma once

#include <vector>

#include "grda/models/linear.hpp"
#include "grda/models/spca.hpp"
#include "grda/numerics/linalg.hpp"

namespace grda::sde {

/// Gradient-noise covariance kernel for the regression driver. LrExact
/// evaluates the Gaussian closed form; Empirical holds a fixed data set and
/// returns the sample covariance of the stochastic gradients at w.
struct KernelSpec {
  enum class Variant { LrExact, Empirical };

  static KernelSpec lr_exact(const models::LinearModel& model);
  static KernelSpec empirical(const models::LinearModel& model, std::size_t m,
                              num::RngStream& rng);

  Variant variant;
  const models::LinearModel* model;
  std::vector<models::LrSample> samples;
};

/// Sigma(w): closed form H a a^T H + (a^T H a) H + sigma_eps^2 H with
/// a = w - w* for the exact variant, sample gradient covariance for the
/// empirical one. Always returned exactly symmetric.
num::Matrix sigma_lr(const num::Vec& w, const KernelSpec& spec);

/// Fixed sample set for the PCA kernel (always Monte-Carlo).
struct PcaKernelSpec {
  static PcaKernelSpec draw(const models::SpcaModel& model, std::size_t m,
                            num::RngStream& rng);

  const models::SpcaModel* model;
  std::vector<num::Vec> samples;
};

/// Block kernel Sigma_{jl}(U) = A_j E[(xx^T - C) U_j U_l^T (xx^T - C)] A_l,
/// estimated over the spec's sample set; the upper triangle mirrors the lower
/// so the assembled kd x kd matrix is exactly symmetric.
num::Matrix sigma_pca(const num::Matrix& U, const PcaKernelSpec& spec);

/// Mean-field drift Jacobian: constant H for regression.
num::Matrix grad_G(const models::LinearModel& model);

/// PCA drift Jacobian at U: lower-triangular kd x kd block matrix with
/// diagonal blocks -C + I (U_j^T C U_j) + 2 sum_{i<=j} U_i U_i^T C and
/// sub-diagonal blocks 2 (I (U_l^T C U_j) + U_l U_j^T C).
num::Matrix grad_G(const models::SpcaModel& model, const num::Matrix& U);

/// Symmetric square root via eigendecomposition; eigenvalues below
/// 1e-12 * lambda_max clamp to zero, and eigenvalues more negative than
/// -1e-8 * lambda_max are rejected.
num::Matrix matrix_sqrt(const num::Matrix& S);

}  // namespace grda::sde
