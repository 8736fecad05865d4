#pragma once

#include "grda/numerics/linalg.hpp"
#include "grda/numerics/rng.hpp"
#include "grda/numerics/sym_eig.hpp"

namespace grda::models {

/// AR(1)-style covariance: H_{ij} = rho^|i-j|. Requires |rho| < 1.
num::Matrix build_ar_covariance(std::size_t d, double rho);

/// Online linear regression model Y = X^T w* + eps with X ~ N(0, H) and
/// eps ~ N(0, sigma_eps^2). Sampling goes through an eigendecomposition
/// factor of H so the same factorization serves the covariance-kernel code.
class LinearModel {
 public:
  LinearModel(num::Matrix H, num::Vec w_star, double sigma_eps);

  const num::Matrix& H() const { return H_; }
  const num::Vec& w_star() const { return w_star_; }
  double sigma_eps() const { return sigma_eps_; }
  std::size_t dim() const { return w_star_.size(); }

  /// Factor F with F F^T = H (eigenvector matrix times sqrt of eigenvalues).
  const num::Matrix& factor() const { return factor_; }

 private:
  num::Matrix H_;
  num::Vec w_star_;
  double sigma_eps_;
  num::Matrix factor_;
};

struct LrSample {
  num::Vec x;
  double y;
};

/// Draw (x, y): x = F z with z standard normal, y = x^T w* + sigma_eps * z0.
LrSample sample_lr(const LinearModel& model, num::RngStream& rng);

/// Least-squares stochastic gradient -x (y - x^T w).
num::Vec lsq_gradient(const num::Vec& w, const num::Vec& x, double y);

}  // namespace grda::models
