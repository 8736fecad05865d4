#include "grda/models/linear.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace grda::models {

num::Matrix build_ar_covariance(std::size_t d, double rho) {
  if (!(std::abs(rho) < 1.0))
    throw std::invalid_argument("build_ar_covariance: |rho| must be < 1");
  num::Matrix H(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      H(i, j) = std::pow(rho, static_cast<double>(i > j ? i - j : j - i));
  return H;
}

LinearModel::LinearModel(num::Matrix H, num::Vec w_star, double sigma_eps)
    : H_(std::move(H)), w_star_(std::move(w_star)), sigma_eps_(sigma_eps) {
  if (H_.rows() != H_.cols() || H_.rows() != w_star_.size())
    throw std::invalid_argument("LinearModel: dimension mismatch");
  if (sigma_eps_ < 0) throw std::invalid_argument("LinearModel: sigma_eps must be >= 0");
  const num::EigenPair eig = num::sym_eig(H_);
  if (eig.values.front() <= 0)
    throw std::invalid_argument("LinearModel: H must be positive definite");
  factor_ = eig.vectors;
  for (std::size_t j = 0; j < factor_.cols(); ++j) {
    const double s = std::sqrt(eig.values[j]);
    for (std::size_t i = 0; i < factor_.rows(); ++i) factor_(i, j) *= s;
  }
}

LrSample sample_lr(const LinearModel& model, num::RngStream& rng) {
  const std::size_t d = model.dim();
  num::Vec z(d);
  for (double& zi : z) zi = rng.normal();
  LrSample s{num::matvec(model.factor(), z), 0.0};
  s.y = num::dot(s.x, model.w_star()) + model.sigma_eps() * rng.normal();
  return s;
}

num::Vec lsq_gradient(const num::Vec& w, const num::Vec& x, double y) {
  if (w.size() != x.size()) throw std::invalid_argument("lsq_gradient: dimension mismatch");
  const double r = y - num::dot(x, w);
  num::Vec g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) g[j] = -x[j] * r;
  return g;
}

}  // namespace grda::models
