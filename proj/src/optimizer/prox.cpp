#include "grda/optimizer/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace grda::opt {

Penalty Penalty::elastic_net(double kappa) {
  if (!(kappa > 0)) throw std::invalid_argument("Penalty: kappa must be positive");
  return {Kind::ElasticNet, kappa, {}};
}

Penalty Penalty::group_lasso(Groups groups, std::size_t d) {
  std::vector<bool> seen(d, false);
  std::size_t covered = 0;
  for (const auto& g : groups) {
    for (std::size_t j : g) {
      if (j >= d || seen[j])
        throw std::invalid_argument("Penalty: groups must partition 0..d-1");
      seen[j] = true;
      ++covered;
    }
  }
  if (covered != d) throw std::invalid_argument("Penalty: groups must cover 0..d-1");
  return {Kind::GroupLasso, 0.0, std::move(groups)};
}

num::Vec prox_l1(const num::Vec& v, double lambda) {
  if (lambda < 0) throw std::invalid_argument("prox_l1: lambda must be nonnegative");
  num::Vec w(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double mag = std::abs(v[j]) - lambda;
    w[j] = mag > 0 ? (v[j] > 0 ? mag : -mag) : 0.0;
  }
  return w;
}

num::Vec prox_elastic_net(const num::Vec& v, double lambda, double kappa) {
  if (lambda < 0) throw std::invalid_argument("prox_elastic_net: lambda must be nonnegative");
  if (!(kappa > 0)) throw std::invalid_argument("prox_elastic_net: kappa must be positive");
  num::Vec w = prox_l1(v, lambda);
  const double scale = 1.0 / (1.0 + kappa * lambda);
  for (double& x : w) x *= scale;
  return w;
}

num::Vec prox_group_lasso(const num::Vec& v, double lambda, const Groups& groups) {
  if (lambda < 0) throw std::invalid_argument("prox_group_lasso: lambda must be nonnegative");
  num::Vec w(v.size(), 0.0);
  for (const auto& g : groups) {
    double norm_sq = 0.0;
    for (std::size_t j : g) norm_sq += v[j] * v[j];
    const double norm = std::sqrt(norm_sq);
    if (norm <= lambda) continue;  // includes the zero-norm group
    const double scale = 1.0 - lambda / norm;
    for (std::size_t j : g) w[j] = scale * v[j];
  }
  return w;
}

num::Vec prox(const num::Vec& v, double lambda, const Penalty& penalty) {
  switch (penalty.kind) {
    case Penalty::Kind::None:
      return v;
    case Penalty::Kind::L1:
      return prox_l1(v, lambda);
    case Penalty::Kind::ElasticNet:
      return prox_elastic_net(v, lambda, penalty.kappa);
    case Penalty::Kind::GroupLasso:
      return prox_group_lasso(v, lambda, penalty.groups);
  }
  return v;
}

}  // namespace grda::opt
