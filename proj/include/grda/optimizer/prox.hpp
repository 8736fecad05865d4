#pragma once

#include <vector>

#include "grda/numerics/linalg.hpp"

namespace grda::opt {

/// Coordinate groups for the group-lasso penalty; must partition 0..d-1.
using Groups = std::vector<std::vector<std::size_t>>;

struct Penalty {
  enum class Kind { None, L1, ElasticNet, GroupLasso };

  static Penalty none() { return {Kind::None, 0.0, {}}; }
  static Penalty l1() { return {Kind::L1, 0.0, {}}; }
  static Penalty elastic_net(double kappa);
  static Penalty group_lasso(Groups groups, std::size_t d);

  Kind kind;
  double kappa;
  Groups groups;
};

/// Soft thresholding: sgn(v_j) (|v_j| - lambda)_+ per coordinate.
num::Vec prox_l1(const num::Vec& v, double lambda);

/// (1 + kappa*lambda)^-1 sgn(v_j) (|v_j| - lambda)_+ per coordinate.
num::Vec prox_elastic_net(const num::Vec& v, double lambda, double kappa);

/// Per group a: (1 - lambda/||v_a||)_+ v_a; a zero-norm group stays zero.
num::Vec prox_group_lasso(const num::Vec& v, double lambda, const Groups& groups);

/// Dispatches on the penalty variant; lambda is the current tuning level.
num::Vec prox(const num::Vec& v, double lambda, const Penalty& penalty);

}  // namespace grda::opt
