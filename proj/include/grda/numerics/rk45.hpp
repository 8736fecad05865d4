#pragma once

#include <functional>

#include "grda/numerics/linalg.hpp"

namespace grda::num {

using OdeRhs = std::function<Vec(double, const Vec&)>;

/// Accepted steps of an adaptive integration; dense output interpolates with
/// a cubic Hermite on the stored derivatives.
class OdeSolution {
 public:
  OdeSolution(std::vector<double> times, std::vector<Vec> states, std::vector<Vec> derivs)
      : times_(std::move(times)), states_(std::move(states)), derivs_(std::move(derivs)) {}

  const std::vector<double>& times() const { return times_; }
  const std::vector<Vec>& states() const { return states_; }

  Vec eval(double t) const;
  std::vector<Vec> eval_grid(const std::vector<double>& grid) const;

 private:
  std::vector<double> times_;
  std::vector<Vec> states_;
  std::vector<Vec> derivs_;
};

/// Dormand-Prince 5(4) embedded pair with adaptive step control.
OdeSolution rk45(const OdeRhs& f, const Vec& y0, double t0, double t1,
                 double rel_tol = 1e-8, double abs_tol = 1e-10);

}  // namespace grda::num
