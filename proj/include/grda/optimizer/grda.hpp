#pragma once

#include <cstdint>
#include <stdexcept>

#include "grda/numerics/linalg.hpp"
#include "grda/optimizer/prox.hpp"
#include "grda/optimizer/schedule.hpp"

namespace grda::opt {

/// Thrown when a gradient carries non-finite entries; the message names the
/// step at which it happened.
class GradientError : public std::runtime_error {
 public:
  GradientError(std::uint64_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  std::uint64_t step() const { return step_; }

 private:
  std::uint64_t step_;
};

/// Dual accumulator v, primal iterate w = prox(v, g(n, gamma)), step count n.
struct OptimizerState {
  num::Vec v;
  num::Vec w;
  std::uint64_t n = 0;
  double gamma = 0.0;
};

/// State at n = 0 with v = w = w0.
OptimizerState make_state(const num::Vec& w0, double gamma);

/// One dual-averaging step: v <- v - gamma * gradient, n <- n + 1,
/// w <- prox(v, g(n, gamma)). With the Zero schedule and no penalty this is
/// exactly an SGD step.
void grda_step(OptimizerState& state, const num::Vec& gradient,
               const TuningSchedule& schedule, const Penalty& penalty);

/// Running arithmetic mean of pushed iterates.
struct AverageAccumulator {
  num::Vec sum;
  std::uint64_t count = 0;

  void push(const num::Vec& w);
  num::Vec mean() const;
};

}  // namespace grda::opt
