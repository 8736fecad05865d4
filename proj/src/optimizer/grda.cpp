#include "grda/optimizer/grda.hpp"

#include <string>

namespace grda::opt {

OptimizerState make_state(const num::Vec& w0, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("make_state: gamma must be positive");
  return OptimizerState{w0, w0, 0, gamma};
}

void grda_step(OptimizerState& state, const num::Vec& gradient,
               const TuningSchedule& schedule, const Penalty& penalty) {
  if (gradient.size() != state.v.size())
    throw std::invalid_argument("grda_step: gradient dimension mismatch");
  if (!num::all_finite(gradient))
    throw GradientError(state.n,
                        "grda_step: non-finite gradient at step " + std::to_string(state.n));

  for (std::size_t j = 0; j < state.v.size(); ++j) state.v[j] -= state.gamma * gradient[j];
  ++state.n;
  if (schedule.kind() == TuningSchedule::Kind::Zero &&
      penalty.kind == Penalty::Kind::None) {
    state.w = state.v;  // exact SGD reduction, no prox round-trip
    return;
  }
  state.w = prox(state.v, schedule.value(state.n, state.gamma), penalty);
}

void AverageAccumulator::push(const num::Vec& w) {
  if (sum.empty()) sum.assign(w.size(), 0.0);
  if (sum.size() != w.size())
    throw std::invalid_argument("AverageAccumulator: dimension mismatch");
  for (std::size_t j = 0; j < w.size(); ++j) sum[j] += w[j];
  ++count;
}

num::Vec AverageAccumulator::mean() const {
  if (count == 0) throw std::runtime_error("AverageAccumulator: empty");
  num::Vec m = sum;
  for (double& x : m) x /= static_cast<double>(count);
  return m;
}

}  // namespace grda::opt
