#include "grda/limit/sign.hpp"

#include <stdexcept>

namespace grda::limit {

namespace {
int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }
}  // namespace

int SignPattern::sign_at(std::size_t coord, double t) const {
  const auto& ivs = coords.at(coord);
  for (std::size_t i = ivs.size(); i-- > 0;)
    if (t >= ivs[i].t_start) return ivs[i].sign;
  return ivs.front().sign;
}

std::vector<double> sign_change_times(const SignPattern& pattern) {
  std::vector<double> out;
  for (const auto& ivs : pattern.coords)
    for (std::size_t i = 1; i < ivs.size(); ++i) out.push_back(ivs[i].t_start);
  return out;
}

SignPattern sign_stable_intervals(const MeanTrajectory& traj) {
  if (traj.grid.empty()) throw std::invalid_argument("sign_stable_intervals: empty grid");
  const std::size_t d = traj.dim();
  SignPattern pattern;
  pattern.coords.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    auto& ivs = pattern.coords[j];
    int cur = sgn(traj.values[0][j]);
    double start = traj.grid[0];
    for (std::size_t m = 1; m < traj.grid.size(); ++m) {
      const int s = sgn(traj.values[m][j]);
      if (s != cur) {
        ivs.push_back({start, traj.grid[m], cur});
        cur = s;
        start = traj.grid[m];
      }
    }
    ivs.push_back({start, traj.grid.back(), cur});
  }
  return pattern;
}

}  // namespace grda::limit
