#pragma once

#include <vector>

#include "grda/limit/mean.hpp"

namespace grda::limit {

/// Maximal constant-sign runs of each trajectory coordinate over the grid.
struct SignPattern {
  struct Interval {
    double t_start;
    double t_end;
    int sign;  // -1, 0, +1
  };

  std::vector<std::vector<Interval>> coords;

  /// Sign in force at time t (the interval containing t; ties at interval
  /// boundaries resolve to the later interval).
  int sign_at(std::size_t coord, double t) const;

  /// True when the coordinate keeps one sign across the whole grid.
  bool globally_stable(std::size_t coord) const {
    return coords[coord].size() == 1;
  }
};

/// Grid times where any coordinate's sign changes (interval boundaries other
/// than the endpoints).
std::vector<double> sign_change_times(const SignPattern& pattern);

SignPattern sign_stable_intervals(const MeanTrajectory& traj);

}  // namespace grda::limit
