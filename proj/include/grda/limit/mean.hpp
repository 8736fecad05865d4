#pragma once

#include <string>
#include <vector>

#include "grda/models/spca.hpp"
#include "grda/numerics/linalg.hpp"

namespace grda::limit {

/// Deterministic limiting trajectory sampled on a strictly increasing grid.
/// Each entry of `values` is the state at the matching grid time: length d for
/// regression, d*k (columns stacked) for PCA.
struct MeanTrajectory {
  num::Vec grid;
  std::vector<num::Vec> values;
  std::string meta;

  std::size_t dim() const { return values.empty() ? 0 : values.front().size(); }

  /// Index of the grid point closest to t (grid assumed uniform enough that
  /// callers only ask for grid times).
  std::size_t index_of(double t) const;
};

/// Uniform grid 0, step, 2*step, ..., covering [0, horizon].
num::Vec uniform_grid(double horizon, double step = 0.1);

/// Closed-form mean dynamics of online least squares,
/// w(t) = w* + P e^{-Dt} P^T (w0 - w*) with H = P D P^T.
MeanTrajectory lr_mean_trajectory(const num::Matrix& H, const num::Vec& w0,
                                  const num::Vec& w_star, const num::Vec& grid);

/// Deflated-Oja mean ODE dU_j/dt = A_j C U_j, integrated adaptively; once the
/// residual max_j ||A_j C U_j|| drops below 1e-6 the tail of the trajectory is
/// snapped to the nearest signed true component per column.
MeanTrajectory ospca_mean_ode(const models::SpcaModel& model, const num::Matrix& U0,
                              const num::Vec& grid);

}  // namespace grda::limit
