#include "grda/limit/mean.hpp"

#include <cmath>
#include <stdexcept>

#include "grda/numerics/rk45.hpp"
#include "grda/numerics/sym_eig.hpp"

namespace grda::limit {

std::size_t MeanTrajectory::index_of(double t) const {
  std::size_t best = 0;
  double best_gap = std::abs(grid[0] - t);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double gap = std::abs(grid[i] - t);
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return best;
}

num::Vec uniform_grid(double horizon, double step) {
  if (!(horizon > 0) || !(step > 0))
    throw std::invalid_argument("uniform_grid: horizon and step must be positive");
  const auto n = static_cast<std::size_t>(std::llround(horizon / step));
  num::Vec grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = static_cast<double>(i) * step;
  grid.back() = std::max(grid.back(), horizon);
  return grid;
}

MeanTrajectory lr_mean_trajectory(const num::Matrix& H, const num::Vec& w0,
                                  const num::Vec& w_star, const num::Vec& grid) {
  const std::size_t d = w0.size();
  if (H.rows() != d || H.cols() != d || w_star.size() != d)
    throw std::invalid_argument("lr_mean_trajectory: dimension mismatch");

  const num::EigenPair eig = num::sym_eig(H);
  if (eig.values.front() <= 0)
    throw std::invalid_argument("lr_mean_trajectory: H must be positive definite");

  // a0 = P^T (w0 - w*); w(t) = w* + P e^{-Dt} a0.
  const num::Vec a0 = num::matvec(eig.vectors.transpose(), w0 - w_star);

  MeanTrajectory traj;
  traj.grid = grid;
  traj.meta = "lr";
  traj.values.reserve(grid.size());
  num::Vec a(d);
  for (double t : grid) {
    for (std::size_t j = 0; j < d; ++j) a[j] = std::exp(-eig.values[j] * t) * a0[j];
    traj.values.push_back(w_star + num::matvec(eig.vectors, a));
  }
  return traj;
}

namespace {

// Right-hand side of the stacked column ODE, dU_j/dt = A_j C U_j, with the
// deflation built from the running state. Columns of U are stacked in order.
num::Vec ospca_rhs(const models::SpcaModel& model, const num::Vec& y) {
  const std::size_t d = model.dim();
  const std::size_t k = model.k();
  num::Vec dy(d * k);
  std::vector<num::Vec> cols(k), c_cols(k);
  for (std::size_t j = 0; j < k; ++j) {
    cols[j].assign(y.begin() + static_cast<std::ptrdiff_t>(j * d),
                   y.begin() + static_cast<std::ptrdiff_t>((j + 1) * d));
    c_cols[j] = num::matvec(model.C(), cols[j]);
  }
  for (std::size_t j = 0; j < k; ++j) {
    num::Vec v = c_cols[j];  // A_j C U_j
    num::axpy(v, -num::dot(cols[j], c_cols[j]), cols[j]);
    for (std::size_t i = 0; i < j; ++i)
      num::axpy(v, -2.0 * num::dot(cols[i], c_cols[j]), cols[i]);
    for (std::size_t r = 0; r < d; ++r) dy[j * d + r] = v[r];
  }
  return dy;
}

double ospca_residual(const models::SpcaModel& model, const num::Vec& y) {
  const num::Vec dy = ospca_rhs(model, y);
  const std::size_t d = model.dim();
  double worst = 0.0;
  for (std::size_t j = 0; j < model.k(); ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < d; ++r) s += dy[j * d + r] * dy[j * d + r];
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace

MeanTrajectory ospca_mean_ode(const models::SpcaModel& model, const num::Matrix& U0,
                              const num::Vec& grid) {
  const std::size_t d = model.dim();
  const std::size_t k = model.k();
  if (U0.rows() != d || U0.cols() != k)
    throw std::invalid_argument("ospca_mean_ode: U0 dimension mismatch");
  for (std::size_t j = 0; j < k; ++j)
    if (!(num::norm2(U0.col(j)) > 0))
      throw std::invalid_argument("ospca_mean_ode: U0 columns must be nonzero");

  num::Vec y0(d * k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t r = 0; r < d; ++r) y0[j * d + r] = U0(r, j);

  const auto rhs = [&model](double, const num::Vec& y) { return ospca_rhs(model, y); };
  const num::OdeSolution sol =
      num::rk45(rhs, y0, grid.front(), grid.back(), 1e-8, 1e-10);

  MeanTrajectory traj;
  traj.grid = grid;
  traj.meta = "pca";
  traj.values = sol.eval_grid(std::vector<double>(grid.begin(), grid.end()));

  // Once every column is (numerically) stationary, hold the nearest signed
  // true component for the rest of the grid; this replaces the tiny residual
  // oscillations of the integrated path near convergence.
  for (std::size_t m = 0; m < traj.values.size(); ++m) {
    if (ospca_residual(model, traj.values[m]) >= 1e-6) continue;
    num::Vec snapped(d * k);
    for (std::size_t j = 0; j < k; ++j) {
      double ip = 0.0;
      for (std::size_t r = 0; r < d; ++r)
        ip += traj.values[m][j * d + r] * model.U_star()(r, j);
      const double s = ip >= 0 ? 1.0 : -1.0;
      for (std::size_t r = 0; r < d; ++r) snapped[j * d + r] = s * model.U_star()(r, j);
    }
    for (std::size_t mm = m; mm < traj.values.size(); ++mm) traj.values[mm] = snapped;
    break;
  }
  return traj;
}

}  // namespace grda::limit
