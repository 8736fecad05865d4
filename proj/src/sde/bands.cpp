#include "grda/sde/bands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace grda::sde {

double g_ddagger(const opt::TuningSchedule& schedule, double t) {
  if (t < 0) throw std::invalid_argument("g_ddagger: t must be nonnegative");
  switch (schedule.kind()) {
    case opt::TuningSchedule::Kind::Zero:
      return 0.0;
    case opt::TuningSchedule::Kind::PowerLaw: {
      const double s = t - schedule.t0();
      return s > 0 ? schedule.c() * std::pow(s, schedule.mu()) : 0.0;
    }
    case opt::TuningSchedule::Kind::SimPowerLaw:
      return std::pow(t, schedule.mu());
    case opt::TuningSchedule::Kind::Rda:
      throw std::invalid_argument("g_ddagger: the RDA schedule has no finite scaled limit");
  }
  return 0.0;
}

num::Vec soft_threshold_limit(const num::Vec& V, double t,
                              const limit::SignPattern& pattern, double level) {
  if (level < 0) throw std::invalid_argument("soft_threshold_limit: negative level");
  num::Vec w(V.size());
  for (std::size_t j = 0; j < V.size(); ++j) {
    switch (pattern.sign_at(j, t)) {
      case 1:
        w[j] = V[j] - level;
        break;
      case -1:
        w[j] = V[j] + level;
        break;
      default: {
        const double mag = std::abs(V[j]) - level;
        w[j] = mag > 0 ? (V[j] > 0 ? mag : -mag) : 0.0;
      }
    }
  }
  return w;
}

namespace {

// One Euler-Maruyama path over the whole grid; returns false on a non-finite
// excursion.
bool run_path(const SdeCoefficients& coeffs, const opt::TuningSchedule& schedule,
              double dt, num::RngStream rng, std::vector<num::Vec>& v_out,
              std::vector<num::Vec>& w_out) {
  const std::size_t dim = coeffs.diffusion_sqrt.front().rows();
  const std::size_t n_grid = coeffs.grid.size();
  v_out.assign(n_grid, num::Vec(dim, 0.0));
  w_out.assign(n_grid, num::Vec(dim, 0.0));

  num::Vec v(dim, 0.0);
  num::Vec xi(dim);
  w_out[0] = soft_threshold_limit(v, coeffs.grid[0], coeffs.pattern,
                                  g_ddagger(schedule, coeffs.grid[0]));

  for (std::size_t m = 0; m + 1 < n_grid; ++m) {
    const double span = coeffs.grid[m + 1] - coeffs.grid[m];
    const auto substeps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(span / dt)));
    const double h = span / static_cast<double>(substeps);
    const double sqrt_h = std::sqrt(h);
    const num::Matrix& jac = coeffs.drift_jacobian[m];
    const num::Matrix& root = coeffs.diffusion_sqrt[m];
    for (std::size_t s = 0; s < substeps; ++s) {
      const double tau = coeffs.grid[m] + static_cast<double>(s) * h;
      const num::Vec w =
          soft_threshold_limit(v, tau, coeffs.pattern, g_ddagger(schedule, tau));
      for (double& z : xi) z = rng.normal();
      num::Vec drift = num::matvec(jac, w);
      num::Vec noise = num::matvec(root, xi);
      for (std::size_t j = 0; j < dim; ++j) v[j] += -drift[j] * h + sqrt_h * noise[j];
    }
    if (!num::all_finite(v)) return false;
    v_out[m + 1] = v;
    w_out[m + 1] = soft_threshold_limit(v, coeffs.grid[m + 1], coeffs.pattern,
                                        g_ddagger(schedule, coeffs.grid[m + 1]));
  }
  return true;
}

}  // namespace

BandEnsemble simulate_V(const SdeCoefficients& coeffs, const opt::TuningSchedule& schedule,
                        std::size_t n_paths, double dt, const num::RngStream& base,
                        unsigned threads, std::uint64_t label_offset) {
  if (!(dt > 0)) throw std::invalid_argument("simulate_V: dt must be positive");
  if (coeffs.grid.size() < 2 || coeffs.drift_jacobian.size() + 1 != coeffs.grid.size() ||
      coeffs.diffusion_sqrt.size() + 1 != coeffs.grid.size())
    throw std::invalid_argument("simulate_V: coefficient grid mismatch");

  std::vector<std::vector<num::Vec>> v_all(n_paths), w_all(n_paths);
  std::vector<char> ok(n_paths, 0);

  const auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p)
      ok[p] = run_path(coeffs, schedule, dt, num::rng_split(base, label_offset + p),
                       v_all[p], w_all[p])
                  ? 1
                  : 0;
  };

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_paths)));
  if (n_workers == 1) {
    worker(0, n_paths);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_paths + n_workers - 1) / n_workers;
    for (unsigned w = 0; w < n_workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(n_paths, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  BandEnsemble ens;
  ens.grid = coeffs.grid;
  for (std::size_t p = 0; p < n_paths; ++p) {
    if (!ok[p]) {
      ++ens.n_diverged;
      continue;
    }
    ens.v_paths.push_back(std::move(v_all[p]));
    ens.w_paths.push_back(std::move(w_all[p]));
  }
  return ens;
}

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile_type7: empty sample");
  if (p < 0 || p > 1) throw std::invalid_argument("quantile_type7: p outside [0,1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

Band band_from_quantiles(const BandEnsemble& ens, double alpha,
                         const limit::MeanTrajectory& traj, double gamma) {
  if (!(alpha > 0 && alpha < 1))
    throw std::invalid_argument("band_from_quantiles: alpha outside (0,1)");
  if (!(gamma > 0)) throw std::invalid_argument("band_from_quantiles: gamma must be positive");
  if (ens.w_paths.size() < 100)
    throw std::invalid_argument("band_from_quantiles: need at least 100 paths");
  if (traj.grid.size() != ens.grid.size())
    throw std::invalid_argument("band_from_quantiles: grid mismatch");

  const std::size_t n_grid = ens.grid.size();
  const std::size_t dim = ens.w_paths.front().front().size();
  const double root_gamma = std::sqrt(gamma);

  Band band;
  band.grid = ens.grid;
  band.mean = traj.values;
  band.lower.assign(n_grid, num::Vec(dim));
  band.upper.assign(n_grid, num::Vec(dim));
  std::vector<double> sample(ens.w_paths.size());
  for (std::size_t m = 0; m < n_grid; ++m)
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t p = 0; p < ens.w_paths.size(); ++p) sample[p] = ens.w_paths[p][m][j];
      band.lower[m][j] = traj.values[m][j] + root_gamma * quantile_type7(sample, alpha / 2);
      band.upper[m][j] =
          traj.values[m][j] + root_gamma * quantile_type7(sample, 1 - alpha / 2);
    }
  return band;
}

}  // namespace grda::sde
