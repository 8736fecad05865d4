#pragma once

#include <cstdint>
#include <vector>

#include "grda/limit/mean.hpp"
#include "grda/limit/sign.hpp"
#include "grda/numerics/linalg.hpp"
#include "grda/numerics/rng.hpp"
#include "grda/optimizer/schedule.hpp"

namespace grda::sde {

/// g-double-dagger(t): the sqrt(gamma)-scaled limit of the tuning schedule.
/// PowerLaw -> c (t - t0)_+^mu, SimPowerLaw -> t^mu, Zero -> 0; the RDA
/// schedule has no finite limit and is rejected.
double g_ddagger(const opt::TuningSchedule& schedule, double t);

/// Piecewise soft-threshold map of the fluctuation limit: on a (+) interval
/// V_j - level, on a (-) interval V_j + level, on a zero interval the ordinary
/// soft threshold.
num::Vec soft_threshold_limit(const num::Vec& V, double t,
                              const limit::SignPattern& pattern, double level);

/// Frozen per-grid-interval coefficients of the fluctuation SDE:
/// drift Jacobian grad_G(w(t_m)) and diffusion factor Sigma^{1/2}(w(t_m)).
struct SdeCoefficients {
  num::Vec grid;
  std::vector<num::Matrix> drift_jacobian;
  std::vector<num::Matrix> diffusion_sqrt;
  limit::SignPattern pattern;
};

/// Simulated V and W paths on the grid plus the count of excluded non-finite
/// paths.
struct BandEnsemble {
  num::Vec grid;
  std::vector<std::vector<num::Vec>> v_paths;  // [path][grid index][coord]
  std::vector<std::vector<num::Vec>> w_paths;
  std::size_t n_diverged = 0;
};

/// Euler-Maruyama on V' = -grad_G . W dt + Sigma^{1/2} dB from V(0) = 0, with
/// W the soft-threshold image of V at the running penalty level g_ddagger(t).
/// Coefficients are frozen per grid interval; dt subdivides each interval.
/// Path p draws from rng_split(base, label_offset + p), so the result is
/// independent of any parallel scheduling by the caller.
BandEnsemble simulate_V(const SdeCoefficients& coeffs, const opt::TuningSchedule& schedule,
                        std::size_t n_paths, double dt, const num::RngStream& base,
                        unsigned threads = 1, std::uint64_t label_offset = 0);

/// Type-7 (linear interpolation) sample quantile of an unsorted copy.
double quantile_type7(std::vector<double> values, double p);

/// Per-coordinate confidence band: center w_j(t) with sqrt(gamma)-scaled
/// empirical quantiles of the W paths at level alpha.
struct Band {
  num::Vec grid;
  std::vector<num::Vec> mean;   // [grid index][coord]
  std::vector<num::Vec> lower;
  std::vector<num::Vec> upper;
};

Band band_from_quantiles(const BandEnsemble& ens, double alpha,
                         const limit::MeanTrajectory& traj, double gamma);

}  // namespace grda::sde
