#include "grda/experiment/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "grda/limit/bias.hpp"
#include "grda/limit/mean.hpp"
#include "grda/models/spca.hpp"
#include "grda/optimizer/grda.hpp"
#include "grda/sde/kernels.hpp"

namespace grda::exp {

namespace {

constexpr const char* kVersion = "grda-lab 1.0.0";
constexpr double kGridStep = 0.1;
constexpr double kDivergenceBound = 1e12;

// Sub-stream labels hang off the base stream in disjoint ranges so that
// repetitions (0..R-1), band paths, kernel draws, and model construction can
// never collide regardless of the configured counts.
constexpr std::uint64_t kBandLabelOffset = 1'000'000'000ULL;
constexpr std::uint64_t kKernelLabel = 2'000'000'000ULL;
constexpr std::uint64_t kModelLabel = 2'000'000'001ULL;
constexpr std::uint64_t kInitLabel = 2'000'000'002ULL;

unsigned resolve_threads(unsigned requested, std::size_t n_tasks) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return std::max(1u, std::min<unsigned>(t, static_cast<unsigned>(std::max<std::size_t>(1, n_tasks))));
}

// Static chunked fan-out; every index is processed exactly once and results
// must be written into pre-allocated per-index slots to stay deterministic.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, const Fn& fn) {
  const unsigned workers = resolve_threads(threads, n);
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

opt::TuningSchedule schedule_from(const ExperimentConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::Sgd:
      return opt::TuningSchedule::zero();
    case Algorithm::Rda:
      return cfg.c0 > 0 ? opt::TuningSchedule::rda(cfg.c0) : opt::TuningSchedule::zero();
    case Algorithm::Grda:
      return opt::TuningSchedule::power_law(cfg.c, cfg.mu, cfg.t0);
  }
  return opt::TuningSchedule::zero();
}

opt::Penalty penalty_from(const ExperimentConfig& cfg) {
  return cfg.algorithm == Algorithm::Sgd ? opt::Penalty::none() : opt::Penalty::l1();
}

nlohmann::json config_echo(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["problem"] = cfg.problem == Problem::Lr ? "lr" : "pca";
  j["d"] = cfg.d;
  j["k"] = cfg.k;
  j["rho"] = cfg.rho;
  j["sigma_eps"] = cfg.sigma_eps;
  j["support_size"] = cfg.support_size;
  j["min_active_magnitude"] = cfg.min_active_magnitude;
  j["algorithm"] = cfg.algorithm == Algorithm::Sgd   ? "sgd"
                   : cfg.algorithm == Algorithm::Rda ? "rda"
                                                     : "grda";
  j["c0"] = cfg.c0;
  j["c"] = cfg.c;
  j["mu"] = cfg.mu;
  j["t0"] = cfg.t0;
  j["gamma"] = cfg.gamma;
  j["horizon"] = cfg.horizon;
  j["repetitions"] = cfg.repetitions;
  j["band_paths"] = cfg.band_paths;
  j["kernel_samples"] = cfg.kernel_samples;
  j["dt"] = cfg.dt;
  j["alpha"] = cfg.alpha;
  j["sign_zero_tol"] = cfg.sign_zero_tol;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  j["threads"] = cfg.threads;
  if (cfg.h_diag) j["h_diag"] = *cfg.h_diag;
  return j;
}

num::Matrix lr_covariance(const ExperimentConfig& cfg) {
  if (cfg.h_diag) return num::Matrix::diagonal(*cfg.h_diag);
  return models::build_ar_covariance(cfg.d, cfg.rho);
}

// Random support of the configured size plus standard-normal active values
// with the configured magnitude floor, all from the model sub-stream.
num::Vec draw_w_star(const ExperimentConfig& cfg, num::RngStream& rng) {
  num::Vec w(cfg.d, 0.0);
  std::vector<std::size_t> support;
  std::vector<bool> used(cfg.d, false);
  while (support.size() < cfg.support_size) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(cfg.d));
    if (used[j]) continue;
    used[j] = true;
    support.push_back(j);
  }
  for (std::size_t j : support) {
    double z = rng.normal();
    while (std::abs(z) < cfg.min_active_magnitude) z = rng.normal();
    w[j] = z;
  }
  return w;
}

std::vector<std::uint64_t> grid_step_indices(const num::Vec& grid, double gamma) {
  std::vector<std::uint64_t> idx(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m)
    idx[m] = static_cast<std::uint64_t>(std::llround(grid[m] / gamma));
  return idx;
}

bool diverged(const num::Vec& w) {
  for (double x : w)
    if (!std::isfinite(x) || std::abs(x) > kDivergenceBound) return true;
  return false;
}

struct RepOutcome {
  std::vector<num::Vec> values;  // per grid point
  num::Vec average;              // running-mean iterate at the horizon
  bool ok = false;
};

// One optimizer stream: N = floor(T/gamma) steps, iterates recorded at the
// grid step indices.
RepOutcome run_lr_rep(const models::LinearModel& model, const opt::TuningSchedule& schedule,
                      const opt::Penalty& penalty, const num::Vec& grid, double gamma,
                      num::RngStream rng) {
  RepOutcome out;
  const auto idx = grid_step_indices(grid, gamma);
  const std::uint64_t n_steps = idx.back();
  opt::OptimizerState state = opt::make_state(num::Vec(model.dim(), 0.0), gamma);
  opt::AverageAccumulator avg;
  out.values.reserve(grid.size());
  out.values.push_back(state.w);
  std::size_t next = 1;
  try {
    for (std::uint64_t n = 1; n <= n_steps; ++n) {
      const models::LrSample s = models::sample_lr(model, rng);
      opt::grda_step(state, models::lsq_gradient(state.w, s.x, s.y), schedule, penalty);
      avg.push(state.w);
      if (next < idx.size() && n == idx[next]) {
        if (diverged(state.w)) return out;
        out.values.push_back(state.w);
        ++next;
      }
    }
  } catch (const opt::GradientError&) {
    return out;
  }
  if (out.values.size() != grid.size()) return out;
  out.average = avg.mean();
  out.ok = true;
  return out;
}

struct MetricsInput {
  const std::vector<std::vector<num::Vec>>& trajectories;
  const limit::MeanTrajectory& mean;
  const std::vector<bool>& active;
  const sde::Band* band;  // may be null
};

std::vector<Report::MetricsRow> compute_metrics(const MetricsInput& in) {
  const std::size_t n_grid = in.mean.grid.size();
  const std::size_t dim = in.mean.dim();
  const std::size_t n_rep = in.trajectories.size();
  std::size_t n_active = 0, n_inactive = 0;
  for (bool a : in.active) a ? ++n_active : ++n_inactive;

  std::vector<Report::MetricsRow> rows(n_grid);
  for (std::size_t m = 0; m < n_grid; ++m) {
    Report::MetricsRow& row = rows[m];
    // Coverage over the joint (repetition, active coordinate) indicator.
    if (in.band != nullptr && n_active > 0 && n_rep > 0) {
      std::size_t hits = 0;
      for (const auto& traj : in.trajectories)
        for (std::size_t j = 0; j < dim; ++j) {
          if (!in.active[j]) continue;
          const double w = traj[m][j];
          if (w >= in.band->lower[m][j] && w <= in.band->upper[m][j]) ++hits;
        }
      const double p = static_cast<double>(hits) / static_cast<double>(n_rep * n_active);
      row.coverage = p;
      row.coverage_se = std::sqrt(p * (1 - p) / static_cast<double>(n_rep));
    }
    if (n_active > 0 && n_rep > 0) {
      double bias = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        if (!in.active[j]) continue;
        double mean_w = 0.0;
        for (const auto& traj : in.trajectories) mean_w += traj[m][j];
        mean_w /= static_cast<double>(n_rep);
        bias += std::abs(mean_w - in.mean.values[m][j]);
      }
      row.avg_bias = bias / static_cast<double>(n_active);
    }
    if (n_rep > 0) {
      double tz = 0.0, fz = 0.0;
      for (const auto& traj : in.trajectories) {
        std::size_t tz_count = 0, fz_count = 0;
        for (std::size_t j = 0; j < dim; ++j) {
          if (traj[m][j] != 0.0) continue;
          in.active[j] ? ++fz_count : ++tz_count;
        }
        if (n_inactive > 0) tz += static_cast<double>(tz_count) / static_cast<double>(n_inactive);
        if (n_active > 0) fz += static_cast<double>(fz_count) / static_cast<double>(n_active);
      }
      row.true_zero_prop = tz / static_cast<double>(n_rep);
      row.false_zero_prop = fz / static_cast<double>(n_rep);
    }
  }
  return rows;
}

// Coverage averaged over grid points at least `margin` away from every sign
// change of the mean path (the band is allowed a jump there).
double coverage_excluding_jumps(const std::vector<Report::MetricsRow>& rows,
                                const num::Vec& grid, const std::vector<double>& jumps,
                                double margin) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    bool near = false;
    for (double tj : jumps)
      if (std::abs(grid[m] - tj) <= margin) {
        near = true;
        break;
      }
    if (near) continue;
    sum += rows[m].coverage;
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

void check_divergence_budget(std::size_t diverged_count, std::size_t total) {
  if (static_cast<double>(diverged_count) > 0.05 * static_cast<double>(total))
    throw NumericError("run: more than 5% of repetitions diverged (" +
                       std::to_string(diverged_count) + "/" + std::to_string(total) + ")");
}

// Sign pattern for the fluctuation SDE: mean-path magnitudes below tol count
// as zero, so the decaying transients of inactive coordinates take the
// soft-threshold branch rather than a spurious active branch (which would
// distort the coupled drift of the simulated band).
limit::SignPattern band_sign_pattern(const limit::MeanTrajectory& mean, double tol) {
  limit::MeanTrajectory snapped = mean;
  for (auto& v : snapped.values)
    for (double& x : v)
      if (std::abs(x) < tol) x = 0.0;
  return limit::sign_stable_intervals(snapped);
}

sde::SdeCoefficients lr_sde_coefficients(const ExperimentConfig& cfg,
                                         const models::LinearModel& model,
                                         const limit::MeanTrajectory& mean,
                                         const num::RngStream& base) {
  sde::SdeCoefficients coeffs;
  coeffs.grid = mean.grid;
  coeffs.pattern = band_sign_pattern(mean, cfg.sign_zero_tol);
  const std::size_t n_intervals = mean.grid.size() - 1;
  coeffs.drift_jacobian.assign(n_intervals, sde::grad_G(model));

  num::RngStream kernel_rng = num::rng_split(base, kKernelLabel);
  const sde::KernelSpec spec =
      cfg.kernel_samples == 0
          ? sde::KernelSpec::lr_exact(model)
          : sde::KernelSpec::empirical(model, cfg.kernel_samples, kernel_rng);

  coeffs.diffusion_sqrt.assign(n_intervals, num::Matrix());
  parallel_for(n_intervals, cfg.threads, [&](std::size_t m) {
    coeffs.diffusion_sqrt[m] = sde::matrix_sqrt(sde::sigma_lr(mean.values[m], spec));
  });
  return coeffs;
}

void attach_band(Report& report, const ExperimentConfig& cfg,
                 const sde::SdeCoefficients& coeffs, const opt::TuningSchedule& schedule,
                 const limit::MeanTrajectory& mean, const num::RngStream& base) {
  if (cfg.band_paths < 100) throw ConfigError("config: band_paths must be >= 100");
  const sde::BandEnsemble ens =
      sde::simulate_V(coeffs, schedule, cfg.band_paths, cfg.dt, base,
                      resolve_threads(cfg.threads, cfg.band_paths), kBandLabelOffset);
  report.diverged_band_paths = ens.n_diverged;
  report.band = sde::band_from_quantiles(ens, cfg.alpha, mean, cfg.gamma);
  report.has_band = true;
}

void finish_summary(Report& report, const limit::MeanTrajectory& mean, double sign_zero_tol) {
  if (!report.has_metrics) return;
  const auto& rows = report.metrics;
  report.summary["terminal_coverage"] = rows.back().coverage;
  report.summary["terminal_avg_bias"] = rows.back().avg_bias;
  report.summary["terminal_true_zero_prop"] = rows.back().true_zero_prop;
  report.summary["terminal_false_zero_prop"] = rows.back().false_zero_prop;
  if (report.has_band) {
    const auto jumps = limit::sign_change_times(band_sign_pattern(mean, sign_zero_tol));
    report.summary["coverage_excluding_jumps"] =
        coverage_excluding_jumps(rows, report.grid, jumps, 2 * kGridStep);
    double second_half = 0.0;
    std::size_t n = 0;
    for (std::size_t m = 0; m < report.grid.size(); ++m) {
      if (report.grid[m] < report.grid.back() / 2) continue;
      second_half += rows[m].coverage;
      ++n;
    }
    report.summary["coverage_mean_second_half"] =
        n == 0 ? 0.0 : second_half / static_cast<double>(n);
  }
}

}  // namespace

std::pair<double, double> support_proportions(const num::Vec& w, const num::Vec& w_star) {
  if (w.size() != w_star.size())
    throw std::invalid_argument("support_proportions: dimension mismatch");
  std::size_t tz = 0, fz = 0, n_zero = 0, n_active = 0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w_star[j] == 0.0) {
      ++n_zero;
      if (w[j] == 0.0) ++tz;
    } else {
      ++n_active;
      if (w[j] == 0.0) ++fz;
    }
  }
  return {n_zero == 0 ? 0.0 : static_cast<double>(tz) / static_cast<double>(n_zero),
          n_active == 0 ? 0.0 : static_cast<double>(fz) / static_cast<double>(n_active)};
}

double excess_risk_of_average(const models::LinearModel& model, const num::Vec& avg) {
  const num::Vec diff = avg - model.w_star();
  return 0.5 * num::dot(diff, num::matvec(model.H(), diff));
}

Report run_lr_experiment(const ExperimentConfig& cfg) {
  if (cfg.problem != Problem::Lr) throw ConfigError("config: problem must be \"lr\"");
  const num::RngStream base(cfg.seed, 0);
  num::RngStream model_rng = num::rng_split(base, kModelLabel);

  const models::LinearModel model(lr_covariance(cfg), draw_w_star(cfg, model_rng),
                                  cfg.sigma_eps);
  const opt::TuningSchedule schedule = schedule_from(cfg);
  const opt::Penalty penalty = penalty_from(cfg);

  Report report;
  report.version = kVersion;
  report.config_echo = config_echo(cfg);
  report.grid = limit::uniform_grid(cfg.horizon, kGridStep);

  const limit::MeanTrajectory mean =
      limit::lr_mean_trajectory(model.H(), num::Vec(cfg.d, 0.0), model.w_star(), report.grid);

  std::vector<RepOutcome> outcomes(cfg.repetitions);
  parallel_for(cfg.repetitions, cfg.threads, [&](std::size_t r) {
    outcomes[r] = run_lr_rep(model, schedule, penalty, report.grid, cfg.gamma,
                             num::rng_split(base, r));
  });
  double risk_sum = 0.0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (!outcomes[r].ok) {
      ++report.diverged_reps;
      continue;
    }
    report.rep_ids.push_back(r);
    report.trajectories.push_back(std::move(outcomes[r].values));
    risk_sum += excess_risk_of_average(model, outcomes[r].average);
  }
  check_divergence_budget(report.diverged_reps, cfg.repetitions);

  // The RDA schedule has no finite scaled penalty limit, so no band exists
  // for it; metrics then carry no coverage.
  if (schedule.kind() != opt::TuningSchedule::Kind::Rda) {
    const sde::SdeCoefficients coeffs = lr_sde_coefficients(cfg, model, mean, base);
    attach_band(report, cfg, coeffs, schedule, mean, base);
  }

  std::vector<bool> active(cfg.d);
  for (std::size_t j = 0; j < cfg.d; ++j) active[j] = model.w_star()[j] != 0.0;
  report.metrics = compute_metrics(
      {report.trajectories, mean, active, report.has_band ? &report.band : nullptr});
  report.has_metrics = true;

  report.summary["mean_excess_risk_of_average"] =
      report.trajectories.empty()
          ? 0.0
          : risk_sum / static_cast<double>(report.trajectories.size());
  finish_summary(report, mean, cfg.sign_zero_tol);
  return report;
}

namespace {

// Sparse planted components: column j carries weight s^{-1/2} on the j-th
// block of `support_size` coordinates, so supports are disjoint by
// construction.
models::SpcaModel build_spca_model(const ExperimentConfig& cfg) {
  const std::size_t s = cfg.support_size;
  num::Matrix u_star(cfg.d, cfg.k);
  for (std::size_t j = 0; j < cfg.k; ++j)
    for (std::size_t r = 0; r < s; ++r)
      u_star(j * s + r, j) = 1.0 / std::sqrt(static_cast<double>(s));
  num::Matrix c = num::Matrix::identity(cfg.d);
  num::Vec eigvals;
  for (std::size_t j = 0; j < cfg.k; ++j) {
    const double load = j == 0 ? 2.0 : 1.0;
    const num::Vec u = u_star.col(j);
    for (std::size_t r = 0; r < cfg.d; ++r)
      for (std::size_t col = 0; col < cfg.d; ++col) c(r, col) += load * u[r] * u[col];
    eigvals.push_back(1.0 + load);
  }
  return models::SpcaModel(std::move(c), std::move(u_star), std::move(eigvals));
}

num::Matrix random_orthonormal(std::size_t d, std::size_t k, num::RngStream& rng) {
  num::Matrix u(d, k);
  for (std::size_t j = 0; j < k; ++j) {
    num::Vec v(d);
    for (double& x : v) x = rng.normal();
    for (std::size_t i = 0; i < j; ++i) num::axpy(v, -num::dot(v, u.col(i)), u.col(i));
    const double n = num::norm2(v);
    for (std::size_t r = 0; r < d; ++r) u(r, j) = v[r] / n;
  }
  return u;
}

RepOutcome run_pca_rep(const models::SpcaModel& model, const opt::TuningSchedule& schedule,
                       const num::Matrix& u0, const num::Vec& grid, double gamma,
                       num::RngStream rng) {
  RepOutcome out;
  const auto idx = grid_step_indices(grid, gamma);
  const std::uint64_t n_steps = idx.back();
  const std::size_t d = model.dim();
  const std::size_t k = model.k();
  models::PcaState state = models::make_pca_state(u0, gamma);

  const auto stacked = [&](const num::Matrix& u) {
    num::Vec y(d * k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t r = 0; r < d; ++r) y[j * d + r] = u(r, j);
    return y;
  };

  out.values.push_back(stacked(state.U));
  std::size_t next = 1;
  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    const num::Vec x = models::sample_pca(model, rng);
    models::ospca_step(state, x, schedule);
    if (next < idx.size() && n == idx[next]) {
      num::Vec y = stacked(state.U);
      if (diverged(y)) return out;
      out.values.push_back(std::move(y));
      ++next;
    }
  }
  if (out.values.size() != grid.size()) return out;
  out.ok = true;
  return out;
}

}  // namespace

Report run_pca_experiment(const ExperimentConfig& cfg) {
  if (cfg.problem != Problem::Pca) throw ConfigError("config: problem must be \"pca\"");
  if (cfg.kernel_samples == 0)
    throw ConfigError("config: kernel_samples must be >= 1 for pca runs");
  const num::RngStream base(cfg.seed, 0);

  const models::SpcaModel model = build_spca_model(cfg);
  const opt::TuningSchedule schedule = schedule_from(cfg);
  const std::size_t d = cfg.d, k = cfg.k;

  num::RngStream init_rng = num::rng_split(base, kInitLabel);
  const num::Matrix u0 = random_orthonormal(d, k, init_rng);

  Report report;
  report.version = kVersion;
  report.config_echo = config_echo(cfg);
  report.grid = limit::uniform_grid(cfg.horizon, kGridStep);

  const limit::MeanTrajectory mean = limit::ospca_mean_ode(model, u0, report.grid);

  std::vector<RepOutcome> outcomes(cfg.repetitions);
  parallel_for(cfg.repetitions, cfg.threads, [&](std::size_t r) {
    outcomes[r] =
        run_pca_rep(model, schedule, u0, report.grid, cfg.gamma, num::rng_split(base, r));
  });

  // Resolve the sign indeterminacy per column: compare each repetition's
  // terminal column against the ODE branch and flip the whole recorded column
  // when they disagree.
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (!outcomes[r].ok) {
      ++report.diverged_reps;
      continue;
    }
    auto& traj = outcomes[r].values;
    for (std::size_t j = 0; j < k; ++j) {
      double ip = 0.0;
      for (std::size_t c = 0; c < d; ++c)
        ip += traj.back()[j * d + c] * mean.values.back()[j * d + c];
      if (ip >= 0) continue;
      for (auto& y : traj)
        for (std::size_t c = 0; c < d; ++c) y[j * d + c] = -y[j * d + c];
    }
    report.rep_ids.push_back(r);
    report.trajectories.push_back(std::move(traj));
  }
  check_divergence_budget(report.diverged_reps, cfg.repetitions);

  // Frozen SDE coefficients along the mean path (no band for RDA).
  if (schedule.kind() != opt::TuningSchedule::Kind::Rda) {
    sde::SdeCoefficients coeffs;
    coeffs.grid = mean.grid;
    coeffs.pattern = band_sign_pattern(mean, cfg.sign_zero_tol);
    const std::size_t n_intervals = mean.grid.size() - 1;
    num::RngStream kernel_rng = num::rng_split(base, kKernelLabel);
    const sde::PcaKernelSpec spec =
        sde::PcaKernelSpec::draw(model, cfg.kernel_samples, kernel_rng);
    coeffs.drift_jacobian.assign(n_intervals, num::Matrix());
    coeffs.diffusion_sqrt.assign(n_intervals, num::Matrix());
    parallel_for(n_intervals, cfg.threads, [&](std::size_t m) {
      num::Matrix u(d, k);
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t r = 0; r < d; ++r) u(r, j) = mean.values[m][j * d + r];
      coeffs.drift_jacobian[m] = sde::grad_G(model, u);
      coeffs.diffusion_sqrt[m] = sde::matrix_sqrt(sde::sigma_pca(u, spec));
    });
    attach_band(report, cfg, coeffs, schedule, mean, base);
  }

  std::vector<bool> active(d * k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t r = 0; r < d; ++r) active[j * d + r] = model.U_star()(r, j) != 0.0;
  report.metrics = compute_metrics(
      {report.trajectories, mean, active, report.has_band ? &report.band : nullptr});
  report.has_metrics = true;

  if (!report.trajectories.empty()) {
    double overlap = 0.0;
    for (const auto& traj : report.trajectories) {
      double ip = 0.0;
      for (std::size_t r = 0; r < d; ++r) ip += traj.back()[r] * model.U_star()(r, 0);
      overlap += std::abs(ip);
    }
    report.summary["mean_terminal_overlap_u1"] =
        overlap / static_cast<double>(report.trajectories.size());
  }
  finish_summary(report, mean, cfg.sign_zero_tol);
  return report;
}

Report run_rda_bias_check(const ExperimentConfig& cfg) {
  if (cfg.problem != Problem::Lr) throw ConfigError("config: problem must be \"lr\"");
  if (!cfg.h_diag && std::abs(cfg.rho) > 0)
    throw ConfigError("config: rda-bias requires a diagonal H (set h_diag or rho = 0)");
  const num::RngStream base(cfg.seed, 0);
  num::RngStream model_rng = num::rng_split(base, kModelLabel);

  const models::LinearModel model(lr_covariance(cfg), draw_w_star(cfg, model_rng),
                                  cfg.sigma_eps);
  const opt::TuningSchedule schedule =
      cfg.c0 > 0 ? opt::TuningSchedule::rda(cfg.c0) : opt::TuningSchedule::zero();
  const opt::Penalty penalty = opt::Penalty::l1();

  Report report;
  report.version = kVersion;
  report.config_echo = config_echo(cfg);
  report.grid = limit::uniform_grid(cfg.horizon, kGridStep);

  const auto idx = grid_step_indices(report.grid, cfg.gamma);
  const std::uint64_t n_steps = idx.back();
  const std::uint64_t tail_start = n_steps - n_steps / 4;

  struct BiasOutcome {
    std::vector<num::Vec> values;
    num::Vec tail_mean;
    bool ok = false;
  };
  std::vector<BiasOutcome> outcomes(cfg.repetitions);
  parallel_for(cfg.repetitions, cfg.threads, [&](std::size_t r) {
    BiasOutcome& out = outcomes[r];
    num::RngStream rng = num::rng_split(base, r);
    opt::OptimizerState state = opt::make_state(num::Vec(cfg.d, 0.0), cfg.gamma);
    opt::AverageAccumulator tail;
    out.values.push_back(state.w);
    std::size_t next = 1;
    try {
      for (std::uint64_t n = 1; n <= n_steps; ++n) {
        const models::LrSample s = models::sample_lr(model, rng);
        opt::grda_step(state, models::lsq_gradient(state.w, s.x, s.y), schedule, penalty);
        if (n > tail_start) tail.push(state.w);
        if (next < idx.size() && n == idx[next]) {
          if (diverged(state.w)) return;
          out.values.push_back(state.w);
          ++next;
        }
      }
    } catch (const opt::GradientError&) {
      return;
    }
    if (out.values.size() != report.grid.size()) return;
    out.tail_mean = tail.mean();
    out.ok = true;
  });

  num::Vec mean_tail(cfg.d, 0.0);
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (!outcomes[r].ok) {
      ++report.diverged_reps;
      continue;
    }
    report.rep_ids.push_back(r);
    num::axpy(mean_tail, 1.0, outcomes[r].tail_mean);
    report.trajectories.push_back(std::move(outcomes[r].values));
  }
  check_divergence_budget(report.diverged_reps, cfg.repetitions);
  const auto kept = static_cast<double>(report.trajectories.size());
  for (double& x : mean_tail) x /= kept;

  // Against-target metrics: the RDA limit is deliberately biased, so avg_bias
  // tracks |E[w] - w*_j| over active coordinates and no band is produced.
  std::vector<bool> active(cfg.d);
  for (std::size_t j = 0; j < cfg.d; ++j) active[j] = model.w_star()[j] != 0.0;
  limit::MeanTrajectory target;
  target.grid = report.grid;
  target.meta = "lr-target";
  target.values.assign(report.grid.size(), model.w_star());
  report.metrics = compute_metrics({report.trajectories, target, active, nullptr});
  report.has_metrics = true;

  nlohmann::json measured = nlohmann::json::array();
  nlohmann::json predicted = nlohmann::json::array();
  double worst_rel = 0.0;
  for (std::size_t j = 0; j < cfg.d; ++j) {
    if (!active[j]) continue;
    const double b = std::abs(mean_tail[j] - model.w_star()[j]);
    const double p = limit::rda_limit_bias(cfg.c0, model.H()(j, j));
    measured.push_back(b);
    predicted.push_back(p);
    if (p > 0) worst_rel = std::max(worst_rel, std::abs(b - p) / p);
  }
  report.summary["rda_bias_measured"] = measured;
  report.summary["rda_bias_predicted"] = predicted;
  report.summary["rda_bias_max_rel_error"] = worst_rel;
  finish_summary(report, target, cfg.sign_zero_tol);
  return report;
}

Report run_band_only(const ExperimentConfig& cfg) {
  const num::RngStream base(cfg.seed, 0);
  Report report;
  report.version = kVersion;
  report.config_echo = config_echo(cfg);
  report.grid = limit::uniform_grid(cfg.horizon, kGridStep);
  const opt::TuningSchedule schedule = schedule_from(cfg);
  if (schedule.kind() == opt::TuningSchedule::Kind::Rda)
    throw ConfigError("config: the RDA schedule admits no confidence band");

  if (cfg.problem == Problem::Lr) {
    num::RngStream model_rng = num::rng_split(base, kModelLabel);
    const models::LinearModel model(lr_covariance(cfg), draw_w_star(cfg, model_rng),
                                    cfg.sigma_eps);
    const limit::MeanTrajectory mean = limit::lr_mean_trajectory(
        model.H(), num::Vec(cfg.d, 0.0), model.w_star(), report.grid);
    const sde::SdeCoefficients coeffs = lr_sde_coefficients(cfg, model, mean, base);
    attach_band(report, cfg, coeffs, schedule, mean, base);
  } else {
    if (cfg.kernel_samples == 0)
      throw ConfigError("config: kernel_samples must be >= 1 for pca runs");
    const models::SpcaModel model = build_spca_model(cfg);
    num::RngStream init_rng = num::rng_split(base, kInitLabel);
    const num::Matrix u0 = random_orthonormal(cfg.d, cfg.k, init_rng);
    const limit::MeanTrajectory mean = limit::ospca_mean_ode(model, u0, report.grid);

    sde::SdeCoefficients coeffs;
    coeffs.grid = mean.grid;
    coeffs.pattern = band_sign_pattern(mean, cfg.sign_zero_tol);
    const std::size_t n_intervals = mean.grid.size() - 1;
    num::RngStream kernel_rng = num::rng_split(base, kKernelLabel);
    const sde::PcaKernelSpec spec =
        sde::PcaKernelSpec::draw(model, cfg.kernel_samples, kernel_rng);
    coeffs.drift_jacobian.assign(n_intervals, num::Matrix());
    coeffs.diffusion_sqrt.assign(n_intervals, num::Matrix());
    parallel_for(n_intervals, cfg.threads, [&](std::size_t m) {
      num::Matrix u(cfg.d, cfg.k);
      for (std::size_t j = 0; j < cfg.k; ++j)
        for (std::size_t r = 0; r < cfg.d; ++r) u(r, j) = mean.values[m][j * cfg.d + r];
      coeffs.drift_jacobian[m] = sde::grad_G(model, u);
      coeffs.diffusion_sqrt[m] = sde::matrix_sqrt(sde::sigma_pca(u, spec));
    });
    attach_band(report, cfg, coeffs, schedule, mean, base);
  }
  return report;
}

namespace {

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw NumericError("emit_report: cannot open '" + p.string() + "' for writing");
  return out;
}

}  // namespace

void emit_report(const Report& report, const std::string& dir) {
  const std::filesystem::path root(dir);
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) throw NumericError("emit_report: cannot create directory '" + dir + "'");

  {
    std::ofstream out = open_out(root / "trajectories.csv");
    out << "rep,t,coord,w\n";
    for (std::size_t i = 0; i < report.trajectories.size(); ++i)
      for (std::size_t m = 0; m < report.grid.size(); ++m)
        for (std::size_t j = 0; j < report.trajectories[i][m].size(); ++j)
          out << report.rep_ids[i] << ',' << fmt9(report.grid[m]) << ',' << j << ','
              << fmt9(report.trajectories[i][m][j]) << '\n';
  }
  {
    std::ofstream out = open_out(root / "band.csv");
    out << "t,coord,mean,lower,upper\n";
    if (report.has_band)
      for (std::size_t m = 0; m < report.band.grid.size(); ++m)
        for (std::size_t j = 0; j < report.band.mean[m].size(); ++j)
          out << fmt9(report.band.grid[m]) << ',' << j << ',' << fmt9(report.band.mean[m][j])
              << ',' << fmt9(report.band.lower[m][j]) << ',' << fmt9(report.band.upper[m][j])
              << '\n';
  }
  {
    std::ofstream out = open_out(root / "metrics.csv");
    out << "t,coverage,coverage_se,avg_bias,true_zero_prop,false_zero_prop\n";
    if (report.has_metrics)
      for (std::size_t m = 0; m < report.grid.size(); ++m) {
        const auto& row = report.metrics[m];
        out << fmt9(report.grid[m]) << ',' << fmt9(row.coverage) << ','
            << fmt9(row.coverage_se) << ',' << fmt9(row.avg_bias) << ','
            << fmt9(row.true_zero_prop) << ',' << fmt9(row.false_zero_prop) << '\n';
      }
  }
  {
    nlohmann::json j;
    j["version"] = report.version;
    j["config"] = report.config_echo;
    j["divergence"] = {{"repetitions", report.diverged_reps},
                       {"band_paths", report.diverged_band_paths}};
    j["summary"] = report.summary;
    std::ofstream out = open_out(root / "report.json");
    out << j.dump(2) << '\n';
  }
}

}  // namespace grda::exp
