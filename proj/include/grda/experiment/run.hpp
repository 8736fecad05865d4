#pragma once

#include <string>
#include <vector>

#include "grda/experiment/config.hpp"
#include "grda/models/linear.hpp"
#include "grda/sde/bands.hpp"
#include "json.hpp"

namespace grda::exp {

/// Everything a run produces; emit_report serializes it to the four output
/// files.
struct Report {
  struct MetricsRow {
    double coverage = 0.0;
    double coverage_se = 0.0;
    double avg_bias = 0.0;
    double true_zero_prop = 0.0;
    double false_zero_prop = 0.0;
  };

  nlohmann::json config_echo;
  num::Vec grid;
  std::vector<std::size_t> rep_ids;                    // kept repetitions
  std::vector<std::vector<num::Vec>> trajectories;     // [kept rep][grid][coord]
  bool has_band = false;
  sde::Band band;
  bool has_metrics = false;
  std::vector<MetricsRow> metrics;
  std::size_t diverged_reps = 0;
  std::size_t diverged_band_paths = 0;
  nlohmann::json summary;
  std::string version;
};

Report run_lr_experiment(const ExperimentConfig& cfg);
Report run_pca_experiment(const ExperimentConfig& cfg);
Report run_rda_bias_check(const ExperimentConfig& cfg);

/// Band-only run (no empirical repetitions): mean trajectory plus TACB.
Report run_band_only(const ExperimentConfig& cfg);

/// Support-recovery proportions of one iterate against the truth:
/// (correctly zeroed / truly zero, wrongly zeroed / truly nonzero).
std::pair<double, double> support_proportions(const num::Vec& w, const num::Vec& w_star);

/// Excess risk of the averaged iterate under quadratic loss:
/// (avg - w*)^T H (avg - w*) / 2.
double excess_risk_of_average(const models::LinearModel& model, const num::Vec& avg);

/// Writes trajectories.csv, band.csv, metrics.csv, and report.json into dir
/// (created if absent). Numbers are printed with 9 significant digits, '.'
/// decimal separator, LF line endings; identical reports serialize to
/// identical bytes.
void emit_report(const Report& report, const std::string& dir);

}  // namespace grda::exp
