#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace grda::exp {

/// Invalid or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric failure during a run (CLI exit code 3).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Problem { Lr, Pca };
enum class Algorithm { Sgd, Rda, Grda };

/// Harness configuration, loaded from a JSON object with identically named
/// snake_case keys; unknown keys are rejected.
struct ExperimentConfig {
  Problem problem = Problem::Lr;
  std::size_t d = 0;
  std::size_t k = 1;
  double rho = -0.5;
  double sigma_eps = 0.5;
  std::size_t support_size = 0;
  double min_active_magnitude = 0.1;
  Algorithm algorithm = Algorithm::Grda;
  double c0 = 0.1;
  double c = 1.0;
  double mu = 0.7;
  double t0 = 0.0;
  double gamma = 1e-3;
  double horizon = 20.0;
  std::size_t repetitions = 100;
  std::size_t band_paths = 500;
  std::size_t kernel_samples = 5000;
  double dt = 0.05;
  double alpha = 0.05;
  // Mean-path magnitudes below this are treated as zero when extracting the
  // sign pattern for the fluctuation SDE; decaying transients of inactive
  // coordinates never reach exact zero, and marking them "active" corrupts
  // the coupled drift of the simulated band.
  double sign_zero_tol = 0.05;
  std::uint64_t seed = 12345;
  std::string out_dir = "out";
  unsigned threads = 0;  // 0 = hardware concurrency
  std::optional<std::vector<double>> h_diag;
};

/// Parses the JSON text of a config file; throws ConfigError on syntax
/// errors, unknown keys, type mismatches, or violated invariants.
ExperimentConfig parse_config(const std::string& json_text);

/// Reads and parses a config file.
ExperimentConfig load_config(const std::string& path);

}  // namespace grda::exp
