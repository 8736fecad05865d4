#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "grda/experiment/config.hpp"
#include "grda/experiment/run.hpp"

using namespace grda;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

exp::ExperimentConfig tiny_lr_config() {
  return exp::parse_config(R"({
    "problem": "lr", "d": 3, "support_size": 2, "sigma_eps": 0.5,
    "algorithm": "grda", "c": 1.0, "mu": 0.7, "gamma": 0.01,
    "horizon": 2.0, "repetitions": 6, "band_paths": 100,
    "kernel_samples": 0, "dt": 0.05, "alpha": 0.1, "seed": 99, "threads": 1
  })");
}

}  // namespace

TEST_CASE("parse_config: defaults, overrides, and validation") {
  const exp::ExperimentConfig cfg = exp::parse_config(R"({"d": 4})");
  CHECK(cfg.d == 4);
  CHECK(cfg.gamma == doctest::Approx(1e-3));
  CHECK(cfg.alpha == doctest::Approx(0.05));
  CHECK(cfg.support_size == 4);

  CHECK_THROWS_AS(exp::parse_config("not json"), exp::ConfigError);
  CHECK_THROWS_AS(exp::parse_config(R"({"d": 4, "bogus_key": 1})"), exp::ConfigError);
  CHECK_THROWS_AS(exp::parse_config(R"({"d": 4, "alpha": 1.5})"), exp::ConfigError);
  CHECK_THROWS_AS(exp::parse_config(R"({"d": 4, "gamma": 0})"), exp::ConfigError);
  CHECK_THROWS_AS(exp::parse_config(R"({"alpha": 0.05})"), exp::ConfigError);  // missing d
  CHECK_THROWS_AS(exp::parse_config(R"({"d": 4, "rho": 1.0})"), exp::ConfigError);
  CHECK_THROWS_AS(exp::parse_config(R"({"d": 4, "support_size": 9})"), exp::ConfigError);
  CHECK_THROWS_AS(exp::parse_config(R"({"d": 4, "problem": "pca", "k": 3})"),
                  exp::ConfigError);
  CHECK_THROWS_AS(exp::parse_config(R"({"d": 4, "h_diag": [1, 2]})"), exp::ConfigError);
}

TEST_CASE("support_proportions: counting spot check") {
  const auto [tz, fz] = exp::support_proportions({0.0, 0.0, 1.0}, {0.0, 1.0, 1.0});
  CHECK(tz == doctest::Approx(1.0));
  CHECK(fz == doctest::Approx(0.5));
}

TEST_CASE("excess_risk_of_average: worked examples") {
  const models::LinearModel model(num::Matrix::identity(2), {1.0, -1.0}, 0.5);
  CHECK(exp::excess_risk_of_average(model, model.w_star()) == 0.0);
  CHECK(exp::excess_risk_of_average(model, {2.0, -1.0}) == doctest::Approx(0.5));
}

TEST_CASE("run_lr_experiment: noiseless SGD converges to w*") {
  exp::ExperimentConfig cfg = exp::parse_config(R"({
    "problem": "lr", "d": 2, "support_size": 2, "sigma_eps": 0.0,
    "h_diag": [1.0, 1.0], "algorithm": "sgd", "gamma": 1e-3,
    "horizon": 20.0, "repetitions": 2, "band_paths": 100,
    "kernel_samples": 0, "seed": 7, "threads": 1,
    "min_active_magnitude": 0.3
  })");
  const exp::Report report = exp::run_lr_experiment(cfg);
  REQUIRE(report.trajectories.size() == 2);
  // Recover w* from the mean path limit: terminal band center equals w(T).
  for (const auto& traj : report.trajectories)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(std::abs(traj.back()[j] - report.band.mean.back()[j]) <= 1e-3);
  CHECK(report.diverged_reps == 0);
}

TEST_CASE("run_lr_experiment: metrics shapes and coverage bounds") {
  const exp::Report report = exp::run_lr_experiment(tiny_lr_config());
  REQUIRE(report.has_metrics);
  REQUIRE(report.metrics.size() == report.grid.size());
  for (const auto& row : report.metrics) {
    CHECK(row.coverage >= 0.0);
    CHECK(row.coverage <= 1.0);
    CHECK(row.true_zero_prop >= 0.0);
    CHECK(row.true_zero_prop <= 1.0);
    CHECK(row.false_zero_prop >= 0.0);
    CHECK(row.false_zero_prop <= 1.0);
    CHECK(row.coverage_se >= 0.0);
  }
  for (std::size_t m = 0; m < report.grid.size(); ++m)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(report.band.lower[m][j] <= report.band.upper[m][j] + 1e-12);
}

TEST_CASE("emit_report: schema, round-trip, and byte determinism") {
  const exp::ExperimentConfig cfg = tiny_lr_config();
  const exp::Report report = exp::run_lr_experiment(cfg);

  const fs::path dir_a = fresh_dir("grda_emit_a");
  const fs::path dir_b = fresh_dir("grda_emit_b");
  exp::emit_report(report, dir_a.string());
  exp::emit_report(report, dir_b.string());

  for (const char* name : {"trajectories.csv", "band.csv", "metrics.csv", "report.json"})
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));

  // Every band row carries exactly 5 fields, and values round-trip at the
  // printed precision.
  std::istringstream band(slurp(dir_a / "band.csv"));
  std::string line;
  std::getline(band, line);
  CHECK(line == "t,coord,mean,lower,upper");
  std::size_t row = 0;
  while (std::getline(band, line)) {
    std::size_t commas = 0;
    for (char ch : line)
      if (ch == ',') ++commas;
    CHECK(commas == 4);
    double t, mean, lower, upper;
    int coord;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%d,%lf,%lf,%lf", &t, &coord, &mean, &lower,
                        &upper) == 5);
    const std::size_t m = row / 3;
    const auto j = static_cast<std::size_t>(coord);
    CHECK(mean == doctest::Approx(report.band.mean[m][j]).epsilon(1e-8));
    CHECK(lower == doctest::Approx(report.band.lower[m][j]).epsilon(1e-8));
    CHECK(upper == doctest::Approx(report.band.upper[m][j]).epsilon(1e-8));
    ++row;
  }
  CHECK(row == report.grid.size() * 3);

  // No CR bytes anywhere (LF-only contract).
  CHECK(slurp(dir_a / "trajectories.csv").find('\r') == std::string::npos);
  CHECK(slurp(dir_a / "report.json").find('\r') == std::string::npos);

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("emit_report: empty metrics produce header-only CSVs") {
  exp::Report report;
  report.version = "test";
  report.config_echo = nlohmann::json::object();
  report.summary = nlohmann::json::object();
  const fs::path dir = fresh_dir("grda_emit_empty");
  exp::emit_report(report, dir.string());
  CHECK(slurp(dir / "trajectories.csv") == "rep,t,coord,w\n");
  CHECK(slurp(dir / "band.csv") == "t,coord,mean,lower,upper\n");
  CHECK(slurp(dir / "metrics.csv") ==
        "t,coverage,coverage_se,avg_bias,true_zero_prop,false_zero_prop\n");
  fs::remove_all(dir);
}

TEST_CASE("determinism: worker count never changes the emitted bytes") {
  exp::ExperimentConfig cfg = tiny_lr_config();
  cfg.threads = 1;
  const exp::Report a = exp::run_lr_experiment(cfg);
  cfg.threads = 4;
  const exp::Report b = exp::run_lr_experiment(cfg);

  const fs::path dir_a = fresh_dir("grda_thr_a");
  const fs::path dir_b = fresh_dir("grda_thr_b");
  exp::emit_report(a, dir_a.string());
  exp::emit_report(b, dir_b.string());
  for (const char* name : {"trajectories.csv", "band.csv", "metrics.csv"})
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("run_rda_bias_check: c0 = 0 reduces to unbiased SGD") {
  exp::ExperimentConfig cfg = exp::parse_config(R"({
    "problem": "lr", "d": 2, "support_size": 2, "sigma_eps": 0.5,
    "h_diag": [1.0, 1.0], "algorithm": "rda", "c0": 0.0, "gamma": 1e-3,
    "horizon": 10.0, "repetitions": 20, "seed": 21, "threads": 2,
    "min_active_magnitude": 0.3
  })");
  const exp::Report report = exp::run_rda_bias_check(cfg);
  const auto measured = report.summary.at("rda_bias_measured");
  for (const auto& b : measured) CHECK(b.get<double>() <= 0.05);
}

TEST_CASE("run_rda_bias_check: bias direction is shrinkage toward zero") {
  exp::ExperimentConfig cfg = exp::parse_config(R"({
    "problem": "lr", "d": 2, "support_size": 2, "sigma_eps": 0.5,
    "h_diag": [1.0, 1.0], "algorithm": "rda", "c0": 0.2, "gamma": 1e-3,
    "horizon": 15.0, "repetitions": 30, "seed": 23, "threads": 2,
    "min_active_magnitude": 0.5
  })");
  const exp::Report report = exp::run_rda_bias_check(cfg);
  CHECK(report.summary.at("rda_bias_max_rel_error").get<double>() <= 0.25);
}

TEST_CASE("run_pca_experiment: OPCA never produces exact zeros") {
  exp::ExperimentConfig cfg = exp::parse_config(R"({
    "problem": "pca", "d": 6, "k": 1, "support_size": 3,
    "algorithm": "sgd", "gamma": 1e-3, "horizon": 2.0,
    "repetitions": 3, "band_paths": 100, "kernel_samples": 1000,
    "seed": 31, "threads": 2
  })");
  const exp::Report report = exp::run_pca_experiment(cfg);
  REQUIRE(report.has_metrics);
  for (std::size_t m = 1; m < report.grid.size(); ++m) {
    CHECK(report.metrics[m].true_zero_prop == 0.0);
    CHECK(report.metrics[m].false_zero_prop == 0.0);
  }
}

TEST_CASE("run_pca_experiment: thresholded run reports zeroed inactive loadings") {
  exp::ExperimentConfig cfg = exp::parse_config(R"({
    "problem": "pca", "d": 6, "k": 1, "support_size": 3,
    "algorithm": "grda", "c": 2.0, "mu": 1.0, "gamma": 1e-3,
    "horizon": 5.0, "repetitions": 5, "band_paths": 100,
    "kernel_samples": 1000, "seed": 33, "threads": 2
  })");
  const exp::Report report = exp::run_pca_experiment(cfg);
  CHECK(report.metrics.back().true_zero_prop > 0.0);
  CHECK(report.summary.at("mean_terminal_overlap_u1").get<double>() >= 0.9);
}

TEST_CASE("excess risk of the averaged iterate trends down in the horizon") {
  double risks[4];
  const double horizons[4] = {5.0, 10.0, 15.0, 20.0};
  for (int i = 0; i < 4; ++i) {
    std::ostringstream cfg_json;
    cfg_json << R"({"problem": "lr", "d": 5, "support_size": 3, "sigma_eps": 0.5,)"
             << R"("algorithm": "sgd", "gamma": 1e-3, "repetitions": 100,)"
             << R"("band_paths": 100, "kernel_samples": 0, "seed": 35, "threads": 0,)"
             << R"("horizon": )" << horizons[i] << "}";
    const exp::Report report = exp::run_lr_experiment(exp::parse_config(cfg_json.str()));
    risks[i] = report.summary.at("mean_excess_risk_of_average").get<double>();
  }
  // Least-squares slope over the four horizons must be non-positive.
  double sx = 0, sy = 0, sxy = 0, sxx = 0;
  for (int i = 0; i < 4; ++i) {
    sx += horizons[i];
    sy += risks[i];
    sxy += horizons[i] * risks[i];
    sxx += horizons[i] * horizons[i];
  }
  const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  CHECK(slope <= 0.0);
}
