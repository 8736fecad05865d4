#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "grda/experiment/config.hpp"
#include "grda/experiment/run.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, std::string& config_path, Overrides& ov) {
  cmd->add_option("--config", config_path, "Path to the JSON config file")->required();
  cmd->add_option("--seed", ov.seed, "Override the config's base seed");
  cmd->add_option("--reps", ov.reps, "Override the number of repetitions");
  cmd->add_option("--out", ov.out, "Override the output directory");
  cmd->add_option("--threads", ov.threads, "Override the worker count (0 = hardware)");
}

grda::exp::ExperimentConfig load(const std::string& path, const Overrides& ov) {
  grda::exp::ExperimentConfig cfg = grda::exp::load_config(path);
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.reps) cfg.repetitions = *ov.reps;
  if (ov.out) cfg.out_dir = *ov.out;
  if (ov.threads) cfg.threads = *ov.threads;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gRDA optimizer dynamics lab: trajectories, limiting bands, and metrics"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  CLI::App* lr = app.add_subcommand("lr-run", "Monte-Carlo sparse linear regression run");
  CLI::App* pca = app.add_subcommand("pca-run", "Monte-Carlo online sparse PCA run");
  CLI::App* rda = app.add_subcommand("rda-bias", "Long-run RDA bias check on diagonal H");
  CLI::App* band = app.add_subcommand("band", "Confidence band only, no empirical reps");
  for (CLI::App* cmd : {lr, pca, rda, band}) add_common(cmd, config_path, ov);

  CLI11_PARSE(app, argc, argv);

  try {
    grda::exp::ExperimentConfig cfg = load(config_path, ov);
    grda::exp::Report report;
    if (lr->parsed())
      report = grda::exp::run_lr_experiment(cfg);
    else if (pca->parsed())
      report = grda::exp::run_pca_experiment(cfg);
    else if (rda->parsed())
      report = grda::exp::run_rda_bias_check(cfg);
    else
      report = grda::exp::run_band_only(cfg);
    grda::exp::emit_report(report, cfg.out_dir);
    std::cout << "wrote " << cfg.out_dir << "/{trajectories,band,metrics}.csv and report.json\n";
  } catch (const grda::exp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
