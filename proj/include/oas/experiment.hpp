#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oas/chain_runner.hpp"

namespace oas {

// Parsed experiment configuration. The file format is flat key = value lines
// with dotted keys; see README for the key reference.
struct ExperimentConfig {
  std::vector<std::string> samplers;  // "ordered", "marginal", "slice"
  MixingPrior prior = MixingPrior::pitman_yor(0.0, 1.0);

  // family: preset ("paper") or explicit hyperparameters
  std::string family_preset = "paper";
  std::optional<NigHyper> nig;
  std::optional<NiwHyper> niw;

  // data source: a CSV path or a synthetic generator
  std::string data_path;
  std::string data_synthetic;
  std::uint64_t data_seed = 1;
  std::optional<std::uint64_t> permute_seed;

  long iterations = 7000;
  long burn_in = 3500;
  long thin = 1;
  std::uint64_t seed = 0;
  bool seed_present = false;
  std::string output_dir = ".";
  long slice_max_components = 1000000;
  std::string init = "single_block";

  void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig parse_config_file(const std::string& path);

Data load_experiment_data(const ExperimentConfig& config);
GaussianFamily make_family(const ExperimentConfig& config, const Data& data);

// Runs every configured sampler. Per sampler the artifacts are
//   <output_dir>/<sampler>_trace.csv
//   <output_dir>/<sampler>_summary.json
//   <output_dir>/<sampler>_density.csv
//   <output_dir>/<sampler>_component_density.csv
// and, when n <= 8 and the prior has a closed-form EPPF, a shared
// <output_dir>/oracle_comparison.json with the TV distance of each sampler's
// empirical partition distribution from the exact posterior.
// Chain seeds are seed, seed + 1, ... in sampler order.
void run_experiment(const ExperimentConfig& config);

// Exact partition posterior for the configured data/prior/family, written to
// <output_dir>/oracle.csv.
void run_oracle(const ExperimentConfig& config);

// One row of the report table per trace file.
struct ReportRow {
  std::string path;
  std::string sampler;
  std::string prior;
  std::uint64_t seed = 0;
  long records = 0;
  double iat_k = 1.0;
  double iat_dv = 1.0;
  double mean_k = 0.0;
};

ReportRow report_trace(const std::string& trace_path);

}  // namespace oas
