#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "oas/baseline_samplers.hpp"
#include "oas/ordered_sampler.hpp"
#include "oas/trace.hpp"

namespace oas {

struct ChainOptions {
  long iterations = 7000;  // kept iterations after burn-in
  long burn_in = 3500;
  long thin = 1;
  InitMode init = InitMode::single_block;
  long slice_max_components = 1000000;
  bool validate_every_sweep = false;

  long total_sweeps() const { return burn_in + iterations * thin; }
};

// Post-burn-in visit counts per partition (restricted growth string keys),
// accumulated every sweep regardless of thinning.
using PartitionHistogram = std::map<std::string, long>;

ChainTrace run_ordered_chain(const Data& data, const GaussianFamily& family,
                             const MixingPrior& prior, const ChainOptions& options,
                             std::uint64_t seed, PartitionHistogram* histogram = nullptr);

ChainTrace run_marginal_chain(const Data& data, const GaussianFamily& family,
                              const MixingPrior& prior, const ChainOptions& options,
                              std::uint64_t seed, PartitionHistogram* histogram = nullptr);

ChainTrace run_slice_chain(const Data& data, const GaussianFamily& family,
                           const MixingPrior& prior, const ChainOptions& options,
                           std::uint64_t seed, PartitionHistogram* histogram = nullptr);

// Dispatch by name: "ordered", "marginal" or "slice".
ChainTrace run_chain(const std::string& sampler, const Data& data, const GaussianFamily& family,
                     const MixingPrior& prior, const ChainOptions& options, std::uint64_t seed,
                     PartitionHistogram* histogram = nullptr);

// Total variation distance between a normalized histogram and exact partition
// probabilities keyed the same way.
double histogram_tv(const PartitionHistogram& histogram, const std::map<std::string, double>& exact);

}  // namespace oas
