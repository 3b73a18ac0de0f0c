#pragma once

#include <string>
#include <vector>

#include "oas/components.hpp"
#include "oas/dataio.hpp"
#include "oas/prior.hpp"
#include "oas/species.hpp"

namespace oas {

// A set partition of [n] as blocks of 0-based indices in least element order.
using Partition = std::vector<std::vector<int>>;

// Canonical key: the restricted growth string, dash-separated.
std::string partition_key(const Partition& blocks);
std::string partition_key_from_labels(const std::vector<int>& d);  // 1-based labels

// Every set partition of [n], in lexicographic restricted-growth-string order.
// Guarded at n <= 12 (Bell numbers explode past that).
std::vector<Partition> enumerate_partitions(long n);

// Exact posterior over set partitions: EPPF times block marginal evidences,
// normalized by log-sum-exp. n <= 8 and the prior's EPPF must be available in
// closed form (Pitman-Yor, finite Dirichlet, Gnedin MFM with gamma = 1).
struct PartitionTable {
  std::vector<Partition> partitions;
  std::vector<double> log_posterior;  // normalized

  double probability(size_t idx) const;
  void write_csv(const std::string& path) const;
};

PartitionTable exact_partition_posterior(const Data& data, const MixingPrior& prior,
                                         const GaussianFamily& family);

// Prior over set partitions (likelihood identically one); same contract.
PartitionTable exact_partition_prior(long n, const MixingPrior& prior);

// Monte Carlo estimate of the EPPF from the size-biased stick representation:
// mean of prod_j p_j^{n_j - 1} prod_{j<k} (1 - sum_{l<=j} p_l) over prior
// stick draws. Returns the estimate and its standard error.
struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

MonteCarloEstimate eppf_monte_carlo(const MixingPrior& prior, const BlockCounts& counts,
                                    long samples, Rng& rng);

}  // namespace oas
