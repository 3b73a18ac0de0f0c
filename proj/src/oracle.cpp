#include "oas/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace oas {

std::string partition_key_from_labels(const std::vector<int>& d) {
  std::string key;
  for (size_t i = 0; i < d.size(); ++i) {
    if (i) key.push_back('-');
    key += std::to_string(d[i] - 1);
  }
  return key;
}

std::string partition_key(const Partition& blocks) {
  size_t n = 0;
  for (const auto& blk : blocks) n += blk.size();
  std::vector<int> d(n, 0);
  for (size_t j = 0; j < blocks.size(); ++j)
    for (int i : blocks[j]) d[static_cast<size_t>(i)] = static_cast<int>(j) + 1;
  return partition_key_from_labels(d);
}

std::vector<Partition> enumerate_partitions(long n) {
  if (n < 1) throw domain_error("enumerate_partitions: n must be >= 1");
  if (n > 12) throw resource_limit_error("enumerate_partitions: n > 12");
  std::vector<Partition> out;
  std::vector<int> rgs(static_cast<size_t>(n), 0);
  // Lexicographic restricted growth strings: rgs[i] <= 1 + max(rgs[0..i-1]).
  while (true) {
    int k = 0;
    for (int a : rgs) k = std::max(k, a + 1);
    Partition blocks(static_cast<size_t>(k));
    for (long i = 0; i < n; ++i) blocks[static_cast<size_t>(rgs[static_cast<size_t>(i)])].push_back(static_cast<int>(i));
    out.push_back(std::move(blocks));
    // next string
    long i = n - 1;
    for (; i > 0; --i) {
      int mx = 0;
      for (long l = 0; l < i; ++l) mx = std::max(mx, rgs[static_cast<size_t>(l)]);
      if (rgs[static_cast<size_t>(i)] <= mx) break;
    }
    if (i == 0) break;
    rgs[static_cast<size_t>(i)] += 1;
    for (long l = i + 1; l < n; ++l) rgs[static_cast<size_t>(l)] = 0;
  }
  return out;
}

namespace {

double log_eppf_for(const MixingPrior& prior, const BlockCounts& counts) {
  switch (prior.kind()) {
    case PriorKind::pitman_yor:
      return log_eppf_two_param(counts, prior.sigma(), prior.theta());
    case PriorKind::finite_dirichlet:
      return log_eppf_mfm_given_m(counts, prior.gamma(), prior.m());
    case PriorKind::gnedin_mfm:
      if (prior.gamma_rule().is_constant_one())
        return log_eppf_gnedin_marginal(counts, prior.gamma_hat());
      throw unsupported_prior_error("oracle: Gnedin MFM supports only gamma = 1");
  }
  throw unsupported_prior_error("oracle: unknown prior");
}

double log_sum_exp(const std::vector<double>& xs) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : xs) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - mx);
  return mx + std::log(s);
}

}  // namespace

double PartitionTable::probability(size_t idx) const {
  return std::exp(log_posterior[idx]);
}

void PartitionTable::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write oracle table: " + path);
  out << "partition,probability\n";
  char buf[40];
  for (size_t idx = 0; idx < partitions.size(); ++idx) {
    std::snprintf(buf, sizeof(buf), "%.17g", probability(idx));
    out << partition_key(partitions[idx]) << "," << buf << "\n";
  }
}

PartitionTable exact_partition_posterior(const Data& data, const MixingPrior& prior,
                                         const GaussianFamily& family) {
  const long n = data.n();
  if (n > 8) throw resource_limit_error("exact posterior: n > 8");
  PartitionTable table;
  table.partitions = enumerate_partitions(n);
  table.log_posterior.reserve(table.partitions.size());
  for (const auto& blocks : table.partitions) {
    std::vector<long> counts;
    double log_lik = 0.0;
    for (const auto& blk : blocks) {
      counts.push_back(static_cast<long>(blk.size()));
      log_lik += family.log_block_evidence(data.values, data.dim, blk);
    }
    table.log_posterior.push_back(log_eppf_for(prior, BlockCounts(counts)) + log_lik);
  }
  double norm = log_sum_exp(table.log_posterior);
  for (double& lp : table.log_posterior) lp -= norm;
  return table;
}

PartitionTable exact_partition_prior(long n, const MixingPrior& prior) {
  PartitionTable table;
  table.partitions = enumerate_partitions(n);
  table.log_posterior.reserve(table.partitions.size());
  for (const auto& blocks : table.partitions) {
    std::vector<long> counts;
    for (const auto& blk : blocks) counts.push_back(static_cast<long>(blk.size()));
    table.log_posterior.push_back(log_eppf_for(prior, BlockCounts(counts)));
  }
  return table;
}

MonteCarloEstimate eppf_monte_carlo(const MixingPrior& prior, const BlockCounts& counts,
                                    long samples, Rng& rng) {
  if (samples < 2) throw domain_error("eppf_monte_carlo: need at least 2 samples");
  const long k = counts.k();
  double sum = 0.0, sum_sq = 0.0;
  for (long s = 0; s < samples; ++s) {
    SupportSize m = prior.has_random_m()
                        ? SupportSize::finite(gnedin_prior_sample(prior.gamma_hat(), rng))
                        : prior.deterministic_support();
    long realize = m.is_infinite() ? k : std::min<long>(k, m.value());
    double term = 1.0;
    double rem = 1.0;
    for (long j = 1; j <= realize && term != 0.0; ++j) {
      double vj = sticks_prior_draw(prior, m, j, rng);
      double pj = vj * rem;
      rem *= (1.0 - vj);
      long nj = counts.counts[static_cast<size_t>(j - 1)];
      for (long t = 1; t < nj; ++t) term *= pj;
      if (j < k) term *= rem;  // 1 - sum_{l<=j} p_l
    }
    if (realize < k) term = 0.0;  // support exhausted before k blocks
    sum += term;
    sum_sq += term * term;
  }
  MonteCarloEstimate est;
  const auto ns = static_cast<double>(samples);
  est.value = sum / ns;
  double var = std::max(0.0, (sum_sq - ns * est.value * est.value) / (ns - 1.0));
  est.std_error = std::sqrt(var / ns);
  return est;
}

}  // namespace oas
