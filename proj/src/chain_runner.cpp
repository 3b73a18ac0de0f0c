#include "oas/chain_runner.hpp"

#include <algorithm>

#include "oas/diagnostics.hpp"
#include "oas/oracle.hpp"

namespace oas {

namespace {

constexpr int kRecordedComponentCap = 8;

TraceRecord make_ordered_record(long iteration, const OrderedState& state, const Data& data,
                                const GaussianFamily& family) {
  TraceRecord rec;
  rec.iteration = iteration;
  rec.k_n = state.k_n;
  rec.m = state.m.is_infinite() ? MValue::inf() : MValue::finite(state.m.value());
  rec.counts = state.block_counts();
  long j_rec = std::min<long>(state.sticks.realized(),
                              std::max<long>(state.k_n, kRecordedComponentCap));
  rec.weights.assign(state.sticks.p.begin(), state.sticks.p.begin() + j_rec);
  rec.atoms.assign(state.atoms.begin(), state.atoms.begin() + j_rec);
  rec.deviance = deviance(data, family, rec.atoms, rec.counts);
  return rec;
}

TraceRecord make_marginal_record(long iteration, const MarginalState& state, const Data& data,
                                 const GaussianFamily& family) {
  TraceRecord rec;
  rec.iteration = iteration;
  rec.k_n = static_cast<int>(state.blocks.size());
  rec.m = MValue::none();
  for (const auto& blk : state.blocks) rec.counts.push_back(static_cast<long>(blk.size()));
  rec.atoms = state.atoms;
  rec.deviance = deviance(data, family, rec.atoms, rec.counts);
  return rec;
}

// Occupied components in order of appearance, with their stick weights.
TraceRecord make_slice_record(long iteration, const SliceState& state, const Data& data,
                              const GaussianFamily& family) {
  TraceRecord rec;
  rec.iteration = iteration;
  rec.m = MValue::inf();
  std::vector<int> appearance;  // component index by appearance rank
  std::vector<int> rank_of(state.v.size(), -1);
  for (int ci : state.c) {
    if (rank_of[static_cast<size_t>(ci)] < 0) {
      rank_of[static_cast<size_t>(ci)] = static_cast<int>(appearance.size());
      appearance.push_back(ci);
    }
  }
  rec.k_n = static_cast<int>(appearance.size());
  rec.counts.assign(appearance.size(), 0);
  for (int ci : state.c) rec.counts[static_cast<size_t>(rank_of[static_cast<size_t>(ci)])] += 1;
  std::vector<double> p(state.v.size());
  double rem = 1.0;
  for (size_t j = 0; j < state.v.size(); ++j) {
    p[j] = state.v[j] * rem;
    rem *= (1.0 - state.v[j]);
  }
  for (int comp : appearance) {
    rec.weights.push_back(p[static_cast<size_t>(comp)]);
    rec.atoms.push_back(state.atoms.at(comp));
  }
  rec.deviance = deviance(data, family, rec.atoms, rec.counts);
  return rec;
}

std::string slice_partition_key(const SliceState& state) {
  std::vector<int> rank_of(state.v.size(), -1);
  std::vector<int> d(state.c.size());
  int next = 0;
  for (size_t i = 0; i < state.c.size(); ++i) {
    int ci = state.c[i];
    if (rank_of[static_cast<size_t>(ci)] < 0) rank_of[static_cast<size_t>(ci)] = next++;
    d[i] = rank_of[static_cast<size_t>(ci)] + 1;
  }
  return partition_key_from_labels(d);
}

std::string marginal_partition_key(const MarginalState& state, long n) {
  std::vector<int> d(static_cast<size_t>(n), 0);
  // Blocks are kept in least element order, so block index is the label.
  for (size_t j = 0; j < state.blocks.size(); ++j)
    for (int i : state.blocks[j]) d[static_cast<size_t>(i)] = static_cast<int>(j) + 1;
  return partition_key_from_labels(d);
}

}  // namespace

ChainTrace run_ordered_chain(const Data& data, const GaussianFamily& family,
                             const MixingPrior& prior, const ChainOptions& options,
                             std::uint64_t seed, PartitionHistogram* histogram) {
  Rng rng(seed);
  OrderedState state = init_state(data, prior, family, rng, options.init);
  ChainTrace trace;
  trace.sampler = "ordered";
  trace.prior = prior.describe();
  trace.seed = seed;
  trace.n = data.n();
  trace.dim = data.dim;
  trace.records.reserve(static_cast<size_t>(options.iterations));
  long kept = 0;
  for (long sweep_idx = 0; sweep_idx < options.total_sweeps(); ++sweep_idx) {
    sweep(state, data, family, prior, rng);
    if (options.validate_every_sweep) state.validate();
    if (sweep_idx < options.burn_in) continue;
    if (histogram) (*histogram)[partition_key_from_labels(state.d)] += 1;
    if ((sweep_idx - options.burn_in) % options.thin == options.thin - 1) {
      ++kept;
      trace.records.push_back(make_ordered_record(kept, state, data, family));
    }
  }
  return trace;
}

ChainTrace run_marginal_chain(const Data& data, const GaussianFamily& family,
                              const MixingPrior& prior, const ChainOptions& options,
                              std::uint64_t seed, PartitionHistogram* histogram) {
  Rng rng(seed);
  MarginalState state = init_marginal_state(data, family, rng);
  ChainTrace trace;
  trace.sampler = "marginal";
  trace.prior = prior.describe();
  trace.seed = seed;
  trace.n = data.n();
  trace.dim = data.dim;
  trace.records.reserve(static_cast<size_t>(options.iterations));
  long kept = 0;
  for (long sweep_idx = 0; sweep_idx < options.total_sweeps(); ++sweep_idx) {
    marginal_sweep(state, data, family, prior, rng);
    if (options.validate_every_sweep) state.validate(data.n());
    if (sweep_idx < options.burn_in) continue;
    if (histogram) (*histogram)[marginal_partition_key(state, data.n())] += 1;
    if ((sweep_idx - options.burn_in) % options.thin == options.thin - 1) {
      ++kept;
      trace.records.push_back(make_marginal_record(kept, state, data, family));
    }
  }
  return trace;
}

ChainTrace run_slice_chain(const Data& data, const GaussianFamily& family,
                           const MixingPrior& prior, const ChainOptions& options,
                           std::uint64_t seed, PartitionHistogram* histogram) {
  Rng rng(seed);
  SliceState state = init_slice_state(data, prior, family, rng, options.slice_max_components);
  ChainTrace trace;
  trace.sampler = "slice";
  trace.prior = prior.describe();
  trace.seed = seed;
  trace.n = data.n();
  trace.dim = data.dim;
  trace.records.reserve(static_cast<size_t>(options.iterations));
  long kept = 0;
  for (long sweep_idx = 0; sweep_idx < options.total_sweeps(); ++sweep_idx) {
    slice_sweep(state, data, family, prior, rng);
    if (options.validate_every_sweep) state.validate();
    if (sweep_idx < options.burn_in) continue;
    if (histogram) (*histogram)[slice_partition_key(state)] += 1;
    if ((sweep_idx - options.burn_in) % options.thin == options.thin - 1) {
      ++kept;
      trace.records.push_back(make_slice_record(kept, state, data, family));
    }
  }
  return trace;
}

ChainTrace run_chain(const std::string& sampler, const Data& data, const GaussianFamily& family,
                     const MixingPrior& prior, const ChainOptions& options, std::uint64_t seed,
                     PartitionHistogram* histogram) {
  if (sampler == "ordered") return run_ordered_chain(data, family, prior, options, seed, histogram);
  if (sampler == "marginal") return run_marginal_chain(data, family, prior, options, seed, histogram);
  if (sampler == "slice") return run_slice_chain(data, family, prior, options, seed, histogram);
  throw config_error("unknown sampler: " + sampler);
}

double histogram_tv(const PartitionHistogram& histogram, const std::map<std::string, double>& exact) {
  long total = 0;
  for (const auto& [key, count] : histogram) total += count;
  double tv = 0.0;
  for (const auto& [key, prob] : exact) {
    auto it = histogram.find(key);
    double emp = it == histogram.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
    tv += std::abs(emp - prob);
  }
  for (const auto& [key, count] : histogram) {
    if (exact.find(key) == exact.end())
      tv += static_cast<double>(count) / static_cast<double>(total);
  }
  return 0.5 * tv;
}

}  // namespace oas
