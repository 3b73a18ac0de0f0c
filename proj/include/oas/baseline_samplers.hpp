#pragma once

#include <unordered_map>
#include <vector>

#include "oas/components.hpp"
#include "oas/dataio.hpp"
#include "oas/prior.hpp"
#include "oas/rng.hpp"

namespace oas {

// Collapsed sampler state: the partition with one atom per block. Blocks are
// relabelled to order of appearance (equivalently least element order) at the
// end of every sweep so that label comparisons across samplers line up.
struct MarginalState {
  std::vector<std::vector<int>> blocks;
  std::vector<ComponentParams> atoms;

  long n() const;
  void validate(long n_expected) const;
};

MarginalState init_marginal_state(const Data& data, const GaussianFamily& family, Rng& rng);

// One collapsed Gibbs sweep: reallocate each observation against the prior's
// closed-form EPPF, then redraw all occupied atoms conjugately. Supported
// priors: Pitman-Yor, finite Dirichlet, Gnedin MFM with unit gamma.
void marginal_sweep(MarginalState& state, const Data& data, const GaussianFamily& family,
                    const MixingPrior& prior, Rng& rng);

// Slice sampler state (Pitman-Yor priors only). c holds 0-based component
// indices, u the slice variables and v the realized sticks; weights are
// recovered from v on the fly. Atom draws materialize only for components
// whose weight clears the lowest slice (the others integrate out), keyed by
// component index, which keeps the memory footprint linear in the number of
// components actually visited even when the truncation level spikes.
struct SliceState {
  std::vector<int> c;
  std::vector<double> u;
  std::vector<double> v;
  std::unordered_map<long, ComponentParams> atoms;
  long max_components = 1000000;
  long max_realized_seen = 0;

  void validate() const;
};

SliceState init_slice_state(const Data& data, const MixingPrior& prior,
                            const GaussianFamily& family, Rng& rng,
                            long max_components = 1000000);

// One slice sweep: sticks given counts, slice variables, adaptive truncation,
// allocations over A_i = {j : p_j > u_i}, occupied atoms. Throws
// slice_overflow_error if the truncation level would exceed max_components.
void slice_sweep(SliceState& state, const Data& data, const GaussianFamily& family,
                 const MixingPrior& prior, Rng& rng);

}  // namespace oas
