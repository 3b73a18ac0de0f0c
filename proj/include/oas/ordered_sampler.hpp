#pragma once

#include <vector>

#include "oas/components.hpp"
#include "oas/dataio.hpp"
#include "oas/prior.hpp"
#include "oas/rng.hpp"
#include "oas/species.hpp"

namespace oas {

// State of the ordered allocation sampler. Components are indexed in order of
// appearance; the blocks D_j = {i : d_i = j} are non-empty for j <= k_n and
// their least elements increase with j. Sticks and atoms are realized lazily
// to some length J >= k_n (J <= m when m is finite).
struct OrderedState {
  SupportSize m = SupportSize::infinite();
  StickWeights sticks;
  std::vector<ComponentParams> atoms;
  std::vector<int> d;  // 1-based component labels, d[0] == 1
  int k_n = 1;

  long n() const { return static_cast<long>(d.size()); }
  // Occupancy counts n_1, ..., n_{k_n}.
  std::vector<long> block_counts() const;
  // Throws invariant_error if any structural invariant fails.
  void validate() const;
};

enum class InitMode { single_block, prediction_rule };

// Builds an initial state. single_block puts every observation in one block;
// prediction_rule assigns sequentially from the prior prediction rule with the
// number of blocks capped at max_blocks (all-distinct starts are rejected, so
// max_blocks must be < n when n > 1).
OrderedState init_state(const Data& data, const MixingPrior& prior, const GaussianFamily& family,
                        Rng& rng, InitMode mode = InitMode::single_block, long max_blocks = -1);

// Admissible moves for d_i (i is a 0-based position, returned labels 1-based):
// the values v such that setting d_i = v keeps all blocks non-empty and in
// least element order. Always contains d_i; position 0 yields {1}.
std::vector<int> admissible_moves(const std::vector<int>& d, long i);

// Full conditional updates.
void update_atoms(OrderedState& state, const Data& data, const GaussianFamily& family, Rng& rng);
void update_m(OrderedState& state, const MixingPrior& prior, Rng& rng);
void update_sticks(OrderedState& state, const MixingPrior& prior, Rng& rng);
void update_allocations(OrderedState& state, const Data& data, const GaussianFamily& family,
                        const MixingPrior& prior, Rng& rng);

// One Gibbs iteration: atoms, m, sticks (with fresh atoms beyond k_n drawn
// lazily), allocations.
void sweep(OrderedState& state, const Data& data, const GaussianFamily& family,
           const MixingPrior& prior, Rng& rng);

}  // namespace oas
