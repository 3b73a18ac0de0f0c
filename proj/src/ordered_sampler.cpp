#include "oas/ordered_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oas {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Inverse-cdf draw from unnormalized log weights.
int sample_log_weights(const std::vector<double>& logw, Rng& rng) {
  double mx = kNegInf;
  for (double w : logw) mx = std::max(mx, w);
  double total = 0.0;
  std::vector<double> ws(logw.size());
  for (size_t j = 0; j < logw.size(); ++j) {
    ws[j] = std::exp(logw[j] - mx);
    total += ws[j];
  }
  double u = rng.uniform() * total;
  double cum = 0.0;
  for (size_t j = 0; j < ws.size(); ++j) {
    cum += ws[j];
    if (u <= cum) return static_cast<int>(j);
  }
  return static_cast<int>(ws.size()) - 1;
}

}  // namespace

std::vector<long> OrderedState::block_counts() const {
  std::vector<long> counts(static_cast<size_t>(k_n), 0);
  for (int di : d) counts[static_cast<size_t>(di - 1)] += 1;
  return counts;
}

void OrderedState::validate() const {
  if (d.empty()) throw invariant_error("ordered state: empty allocation vector");
  if (d[0] != 1) throw invariant_error("ordered state: d_1 != 1");
  int mx = 0;
  for (int di : d) mx = std::max(mx, di);
  if (mx != k_n) throw invariant_error("ordered state: k_n != max(d)");
  if (!m.admits(k_n)) throw invariant_error("ordered state: k_n > m");
  if (k_n > static_cast<int>(d.size())) throw invariant_error("ordered state: k_n > n");
  std::vector<long> mins(static_cast<size_t>(k_n), -1);
  for (long i = 0; i < n(); ++i) {
    size_t j = static_cast<size_t>(d[static_cast<size_t>(i)] - 1);
    if (j >= mins.size()) throw invariant_error("ordered state: label out of range");
    if (mins[j] < 0) mins[j] = i;
  }
  for (size_t j = 0; j < mins.size(); ++j) {
    if (mins[j] < 0) throw invariant_error("ordered state: empty block");
    if (j > 0 && mins[j] <= mins[j - 1]) throw invariant_error("ordered state: least element order violated");
  }
  if (sticks.realized() < k_n) throw invariant_error("ordered state: sticks not realized to k_n");
  if (static_cast<long>(atoms.size()) != sticks.realized())
    throw invariant_error("ordered state: atoms/sticks length mismatch");
  if (!m.is_infinite() && sticks.realized() > m.value())
    throw invariant_error("ordered state: realized length exceeds m");
  double sum = 0.0;
  for (double pj : sticks.p) sum += pj;
  if (sum > 1.0 + 1e-12) throw invariant_error("ordered state: realized weights exceed 1");
}

namespace {

void realize_next(OrderedState& state, const MixingPrior& prior, const GaussianFamily& family,
                  Rng& rng) {
  long j = state.sticks.realized() + 1;
  if (!state.m.admits(j)) throw invariant_error("cannot realize component beyond m");
  state.sticks.append(sticks_prior_draw(prior, state.m, j, rng));
  state.atoms.push_back(family.sample_prior(rng));
}

}  // namespace

OrderedState init_state(const Data& data, const MixingPrior& prior, const GaussianFamily& family,
                        Rng& rng, InitMode mode, long max_blocks) {
  const long n = data.n();
  if (n < 1) throw domain_error("init_state: empty data");
  OrderedState state;
  state.m = prior.has_random_m()
                ? SupportSize::finite(gnedin_prior_sample(prior.gamma_hat(), rng))
                : prior.deterministic_support();
  state.sticks.m = state.m;
  if (mode == InitMode::single_block) {
    state.d.assign(static_cast<size_t>(n), 1);
    state.k_n = 1;
    realize_next(state, prior, family, rng);
    return state;
  }
  // Sequential prediction-rule assignment with a cap on the number of blocks.
  if (max_blocks < 0) max_blocks = n - 1;
  if (max_blocks > n) throw domain_error("init_state: block cap exceeds n");
  if (n > 1 && max_blocks >= n)
    throw domain_error("init_state: all-distinct initialization is rejected");
  max_blocks = std::max<long>(1, max_blocks);
  state.d.assign(static_cast<size_t>(n), 1);
  state.k_n = 1;
  realize_next(state, prior, family, rng);
  for (long i = 1; i < n; ++i) {
    double u = rng.uniform();
    double cum = 0.0;
    int pick = 0;
    for (int j = 1; j <= state.k_n; ++j) {
      cum += state.sticks.weight(j);
      if (u <= cum) {
        pick = j;
        break;
      }
    }
    if (pick == 0) {
      if (state.k_n < max_blocks && state.m.admits(state.k_n + 1)) {
        pick = state.k_n + 1;
        state.k_n = pick;
        realize_next(state, prior, family, rng);
      } else {
        pick = state.k_n;
      }
    }
    state.d[static_cast<size_t>(i)] = pick;
  }
  return state;
}

std::vector<int> admissible_moves(const std::vector<int>& d, long i) {
  const long n = static_cast<long>(d.size());
  if (i < 0 || i >= n) throw domain_error("admissible_moves: index out of range");
  int k_n = 0;
  for (int di : d) k_n = std::max(k_n, di);
  std::vector<long> counts(static_cast<size_t>(k_n), 0);
  std::vector<long> minima(static_cast<size_t>(k_n), -1);
  for (long l = 0; l < n; ++l) {
    size_t j = static_cast<size_t>(d[static_cast<size_t>(l)] - 1);
    if (j >= counts.size()) throw invariant_error("admissible_moves: invalid labels");
    counts[j] += 1;
    if (minima[j] < 0) minima[j] = l;
  }
  for (size_t j = 0; j < minima.size(); ++j) {
    if (counts[j] == 0) throw invariant_error("admissible_moves: empty block");
    if (j > 0 && minima[j] <= minima[j - 1])
      throw invariant_error("admissible_moves: least element order violated");
  }
  const int b = d[static_cast<size_t>(i)];
  std::vector<int> moves;
  if (counts[static_cast<size_t>(b - 1)] == 1) {
    if (b < k_n) return {b};
    // Removing i drops the last block; any existing block or a recreated one.
    for (int v = 1; v <= k_n; ++v) moves.push_back(v);
    return moves;
  }
  if (minima[static_cast<size_t>(b - 1)] == i) {
    long second = std::numeric_limits<long>::max();
    for (long l = 0; l < n; ++l)
      if (l != i && d[static_cast<size_t>(l)] == b) {
        second = l;
        break;
      }
    if (b == k_n || second < minima[static_cast<size_t>(b)]) {
      for (int v = 1; v <= b; ++v) moves.push_back(v);
    } else {
      moves.push_back(b);
    }
    return moves;
  }
  // i is not a block minimum: admissible values form the prefix {1..V} with
  // min(D_{V-1}) < i, including the new block k_n + 1 when min(D_{k_n}) < i.
  int V = 1;
  while (V + 1 <= k_n + 1 && minima[static_cast<size_t>(V - 1)] < i) ++V;
  for (int v = 1; v <= V; ++v) moves.push_back(v);
  return moves;
}

void update_atoms(OrderedState& state, const Data& data, const GaussianFamily& family, Rng& rng) {
  std::vector<std::vector<int>> blocks(static_cast<size_t>(state.k_n));
  for (long i = 0; i < state.n(); ++i)
    blocks[static_cast<size_t>(state.d[static_cast<size_t>(i)] - 1)].push_back(static_cast<int>(i));
  for (int j = 0; j < state.k_n; ++j) {
    state.atoms[static_cast<size_t>(j)] =
        family.sample_posterior(data.values, data.dim, blocks[static_cast<size_t>(j)], rng);
  }
}

void update_m(OrderedState& state, const MixingPrior& prior, Rng& rng) {
  if (!prior.has_random_m()) return;  // deterministic m: skip
  auto counts = state.block_counts();
  long m_new;
  if (prior.gamma_rule().is_constant_one()) {
    m_new = gnedin_m_posterior_sample(state.k_n, state.n(), prior.gamma_hat(), rng);
  } else {
    // Truncated normalization of the conditional EPPF times the prior. The
    // terms decay polynomially with exponent n - k_n + 1 + gamma_hat; the sum
    // stops once a Pareto-style tail estimate falls below 1e-8 of the total.
    BlockCounts bc(counts);
    const long cap = 200000;
    std::vector<double> w;
    double total = 0.0;
    long r = state.k_n;
    while (r < state.k_n + cap) {
      double wr = std::exp(log_eppf_mfm_given_m(bc, prior.gamma_rule().gamma_for(r), r)) *
                  gnedin_prior_pmf(r, prior.gamma_hat());
      w.push_back(wr);
      total += wr;
      if (w.size() >= 16 && wr > 0.0) {
        double prev = w[w.size() - 2];
        double s_hat = -std::log(wr / prev) /
                       std::log(static_cast<double>(r) / static_cast<double>(r - 1));
        if (s_hat > 1.0) {
          double tail_est = wr * static_cast<double>(r) / (s_hat - 1.0);
          if (tail_est < 1e-8 * total) break;
        }
      }
      ++r;
    }
    double u = rng.uniform() * total;
    double cum = 0.0;
    size_t pick = w.size() - 1;
    for (size_t idx = 0; idx < w.size(); ++idx) {
      cum += w[idx];
      if (u <= cum) {
        pick = idx;
        break;
      }
    }
    m_new = state.k_n + static_cast<long>(pick);
  }
  state.m = SupportSize::finite(m_new);
  state.sticks.m = state.m;
  if (state.sticks.realized() > m_new) {
    state.sticks.truncate(m_new);
    state.atoms.resize(static_cast<size_t>(m_new));
  }
}

void update_sticks(OrderedState& state, const MixingPrior& prior, Rng& rng) {
  auto counts = state.block_counts();
  auto [sigma, theta] = prior.stick_params(state.m);
  // suffix[j] = sum of counts of blocks after j
  std::vector<long> suffix(static_cast<size_t>(state.k_n) + 1, 0);
  for (long j = state.k_n - 1; j >= 0; --j)
    suffix[static_cast<size_t>(j)] = suffix[static_cast<size_t>(j + 1)] + counts[static_cast<size_t>(j)];
  for (long j = 1; j <= state.sticks.realized(); ++j) {
    double a, b;
    if (j <= state.k_n) {
      a = static_cast<double>(counts[static_cast<size_t>(j - 1)]) - sigma;
      b = theta + static_cast<double>(j) * sigma + static_cast<double>(suffix[static_cast<size_t>(j)]);
    } else {
      std::tie(a, b) = stick_prior_beta_params(prior, state.m, j);
    }
    state.sticks.set(j, b <= 0.0 ? 1.0 : rng.beta(a, b));
  }
  state.sticks.recompute_weights();
}

void update_allocations(OrderedState& state, const Data& data, const GaussianFamily& family,
                        const MixingPrior& prior, Rng& rng) {
  const long n = state.n();
  std::vector<long> counts = state.block_counts();
  std::vector<long> minima(static_cast<size_t>(state.k_n), -1);
  for (long i = 0; i < n; ++i) {
    size_t j = static_cast<size_t>(state.d[static_cast<size_t>(i)] - 1);
    if (minima[j] < 0) minima[j] = i;
  }

  for (long i = 0; i < n; ++i) {
    const int b = state.d[static_cast<size_t>(i)];
    const double* yi = data.row(i);
    int prefix_end;       // candidates are 1..prefix_end
    int new_block = 0;    // label of the new-component candidate, 0 if none
    long second = -1;     // post-removal minimum of block b when i is its minimum
    if (counts[static_cast<size_t>(b - 1)] == 1) {
      if (b < state.k_n) continue;  // singleton in the middle: d_i cannot change
      prefix_end = state.k_n;
      new_block = state.k_n;  // recreating the dropped top block opens it anew
    } else if (minima[static_cast<size_t>(b - 1)] == i) {
      second = std::numeric_limits<long>::max();
      for (long l = i + 1; l < n; ++l)
        if (state.d[static_cast<size_t>(l)] == b) {
          second = l;
          break;
        }
      if (b == state.k_n || second < minima[static_cast<size_t>(b)]) {
        prefix_end = b;
      } else {
        continue;  // only the current value is admissible
      }
    } else {
      int V = 1;
      while (V + 1 <= state.k_n + 1 && minima[static_cast<size_t>(V - 1)] < i) ++V;
      if (V == state.k_n + 1) {
        if (state.m.admits(state.k_n + 1)) {
          new_block = state.k_n + 1;
          if (state.sticks.realized() < state.k_n + 1) realize_next(state, prior, family, rng);
        } else {
          V = state.k_n;  // finite support exhausted
        }
      }
      prefix_end = V;
    }
    if (prefix_end == 1 && new_block == 0 && b == 1) continue;

    // Two-case weights: occupied labels keep p_d g(y|x_d); a label that would
    // raise k_n gets the leftover stick mass (1 - sum_{l<=k*} p_l) g(y|x_d).
    std::vector<double> logw(static_cast<size_t>(prefix_end), kNegInf);
    for (int v = 1; v <= prefix_end; ++v) {
      double log_prior_part;
      if (v == new_block) {
        int k_star = new_block - 1;
        double rem = state.sticks.remaining_after(k_star);
        log_prior_part = rem > 0.0 ? std::log(rem) : kNegInf;
      } else {
        double pv = state.sticks.weight(v);
        log_prior_part = pv > 0.0 ? std::log(pv) : kNegInf;
      }
      logw[static_cast<size_t>(v - 1)] =
          log_prior_part + family.log_kernel_at(state.atoms[static_cast<size_t>(v - 1)], yi);
    }
    int v = 1 + sample_log_weights(logw, rng);
    if (v == b) continue;

    // Apply the move, maintaining counts, minima and k_n.
    counts[static_cast<size_t>(b - 1)] -= 1;
    if (counts[static_cast<size_t>(b - 1)] == 0) {
      counts.pop_back();
      minima.pop_back();
      state.k_n -= 1;
    } else if (minima[static_cast<size_t>(b - 1)] == i) {
      minima[static_cast<size_t>(b - 1)] = second;
    }
    if (v <= state.k_n) {
      counts[static_cast<size_t>(v - 1)] += 1;
      minima[static_cast<size_t>(v - 1)] = std::min(minima[static_cast<size_t>(v - 1)], i);
    } else {
      counts.push_back(1);
      minima.push_back(i);
      state.k_n += 1;
    }
    state.d[static_cast<size_t>(i)] = v;
  }
}

void sweep(OrderedState& state, const Data& data, const GaussianFamily& family,
           const MixingPrior& prior, Rng& rng) {
  update_atoms(state, data, family, rng);
  update_m(state, prior, rng);
  update_sticks(state, prior, rng);
  // Realized but unoccupied components are part of the same block as the
  // sticks: their atoms are redrawn from the prior.
  for (long j = state.k_n; j < static_cast<long>(state.atoms.size()); ++j)
    state.atoms[static_cast<size_t>(j)] = family.sample_prior(rng);
  update_allocations(state, data, family, prior, rng);
}

}  // namespace oas
