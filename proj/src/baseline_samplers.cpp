#include "oas/baseline_samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "oas/species.hpp"

namespace oas {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_eppf_for(const MixingPrior& prior, const BlockCounts& counts) {
  switch (prior.kind()) {
    case PriorKind::pitman_yor:
      return log_eppf_two_param(counts, prior.sigma(), prior.theta());
    case PriorKind::finite_dirichlet:
      return log_eppf_mfm_given_m(counts, prior.gamma(), prior.m());
    case PriorKind::gnedin_mfm:
      if (prior.gamma_rule().is_constant_one())
        return log_eppf_gnedin_marginal(counts, prior.gamma_hat());
      throw unsupported_prior_error(
          "marginal sampler needs a closed-form EPPF; Gnedin MFM supports only gamma = 1");
  }
  throw unsupported_prior_error("unknown prior");
}

int sample_log_weights(const std::vector<double>& logw, Rng& rng) {
  double mx = kNegInf;
  for (double w : logw) mx = std::max(mx, w);
  std::vector<double> ws(logw.size());
  double total = 0.0;
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

long MarginalState::n() const {
  long total = 0;
  for (const auto& blk : blocks) total += static_cast<long>(blk.size());
  return total;
}

void MarginalState::validate(long n_expected) const {
  if (blocks.size() != atoms.size()) throw invariant_error("marginal state: atom/block mismatch");
  std::vector<bool> seen(static_cast<size_t>(n_expected), false);
  for (const auto& blk : blocks) {
    if (blk.empty()) throw invariant_error("marginal state: empty block");
    for (int i : blk) {
      if (i < 0 || i >= n_expected || seen[static_cast<size_t>(i)])
        throw invariant_error("marginal state: not a partition");
      seen[static_cast<size_t>(i)] = true;
    }
  }
  if (n() != n_expected) throw invariant_error("marginal state: wrong size");
}

MarginalState init_marginal_state(const Data& data, const GaussianFamily& family, Rng& rng) {
  MarginalState state;
  std::vector<int> all(static_cast<size_t>(data.n()));
  std::iota(all.begin(), all.end(), 0);
  state.blocks.push_back(all);
  state.atoms.push_back(family.sample_posterior(data.values, data.dim, all, rng));
  return state;
}

namespace {

void relabel_by_appearance(MarginalState& state) {
  for (auto& blk : state.blocks) std::sort(blk.begin(), blk.end());
  std::vector<size_t> order(state.blocks.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return state.blocks[a].front() < state.blocks[b].front();
  });
  MarginalState out;
  for (size_t idx : order) {
    out.blocks.push_back(std::move(state.blocks[idx]));
    out.atoms.push_back(state.atoms[idx]);
  }
  state = std::move(out);
}

}  // namespace

void marginal_sweep(MarginalState& state, const Data& data, const GaussianFamily& family,
                    const MixingPrior& prior, Rng& rng) {
  const long n = data.n();
  for (long i = 0; i < n; ++i) {
    // Remove observation i; drop its block if it empties.
    for (size_t j = 0; j < state.blocks.size(); ++j) {
      auto& blk = state.blocks[j];
      auto it = std::find(blk.begin(), blk.end(), static_cast<int>(i));
      if (it != blk.end()) {
        blk.erase(it);
        if (blk.empty()) {
          state.blocks.erase(state.blocks.begin() + static_cast<long>(j));
          state.atoms.erase(state.atoms.begin() + static_cast<long>(j));
        }
        break;
      }
    }
    const size_t k = state.blocks.size();
    std::vector<long> counts(k);
    for (size_t j = 0; j < k; ++j) counts[j] = static_cast<long>(state.blocks[j].size());
    const double* yi = data.row(i);
    std::vector<double> logw(k + 1, kNegInf);
    for (size_t j = 0; j < k; ++j) {
      std::vector<long> cj = counts;
      cj[j] += 1;
      logw[j] = log_eppf_for(prior, BlockCounts(cj)) +
                family.log_kernel_at(state.atoms[j], yi);
    }
    {
      std::vector<long> c0 = counts;
      c0.push_back(1);
      logw[k] = (k == 0 ? 0.0 : log_eppf_for(prior, BlockCounts(c0))) + family.log_marginal_at(yi);
    }
    int pick = sample_log_weights(logw, rng);
    if (static_cast<size_t>(pick) < k) {
      state.blocks[static_cast<size_t>(pick)].push_back(static_cast<int>(i));
    } else {
      // New block; its atom comes from the single-observation posterior.
      state.blocks.push_back({static_cast<int>(i)});
      int row = static_cast<int>(i);
      state.atoms.push_back(family.sample_posterior(data.values, data.dim,
                                                    std::span<const int>(&row, 1), rng));
    }
  }
  for (size_t j = 0; j < state.blocks.size(); ++j) {
    state.atoms[j] = family.sample_posterior(data.values, data.dim, state.blocks[j], rng);
  }
  relabel_by_appearance(state);
}

void SliceState::validate() const {
  if (c.size() != u.size()) throw invariant_error("slice state: c/u size mismatch");
  double rem = 1.0;
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] < 0 || static_cast<size_t>(c[i]) >= v.size())
      throw invariant_error("slice state: allocation out of range");
    if (atoms.find(c[i]) == atoms.end())
      throw invariant_error("slice state: occupied component without an atom");
  }
  // u_i < p_{c_i} for all i
  std::vector<double> p(v.size());
  for (size_t j = 0; j < v.size(); ++j) {
    p[j] = v[j] * rem;
    rem *= (1.0 - v[j]);
  }
  for (size_t i = 0; i < c.size(); ++i) {
    if (!(u[i] < p[static_cast<size_t>(c[i])])) throw invariant_error("slice state: u_i >= p_{c_i}");
  }
}

SliceState init_slice_state(const Data& data, const MixingPrior& prior,
                            const GaussianFamily& family, Rng& rng, long max_components) {
  if (prior.kind() != PriorKind::pitman_yor)
    throw unsupported_prior_error("slice sampler supports Pitman-Yor priors only");
  const double sigma = prior.sigma();
  const double theta = prior.theta();
  const long n = data.n();
  SliceState state;
  state.max_components = max_components;
  // Deaths are cheap for the slice sampler while births need a slice-clearing
  // weight and a fitting prior atom at once, so starting with one block and
  // splitting up mixes terribly. Starting all-distinct is no better: hundreds
  // of singleton components make min u_i microscopic and the truncation level
  // explodes. A moderate round-robin start avoids both failure modes.
  const long k_init = std::min<long>(n, 30);
  state.c.resize(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) state.c[static_cast<size_t>(i)] = static_cast<int>(i % k_init);
  std::vector<long> counts(static_cast<size_t>(k_init), 0);
  for (int ci : state.c) counts[static_cast<size_t>(ci)] += 1;
  std::vector<long> suffix(counts.size() + 1, 0);
  for (size_t j = counts.size(); j-- > 0;) suffix[j] = suffix[j + 1] + counts[j];
  state.v.resize(static_cast<size_t>(k_init));
  for (long j = 0; j < k_init; ++j) {
    double a = 1.0 - sigma + static_cast<double>(counts[static_cast<size_t>(j)]);
    double b = theta + static_cast<double>(j + 1) * sigma +
               static_cast<double>(suffix[static_cast<size_t>(j + 1)]);
    state.v[static_cast<size_t>(j)] = rng.beta(a, b);
  }
  std::vector<std::vector<int>> members(static_cast<size_t>(k_init));
  for (long i = 0; i < n; ++i)
    members[static_cast<size_t>(i % k_init)].push_back(static_cast<int>(i));
  for (long j = 0; j < k_init; ++j) {
    state.atoms[j] = family.sample_posterior(data.values, data.dim,
                                             members[static_cast<size_t>(j)], rng);
  }
  state.u.resize(static_cast<size_t>(n));
  std::vector<double> p(static_cast<size_t>(k_init));
  double rem = 1.0;
  for (long j = 0; j < k_init; ++j) {
    p[static_cast<size_t>(j)] = state.v[static_cast<size_t>(j)] * rem;
    rem *= (1.0 - state.v[static_cast<size_t>(j)]);
  }
  for (long i = 0; i < n; ++i)
    state.u[static_cast<size_t>(i)] =
        rng.uniform_pos() * p[static_cast<size_t>(state.c[static_cast<size_t>(i)])];
  state.max_realized_seen = k_init;
  return state;
}

void slice_sweep(SliceState& state, const Data& data, const GaussianFamily& family,
                 const MixingPrior& prior, Rng& rng) {
  if (prior.kind() != PriorKind::pitman_yor)
    throw unsupported_prior_error("slice sampler supports Pitman-Yor priors only");
  const double sigma = prior.sigma();
  const double theta = prior.theta();
  const long n = data.n();

  // (1) sticks given allocation counts, u integrated out. All realized sticks
  // are redrawn; unoccupied components reduce to their prior law.
  std::vector<long> counts(state.v.size(), 0);
  for (int ci : state.c) counts[static_cast<size_t>(ci)] += 1;
  std::vector<long> suffix(counts.size() + 1, 0);
  for (size_t j = counts.size(); j-- > 0;) suffix[j] = suffix[j + 1] + counts[j];
  for (size_t j = 0; j < counts.size(); ++j) {
    double a = 1.0 - sigma + static_cast<double>(counts[j]);
    double b = theta + static_cast<double>(j + 1) * sigma + static_cast<double>(suffix[j + 1]);
    state.v[j] = rng.beta(a, b);
  }

  // (2) slice variables.
  std::vector<double> p(state.v.size());
  {
    double rem = 1.0;
    for (size_t j = 0; j < state.v.size(); ++j) {
      p[j] = state.v[j] * rem;
      rem *= (1.0 - state.v[j]);
    }
  }
  double u_min = 1.0;
  for (long i = 0; i < n; ++i) {
    double ui = rng.uniform_pos() * p[static_cast<size_t>(state.c[static_cast<size_t>(i)])];
    state.u[static_cast<size_t>(i)] = ui;
    u_min = std::min(u_min, ui);
  }

  // Unoccupied realized atoms are redrawn from the prior, like every x_j with
  // an empty block. Components whose weight cannot clear any slice are never
  // evaluated this sweep, so their draws are skipped (they integrate out).
  for (size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0 && p[j] > u_min) state.atoms[static_cast<long>(j)] = family.sample_prior(rng);
  }

  // (3) extend sticks until the leftover mass drops below min u_i, so that no
  // unrealized component can clear any slice; atoms only materialize when
  // their weight does.
  {
    double rem = 1.0;
    for (double vj : state.v) rem *= (1.0 - vj);
    while (rem >= u_min) {
      size_t j = state.v.size();
      if (static_cast<long>(j) >= state.max_components)
        throw slice_overflow_error("slice sampler exceeded its component cap");
      double vj = rng.beta(1.0 - sigma, theta + static_cast<double>(j + 1) * sigma);
      state.v.push_back(vj);
      double pj = vj * rem;
      if (pj > u_min) state.atoms[static_cast<long>(j)] = family.sample_prior(rng);
      rem *= (1.0 - vj);
    }
    state.max_realized_seen = std::max(state.max_realized_seen, static_cast<long>(state.v.size()));
  }

  // (4) allocations over A_i = {j : p_j > u_i}, weighted by the kernel.
  for (long i = 0; i < n; ++i) {
    const double ui = state.u[static_cast<size_t>(i)];
    const double* yi = data.row(i);
    std::vector<int> support;
    std::vector<double> logw;
    double rem = 1.0;
    for (size_t j = 0; j < state.v.size(); ++j) {
      double pj = state.v[j] * rem;
      rem *= (1.0 - state.v[j]);
      if (pj > ui) {
        support.push_back(static_cast<int>(j));
        logw.push_back(family.log_kernel_at(state.atoms.at(static_cast<long>(j)), yi));
      }
      if (rem < ui) break;  // no later component can exceed the slice
    }
    if (support.empty()) throw invariant_error("slice sampler: empty candidate set");
    state.c[static_cast<size_t>(i)] = support[static_cast<size_t>(sample_log_weights(logw, rng))];
  }

  // (5) occupied atoms from their conjugate posteriors.
  std::vector<std::vector<int>> members;
  for (long i = 0; i < n; ++i) {
    size_t j = static_cast<size_t>(state.c[static_cast<size_t>(i)]);
    if (members.size() <= j) members.resize(j + 1);
    members[j].push_back(static_cast<int>(i));
  }
  for (size_t j = 0; j < members.size(); ++j) {
    if (!members[j].empty())
      state.atoms[static_cast<long>(j)] =
          family.sample_posterior(data.values, data.dim, members[j], rng);
  }

  // Trim storage back to the truncation level this sweep required; dropped
  // entries are plain prior draws and re-materialize on demand.
  long keep = static_cast<long>(members.size());
  {
    double rem = 1.0;
    for (size_t j = 0; j < state.v.size(); ++j) {
      rem *= (1.0 - state.v[j]);
      if (rem < u_min) {
        keep = std::max<long>(keep, static_cast<long>(j) + 1);
        break;
      }
    }
  }
  if (keep < static_cast<long>(state.v.size())) {
    state.v.resize(static_cast<size_t>(keep));
    std::erase_if(state.atoms, [keep](const auto& kv) { return kv.first >= keep; });
  }
}

}  // namespace oas
