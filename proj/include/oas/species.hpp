#pragma once

#include <span>
#include <vector>

#include "oas/prior.hpp"
#include "oas/rng.hpp"

namespace oas {

// Block occupancy counts (n_1, ..., n_k) of a partition of [n].
struct BlockCounts {
  std::vector<long> counts;

  BlockCounts() = default;
  explicit BlockCounts(std::vector<long> c);
  BlockCounts(std::initializer_list<long> c) : BlockCounts(std::vector<long>(c)) {}

  long n() const;
  long k() const { return static_cast<long>(counts.size()); }
};

// log of the Pochhammer symbol (z)_r = z(z+1)...(z+r-1), z > 0, r >= 0.
double log_pochhammer(double z, long r);

// EPPF of the two-parameter (sigma, theta) model. Regime (a): 0 <= sigma < 1,
// theta > -sigma (infinite support). Regime (b): sigma = -gamma < 0 and
// theta = m*gamma for an integer m >= 1 (finite symmetric Dirichlet); blocks
// beyond m have probability zero.
double log_eppf_two_param(const BlockCounts& counts, double sigma, double theta);
double eppf_two_param(const BlockCounts& counts, double sigma, double theta);

// EPPF of the symmetric Dirichlet model with m components and parameter gamma,
// conditional on m. Exactly zero when k > m.
double log_eppf_mfm_given_m(const BlockCounts& counts, double gamma, long m);
double eppf_mfm_given_m(const BlockCounts& counts, double gamma, long m);

// Independent oracle for eppf_mfm_given_m: enumerates every ordered k-tuple of
// distinct component indices and adds the closed-form Dirichlet moment
// E[prod_i p_{j_i}^{n_i}] = prod_i (gamma)_{n_i} / (m*gamma)_n.
double eppf_bruteforce_finite_dirichlet(const BlockCounts& counts, double gamma, long m,
                                        long max_tuples = 2000000);

// Marginal EPPF of the Gnedin mixture of finite mixtures with unit Dirichlet
// parameter: m integrated out against p(m) = gamma_hat*(1-gamma_hat)_{m-1}/m!.
double log_eppf_gnedin_marginal(const BlockCounts& counts, double gamma_hat);
double eppf_gnedin_marginal(const BlockCounts& counts, double gamma_hat);

// Gnedin prior on the number of components.
double gnedin_prior_pmf(long m, double gamma_hat);
// Closed-form cdf: P(m <= r) = 1 - (1-gamma_hat)_r / r!.
double gnedin_prior_cdf(long r, double gamma_hat);
long gnedin_prior_sample(double gamma_hat, Rng& rng);

// Exact conditional posterior of m given a partition with k_n blocks of n
// observations under the Gnedin prior (unit Dirichlet parameter). The head
// holds probabilities for m = k_n, k_n+1, ..., extended until the cumulative
// mass reaches target_mass or max_terms entries; the remaining mass stays in
// tail_mass. Sampling walks the exact recursion past the head when needed.
struct GnedinMPosterior {
  long k_n = 1;
  long n = 1;
  double gamma_hat = 0.5;
  std::vector<double> head;  // pmf at m = k_n + i
  double tail_mass = 0.0;
  long hard_cap = 1000000;

  double pmf(long m) const;
  long sample(Rng& rng) const;
};

GnedinMPosterior gnedin_m_posterior(long k_n, long n, double gamma_hat,
                                    double target_mass = 1.0 - 1e-12,
                                    long max_terms = 1000000);

// One draw from the m-posterior without building the table; walks the
// normalized recursion until the inverse-cdf target is reached (clamped at
// hard_cap, an event of negligible probability for k_n < n).
long gnedin_m_posterior_sample(long k_n, long n, double gamma_hat, Rng& rng,
                               long hard_cap = 1000000);

// Stick variables and their size-biased weights. v holds the realized sticks;
// p the induced weights p_1 = v_1, p_j = v_j prod_{l<j}(1 - v_l).
struct StickWeights {
  SupportSize m = SupportSize::infinite();
  std::vector<double> v;
  std::vector<double> p;

  long realized() const { return static_cast<long>(v.size()); }
  void append(double vj);
  void set(long j, double vj);  // 1-based
  void truncate(long len);
  void recompute_weights();
  double weight(long j) const { return p[static_cast<size_t>(j - 1)]; }
  // 1 - sum_{l<=j} p_l, computed as prod_{l<=j}(1 - v_l).
  double remaining_after(long j) const;
};

// Beta parameters of the prior law of stick j given the current support size.
// A zero second parameter encodes the terminal stick convention Be(.,0) = 1.
std::pair<double, double> stick_prior_beta_params(const MixingPrior& prior, SupportSize m, long j);

// One prior draw of stick j; returns exactly 1 for the terminal stick of a
// finite support.
double sticks_prior_draw(const MixingPrior& prior, SupportSize m, long j, Rng& rng);

// Size-biased pick: a permutation of {0, ..., m-1} sampled without
// replacement with probabilities proportional to the weights.
std::vector<int> size_biased_pick(std::span<const double> weights, Rng& rng);

// Simulates ordered allocation variables d_1, ..., d_n (1-based labels) from
// the prior prediction rule, drawing sticks lazily as components appear.
std::vector<int> prediction_rule_simulate(const MixingPrior& prior, long n, Rng& rng);

}  // namespace oas
