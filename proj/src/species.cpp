#include "oas/species.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace oas {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

BlockCounts::BlockCounts(std::vector<long> c) : counts(std::move(c)) {
  if (counts.empty()) throw domain_error("block counts must have k >= 1");
  for (long nj : counts) {
    if (nj < 1) throw domain_error("every block count must be >= 1");
  }
}

long BlockCounts::n() const {
  return std::accumulate(counts.begin(), counts.end(), 0L);
}

double log_pochhammer(double z, long r) {
  if (r < 0) throw domain_error("pochhammer: negative length");
  if (r == 0) return 0.0;
  if (!(z > 0.0)) throw domain_error("pochhammer: base must be positive");
  return std::lgamma(z + static_cast<double>(r)) - std::lgamma(z);
}

namespace {

// Block-frequency factor sum_j log (1-sigma)_{n_j - 1}, accumulated over the
// sorted counts so that permutations of the input give bit-identical values.
double log_block_factor(const BlockCounts& counts, double one_minus_sigma) {
  std::vector<long> sorted = counts.counts;
  std::sort(sorted.begin(), sorted.end());
  double s = 0.0;
  for (long nj : sorted) s += log_pochhammer(one_minus_sigma, nj - 1);
  return s;
}

}  // namespace

double log_eppf_two_param(const BlockCounts& counts, double sigma, double theta) {
  const long k = counts.k();
  const long n = counts.n();
  if (sigma >= 0.0) {
    if (!(sigma < 1.0) || !(theta > -sigma))
      throw domain_error("two-parameter EPPF: need 0 <= sigma < 1 and theta > -sigma");
  } else {
    // Regime (b): sigma = -gamma, theta = m*gamma with integer m.
    double m_real = theta / (-sigma);
    long m = std::lround(m_real);
    if (!(theta > 0.0) || m < 1 || std::abs(m_real - static_cast<double>(m)) > 1e-9 * std::max(1.0, m_real))
      throw domain_error("two-parameter EPPF: negative sigma requires theta = m*(-sigma)");
    if (k > m) return kNegInf;
  }
  double s = 0.0;
  for (long j = 1; j < k; ++j) {
    double f = theta + static_cast<double>(j) * sigma;
    if (f <= 0.0) return kNegInf;
    s += std::log(f);
  }
  s -= log_pochhammer(theta + 1.0, n - 1);
  s += log_block_factor(counts, 1.0 - sigma);
  return s;
}

double eppf_two_param(const BlockCounts& counts, double sigma, double theta) {
  return std::exp(log_eppf_two_param(counts, sigma, theta));
}

double log_eppf_mfm_given_m(const BlockCounts& counts, double gamma, long m) {
  if (!(gamma > 0.0)) throw domain_error("mfm EPPF: gamma must be positive");
  if (m < 1) throw domain_error("mfm EPPF: m must be >= 1");
  const long k = counts.k();
  const long n = counts.n();
  if (k > m) return kNegInf;
  double s = 0.0;
  for (long j = 1; j < k; ++j) s += std::log(static_cast<double>(m - j) * gamma);
  s -= log_pochhammer(static_cast<double>(m) * gamma + 1.0, n - 1);
  s += log_block_factor(counts, 1.0 + gamma);
  return s;
}

double eppf_mfm_given_m(const BlockCounts& counts, double gamma, long m) {
  return std::exp(log_eppf_mfm_given_m(counts, gamma, m));
}

namespace {

void enumerate_tuples(long m, long k, std::vector<int>& tuple, std::vector<bool>& used,
                      double log_moment, double& acc) {
  if (static_cast<long>(tuple.size()) == k) {
    acc += std::exp(log_moment);
    return;
  }
  for (int j = 0; j < m; ++j) {
    if (used[static_cast<size_t>(j)]) continue;
    used[static_cast<size_t>(j)] = true;
    tuple.push_back(j);
    enumerate_tuples(m, k, tuple, used, log_moment, acc);
    tuple.pop_back();
    used[static_cast<size_t>(j)] = false;
  }
}

}  // namespace

double eppf_bruteforce_finite_dirichlet(const BlockCounts& counts, double gamma, long m,
                                        long max_tuples) {
  if (!(gamma > 0.0)) throw domain_error("bruteforce EPPF: gamma must be positive");
  if (m < 1) throw domain_error("bruteforce EPPF: m must be >= 1");
  const long k = counts.k();
  const long n = counts.n();
  if (k > m) return 0.0;
  long tuples = 1;
  for (long j = 0; j < k; ++j) {
    tuples *= (m - j);
    if (tuples > max_tuples) throw resource_limit_error("bruteforce EPPF: too many tuples");
  }
  // Closed-form symmetric Dirichlet moment; identical for every distinct
  // tuple, evaluated inside the enumeration all the same.
  double log_moment = -log_pochhammer(static_cast<double>(m) * gamma, n);
  for (long nj : counts.counts) log_moment += log_pochhammer(gamma, nj);
  double acc = 0.0;
  std::vector<int> tuple;
  std::vector<bool> used(static_cast<size_t>(m), false);
  enumerate_tuples(m, k, tuple, used, log_moment, acc);
  return acc;
}

double log_eppf_gnedin_marginal(const BlockCounts& counts, double gamma_hat) {
  if (!(gamma_hat > 0.0 && gamma_hat < 1.0))
    throw domain_error("gnedin marginal EPPF: need 0 < gamma_hat < 1");
  const long k = counts.k();
  const long n = counts.n();
  double s = std::lgamma(static_cast<double>(k));  // (k-1)!
  s += log_pochhammer(1.0 - gamma_hat, k - 1);
  s += log_pochhammer(gamma_hat, n - k);
  s -= std::lgamma(static_cast<double>(n));  // (n-1)!
  s -= log_pochhammer(1.0 + gamma_hat, n - 1);
  s += log_block_factor(counts, 2.0);
  return s;
}

double eppf_gnedin_marginal(const BlockCounts& counts, double gamma_hat) {
  return std::exp(log_eppf_gnedin_marginal(counts, gamma_hat));
}

double gnedin_prior_pmf(long m, double gamma_hat) {
  if (!(gamma_hat > 0.0 && gamma_hat < 1.0)) throw domain_error("gnedin pmf: need 0 < gamma_hat < 1");
  if (m < 1) throw domain_error("gnedin pmf: m must be >= 1");
  double s = std::log(gamma_hat) + log_pochhammer(1.0 - gamma_hat, m - 1) -
             std::lgamma(static_cast<double>(m) + 1.0);
  return std::exp(s);
}

double gnedin_prior_cdf(long r, double gamma_hat) {
  if (!(gamma_hat > 0.0 && gamma_hat < 1.0)) throw domain_error("gnedin cdf: need 0 < gamma_hat < 1");
  if (r < 1) return 0.0;
  double log_tail = log_pochhammer(1.0 - gamma_hat, r) - std::lgamma(static_cast<double>(r) + 1.0);
  return 1.0 - std::exp(log_tail);
}

long gnedin_prior_sample(double gamma_hat, Rng& rng) {
  double u = rng.uniform_pos();
  // Walk the head; fall back to bisection of the closed-form cdf for the tail.
  double q = gamma_hat;
  double cum = 0.0;
  for (long m = 1; m <= 64; ++m) {
    cum += q;
    if (u <= cum) return m;
    q *= (static_cast<double>(m) - gamma_hat) / (static_cast<double>(m) + 1.0);
  }
  long lo = 64, hi = 128;
  while (gnedin_prior_cdf(hi, gamma_hat) < u && hi < (1L << 60)) hi *= 2;
  while (lo + 1 < hi) {
    long mid = lo + (hi - lo) / 2;
    if (gnedin_prior_cdf(mid, gamma_hat) < u) lo = mid;
    else hi = mid;
  }
  return hi;
}

namespace {

double gnedin_q_start(long k_n, long n, double gamma_hat) {
  double q = 1.0;
  for (long j = 1; j <= k_n; ++j) {
    q *= (gamma_hat + static_cast<double>(n - j)) / static_cast<double>(n - 1 + j);
  }
  return q;
}

double gnedin_q_ratio(long r, long k_n, long n, double gamma_hat) {
  return static_cast<double>(r) * (static_cast<double>(r) - gamma_hat) /
         (static_cast<double>(r - k_n + 1) * static_cast<double>(r + n));
}

}  // namespace

GnedinMPosterior gnedin_m_posterior(long k_n, long n, double gamma_hat, double target_mass,
                                    long max_terms) {
  if (k_n < 1 || k_n > n) throw domain_error("gnedin m-posterior: need 1 <= k_n <= n");
  if (!(gamma_hat > 0.0 && gamma_hat < 1.0))
    throw domain_error("gnedin m-posterior: need 0 < gamma_hat < 1");
  GnedinMPosterior post;
  post.k_n = k_n;
  post.n = n;
  post.gamma_hat = gamma_hat;
  double q = gnedin_q_start(k_n, n, gamma_hat);
  double cum = 0.0;
  long r = k_n;
  while (true) {
    post.head.push_back(q);
    cum += q;
    if (cum >= target_mass || static_cast<long>(post.head.size()) >= max_terms) break;
    q *= gnedin_q_ratio(r, k_n, n, gamma_hat);
    ++r;
  }
  post.tail_mass = std::max(0.0, 1.0 - cum);
  return post;
}

double GnedinMPosterior::pmf(long m) const {
  if (m < k_n) return 0.0;
  size_t idx = static_cast<size_t>(m - k_n);
  if (idx < head.size()) return head[idx];
  double q = head.back();
  long r = k_n + static_cast<long>(head.size()) - 1;
  while (r < m) {
    q *= gnedin_q_ratio(r, k_n, n, gamma_hat);
    ++r;
  }
  return q;
}

long GnedinMPosterior::sample(Rng& rng) const {
  double u = rng.uniform_pos();
  double cum = 0.0;
  for (size_t i = 0; i < head.size(); ++i) {
    cum += head[i];
    if (u <= cum) return k_n + static_cast<long>(i);
  }
  long r = k_n + static_cast<long>(head.size()) - 1;
  double q = head.empty() ? gnedin_q_start(k_n, n, gamma_hat) : head.back();
  while (r < hard_cap) {
    q *= gnedin_q_ratio(r, k_n, n, gamma_hat);
    ++r;
    cum += q;
    if (u <= cum) return r;
  }
  return hard_cap;
}

long gnedin_m_posterior_sample(long k_n, long n, double gamma_hat, Rng& rng, long hard_cap) {
  if (k_n < 1 || k_n > n) throw domain_error("gnedin m-posterior: need 1 <= k_n <= n");
  double u = rng.uniform_pos();
  double q = gnedin_q_start(k_n, n, gamma_hat);
  double cum = q;
  long r = k_n;
  while (u > cum && r < hard_cap) {
    q *= gnedin_q_ratio(r, k_n, n, gamma_hat);
    ++r;
    cum += q;
  }
  return r;
}

void StickWeights::append(double vj) {
  v.push_back(vj);
  double rem = v.size() == 1 ? 1.0 : remaining_after(static_cast<long>(v.size()) - 1);
  p.push_back(vj * rem);
}

void StickWeights::set(long j, double vj) {
  v[static_cast<size_t>(j - 1)] = vj;
}

void StickWeights::truncate(long len) {
  if (len < 0) throw domain_error("stick truncate: negative length");
  if (len < realized()) {
    v.resize(static_cast<size_t>(len));
    p.resize(static_cast<size_t>(len));
  }
}

void StickWeights::recompute_weights() {
  p.resize(v.size());
  double rem = 1.0;
  for (size_t j = 0; j < v.size(); ++j) {
    p[j] = v[j] * rem;
    rem *= (1.0 - v[j]);
  }
}

double StickWeights::remaining_after(long j) const {
  double rem = 1.0;
  for (long l = 0; l < j; ++l) rem *= (1.0 - v[static_cast<size_t>(l)]);
  return rem;
}

std::pair<double, double> stick_prior_beta_params(const MixingPrior& prior, SupportSize m, long j) {
  if (!m.admits(j)) throw domain_error("stick index exceeds support size");
  auto [sigma, theta] = prior.stick_params(m);
  return {1.0 - sigma, theta + static_cast<double>(j) * sigma};
}

double sticks_prior_draw(const MixingPrior& prior, SupportSize m, long j, Rng& rng) {
  auto [a, b] = stick_prior_beta_params(prior, m, j);
  if (b <= 0.0) return 1.0;  // terminal stick, Be(.,0) = point mass at 1
  return rng.beta(a, b);
}

std::vector<int> size_biased_pick(std::span<const double> weights, Rng& rng) {
  const size_t m = weights.size();
  if (m == 0) throw domain_error("size-biased pick: empty weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw domain_error("size-biased pick: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-8) throw domain_error("size-biased pick: weights must sum to 1");
  std::vector<int> order;
  order.reserve(m);
  std::vector<bool> taken(m, false);
  double rem = total;
  for (size_t l = 0; l < m; ++l) {
    double u = rng.uniform() * rem;
    double cum = 0.0;
    int pick = -1;
    for (size_t j = 0; j < m; ++j) {
      if (taken[j]) continue;
      cum += weights[j];
      pick = static_cast<int>(j);
      if (u <= cum) break;
    }
    taken[static_cast<size_t>(pick)] = true;
    order.push_back(pick);
    rem -= weights[static_cast<size_t>(pick)];
  }
  return order;
}

std::vector<int> prediction_rule_simulate(const MixingPrior& prior, long n, Rng& rng) {
  if (n < 1) throw domain_error("prediction rule: n must be >= 1");
  SupportSize m = prior.has_random_m() ? SupportSize::finite(gnedin_prior_sample(prior.gamma_hat(), rng))
                                       : prior.deterministic_support();
  StickWeights sticks;
  sticks.m = m;
  std::vector<int> d(static_cast<size_t>(n));
  d[0] = 1;
  int k = 1;
  sticks.append(sticks_prior_draw(prior, m, 1, rng));
  for (long i = 1; i < n; ++i) {
    double u = rng.uniform();
    double cum = 0.0;
    int pick = 0;
    for (int j = 1; j <= k; ++j) {
      cum += sticks.weight(j);
      if (u <= cum) {
        pick = j;
        break;
      }
    }
    if (pick == 0) {
      if (m.admits(k + 1)) {
        pick = k + 1;
        k = pick;
        sticks.append(sticks_prior_draw(prior, m, k, rng));
      } else {
        pick = k;  // remaining mass is zero up to rounding; keep the last block
      }
    }
    d[static_cast<size_t>(i)] = pick;
  }
  return d;
}

}  // namespace oas
