#include "oas/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oas/errors.hpp"

namespace oas {

IatResult iat(std::span<const double> series) {
  const long len = static_cast<long>(series.size());
  if (len < 100) throw domain_error("iat: series must have length >= 100");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(len);
  double var = 0.0;
  for (double x : series) var += (x - mean) * (x - mean);
  var /= static_cast<double>(len);
  if (var <= 0.0) return {1.0, true};

  auto rho = [&](long lag) {
    double s = 0.0;
    for (long t = 0; t + lag < len; ++t)
      s += (series[static_cast<size_t>(t)] - mean) * (series[static_cast<size_t>(t + lag)] - mean);
    return s / (static_cast<double>(len) * var);
  };

  // tau = 2 * sum_k Gamma_k - 1 with Gamma_k = rho_{2k} + rho_{2k+1},
  // truncated at the first non-positive pair.
  double tau = 0.0;
  for (long k = 0; 2 * k + 1 < len; ++k) {
    double pair = rho(2 * k) + rho(2 * k + 1);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  tau -= 1.0;
  return {std::max(tau, 1.0), false};
}

double deviance(const Data& data, const GaussianFamily& family,
                std::span<const ComponentParams> atoms, std::span<const long> counts) {
  const long n = data.n();
  long total = 0;
  for (long c : counts) total += c;
  if (total == 0) throw domain_error("deviance: no occupied components");
  double dv = 0.0;
  for (long i = 0; i < n; ++i) {
    const double* yi = data.row(i);
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(counts.size());
    for (size_t j = 0; j < counts.size(); ++j) {
      if (counts[j] == 0) continue;  // empty components contribute nothing
      double t = std::log(static_cast<double>(counts[j]) / static_cast<double>(n)) +
                 family.log_kernel_at(atoms[j], yi);
      terms.push_back(t);
      mx = std::max(mx, t);
    }
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    dv += mx + std::log(s);
  }
  return -2.0 * dv;
}

std::vector<double> density_estimate(const ChainTrace& trace, const Data& grid,
                                     const GaussianFamily& family, DensityMode mode) {
  if (grid.n() == 0) throw domain_error("density estimate: empty grid");
  if (trace.records.empty()) throw domain_error("density estimate: empty trace");
  const long g = grid.n();
  std::vector<double> out(static_cast<size_t>(g), 0.0);
  for (const auto& rec : trace.records) {
    for (long p = 0; p < g; ++p) {
      const double* y = grid.row(p);
      double val = 0.0;
      if (mode == DensityMode::empirical) {
        long n_total = 0;
        for (long c : rec.counts) n_total += c;
        for (size_t j = 0; j < rec.counts.size(); ++j) {
          val += static_cast<double>(rec.counts[j]) / static_cast<double>(n_total) *
                 std::exp(family.log_kernel_at(rec.atoms[j], y));
        }
      } else {
        double wsum = 0.0;
        for (int j = 0; j < rec.k_n; ++j) {
          double w = rec.weights[static_cast<size_t>(j)];
          wsum += w;
          val += w * std::exp(family.log_kernel_at(rec.atoms[static_cast<size_t>(j)], y));
        }
        double rest = std::max(0.0, 1.0 - wsum);
        if (rest > 0.0) val += rest * std::exp(family.log_marginal_at(y));
      }
      out[static_cast<size_t>(p)] += val;
    }
  }
  for (double& v : out) v /= static_cast<double>(trace.records.size());
  return out;
}

std::vector<double> component_density_estimate(const ChainTrace& trace, const Data& grid,
                                               int j, ComponentDensityMode mode) {
  if (j < 1) throw domain_error("component density: j must be >= 1");
  const long g = grid.n();
  std::vector<double> out(static_cast<size_t>(g), 0.0);
  if (trace.records.empty()) return out;
  for (const auto& rec : trace.records) {
    const size_t idx = static_cast<size_t>(j - 1);
    double w = 0.0;
    bool have_atom = false;
    if (mode == ComponentDensityMode::weight) {
      // p_j g(y | x_j) 1{j <= m}; unrealized components contribute nothing.
      bool within_m = rec.m.kind == MValue::Kind::infinite ||
                      (rec.m.kind == MValue::Kind::finite && j <= rec.m.value);
      if (within_m && idx < rec.weights.size()) {
        w = rec.weights[idx];
        have_atom = idx < rec.atoms.size();
      }
    } else {
      if (idx < rec.counts.size()) {
        long n_total = 0;
        for (long c : rec.counts) n_total += c;
        w = static_cast<double>(rec.counts[idx]) / static_cast<double>(n_total);
        have_atom = idx < rec.atoms.size();
      }
    }
    if (!(w > 0.0) || !have_atom) continue;
    for (long p = 0; p < g; ++p) {
      out[static_cast<size_t>(p)] +=
          w * std::exp(log_kernel(rec.atoms[idx], grid.row(p)));
    }
  }
  for (double& v : out) v /= static_cast<double>(trace.records.size());
  return out;
}

std::map<long, double> occupancy_posterior(const ChainTrace& trace) {
  if (trace.records.empty()) throw domain_error("occupancy posterior: empty trace");
  std::map<long, double> pmf;
  for (const auto& rec : trace.records) pmf[rec.k_n] += 1.0;
  for (auto& [k, p] : pmf) p /= static_cast<double>(trace.records.size());
  return pmf;
}

std::map<long, double> m_posterior(const ChainTrace& trace) {
  if (trace.records.empty()) throw domain_error("m posterior: empty trace");
  if (trace.prior.rfind("gnedin_mfm", 0) != 0)
    throw domain_error("m posterior: only defined for random-m priors");
  std::map<long, double> pmf;
  for (const auto& rec : trace.records) {
    if (rec.m.kind != MValue::Kind::finite)
      throw domain_error("m posterior: trace does not carry a finite m chain");
    pmf[rec.m.value] += 1.0;
  }
  for (auto& [m, p] : pmf) p /= static_cast<double>(trace.records.size());
  return pmf;
}

double label_change_rate(const ChainTrace& trace) {
  const auto& recs = trace.records;
  if (recs.size() < 2) return 0.0;
  long changed = 0;
  for (size_t t = 0; t + 1 < recs.size(); ++t) {
    int jmax = std::min(recs[t].k_n, recs[t + 1].k_n);
    jmax = std::min<int>(jmax, static_cast<int>(recs[t].atoms.size()));
    bool any = false;
    for (int j = 0; j < jmax && !any; ++j) {
      const auto& a = recs[t].atoms[static_cast<size_t>(j)];
      int nearest = -1;
      double best = std::numeric_limits<double>::infinity();
      for (size_t l = 0; l < recs[t + 1].atoms.size(); ++l) {
        const auto& b = recs[t + 1].atoms[l];
        double d0 = a.mu.x0 - b.mu.x0, d1 = a.mu.x1 - b.mu.x1;
        double dist = d0 * d0 + d1 * d1;
        if (dist < best) {
          best = dist;
          nearest = static_cast<int>(l);
        }
      }
      if (nearest != j) any = true;
    }
    if (any) ++changed;
  }
  return static_cast<double>(changed) / static_cast<double>(recs.size() - 1);
}

std::vector<double> k_series(const ChainTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.records.size());
  for (const auto& rec : trace.records) out.push_back(static_cast<double>(rec.k_n));
  return out;
}

std::vector<double> deviance_series(const ChainTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.records.size());
  for (const auto& rec : trace.records) out.push_back(rec.deviance);
  return out;
}

}  // namespace oas
