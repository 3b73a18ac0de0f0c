#pragma once

#include <map>
#include <span>
#include <vector>

#include "oas/components.hpp"
#include "oas/dataio.hpp"
#include "oas/trace.hpp"

namespace oas {

// Integrated autocorrelation time, tau = 1 + 2 sum_l rho_l, estimated with
// Geyer's initial positive sequence: paired autocorrelations are accumulated
// until the first negative pair. A constant series is flagged degenerate and
// reports tau = 1.
struct IatResult {
  double value = 1.0;
  bool degenerate = false;
};

IatResult iat(std::span<const double> series);

// D_v = -2 sum_i log sum_j (n_j / n) g(y_i | x_j) over occupied components.
double deviance(const Data& data, const GaussianFamily& family,
                std::span<const ComponentParams> atoms, std::span<const long> counts);

enum class DensityMode { full, empirical };

// Pointwise posterior density estimate averaged over the trace. full adds the
// leftover stick mass times the prior predictive; empirical reweights kernels
// by n_j / n.
std::vector<double> density_estimate(const ChainTrace& trace, const Data& grid,
                                     const GaussianFamily& family, DensityMode mode);

enum class ComponentDensityMode { weight, empirical };

// Weighted density of the j-th component in order of appearance (j 1-based).
std::vector<double> component_density_estimate(const ChainTrace& trace, const Data& grid,
                                               int j, ComponentDensityMode mode);

// Empirical posterior pmfs from the trace.
std::map<long, double> occupancy_posterior(const ChainTrace& trace);
// Only traces from random-m priors carry an m chain.
std::map<long, double> m_posterior(const ChainTrace& trace);

// Fraction of consecutive iterations in which some component's nearest-atom
// match (by Euclidean distance between recorded means) lands on a different
// index. Descriptive only.
double label_change_rate(const ChainTrace& trace);

std::vector<double> k_series(const ChainTrace& trace);
std::vector<double> deviance_series(const ChainTrace& trace);

}  // namespace oas
