#include "oas/components.hpp"

#include <cmath>

namespace oas {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

std::array<double, 3> Sym2::chol() const {
  if (!spd()) throw domain_error("2x2 Cholesky: matrix not SPD");
  double l00 = std::sqrt(a00);
  double l10 = a01 / l00;
  double l11 = std::sqrt(a11 - l10 * l10);
  return {l00, l10, l11};
}

NigHyper posterior_hyper(const NigHyper& hyper, std::span<const double> ys) {
  hyper.validate();
  const auto n = static_cast<double>(ys.size());
  if (ys.empty()) return hyper;
  double mean = 0.0;
  for (double y : ys) mean += y;
  mean /= n;
  double ss = 0.0;
  for (double y : ys) ss += (y - mean) * (y - mean);
  NigHyper post;
  post.lambda = hyper.lambda + n;
  post.phi = (hyper.lambda * hyper.phi + n * mean) / post.lambda;
  post.a = hyper.a + 0.5 * n;
  post.b = hyper.b + 0.5 * ss +
           0.5 * hyper.lambda * n * (mean - hyper.phi) * (mean - hyper.phi) / post.lambda;
  return post;
}

NiwHyper posterior_hyper(const NiwHyper& hyper, std::span<const Vec2> ys) {
  hyper.validate();
  const auto n = static_cast<double>(ys.size());
  if (ys.empty()) return hyper;
  Vec2 mean{};
  for (const Vec2& y : ys) {
    mean.x0 += y.x0;
    mean.x1 += y.x1;
  }
  mean.x0 /= n;
  mean.x1 /= n;
  Sym2 scatter{0.0, 0.0, 0.0};
  for (const Vec2& y : ys) {
    double d0 = y.x0 - mean.x0, d1 = y.x1 - mean.x1;
    scatter.a00 += d0 * d0;
    scatter.a01 += d0 * d1;
    scatter.a11 += d1 * d1;
  }
  double d0 = mean.x0 - hyper.phi.x0, d1 = mean.x1 - hyper.phi.x1;
  double c = hyper.lambda * n / (hyper.lambda + n);
  NiwHyper post;
  post.lambda = hyper.lambda + n;
  post.phi = {(hyper.lambda * hyper.phi.x0 + n * mean.x0) / post.lambda,
              (hyper.lambda * hyper.phi.x1 + n * mean.x1) / post.lambda};
  post.tau_df = hyper.tau_df + n;
  post.psi = {hyper.psi.a00 + scatter.a00 + c * d0 * d0,
              hyper.psi.a01 + scatter.a01 + c * d0 * d1,
              hyper.psi.a11 + scatter.a11 + c * d1 * d1};
  return post;
}

ComponentParams sample_params(const NigHyper& hyper, Rng& rng) {
  hyper.validate();
  double s2 = hyper.b / rng.gamma(hyper.a);
  double mu = hyper.phi + std::sqrt(s2 / hyper.lambda) * rng.normal();
  ComponentParams p;
  p.dim = 1;
  p.mu = {mu, 0.0};
  p.cov = {s2, 0.0, 0.0};
  return p;
}

ComponentParams sample_params(const NiwHyper& hyper, Rng& rng) {
  hyper.validate();
  // Sigma^-1 ~ Wishart(Psi^-1, tau): Bartlett factor A, Sigma^-1 = (LA)(LA)'
  // with L = chol(Psi^-1).
  Sym2 psi_inv = hyper.psi.inverse();
  auto l = psi_inv.chol();
  double a00 = std::sqrt(rng.chisq(hyper.tau_df));
  double a11 = std::sqrt(rng.chisq(hyper.tau_df - 1.0));
  double a10 = rng.normal();
  // B = L * A (lower triangular).
  double b00 = l[0] * a00;
  double b10 = l[1] * a00 + l[2] * a10;
  double b11 = l[2] * a11;
  Sym2 prec{b00 * b00, b00 * b10, b10 * b10 + b11 * b11};
  Sym2 sigma = prec.inverse();
  // mu | Sigma ~ N2(phi, Sigma / lambda).
  auto ls = sigma.chol();
  double z0 = rng.normal(), z1 = rng.normal();
  double s = 1.0 / std::sqrt(hyper.lambda);
  ComponentParams p;
  p.dim = 2;
  p.mu = {hyper.phi.x0 + s * ls[0] * z0, hyper.phi.x1 + s * (ls[1] * z0 + ls[2] * z1)};
  p.cov = sigma;
  return p;
}

double log_marginal_likelihood(const NigHyper& hyper, double y) {
  hyper.validate();
  // Student-t with df = 2a, location phi, scale^2 = b(lambda+1)/(a*lambda).
  double df = 2.0 * hyper.a;
  double scale2 = hyper.b * (hyper.lambda + 1.0) / (hyper.a * hyper.lambda);
  double z2 = (y - hyper.phi) * (y - hyper.phi) / scale2;
  return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
         0.5 * std::log(df * M_PI * scale2) - 0.5 * (df + 1.0) * std::log1p(z2 / df);
}

double log_marginal_likelihood(const NiwHyper& hyper, Vec2 y) {
  hyper.validate();
  // Bivariate Student-t: df = tau - 1, scale = Psi (lambda+1) / (lambda df).
  double df = hyper.tau_df - 1.0;
  Sym2 scale = hyper.psi.scaled((hyper.lambda + 1.0) / (hyper.lambda * df));
  Sym2 inv = scale.inverse();
  double d0 = y.x0 - hyper.phi.x0, d1 = y.x1 - hyper.phi.x1;
  double q = inv.quad_form(d0, d1);
  return std::lgamma(0.5 * (df + 2.0)) - std::lgamma(0.5 * df) - std::log(df * M_PI) -
         0.5 * std::log(scale.det()) - 0.5 * (df + 2.0) * std::log1p(q / df);
}

double log_kernel(const ComponentParams& params, const double* y) {
  if (params.dim == 1) {
    double s2 = params.cov.a00;
    if (!(s2 > 0.0)) throw domain_error("log kernel: variance must be positive");
    double d = y[0] - params.mu.x0;
    return -0.5 * (kLog2Pi + std::log(s2) + d * d / s2);
  }
  if (!params.cov.spd()) throw domain_error("log kernel: covariance not SPD");
  Sym2 inv = params.cov.inverse();
  double d0 = y[0] - params.mu.x0, d1 = y[1] - params.mu.x1;
  return -kLog2Pi - 0.5 * std::log(params.cov.det()) - 0.5 * inv.quad_form(d0, d1);
}

double GaussianFamily::log_marginal_at(const double* y) const {
  if (dim_ == 1) return log_marginal_likelihood(nig_, y[0]);
  return log_marginal_likelihood(niw_, Vec2{y[0], y[1]});
}

ComponentParams GaussianFamily::sample_prior(Rng& rng) const {
  if (dim_ == 1) return sample_params(nig_, rng);
  return sample_params(niw_, rng);
}

ComponentParams GaussianFamily::sample_posterior(std::span<const double> data, int dim,
                                                 std::span<const int> rows, Rng& rng) const {
  if (dim != dim_) throw domain_error("family/data dimension mismatch");
  if (dim_ == 1) {
    std::vector<double> ys;
    ys.reserve(rows.size());
    for (int r : rows) ys.push_back(data[static_cast<size_t>(r)]);
    return sample_params(posterior_hyper(nig_, ys), rng);
  }
  std::vector<Vec2> ys;
  ys.reserve(rows.size());
  for (int r : rows) ys.push_back({data[2 * static_cast<size_t>(r)], data[2 * static_cast<size_t>(r) + 1]});
  return sample_params(posterior_hyper(niw_, ys), rng);
}

double GaussianFamily::log_block_evidence(std::span<const double> data, int dim,
                                          std::span<const int> rows) const {
  if (dim != dim_) throw domain_error("family/data dimension mismatch");
  double total = 0.0;
  if (dim_ == 1) {
    NigHyper h = nig_;
    for (int r : rows) {
      double y = data[static_cast<size_t>(r)];
      total += log_marginal_likelihood(h, y);
      h = posterior_hyper(h, std::span<const double>(&y, 1));
    }
  } else {
    NiwHyper h = niw_;
    for (int r : rows) {
      Vec2 y{data[2 * static_cast<size_t>(r)], data[2 * static_cast<size_t>(r) + 1]};
      total += log_marginal_likelihood(h, y);
      h = posterior_hyper(h, std::span<const Vec2>(&y, 1));
    }
  }
  return total;
}

}  // namespace oas
