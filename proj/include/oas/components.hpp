#pragma once

#include <array>
#include <span>
#include <vector>

#include "oas/errors.hpp"
#include "oas/rng.hpp"

namespace oas {

// Symmetric 2x2 matrix, stored as (a00, a01, a11). Dimension two is fixed by
// the model, so the few linear-algebra pieces are spelled out directly.
struct Sym2 {
  double a00 = 1.0, a01 = 0.0, a11 = 1.0;

  double det() const { return a00 * a11 - a01 * a01; }
  bool spd() const { return a00 > 0.0 && det() > 0.0; }
  Sym2 inverse() const {
    double d = det();
    if (!(d > 0.0)) throw domain_error("2x2 inverse: matrix not SPD");
    return {a11 / d, -a01 / d, a00 / d};
  }
  // Lower Cholesky factor (l00, l10, l11).
  std::array<double, 3> chol() const;
  double quad_form(double x0, double x1) const {  // x' A x
    return a00 * x0 * x0 + 2.0 * a01 * x0 * x1 + a11 * x1 * x1;
  }
  Sym2 scaled(double c) const { return {c * a00, c * a01, c * a11}; }
};

struct Vec2 {
  double x0 = 0.0, x1 = 0.0;
};

// Normal-inverse-gamma hyperparameters for a univariate Gaussian kernel:
// mu | s2 ~ N(phi, s2/lambda), s2 ~ InvGamma(a, b).
struct NigHyper {
  double phi = 0.0;
  double lambda = 1.0;
  double a = 1.0;
  double b = 1.0;

  void validate() const {
    if (!(lambda > 0.0 && a > 0.0 && b > 0.0))
      throw domain_error("NIG hyper: lambda, a, b must be positive");
  }
};

// Normal-inverse-Wishart hyperparameters for a bivariate Gaussian kernel:
// mu | Sigma ~ N2(phi, Sigma/lambda), Sigma ~ InvWishart(Psi, tau_df).
struct NiwHyper {
  Vec2 phi{};
  double lambda = 1.0;
  Sym2 psi{};
  double tau_df = 2.0;

  void validate() const {
    if (!(lambda > 0.0)) throw domain_error("NIW hyper: lambda must be positive");
    if (!psi.spd()) throw domain_error("NIW hyper: Psi must be SPD");
    if (!(tau_df > 1.0)) throw domain_error("NIW hyper: tau_df must exceed dim - 1");
  }
};

// Parameters of one mixture component; univariate uses mu.x0 and cov.a00.
struct ComponentParams {
  int dim = 1;
  Vec2 mu{};
  Sym2 cov{};
};

// Conjugate updates.
NigHyper posterior_hyper(const NigHyper& hyper, std::span<const double> ys);
NiwHyper posterior_hyper(const NiwHyper& hyper, std::span<const Vec2> ys);

// Draws (mu, scale) from the prior/posterior described by the hyper.
ComponentParams sample_params(const NigHyper& hyper, Rng& rng);
ComponentParams sample_params(const NiwHyper& hyper, Rng& rng);

// log integral g(y | x) nu(dx): Student-t densities implied by conjugacy.
double log_marginal_likelihood(const NigHyper& hyper, double y);
double log_marginal_likelihood(const NiwHyper& hyper, Vec2 y);

// Gaussian log kernel density.
double log_kernel(const ComponentParams& params, const double* y);

// A kernel/base-measure pair with a fixed data dimension, dispatching between
// the univariate NIG and bivariate NIW cases. Observations are passed as
// pointers into a row-major data matrix.
class GaussianFamily {
 public:
  static GaussianFamily univariate(const NigHyper& h) {
    h.validate();
    GaussianFamily f;
    f.dim_ = 1;
    f.nig_ = h;
    return f;
  }
  static GaussianFamily bivariate(const NiwHyper& h) {
    h.validate();
    GaussianFamily f;
    f.dim_ = 2;
    f.niw_ = h;
    return f;
  }

  // Hyperparameters the experiments use: phi at the data mean, lambda = 1/100
  // and a = b = 0.5 (univariate) or tau_df = 2, Psi = I (bivariate).
  static GaussianFamily preset_univariate(double data_mean) {
    return univariate(NigHyper{data_mean, 0.01, 0.5, 0.5});
  }
  static GaussianFamily preset_bivariate(Vec2 data_mean) {
    return bivariate(NiwHyper{data_mean, 0.01, Sym2{1.0, 0.0, 1.0}, 2.0});
  }

  int dim() const { return dim_; }
  const NigHyper& nig() const { return nig_; }
  const NiwHyper& niw() const { return niw_; }

  double log_kernel_at(const ComponentParams& params, const double* y) const {
    return log_kernel(params, y);
  }
  double log_marginal_at(const double* y) const;
  ComponentParams sample_prior(Rng& rng) const;
  // Posterior draw given the observations at the given rows.
  ComponentParams sample_posterior(std::span<const double> data, int dim,
                                   std::span<const int> rows, Rng& rng) const;
  // log integral prod_{i in rows} g(y_i | x) nu(dx), via the conjugate chain rule.
  double log_block_evidence(std::span<const double> data, int dim,
                            std::span<const int> rows) const;

 private:
  GaussianFamily() = default;
  int dim_ = 1;
  NigHyper nig_{};
  NiwHyper niw_{};
};

}  // namespace oas
