#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "oas/errors.hpp"

namespace oas {

// Number of support points of a mixing measure. Infinity is a distinct marker,
// never a large integer, so accidental arithmetic on a sentinel cannot happen.
class SupportSize {
 public:
  static SupportSize infinite() { return SupportSize(kInf); }
  static SupportSize finite(long m) {
    if (m < 1) throw domain_error("support size must be >= 1");
    return SupportSize(m);
  }

  bool is_infinite() const { return value_ == kInf; }
  long value() const {
    if (is_infinite()) throw domain_error("support size is infinite");
    return value_;
  }
  // True when component index j (1-based) exists, i.e. j <= m.
  bool admits(long j) const { return is_infinite() || j <= value_; }

  bool operator==(const SupportSize& o) const { return value_ == o.value_; }

 private:
  static constexpr long kInf = -1;
  explicit SupportSize(long v) : value_(v) {}
  long value_;
};

enum class PriorKind { pitman_yor, finite_dirichlet, gnedin_mfm };

// Per-m symmetric-Dirichlet parameter for mixtures with random dimension.
struct GammaRule {
  enum class Kind { constant, theta_over_m };
  Kind kind = Kind::constant;
  double value = 1.0;  // gamma for constant, theta for theta_over_m

  static GammaRule constant(double gamma) {
    if (!(gamma > 0.0)) throw domain_error("gamma must be positive");
    return GammaRule{Kind::constant, gamma};
  }
  static GammaRule theta_over_m(double theta) {
    if (!(theta > 0.0)) throw domain_error("theta must be positive");
    return GammaRule{Kind::theta_over_m, theta};
  }
  double gamma_for(long m) const {
    return kind == Kind::constant ? value : value / static_cast<double>(m);
  }
  bool is_constant_one() const {
    return kind == Kind::constant && value == 1.0;
  }
};

// Mixing prior: Pitman-Yor(sigma, theta), symmetric finite Dirichlet
// (gamma, m), or a mixture of finite mixtures with the Gnedin prior on m.
class MixingPrior {
 public:
  static MixingPrior pitman_yor(double sigma, double theta) {
    if (!(sigma >= 0.0 && sigma < 1.0)) throw domain_error("pitman_yor: need 0 <= sigma < 1");
    if (!(theta > -sigma)) throw domain_error("pitman_yor: need theta > -sigma");
    MixingPrior p;
    p.kind_ = PriorKind::pitman_yor;
    p.sigma_ = sigma;
    p.theta_ = theta;
    return p;
  }

  static MixingPrior finite_dirichlet(double gamma, long m) {
    if (!(gamma > 0.0)) throw domain_error("finite_dirichlet: gamma must be positive");
    if (m < 1) throw domain_error("finite_dirichlet: m must be >= 1");
    MixingPrior p;
    p.kind_ = PriorKind::finite_dirichlet;
    p.gamma_ = gamma;
    p.m_ = m;
    return p;
  }

  static MixingPrior gnedin(double gamma_hat, GammaRule rule = GammaRule::constant(1.0)) {
    if (!(gamma_hat > 0.0 && gamma_hat < 1.0)) throw domain_error("gnedin: need 0 < gamma_hat < 1");
    MixingPrior p;
    p.kind_ = PriorKind::gnedin_mfm;
    p.gamma_hat_ = gamma_hat;
    p.gamma_rule_ = rule;
    return p;
  }

  PriorKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double theta() const { return theta_; }
  double gamma() const { return gamma_; }
  long m() const { return m_; }
  double gamma_hat() const { return gamma_hat_; }
  const GammaRule& gamma_rule() const { return gamma_rule_; }

  bool has_random_m() const { return kind_ == PriorKind::gnedin_mfm; }

  // Support size when m is deterministic; the Gnedin case takes the current
  // sampled m from the chain state.
  SupportSize deterministic_support() const {
    switch (kind_) {
      case PriorKind::pitman_yor: return SupportSize::infinite();
      case PriorKind::finite_dirichlet: return SupportSize::finite(m_);
      default: throw domain_error("gnedin prior has random support size");
    }
  }

  // Stick-breaking regime parameters (sigma, theta) given the current support
  // size: identity for Pitman-Yor, (-gamma, m*gamma) for the finite cases.
  std::pair<double, double> stick_params(SupportSize m) const {
    switch (kind_) {
      case PriorKind::pitman_yor:
        return {sigma_, theta_};
      case PriorKind::finite_dirichlet:
        return {-gamma_, static_cast<double>(m_) * gamma_};
      case PriorKind::gnedin_mfm: {
        double g = gamma_rule_.gamma_for(m.value());
        return {-g, static_cast<double>(m.value()) * g};
      }
    }
    throw domain_error("unreachable");
  }

  std::string describe() const;

 private:
  MixingPrior() = default;
  PriorKind kind_ = PriorKind::pitman_yor;
  double sigma_ = 0.0;
  double theta_ = 1.0;
  double gamma_ = 1.0;
  long m_ = 1;
  double gamma_hat_ = 0.5;
  GammaRule gamma_rule_ = GammaRule::constant(1.0);
};

}  // namespace oas
