#include "oas/prior.hpp"

#include <cstdio>

namespace oas {

namespace {
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}
}  // namespace

std::string MixingPrior::describe() const {
  switch (kind_) {
    case PriorKind::pitman_yor:
      return "pitman_yor(sigma=" + fmt(sigma_) + ",theta=" + fmt(theta_) + ")";
    case PriorKind::finite_dirichlet:
      return "finite_dirichlet(gamma=" + fmt(gamma_) + ",m=" + std::to_string(m_) + ")";
    case PriorKind::gnedin_mfm: {
      std::string rule = gamma_rule_.kind == GammaRule::Kind::constant
                             ? "constant:" + fmt(gamma_rule_.value)
                             : "theta_over_m:" + fmt(gamma_rule_.value);
      return "gnedin_mfm(gamma_hat=" + fmt(gamma_hat_) + ",gamma_rule=" + rule + ")";
    }
  }
  return "unknown";
}

}  // namespace oas
