#include "grda/limit/bias.hpp"

#include <cmath>
#include <stdexcept>

#include "grda/numerics/quad.hpp"

namespace grda::limit {

double rda_limit_bias(double c0, double sigma_sq) {
  if (c0 < 0) throw std::invalid_argument("rda_limit_bias: c0 must be nonnegative");
  if (!(sigma_sq > 0)) throw std::invalid_argument("rda_limit_bias: sigma_sq must be positive");
  return c0 / sigma_sq;
}

double bias_h(double t, double c, double mu, double t0, double sigma_sq, int sign) {
  if (!(c > 0)) throw std::invalid_argument("bias_h: c must be positive");
  if (!(mu > 0)) throw std::invalid_argument("bias_h: mu must be positive");
  if (!(sigma_sq > 0)) throw std::invalid_argument("bias_h: sigma_sq must be positive");
  if (sign != 1 && sign != -1) throw std::invalid_argument("bias_h: sign must be +1 or -1");
  if (t < t0) throw std::invalid_argument("bias_h: t must be >= t0");

  const double span = t - t0;
  if (span == 0.0) return 0.0;
  if (mu == 1.0) return -sign * c * (1.0 - std::exp(-sigma_sq * span)) / sigma_sq;

  const double inv_mu = 1.0 / mu;
  const auto integrand = [=](double u) {
    return std::exp(-sigma_sq * (span - std::pow(u, inv_mu)));
  };
  const double integral = num::adaptive_quad(integrand, 0.0, std::pow(span, mu), 1e-8);
  return -sign * c * integral;
}

}  // namespace grda::limit
