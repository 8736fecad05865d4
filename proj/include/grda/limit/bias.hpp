#pragma once

namespace grda::limit {

/// Long-run absolute bias of RDA on an active coordinate under diagonal
/// covariance: c0 / sigma_sq.
double rda_limit_bias(double c0, double sigma_sq);

/// Bias function of an active coordinate under the power-law schedule:
///   h(t) = -sign * c * mu * e^{-sigma_sq t} * int_{t0}^{t} (s-t0)^{mu-1} e^{sigma_sq s} ds.
/// Evaluated through the substitution u = (s-t0)^mu, which removes the
/// endpoint singularity for mu < 1 and keeps the integrand in (0, 1]:
///   h(t) = -sign * c * int_0^{(t-t0)^mu} e^{-sigma_sq (t - t0 - u^{1/mu})} du.
/// mu = 1 uses the closed form -sign * c * (1 - e^{-sigma_sq (t-t0)}) / sigma_sq.
double bias_h(double t, double c, double mu, double t0, double sigma_sq, int sign);

}  // namespace grda::limit
