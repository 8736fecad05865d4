#pragma once

#include <cmath>
#include <stdexcept>

namespace grda::opt {

/// Penalty-strength schedule g(n, gamma).
///
/// Zero:        g = 0 (plain SGD)
/// Rda:         g = c0 * n * gamma
/// PowerLaw:    g = c * sqrt(gamma) * (n*gamma - t0)_+^mu
/// SimPowerLaw: g = gamma^(1/2 + mu) * n^mu
class TuningSchedule {
 public:
  enum class Kind { Zero, Rda, PowerLaw, SimPowerLaw };

  static TuningSchedule zero() { return TuningSchedule(Kind::Zero, 0, 0, 0); }

  static TuningSchedule rda(double c0) {
    if (!(c0 > 0)) throw std::invalid_argument("TuningSchedule: c0 must be positive");
    return TuningSchedule(Kind::Rda, c0, 0, 0);
  }

  static TuningSchedule power_law(double c, double mu, double t0) {
    if (!(c > 0)) throw std::invalid_argument("TuningSchedule: c must be positive");
    if (mu < 0 || t0 < 0)
      throw std::invalid_argument("TuningSchedule: mu and t0 must be nonnegative");
    return TuningSchedule(Kind::PowerLaw, c, mu, t0);
  }

  static TuningSchedule sim_power_law(double mu) {
    if (mu < 0) throw std::invalid_argument("TuningSchedule: mu must be nonnegative");
    return TuningSchedule(Kind::SimPowerLaw, 0, mu, 0);
  }

  Kind kind() const { return kind_; }
  double c() const { return c_; }
  double mu() const { return mu_; }
  double t0() const { return t0_; }

  /// g(n, gamma); total and nonnegative for every n >= 0, gamma > 0.
  double value(std::uint64_t n, double gamma) const {
    switch (kind_) {
      case Kind::Zero:
        return 0.0;
      case Kind::Rda:
        return c_ * static_cast<double>(n) * gamma;
      case Kind::PowerLaw: {
        const double s = static_cast<double>(n) * gamma - t0_;
        return s > 0 ? c_ * std::sqrt(gamma) * std::pow(s, mu_) : 0.0;
      }
      case Kind::SimPowerLaw:
        return std::pow(gamma, 0.5 + mu_) * std::pow(static_cast<double>(n), mu_);
    }
    return 0.0;
  }

 private:
  TuningSchedule(Kind kind, double c, double mu, double t0)
      : kind_(kind), c_(c), mu_(mu), t0_(t0) {}

  Kind kind_;
  double c_;
  double mu_;
  double t0_;
};

inline double tuning_value(const TuningSchedule& s, std::uint64_t n, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("tuning_value: gamma must be positive");
  return s.value(n, gamma);
}

}  // namespace grda::opt
