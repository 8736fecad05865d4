#include "grda/numerics/rk45.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grda::num {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Difference between the 5th and the embedded 4th order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

Vec weighted(const Vec& y, std::initializer_list<std::pair<double, const Vec*>> terms,
             double h) {
  Vec out = y;
  for (const auto& [w, k] : terms) axpy(out, h * w, *k);
  return out;
}

}  // namespace

Vec OdeSolution::eval(double t) const {
  if (times_.empty()) throw std::runtime_error("OdeSolution: empty solution");
  if (t <= times_.front()) return states_.front();
  if (t >= times_.back()) return states_.back();
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double h = times_[i + 1] - times_[i];
  const double s = (t - times_[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  Vec out(states_[i].size());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = h00 * states_[i][j] + h * h10 * derivs_[i][j] + h01 * states_[i + 1][j] +
             h * h11 * derivs_[i + 1][j];
  return out;
}

std::vector<Vec> OdeSolution::eval_grid(const std::vector<double>& grid) const {
  std::vector<Vec> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(eval(t));
  return out;
}

OdeSolution rk45(const OdeRhs& f, const Vec& y0, double t0, double t1, double rel_tol,
                 double abs_tol) {
  if (t1 < t0) throw std::invalid_argument("rk45: t1 < t0");

  std::vector<double> times{t0};
  std::vector<Vec> states{y0};
  std::vector<Vec> derivs{f(t0, y0)};
  if (t1 == t0) return OdeSolution(std::move(times), std::move(states), std::move(derivs));

  double t = t0;
  Vec y = y0;
  Vec k1 = derivs.front();
  double h = (t1 - t0) / 100.0;
  const double h_min = 1e-14 * std::max(1.0, t1 - t0);

  while (t < t1) {
    h = std::min(h, t1 - t);
    if (h < h_min) throw std::runtime_error("rk45: step size underflow");

    const Vec k2 = f(t + c2 * h, weighted(y, {{a21, &k1}}, h));
    const Vec k3 = f(t + c3 * h, weighted(y, {{a31, &k1}, {a32, &k2}}, h));
    const Vec k4 = f(t + c4 * h, weighted(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
    const Vec k5 =
        f(t + c5 * h, weighted(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
    const Vec k6 = f(t + h, weighted(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4},
                                         {a65, &k5}}, h));
    const Vec y_new =
        weighted(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
    const Vec k7 = f(t + h, y_new);

    double err = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double ej = h * (e1 * k1[j] + e3 * k3[j] + e4 * k4[j] + e5 * k5[j] +
                             e6 * k6[j] + e7 * k7[j]);
      const double scale = abs_tol + rel_tol * std::max(std::abs(y[j]), std::abs(y_new[j]));
      err = std::max(err, std::abs(ej) / scale);
    }

    if (err <= 1.0) {
      t += h;
      y = y_new;
      k1 = k7;  // FSAL
      times.push_back(t);
      states.push_back(y);
      derivs.push_back(k1);
    }
    const double factor =
        err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }

  return OdeSolution(std::move(times), std::move(states), std::move(derivs));
}

}  // namespace grda::num
