#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "grda/numerics/rng.hpp"
#include "grda/optimizer/grda.hpp"

using namespace grda;

namespace {

// Numeric argmin of a convex scalar objective via bisection on a monotone
// selection of its subgradient (far more precise near the flat minimum than
// value-based searches).
template <typename G>
double subgrad_argmin(const G& g, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double sgn0(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace

TEST_CASE("tuning_value: worked examples") {
  CHECK(opt::tuning_value(opt::TuningSchedule::rda(0.005), 100, 0.005) ==
        doctest::Approx(0.0025).epsilon(1e-12));
  CHECK(opt::tuning_value(opt::TuningSchedule::power_law(0.005, 0.7, 0.0), 1000, 0.005) ==
        doctest::Approx(1.0908e-3).epsilon(1e-4));
  CHECK(opt::tuning_value(opt::TuningSchedule::power_law(1.0, 1.0, 10.0), 5, 1.0) == 0.0);
  CHECK(opt::tuning_value(opt::TuningSchedule::zero(), 12345, 0.1) == 0.0);
}

TEST_CASE("tuning_value: nonnegative and total") {
  num::RngStream rng(1, 0);
  const opt::TuningSchedule schedules[] = {
      opt::TuningSchedule::zero(), opt::TuningSchedule::rda(0.2),
      opt::TuningSchedule::power_law(1.3, 0.51, 2.0), opt::TuningSchedule::sim_power_law(0.7)};
  for (const auto& s : schedules)
    for (int i = 0; i < 100; ++i) {
      const auto n = rng.uniform_below(100000);
      const double gamma = rng.uniform() * 0.1 + 1e-6;
      CHECK(opt::tuning_value(s, n, gamma) >= 0.0);
    }
}

TEST_CASE("prox_l1: worked examples") {
  const num::Vec w = opt::prox_l1({2.0, -0.5}, 1.0);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == 0.0);
  const num::Vec id = opt::prox_l1({0.3, -0.7, 2.0}, 0.0);
  CHECK(id[0] == 0.3);
  CHECK(id[1] == -0.7);
  CHECK(id[2] == 2.0);
}

TEST_CASE("prox_l1: matches numeric argmin on random instances") {
  num::RngStream rng(11, 0);
  for (int it = 0; it < 50; ++it) {
    num::Vec v(3);
    for (double& x : v) x = 4.0 * (rng.uniform() - 0.5);
    const double lambda = 2.0 * rng.uniform();
    const num::Vec w = opt::prox_l1(v, lambda);
    for (std::size_t j = 0; j < 3; ++j) {
      const double vj = v[j];
      const double best = subgrad_argmin(
          [&](double x) { return (x - vj) + lambda * sgn0(x); }, -6, 6);
      CHECK(std::abs(w[j] - best) <= 1e-8);
    }
  }
}

TEST_CASE("prox_elastic_net: worked example and argmin oracle") {
  const num::Vec w = opt::prox_elastic_net({2.0}, 1.0, 1.0);
  CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-12));

  num::RngStream rng(13, 0);
  for (int it = 0; it < 50; ++it) {
    const double v = 4.0 * (rng.uniform() - 0.5);
    const double lambda = 2.0 * rng.uniform();
    const double kappa = 0.1 + 2.0 * rng.uniform();
    const double got = opt::prox_elastic_net({v}, lambda, kappa)[0];
    const double best = subgrad_argmin(
        [&](double x) { return (x - v) + lambda * (kappa * x + sgn0(x)); }, -6, 6);
    CHECK(std::abs(got - best) <= 1e-8);
  }
}

TEST_CASE("prox_group_lasso: worked examples") {
  const opt::Groups one_group{{0, 1}};
  num::Vec w = opt::prox_group_lasso({3.0, 4.0}, 5.0, one_group);
  CHECK(w[0] == 0.0);
  CHECK(w[1] == 0.0);
  w = opt::prox_group_lasso({3.0, 4.0}, 2.5, one_group);
  CHECK(w[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(2.0).epsilon(1e-12));
  w = opt::prox_group_lasso({3.0, 4.0}, 0.0, one_group);
  CHECK(w[0] == 3.0);
  CHECK(w[1] == 4.0);
}

TEST_CASE("penalty validation: group partitions") {
  CHECK_THROWS(opt::Penalty::group_lasso({{0, 1}, {1, 2}}, 3));  // duplicate
  CHECK_THROWS(opt::Penalty::group_lasso({{0, 1}}, 3));          // missing coord
  CHECK_THROWS(opt::Penalty::group_lasso({{0, 5}}, 3));          // out of range
  CHECK_NOTHROW(opt::Penalty::group_lasso({{2, 0}, {1}}, 3));
}

TEST_CASE("prox: non-expansive for every variant") {
  num::RngStream rng(17, 0);
  const opt::Penalty penalties[] = {opt::Penalty::none(), opt::Penalty::l1(),
                                    opt::Penalty::elastic_net(0.7),
                                    opt::Penalty::group_lasso({{0, 2}, {1, 3}}, 4)};
  for (const auto& pen : penalties)
    for (int it = 0; it < 100; ++it) {
      num::Vec v(4), u(4);
      for (double& x : v) x = 3.0 * rng.normal();
      for (double& x : u) x = 3.0 * rng.normal();
      const double lambda = 2.0 * rng.uniform();
      const num::Vec pv = opt::prox(v, lambda, pen);
      const num::Vec pu = opt::prox(u, lambda, pen);
      CHECK(num::norm2(pv - pu) <= num::norm2(v - u) + 1e-12);
    }
}

TEST_CASE("prox_l1: nonzero count non-increasing in lambda") {
  num::RngStream rng(19, 0);
  num::Vec v(10);
  for (double& x : v) x = 3.0 * rng.normal();
  std::size_t prev = v.size();
  for (double lambda = 0.0; lambda <= 4.0; lambda += 0.1) {
    std::size_t nz = 0;
    for (double x : opt::prox_l1(v, lambda))
      if (x != 0.0) ++nz;
    CHECK(nz <= prev);
    prev = nz;
  }
}

TEST_CASE("grda_step: SGD reduction is bit-exact") {
  opt::OptimizerState state = opt::make_state({1.0}, 0.1);
  opt::grda_step(state, {2.0}, opt::TuningSchedule::zero(), opt::Penalty::none());
  CHECK(state.v[0] == 1.0 - 0.1 * 2.0);
  CHECK(state.w[0] == state.v[0]);
  CHECK(state.n == 1);
}

TEST_CASE("grda_step: RDA worked example") {
  opt::OptimizerState state = opt::make_state({0.0}, 1.0);
  opt::grda_step(state, {-3.0}, opt::TuningSchedule::rda(1.0), opt::Penalty::l1());
  CHECK(state.v[0] == doctest::Approx(3.0));
  CHECK(state.w[0] == doctest::Approx(2.0));  // g(1, 1) = 1
}

TEST_CASE("grda_step: replay oracle over random steps") {
  num::RngStream rng(23, 0);
  const opt::TuningSchedule schedule = opt::TuningSchedule::power_law(0.8, 0.7, 0.0);
  opt::OptimizerState state = opt::make_state(num::Vec(4, 0.0), 0.05);
  for (int it = 0; it < 10; ++it) {
    num::Vec g(4);
    for (double& x : g) x = rng.normal();
    opt::grda_step(state, g, schedule, opt::Penalty::l1());
    const num::Vec replay =
        opt::prox_l1(state.v, schedule.value(state.n, state.gamma));
    for (std::size_t j = 0; j < 4; ++j) CHECK(state.w[j] == replay[j]);
  }
}

TEST_CASE("grda_step: non-finite gradient rejected with step index") {
  opt::OptimizerState state = opt::make_state(num::Vec(2, 0.0), 0.1);
  opt::grda_step(state, {1.0, 1.0}, opt::TuningSchedule::zero(), opt::Penalty::none());
  try {
    opt::grda_step(state, {std::nan(""), 0.0}, opt::TuningSchedule::zero(),
                   opt::Penalty::none());
    FAIL("expected GradientError");
  } catch (const opt::GradientError& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("AverageAccumulator: worked examples and batch oracle") {
  opt::AverageAccumulator acc;
  acc.push({1.0, 1.0});
  acc.push({3.0, 3.0});
  CHECK(acc.mean()[0] == doctest::Approx(2.0));
  CHECK(acc.mean()[1] == doctest::Approx(2.0));

  opt::AverageAccumulator acc2;
  num::RngStream rng(29, 0);
  num::Vec batch_sum(3, 0.0);
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    num::Vec w(3);
    for (double& x : w) x = rng.normal();
    acc2.push(w);
    batch_sum = batch_sum + w;
  }
  const num::Vec mean = acc2.mean();
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(std::abs(mean[j] - batch_sum[j] / n) <= 1e-12);
}
