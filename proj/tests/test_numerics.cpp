#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "grda/numerics/quad.hpp"
#include "grda/numerics/rk45.hpp"
#include "grda/numerics/rng.hpp"
#include "grda/numerics/sym_eig.hpp"

using namespace grda;

namespace {

num::Matrix random_symmetric(std::size_t d, num::RngStream& rng) {
  num::Matrix a(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.normal();
  return a;
}

}  // namespace

TEST_CASE("sym_eig: identity has unit eigenvalues") {
  const num::EigenPair eig = num::sym_eig(num::Matrix::identity(4));
  for (double v : eig.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sym_eig: [[2,1],[1,2]] has eigenvalues 1 and 3") {
  num::Matrix a(2, 2);
  a(0, 0) = a(1, 1) = 2;
  a(0, 1) = a(1, 0) = 1;
  const num::EigenPair eig = num::sym_eig(a);
  CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sym_eig: reconstruction, orthonormality, and sorting on random d=20") {
  num::RngStream rng(7, 0);
  const num::Matrix a = random_symmetric(20, rng);
  const num::EigenPair eig = num::sym_eig(a);

  const num::Matrix recon = num::eig_reconstruct(eig);
  CHECK((recon - a).frobenius_norm() <= 1e-9 * a.frobenius_norm());

  const num::Matrix gram = eig.vectors.transpose() * eig.vectors;
  CHECK((gram - num::Matrix::identity(20)).max_abs() <= 1e-10);

  for (std::size_t i = 1; i < eig.values.size(); ++i)
    CHECK(eig.values[i - 1] <= eig.values[i]);
}

TEST_CASE("sym_eig: rejects asymmetric input") {
  num::Matrix a(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS(num::sym_eig(a));
}

TEST_CASE("rk45: zero field stays constant") {
  const auto sol = num::rk45([](double, const num::Vec& y) { return num::Vec(y.size(), 0.0); },
                             {1.5, -2.0}, 0.0, 5.0);
  const num::Vec end = sol.eval(5.0);
  CHECK(end[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(end[1] == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("rk45: exponential decay hits e^-1 within 1e-8") {
  const auto sol = num::rk45([](double, const num::Vec& y) { return num::Vec{-y[0]}; },
                             {1.0}, 0.0, 1.0);
  CHECK(std::abs(sol.eval(1.0)[0] - std::exp(-1.0)) <= 1e-8);
}

TEST_CASE("rk45: global error tracks the tolerance over two decades") {
  const auto rhs = [](double, const num::Vec& y) { return num::Vec{-y[0]}; };
  double err_loose = 0, err_tight = 0;
  {
    const auto sol = num::rk45(rhs, {1.0}, 0.0, 4.0, 1e-5, 1e-8);
    err_loose = std::abs(sol.eval(4.0)[0] - std::exp(-4.0));
  }
  {
    const auto sol = num::rk45(rhs, {1.0}, 0.0, 4.0, 1e-9, 1e-12);
    err_tight = std::abs(sol.eval(4.0)[0] - std::exp(-4.0));
  }
  CHECK(err_loose <= 1e-4);
  CHECK(err_tight <= 1e-8);
  CHECK(err_tight < err_loose);
}

TEST_CASE("adaptive_quad: constant and exponential") {
  CHECK(num::adaptive_quad([](double) { return 1.0; }, 0, 1, 1e-10) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(num::adaptive_quad([](double s) { return std::exp(s); }, 0, 1, 1e-10) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
}

TEST_CASE("adaptive_quad: mu=1 bias integrand matches its antiderivative") {
  // int_{t0}^{t} e^{sigma_sq s} ds = (e^{sigma_sq t} - e^{sigma_sq t0}) / sigma_sq
  const double sigma_sq = 0.8, t0 = 0.5, t = 3.0;
  const double got =
      num::adaptive_quad([&](double s) { return std::exp(sigma_sq * s); }, t0, t, 1e-10);
  const double want = (std::exp(sigma_sq * t) - std::exp(sigma_sq * t0)) / sigma_sq;
  CHECK(got == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("rng: fixed vectors for (seed=42, id=7)") {
  // Frozen first outputs of the documented counter scheme; guards against
  // platform- or refactor-induced drift.
  num::RngStream rng(42, 7);
  const std::uint64_t expected[8] = {
      13331554568342822454ULL, 5806916680729155820ULL, 1937281899036591676ULL,
      12000602502570791121ULL, 8977606381610060190ULL, 1634270163594975263ULL,
      2299425234843603784ULL,  14276996243199806967ULL};
  for (std::uint64_t e : expected) CHECK(rng.next_u64() == e);
}

TEST_CASE("rng: identical (seed, id) reproduces sequences; splits are deterministic") {
  num::RngStream a(123, 5), b(123, 5);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  num::RngStream base(9, 1);
  num::RngStream c1 = num::rng_split(base, 3);
  num::RngStream c2 = num::rng_split(base, 3);
  for (int i = 0; i < 1000; ++i) CHECK(c1.next_u64() == c2.next_u64());
}

TEST_CASE("rng: distinct split labels decorrelate") {
  num::RngStream base(2024, 0);
  num::RngStream a = num::rng_split(base, 1);
  num::RngStream b = num::rng_split(base, 2);
  const int n = 10000;
  double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.normal(), y = b.normal();
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double vx = sxx / n - (sx / n) * (sx / n);
  const double vy = syy / n - (sy / n) * (sy / n);
  CHECK(std::abs(cov / std::sqrt(vx * vy)) <= 0.05);
}

TEST_CASE("rng: normal moments at 1e5 draws") {
  num::RngStream rng(77, 0);
  const int n = 100000;
  double s = 0, ss = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    ss += z * z;
  }
  CHECK(std::abs(s / n) <= 0.02);
  CHECK(ss / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("inverse_normal_cdf: round-trip against erfc") {
  for (double z = -5.0; z <= 5.0; z += 0.25) {
    const double p = 0.5 * std::erfc(-z / std::sqrt(2.0));
    CHECK(std::abs(num::inverse_normal_cdf(p) - z) <= 1e-9 * std::max(1.0, std::abs(z)));
  }
}
