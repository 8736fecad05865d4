#include "grda/numerics/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace grda::num {

namespace {

struct SimpsonCell {
  double fa, fm, fb;
  double estimate;
};

SimpsonCell simpson(const std::function<double(double)>& f, double a, double b, double fa,
                    double fb) {
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  return {fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb)};
}

double recurse(const std::function<double(double)>& f, double a, double b,
               const SimpsonCell& whole, double tol, int depth) {
  if (depth > 60) throw std::runtime_error("adaptive_quad: recursion depth exhausted");
  const double m = 0.5 * (a + b);
  const SimpsonCell left = simpson(f, a, m, whole.fa, whole.fm);
  const SimpsonCell right = simpson(f, m, b, whole.fm, whole.fb);
  const double delta = left.estimate + right.estimate - whole.estimate;
  if (std::abs(delta) <= 15.0 * tol)
    return left.estimate + right.estimate + delta / 15.0;
  return recurse(f, a, m, left, 0.5 * tol, depth + 1) +
         recurse(f, m, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double rel_tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const SimpsonCell whole = simpson(f, a, b, fa, fb);
  const double tol = rel_tol * std::abs(whole.estimate) + 1e-14;
  return recurse(f, a, b, whole, tol, 0);
}

}  // namespace grda::num
