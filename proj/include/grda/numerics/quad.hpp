#pragma once

#include <functional>

namespace grda::num {

/// Adaptive Simpson integration of f on [a, b] to an error estimate of
/// rel_tol * |result| + 1e-14. Throws on recursion-depth exhaustion.
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-8);

}  // namespace grda::num
