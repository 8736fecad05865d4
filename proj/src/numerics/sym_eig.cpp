#include "grda/numerics/sym_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace grda::num {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenPair sym_eig(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("sym_eig: matrix not square");

  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
  if (asym > 1e-10 * std::max(a.max_abs(), 1e-300))
    throw std::invalid_argument("sym_eig: matrix is not symmetric");

  Matrix m = a;
  // Work on the symmetrized copy so roundoff asymmetry cannot leak in.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }

  Matrix p = Matrix::identity(n);
  const double target = 1e-12 * std::max(m.frobenius_norm(), 1e-300);

  bool converged = n <= 1;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double apq = m(i, j);
        if (std::abs(apq) == 0.0) continue;
        const double app = m(i, i);
        const double aqq = m(j, j);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double mki = m(k, i);
          const double mkj = m(k, j);
          m(k, i) = c * mki - s * mkj;
          m(k, j) = s * mki + c * mkj;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mik = m(i, k);
          const double mjk = m(j, k);
          m(i, k) = c * mik - s * mjk;
          m(j, k) = s * mik + c * mjk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double pki = p(k, i);
          const double pkj = p(k, j);
          p(k, i) = c * pki - s * pkj;
          p(k, j) = s * pki + c * pkj;
        }
      }
    }
    converged = off_diagonal_norm(m) <= target;
  }
  if (!converged) throw std::runtime_error("sym_eig: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&m](std::size_t x, std::size_t y) { return m(x, x) < m(y, y); });

  EigenPair out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = m(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = p(i, order[j]);
  }
  return out;
}

Matrix eig_reconstruct(const EigenPair& e) {
  const std::size_t n = e.values.size();
  Matrix scaled = e.vectors;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= e.values[j];
  return scaled * e.vectors.transpose();
}

}  // namespace grda::num
