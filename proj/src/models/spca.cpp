#include "grda/models/spca.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "grda/numerics/sym_eig.hpp"
#include "grda/optimizer/prox.hpp"

namespace grda::models {

SpcaModel::SpcaModel(num::Matrix C, num::Matrix U_star, num::Vec eigvals)
    : C_(std::move(C)), U_star_(std::move(U_star)), eigvals_(std::move(eigvals)) {
  const std::size_t d = C_.rows();
  const std::size_t k = U_star_.cols();
  if (C_.cols() != d || U_star_.rows() != d || eigvals_.size() != k || k == 0 || k > d)
    throw std::invalid_argument("SpcaModel: dimension mismatch");

  for (std::size_t a = 0; a < k; ++a) {
    if (!(eigvals_[a] > 0)) throw std::invalid_argument("SpcaModel: eigvals must be positive");
    for (std::size_t b = 0; b <= a; ++b) {
      const double g = num::dot(U_star_.col(a), U_star_.col(b));
      const double want = a == b ? 1.0 : 0.0;
      if (std::abs(g - want) > 1e-10)
        throw std::invalid_argument("SpcaModel: U_star columns must be orthonormal");
    }
  }

  const num::EigenPair eig = num::sym_eig(C_);  // ascending
  if (eig.values.front() < -1e-10 * C_.max_abs())
    throw std::invalid_argument("SpcaModel: C must be positive semi-definite");
  // The k declared eigenvalues must be the largest of C, each simple.
  for (std::size_t a = 0; a < k; ++a) {
    const double lam = eig.values[d - 1 - a];
    if (std::abs(lam - eigvals_[a]) > 1e-8 * (1.0 + std::abs(lam)))
      throw std::invalid_argument("SpcaModel: eigvals must be the top eigenvalues of C");
    if (d - 1 - a > 0) {
      const double next = eig.values[d - 2 - a];
      if (!(lam - next > 1e-10))
        throw std::invalid_argument("SpcaModel: top eigenvalues must have unit multiplicity");
    }
  }

  factor_ = eig.vectors;
  for (std::size_t j = 0; j < d; ++j) {
    const double s = std::sqrt(std::max(eig.values[j], 0.0));
    for (std::size_t i = 0; i < d; ++i) factor_(i, j) *= s;
  }
}

num::Vec sample_pca(const SpcaModel& model, num::RngStream& rng) {
  num::Vec z(model.dim());
  for (double& zi : z) zi = rng.normal();
  return num::matvec(model.factor(), z);
}

num::Matrix deflation_matrix(const num::Matrix& U, std::size_t j) {
  if (j < 1 || j > U.cols())
    throw std::invalid_argument("deflation_matrix: j must lie in 1..k");
  num::Matrix A = num::Matrix::identity(U.rows());
  for (std::size_t i = 1; i <= j; ++i) {
    const num::Vec u = U.col(i - 1);
    const double weight = i == j ? 1.0 : 2.0;
    for (std::size_t r = 0; r < A.rows(); ++r)
      for (std::size_t c = 0; c < A.cols(); ++c) A(r, c) -= weight * u[r] * u[c];
  }
  return A;
}

PcaState make_pca_state(const num::Matrix& U0, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("make_pca_state: gamma must be positive");
  return PcaState{U0, U0, 0, gamma};
}

void ospca_step(PcaState& state, const num::Vec& x, const opt::TuningSchedule& schedule) {
  const std::size_t d = state.U.rows();
  const std::size_t k = state.U.cols();
  if (x.size() != d) throw std::invalid_argument("ospca_step: sample dimension mismatch");
  if (!num::all_finite(x)) throw std::invalid_argument("ospca_step: non-finite sample");

  // p_j = U_j^T x from the current primal; then
  // A_j x x^T U_j = p_j (x - p_j U_j - 2 sum_{i<j} p_i U_i), O(d k) per column.
  num::Vec p(k);
  for (std::size_t j = 0; j < k; ++j) p[j] = num::dot(state.U.col(j), x);

  const double gamma = state.gamma;
  for (std::size_t j = 0; j < k; ++j) {
    num::Vec dir = x;
    num::axpy(dir, -p[j], state.U.col(j));
    for (std::size_t i = 0; i < j; ++i) num::axpy(dir, -2.0 * p[i], state.U.col(i));
    num::Vec col = state.U_tilde.col(j);
    num::axpy(col, gamma * p[j], dir);
    state.U_tilde.set_col(j, col);
  }
  ++state.n;
  const double g = schedule.value(state.n, gamma);
  for (std::size_t j = 0; j < k; ++j)
    state.U.set_col(j, opt::prox_l1(state.U_tilde.col(j), g));
}

}  // namespace grda::models
