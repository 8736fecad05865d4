#include "grda/sde/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "grda/numerics/sym_eig.hpp"

namespace grda::sde {

namespace {

void symmetrize(num::Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
}

}  // namespace

KernelSpec KernelSpec::lr_exact(const models::LinearModel& model) {
  return {Variant::LrExact, &model, {}};
}

KernelSpec KernelSpec::empirical(const models::LinearModel& model, std::size_t m,
                                 num::RngStream& rng) {
  KernelSpec spec{Variant::Empirical, &model, {}};
  spec.samples.reserve(m);
  for (std::size_t i = 0; i < m; ++i) spec.samples.push_back(models::sample_lr(model, rng));
  return spec;
}

num::Matrix sigma_lr(const num::Vec& w, const KernelSpec& spec) {
  const models::LinearModel& model = *spec.model;
  const std::size_t d = model.dim();
  if (w.size() != d) throw std::invalid_argument("sigma_lr: dimension mismatch");

  num::Matrix sigma(d, d);
  if (spec.variant == KernelSpec::Variant::LrExact) {
    // Gaussian design: E[(XX^T - H) a a^T (XX^T - H)] = H a a^T H + (a^T H a) H.
    const num::Vec a = w - model.w_star();
    const num::Vec ha = num::matvec(model.H(), a);
    sigma = num::outer(ha, ha);
    num::Matrix scaled_h = model.H();
    scaled_h *= num::dot(a, ha) + model.sigma_eps() * model.sigma_eps();
    sigma += scaled_h;
  } else {
    if (spec.samples.empty()) throw std::invalid_argument("sigma_lr: empty sample set");
    const double m = static_cast<double>(spec.samples.size());
    num::Vec mean(d, 0.0);
    std::vector<num::Vec> grads;
    grads.reserve(spec.samples.size());
    for (const auto& s : spec.samples) {
      grads.push_back(models::lsq_gradient(w, s.x, s.y));
      num::axpy(mean, 1.0 / m, grads.back());
    }
    for (const auto& g : grads) {
      const num::Vec c = g - mean;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) sigma(i, j) += c[i] * c[j] / m;
    }
  }
  symmetrize(sigma);
  return sigma;
}

PcaKernelSpec PcaKernelSpec::draw(const models::SpcaModel& model, std::size_t m,
                                  num::RngStream& rng) {
  PcaKernelSpec spec{&model, {}};
  spec.samples.reserve(m);
  for (std::size_t i = 0; i < m; ++i) spec.samples.push_back(models::sample_pca(model, rng));
  return spec;
}

num::Matrix sigma_pca(const num::Matrix& U, const PcaKernelSpec& spec) {
  const models::SpcaModel& model = *spec.model;
  const std::size_t d = model.dim();
  const std::size_t k = model.k();
  if (U.rows() != d || U.cols() != k) throw std::invalid_argument("sigma_pca: shape mismatch");
  if (spec.samples.empty()) throw std::invalid_argument("sigma_pca: empty sample set");

  std::vector<num::Vec> cu(k);
  for (std::size_t j = 0; j < k; ++j) cu[j] = num::matvec(model.C(), U.col(j));

  // E[y_j y_l^T] with y_j = (x x^T - C) U_j = (x^T U_j) x - C U_j.
  const double m = static_cast<double>(spec.samples.size());
  std::vector<std::vector<num::Matrix>> inner(k);
  for (std::size_t j = 0; j < k; ++j) inner[j].assign(j + 1, num::Matrix(d, d));
  std::vector<num::Vec> y(k);
  for (const auto& x : spec.samples) {
    for (std::size_t j = 0; j < k; ++j) {
      y[j] = x * num::dot(x, U.col(j));
      num::axpy(y[j], -1.0, cu[j]);
    }
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l <= j; ++l) {
        num::Matrix& acc = inner[j][l];
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t c = 0; c < d; ++c) acc(r, c) += y[j][r] * y[l][c] / m;
      }
  }

  num::Matrix sigma(d * k, d * k);
  for (std::size_t j = 0; j < k; ++j) {
    const num::Matrix a_j = models::deflation_matrix(U, j + 1);
    for (std::size_t l = 0; l <= j; ++l) {
      const num::Matrix a_l = models::deflation_matrix(U, l + 1);
      const num::Matrix block = a_j * inner[j][l] * a_l;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
          sigma(j * d + r, l * d + c) = block(r, c);
          sigma(l * d + c, j * d + r) = block(r, c);
        }
    }
  }
  symmetrize(sigma);
  return sigma;
}

num::Matrix grad_G(const models::LinearModel& model) { return model.H(); }

num::Matrix grad_G(const models::SpcaModel& model, const num::Matrix& U) {
  const std::size_t d = model.dim();
  const std::size_t k = model.k();
  if (U.rows() != d || U.cols() != k) throw std::invalid_argument("grad_G: shape mismatch");
  const num::Matrix& C = model.C();

  std::vector<num::Vec> cu(k);
  for (std::size_t j = 0; j < k; ++j) cu[j] = num::matvec(C, U.col(j));

  num::Matrix jac(d * k, d * k);
  for (std::size_t j = 0; j < k; ++j) {
    // Diagonal block: -C + I (U_j^T C U_j) + 2 sum_{i<=j} U_i U_i^T C.
    const double quad = num::dot(U.col(j), cu[j]);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        double v = -C(r, c) + (r == c ? quad : 0.0);
        for (std::size_t i = 0; i <= j; ++i) v += 2.0 * U(r, i) * cu[i][c];
        jac(j * d + r, j * d + c) = v;
      }
    // Sub-diagonal blocks (l < j): 2 (I (U_l^T C U_j) + U_l U_j^T C).
    for (std::size_t l = 0; l < j; ++l) {
      const double cross = num::dot(U.col(l), cu[j]);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
          jac(j * d + r, l * d + c) =
              2.0 * ((r == c ? cross : 0.0) + U(r, l) * cu[j][c]);
    }
  }
  return jac;
}

num::Matrix matrix_sqrt(const num::Matrix& S) {
  if (S.rows() != S.cols()) throw std::invalid_argument("matrix_sqrt: square input required");
  const double scale = std::max(1.0, S.max_abs());
  for (std::size_t i = 0; i < S.rows(); ++i)
    for (std::size_t j = i + 1; j < S.cols(); ++j)
      if (std::abs(S(i, j) - S(j, i)) > 1e-10 * scale)
        throw std::invalid_argument("matrix_sqrt: asymmetric input");

  const num::EigenPair eig = num::sym_eig(S);
  const double lam_max = std::max(0.0, eig.values.back());
  num::Vec roots(eig.values.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    double lam = eig.values[i];
    if (lam < -1e-8 * std::max(1.0, lam_max))
      throw std::runtime_error("matrix_sqrt: input is not positive semi-definite");
    if (lam < 1e-12 * lam_max) lam = 0.0;
    roots[i] = std::sqrt(std::max(lam, 0.0));
  }
  num::Matrix scaled = eig.vectors;
  for (std::size_t j = 0; j < scaled.cols(); ++j)
    for (std::size_t i = 0; i < scaled.rows(); ++i) scaled(i, j) *= roots[j];
  return scaled * eig.vectors.transpose();
}

}  // namespace grda::sde
