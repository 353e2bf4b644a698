// Copyright 2026 The dcs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dcs/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dcs {

namespace {

Vector floored(const Vector& v) { return v.cwiseMax(kVarianceFloor); }

void check_shapes(const Vector& y, const Matrix& a, const Vector& x_hat, const Vector& sigma_d_sq) {
  if (y.size() != a.rows() || x_hat.size() != a.cols() || sigma_d_sq.size() != a.cols()) {
    throw std::invalid_argument("mmse_step: dimensions do not agree");
  }
}

}  // namespace

MmseStepResult mmse_step(const Vector& y, const Matrix& a, const Vector& x_hat,
                         const Vector& sigma_d_sq, double sigma_n_sq) {
  check_shapes(y, a, x_hat, sigma_d_sq);
  if (!(sigma_n_sq > 0.0)) throw std::invalid_argument("mmse_step: noise variance must be positive");
  const Vector d = floored(sigma_d_sq);
  const Eigen::Index K = a.rows();

  // G = A D A^T + sigma_n^2 I, lower triangle only.
  const Matrix scaled = a * d.cwiseSqrt().asDiagonal();
  Matrix g = Matrix::Identity(K, K) * sigma_n_sq;
  g.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
  Eigen::LLT<Matrix, Eigen::Lower> llt(g);
  if (llt.info() != Eigen::Success) throw NumericalError("mmse_step: covariance is not positive definite");

  // Column norms of R^-1 A give a_i^T G^-1 a_i.
  Matrix whitened = a;
  llt.matrixL().solveInPlace(whitened);
  const Vector quad = whitened.colwise().squaredNorm().transpose();

  const Vector residual = y - a * x_hat;
  const Vector back = a.transpose() * llt.solve(residual);

  MmseStepResult out;
  out.k_diag = d.cwiseProduct(quad);
  out.x_tilde.resize(a.cols());
  out.sigma_e_sq.resize(a.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const double k = out.k_diag(i);
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw NumericalError("mmse_step: non-positive cascade diagonal at element " + std::to_string(i));
    }
    // W * D * A^T G^-1 r with W_ii = 1 / (d_i quad_i).
    out.x_tilde(i) = x_hat(i) + back(i) / quad(i);
    out.sigma_e_sq(i) = std::max(d(i) * (1.0 - k) / k, kVarianceFloor);
  }
  return out;
}

Matrix full_error_covariance(const Matrix& a, const Vector& sigma_d_sq, double sigma_n_sq) {
  if (sigma_d_sq.size() != a.cols()) throw std::invalid_argument("full_error_covariance: dimensions do not agree");
  if (!(sigma_n_sq > 0.0)) throw std::invalid_argument("full_error_covariance: noise variance must be positive");
  const Eigen::Index K = a.rows();
  const Matrix phi = floored(sigma_d_sq).asDiagonal();
  const Matrix g_inv = (a * phi * a.transpose() + sigma_n_sq * Matrix::Identity(K, K)).inverse();
  const Matrix cascade = phi * a.transpose() * g_inv * a;
  const Matrix w = cascade.diagonal().cwiseInverse().asDiagonal();
  return phi + w * cascade * phi * w.transpose() - w * cascade * phi -
         phi.transpose() * cascade.transpose() * w.transpose();
}

SoftValue soft_feedback(double x_tilde, double sigma_e_sq, const SignalPrior& prior) {
  if (!(sigma_e_sq > 0.0)) throw std::invalid_argument("soft_feedback: variance must be positive");
  if (prior.sparsity() == 0) return {};
  // Both closed forms scaled by exp(-1/(2 sigma^2)):
  //   mean = (e^u - e^v) / (e^u + e^v + e^w)
  //   var  = (4 e^(u+v) + e^w (e^u + e^v)) / (e^u + e^v + e^w)^2
  // u = (2x - 1)/(2 sigma^2), v = (-2x - 1)/(2 sigma^2), w = log(2 (L-s)/s).
  const double inv2 = 0.5 / sigma_e_sq;
  const double u = (2.0 * x_tilde - 1.0) * inv2;
  const double v = (-2.0 * x_tilde - 1.0) * inv2;
  const double w = prior.sparsity() == prior.length()
                       ? -std::numeric_limits<double>::infinity()
                       : std::log(2.0 * prior.zero_odds());
  const double m = std::max({u, v, w});
  const double p = std::exp(u - m);
  const double q = std::exp(v - m);
  const double z = std::exp(w - m);
  const double den = p + q + z;

  // p - q without cancellation for small |x|.
  double diff;
  const double a = x_tilde / sigma_e_sq;
  if (std::abs(a) < 1.0) {
    diff = 2.0 * std::sinh(a) * std::exp(-inv2 - m);
  } else {
    diff = p - q;
  }
  SoftValue out;
  out.mean = diff / den;
  out.variance = (4.0 * std::exp(u + v - 2.0 * m) + z * (p + q)) / (den * den);
  return out;
}

SoftVector soft_feedback(const Vector& x_tilde, const Vector& sigma_e_sq, const SignalPrior& prior) {
  if (x_tilde.size() != sigma_e_sq.size()) throw std::invalid_argument("soft_feedback: size mismatch");
  SoftVector out{Vector(x_tilde.size()), Vector(x_tilde.size())};
  for (Eigen::Index i = 0; i < x_tilde.size(); ++i) {
    const SoftValue sv = soft_feedback(x_tilde(i), sigma_e_sq(i), prior);
    out.mean(i) = sv.mean;
    out.variance(i) = sv.variance;
  }
  return out;
}

SoftVector soft_feedback(const Vector& x_tilde, double sigma_e_sq, const SignalPrior& prior) {
  return soft_feedback(x_tilde, Vector::Constant(x_tilde.size(), sigma_e_sq), prior);
}

ExtrinsicResult extrinsic_combine(const Vector& x_post, double sigma_post_sq, const Vector& x_pri,
                                  double sigma_pri_sq) {
  if (!(sigma_post_sq > 0.0) || !(sigma_pri_sq > 0.0)) {
    throw std::invalid_argument("extrinsic_combine: variances must be positive");
  }
  if (x_post.size() != x_pri.size()) throw std::invalid_argument("extrinsic_combine: size mismatch");
  const double gain = 1.0 / sigma_post_sq - 1.0 / sigma_pri_sq;
  if (!(gain > kExtrinsicGainFloor)) {
    return {x_post, kExtrinsicClampVariance, true};
  }
  const double var = 1.0 / gain;
  return {var * (x_post / sigma_post_sq - x_pri / sigma_pri_sq), var, false};
}

Vector threshold_hard(const Vector& v, int s) {
  Vector out = Vector::Zero(v.size());
  for (int i : largest_magnitude_indices(v, s)) out(i) = v(i);
  return out;
}

Vector threshold_soft(const Vector& v, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("threshold_soft: tau must be non-negative");
  return v.unaryExpr([tau](double e) {
    const double mag = std::abs(e) - tau;
    return mag > 0.0 ? std::copysign(mag, e) : 0.0;
  });
}

}  // namespace dcs
