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
#pragma once

#include "dcs/common.hpp"
#include "dcs/signal_model.hpp"

namespace dcs {

/// Output of one unbiased linear MMSE step.
struct MmseStepResult {
  Vector x_tilde;     ///< unbiased estimate, x_tilde = x + e
  Vector sigma_e_sq;  ///< per-element error variance of x_tilde
  Vector k_diag;      ///< diagonal of the cascade B * A (before unbiasing)
};

/// Unbiased linear MMSE re-estimate of x from y = A x + n given a prior mean
/// `x_hat` with independent per-element error variances `sigma_d_sq`.
///
/// The K x K system (A D A^T + sigma_n^2 I) is factored once with a Cholesky
/// decomposition. With R the Cholesky factor, K_ii = d_i * |R^-1 a_i|^2 and the
/// unbiased update is x_hat_i + (A^T G^-1 (y - A x_hat))_i / |R^-1 a_i|^2.
/// Variances below kVarianceFloor are raised to it before use.
///
/// Throws std::invalid_argument for sigma_n_sq <= 0 or mismatched sizes and
/// NumericalError when the factorization fails or some K_ii <= 0. Rounding
/// can push K_ii marginally above 1 for tiny noise; sigma_e_sq is floored.
MmseStepResult mmse_step(const Vector& y, const Matrix& a, const Vector& x_hat,
                         const Vector& sigma_d_sq, double sigma_n_sq);

/// Full error covariance of the unbiased estimate, evaluated term by term with
/// an explicit inverse. Verification only; O(L^2 K).
Matrix full_error_covariance(const Matrix& a, const Vector& sigma_d_sq, double sigma_n_sq);

struct SoftValue {
  double mean = 0.0;      ///< E{x | x_tilde}
  double variance = 0.0;  ///< Var{x | x_tilde}
};

/// Posterior mean and variance of a ternary sparse symbol observed in Gaussian
/// noise of variance `sigma_e_sq`. Evaluated with shifted exponents so
/// neither overflows for tiny variances. s == 0 yields {0, 0}.
SoftValue soft_feedback(double x_tilde, double sigma_e_sq, const SignalPrior& prior);

struct SoftVector {
  Vector mean;
  Vector variance;
};

SoftVector soft_feedback(const Vector& x_tilde, const Vector& sigma_e_sq, const SignalPrior& prior);
/// Single shared variance for all elements.
SoftVector soft_feedback(const Vector& x_tilde, double sigma_e_sq, const SignalPrior& prior);

struct ExtrinsicResult {
  Vector mean;
  double variance = 0.0;
  bool no_gain = false;  ///< posterior carried no new information, result clamped
};

inline constexpr double kExtrinsicGainFloor = 1e-12;
inline constexpr double kExtrinsicClampVariance = 1e12;

/// Gaussian extrinsic: removes the prior (mean, variance) from the posterior.
/// If 1/post - 1/pri <= kExtrinsicGainFloor the result is clamped to
/// (x_post, kExtrinsicClampVariance) and flagged.
ExtrinsicResult extrinsic_combine(const Vector& x_post, double sigma_post_sq, const Vector& x_pri,
                                  double sigma_pri_sq);

/// Keeps the s largest-magnitude entries (ties: lower index), zeroes the rest.
Vector threshold_hard(const Vector& v, int s);
/// sign(v_i) * max(|v_i| - tau, 0).
Vector threshold_soft(const Vector& v, double tau);

}  // namespace dcs
