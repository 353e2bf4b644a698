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

#include "dcs/algorithms.hpp"

#include <cmath>

#include "dcs/estimators.hpp"

namespace dcs {

void RecoveryConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(stop_eps > 0.0)) throw std::invalid_argument("stop_eps must be positive");
  if (ist_tau && !(*ist_tau >= 0.0)) throw std::invalid_argument("ist_tau must be non-negative");
  if (omp_iters && *omp_iters < 0) throw std::invalid_argument("omp_iters must be non-negative");
  if (!(early_exit_tol >= 0.0)) throw std::invalid_argument("early_exit_tol must be non-negative");
}

namespace {

constexpr double kNoiselessSubstitute = 1e-12;

Vector finish(const Vector& soft, const SignalPrior& prior, FinalQuantizer quantizer) {
  return quantizer == FinalQuantizer::kSparsityMatched
             ? quantize_sparsity_matched(soft, prior.sparsity())
             : quantize_elementwise(soft, prior.alphabet());
}

Vector scalar(double v) { return Vector::Constant(1, v); }

double checked_noise(double sigma_n_sq, RecoveryResult& result) {
  if (!(sigma_n_sq >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
  if (sigma_n_sq == 0.0) {
    result.warnings.emplace_back("noise variance 0 replaced by 1e-12");
    return kNoiselessSubstitute;
  }
  return sigma_n_sq;
}

void check_problem(const Vector& y, const Matrix& a, const SignalPrior& prior) {
  if (y.size() != a.rows() || a.cols() != prior.length()) {
    throw std::invalid_argument("measurement, matrix and prior dimensions do not agree");
  }
}

RecoveryResult run_ims(const Vector& y, const MeasurementEnsemble& ensemble, double sigma_n_sq,
                       const SignalPrior& prior, const RecoveryConfig& config, const Vector* x_true) {
  config.validate();
  const Matrix& a = ensemble.a();
  check_problem(y, a, prior);
  const GenieMode genie = x_true ? config.genie_mode : GenieMode::kNone;
  const bool true_ee = genie == GenieMode::kTrueEe || genie == GenieMode::kBoth;
  const bool true_dd = genie == GenieMode::kTrueDd || genie == GenieMode::kBoth;

  RecoveryResult result;
  const double noise = checked_noise(sigma_n_sq, result);
  const Eigen::Index L = prior.length();
  Vector x_hat = Vector::Zero(L);
  Vector sigma_d = Vector::Constant(L, std::max(prior.variance(), kVarianceFloor));

  if (prior.sparsity() > 0) {
    for (int t = 0; t < config.max_iters; ++t) {
      MmseStepResult lin;
      try {
        lin = mmse_step(y, a, x_hat, sigma_d, noise);
      } catch (const NumericalError& e) {
        result.diverged = true;
        result.warnings.emplace_back(e.what());
        break;
      }
      if (true_ee) {
        lin.sigma_e_sq = (lin.x_tilde - *x_true).cwiseAbs2().cwiseMax(kVarianceFloor);
      }
      SoftVector soft = soft_feedback(lin.x_tilde, lin.sigma_e_sq, prior);
      if (true_dd) {
        soft.variance = (soft.mean - *x_true).cwiseAbs2();
      }
      soft.variance = soft.variance.cwiseMax(kVarianceFloor);

      const double change = (soft.mean - x_hat).cwiseAbs().maxCoeff();
      if (config.record_trace) {
        result.trace.push_back({x_hat, sigma_d, lin.x_tilde, lin.sigma_e_sq, soft.mean, soft.variance});
      }
      x_hat = std::move(soft.mean);
      sigma_d = std::move(soft.variance);
      result.iters_run = t + 1;
      if (config.early_exit_tol > 0.0 && change < config.early_exit_tol) break;
    }
  }
  result.x_soft = x_hat;
  result.x_hat = finish(x_hat, prior, config.final_quantizer.value_or(FinalQuantizer::kElementwise));
  return result;
}

}  // namespace

RecoveryResult ims_q(const Vector& y, const MeasurementEnsemble& ensemble, double sigma_n_sq,
                     const SignalPrior& prior, const RecoveryConfig& config) {
  return run_ims(y, ensemble, sigma_n_sq, prior, config, nullptr);
}

RecoveryResult ims_q_genie(const Vector& y, const MeasurementEnsemble& ensemble, double sigma_n_sq,
                           const SignalPrior& prior, const RecoveryConfig& config,
                           const Vector& x_true) {
  if (x_true.size() != prior.length()) throw std::invalid_argument("true signal has the wrong length");
  return run_ims(y, ensemble, sigma_n_sq, prior, config, &x_true);
}

Vector tsr_linear_step(const Vector& y, const MeasurementEnsemble& ensemble, const Vector& x_pri,
                       double v_pri, double sigma_n_sq) {
  const double cv = ensemble.c_bar_sq() * v_pri;
  const double gain = cv / (cv + sigma_n_sq);
  const Vector back = ensemble.u().transpose() * (y - ensemble.a() * x_pri);
  return x_pri + gain * back.cwiseQuotient(ensemble.c());
}

double tsr_variance_step(double v_pri, double sigma_n_sq, int K, int L, double c_bar_sq,
                         TsrVarianceRule rule) {
  const double cv = c_bar_sq * v_pri;
  double drop = static_cast<double>(K) / L * cv * cv / (cv + sigma_n_sq);
  if (rule == TsrVarianceRule::kZDomain) drop /= c_bar_sq;
  return v_pri - drop;
}

RecoveryResult tsr_q(const Vector& y, const MeasurementEnsemble& ensemble, double sigma_n_sq,
                     const SignalPrior& prior, const RecoveryConfig& config) {
  config.validate();
  if (!ensemble.has_factorization()) {
    throw std::invalid_argument("tsr_q needs an ensemble with a U * C factorization");
  }
  check_problem(y, ensemble.a(), prior);
  RecoveryResult result;
  const double noise = checked_noise(sigma_n_sq, result);
  const int K = ensemble.rows();
  const int L = ensemble.cols();
  const double c_bar_sq = ensemble.c_bar_sq();

  Vector x_pri = Vector::Zero(L);
  double v_pri = prior.variance();
  Vector estimate = Vector::Zero(L);
  int consecutive_clamps = 0;
  auto note_clamp = [&](bool clamped) {
    consecutive_clamps = clamped ? consecutive_clamps + 1 : 0;
    return consecutive_clamps >= 2;
  };

  if (prior.sparsity() > 0) {
    for (int t = 0; t < config.max_iters && v_pri >= config.stop_eps; ++t) {
      const Vector x_post = tsr_linear_step(y, ensemble, x_pri, v_pri, noise);
      double v_post = tsr_variance_step(v_pri, noise, K, L, c_bar_sq, config.tsr_variance_rule);
      // A non-positive posterior variance carries no usable information.
      const bool bad_post = !(v_post > 0.0);
      if (bad_post) v_post = v_pri;
      ExtrinsicResult to_soft = extrinsic_combine(x_post, v_post, x_pri, v_pri);
      if (note_clamp(to_soft.no_gain || bad_post)) {
        result.diverged = true;
        break;
      }

      const SoftVector soft = soft_feedback(to_soft.mean, to_soft.variance, prior);
      const double v_soft = std::max(soft.variance.mean(), kVarianceFloor);
      ExtrinsicResult to_linear = extrinsic_combine(soft.mean, v_soft, to_soft.mean, to_soft.variance);
      if (config.record_trace) {
        result.trace.push_back({x_pri, scalar(v_pri), x_post, scalar(v_post), soft.mean, scalar(v_soft)});
      }
      result.iters_run = t + 1;
      if (note_clamp(to_linear.no_gain)) {
        // Keep the last soft estimate produced from a valid linear extrinsic.
        estimate = soft.mean;
        result.diverged = true;
        break;
      }
      estimate = soft.mean;
      x_pri = std::move(to_linear.mean);
      v_pri = to_linear.variance;
    }
  }
  result.x_soft = estimate;
  result.x_hat = finish(estimate, prior, config.final_quantizer.value_or(FinalQuantizer::kSparsityMatched));
  return result;
}

}  // namespace dcs
