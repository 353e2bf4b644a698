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

#include <optional>
#include <string>
#include <vector>

#include "dcs/common.hpp"
#include "dcs/measurement.hpp"
#include "dcs/signal_model.hpp"

namespace dcs {

/// Which error variances an IMS run replaces with the true squared errors.
enum class GenieMode { kNone, kTrueEe, kTrueDd, kBoth };

enum class FinalQuantizer { kElementwise, kSparsityMatched };

/// Variance update of the TSR linear step. kPrinted uses (c^2 v)^2 in the
/// numerator; kZDomain divides that term by c^2, which is what a direct
/// conversion of the z-domain update gives. They agree when c^2 = 1.
enum class TsrVarianceRule { kPrinted, kZDomain };

struct RecoveryConfig {
  int max_iters = 50;
  /// TSR stops once its prior variance drops below this.
  double stop_eps = 2.22e-16;
  GenieMode genie_mode = GenieMode::kNone;
  /// Unset: elementwise for IMS/IHT, sparsity-matched for TSR/IST.
  std::optional<FinalQuantizer> final_quantizer;
  std::optional<double> ist_tau;
  /// Unset: s iterations.
  std::optional<int> omp_iters;
  /// IMS stops early when max |x_hat(t) - x_hat(t-1)| falls below this; 0 disables.
  double early_exit_tol = 1e-9;
  TsrVarianceRule tsr_variance_rule = TsrVarianceRule::kPrinted;
  bool record_trace = false;

  /// Throws std::invalid_argument on max_iters < 1, stop_eps <= 0, etc.
  void validate() const;
};

/// One iteration of IMS or TSR.
///
/// IMS: prior = (x_hat, sigma_d^2) entering the MMSE step, linear = (x_tilde,
/// sigma_e^2), soft = new (x_hat, sigma_d^2).
/// TSR: prior = (x_A_pri, v_A_pri), linear = (x_A_post, v_A_post),
/// soft = (x_B_post, v_B_post); scalar variances are stored as length-1 vectors.
struct IterationRecord {
  Vector prior_mean;
  Vector prior_variance;
  Vector linear_mean;
  Vector linear_variance;
  Vector soft_mean;
  Vector soft_variance;
};

struct RecoveryResult {
  Vector x_hat;    ///< entries in {-1, 0, +1}
  Vector x_soft;   ///< estimate before the final quantization
  int iters_run = 0;
  bool diverged = false;    ///< numerical breakdown (IMS) or repeated no-gain extrinsics (TSR)
  bool early_stop = false;  ///< OMP stopped on a rank-deficient support
  std::vector<IterationRecord> trace;
  std::vector<std::string> warnings;
};

/// Iterative MMSE estimation with soft feedback, followed by quantization.
/// sigma_n_sq == 0 is replaced by 1e-12 (with a warning).
RecoveryResult ims_q(const Vector& y, const MeasurementEnsemble& ensemble, double sigma_n_sq,
                     const SignalPrior& prior, const RecoveryConfig& config = {});

/// IMS with the estimated error variances replaced by the instantaneous true
/// squared errors per `config.genie_mode`. Simulation only.
RecoveryResult ims_q_genie(const Vector& y, const MeasurementEnsemble& ensemble, double sigma_n_sq,
                           const SignalPrior& prior, const RecoveryConfig& config,
                           const Vector& x_true);

/// Turbo signal recovery on the x domain. Requires the U * C factorization.
RecoveryResult tsr_q(const Vector& y, const MeasurementEnsemble& ensemble, double sigma_n_sq,
                     const SignalPrior& prior, const RecoveryConfig& config = {});

/// One TSR linear step: x_pri + g * C^-1 U^T (y - A x_pri) with
/// g = c^2 v / (c^2 v + sigma_n^2).
Vector tsr_linear_step(const Vector& y, const MeasurementEnsemble& ensemble, const Vector& x_pri,
                       double v_pri, double sigma_n_sq);
double tsr_variance_step(double v_pri, double sigma_n_sq, int K, int L, double c_bar_sq,
                         TsrVarianceRule rule);

RecoveryResult iht_q(const Vector& y, const Matrix& a, const SignalPrior& prior,
                     const RecoveryConfig& config = {});
/// Requires config.ist_tau.
RecoveryResult ist_q(const Vector& y, const Matrix& a, const SignalPrior& prior,
                     const RecoveryConfig& config);
RecoveryResult omp_q(const Vector& y, const Matrix& a, const SignalPrior& prior,
                     const RecoveryConfig& config = {});

inline constexpr double kDefaultMlBudget = 1e6;

/// Number of s-sparse +-1 vectors of length L, as a double.
double ml_candidate_count(int L, int s);

/// Exhaustive minimizer of |y - A x|^2 over s-sparse x in {-1,0,1}^L. Supports
/// are visited in lexicographic order, signs with -1 before +1, and the first
/// minimizer wins. Throws std::invalid_argument above `budget` candidates.
Vector ml_oracle(const Vector& y, const Matrix& a, const SignalPrior& prior,
                 double budget = kDefaultMlBudget);

}  // namespace dcs
