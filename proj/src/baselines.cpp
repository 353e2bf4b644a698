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

// Thresholding, greedy and exhaustive baselines.

#include <cmath>
#include <limits>
#include <numeric>

#include "dcs/algorithms.hpp"
#include "dcs/estimators.hpp"

namespace dcs {

namespace {

void check_problem(const Vector& y, const Matrix& a, const SignalPrior& prior) {
  if (y.size() != a.rows() || a.cols() != prior.length()) {
    throw std::invalid_argument("measurement, matrix and prior dimensions do not agree");
  }
}

Vector finish(const Vector& soft, const SignalPrior& prior, FinalQuantizer quantizer) {
  return quantizer == FinalQuantizer::kSparsityMatched
             ? quantize_sparsity_matched(soft, prior.sparsity())
             : quantize_elementwise(soft, prior.alphabet());
}

template <typename Shrink>
RecoveryResult run_thresholding(const Vector& y, const Matrix& a, const SignalPrior& prior,
                                const RecoveryConfig& config, FinalQuantizer default_quantizer,
                                Shrink shrink) {
  config.validate();
  check_problem(y, a, prior);
  RecoveryResult result;
  Vector x = Vector::Zero(a.cols());
  for (int t = 0; t < config.max_iters; ++t) {
    Vector next = shrink(x + a.transpose() * (y - a * x));
    if (config.record_trace) {
      result.trace.push_back({x, {}, next, {}, next, {}});
    }
    result.iters_run = t + 1;
    const bool fixed_point = next == x;
    x = std::move(next);
    if (fixed_point) break;
  }
  result.x_soft = x;
  result.x_hat = finish(x, prior, config.final_quantizer.value_or(default_quantizer));
  return result;
}

}  // namespace

RecoveryResult iht_q(const Vector& y, const Matrix& a, const SignalPrior& prior,
                     const RecoveryConfig& config) {
  const int s = prior.sparsity();
  return run_thresholding(y, a, prior, config, FinalQuantizer::kElementwise,
                          [s](const Vector& v) { return threshold_hard(v, s); });
}

RecoveryResult ist_q(const Vector& y, const Matrix& a, const SignalPrior& prior,
                     const RecoveryConfig& config) {
  if (!config.ist_tau) throw std::invalid_argument("ist_q needs a threshold (ist_tau)");
  const double tau = *config.ist_tau;
  return run_thresholding(y, a, prior, config, FinalQuantizer::kSparsityMatched,
                          [tau](const Vector& v) { return threshold_soft(v, tau); });
}

RecoveryResult omp_q(const Vector& y, const Matrix& a, const SignalPrior& prior,
                     const RecoveryConfig& config) {
  config.validate();
  check_problem(y, a, prior);
  const int iters = config.omp_iters.value_or(prior.sparsity());
  const Eigen::Index L = a.cols();

  RecoveryResult result;
  std::vector<int> support;
  std::vector<bool> chosen(L, false);
  Vector coef;
  Vector residual = y;
  const double y_norm = y.norm();
  for (int t = 0; t < iters && static_cast<Eigen::Index>(support.size()) < L; ++t) {
    if (residual.norm() <= 1e-13 * y_norm) break;
    const Vector corr = a.transpose() * residual;
    int best = -1;
    for (Eigen::Index j = 0; j < L; ++j) {
      if (!chosen[j] && (best < 0 || std::abs(corr(j)) > std::abs(corr(best)))) best = static_cast<int>(j);
    }
    support.push_back(best);
    Matrix sub(a.rows(), support.size());
    for (std::size_t k = 0; k < support.size(); ++k) sub.col(k) = a.col(support[k]);
    Eigen::ColPivHouseholderQR<Matrix> qr(sub);
    if (qr.rank() < static_cast<Eigen::Index>(support.size())) {
      support.pop_back();
      result.early_stop = true;
      result.warnings.emplace_back("omp: rank-deficient support, stopped after " +
                                   std::to_string(support.size()) + " atoms");
      break;
    }
    chosen[best] = true;
    coef = qr.solve(y);
    residual = y - sub * coef;
    result.iters_run = t + 1;
  }

  Vector soft = Vector::Zero(L);
  for (std::size_t k = 0; k < support.size(); ++k) soft(support[k]) = coef(k);
  result.x_soft = soft;

  // Nearest symbol first, then cut down to s nonzeros by coefficient magnitude.
  Vector hard = quantize_elementwise(soft, prior.alphabet());
  if ((hard.array() != 0.0).count() > prior.sparsity()) {
    Vector masked = Vector::Zero(L);
    for (Eigen::Index i = 0; i < L; ++i) {
      if (hard(i) != 0.0) masked(i) = soft(i);
    }
    const Vector keep = threshold_hard(masked, prior.sparsity());
    for (Eigen::Index i = 0; i < L; ++i) {
      if (keep(i) == 0.0) hard(i) = 0.0;
    }
  }
  result.x_hat = hard;
  return result;
}

double ml_candidate_count(int L, int s) {
  double count = 1.0;
  for (int k = 0; k < s; ++k) count = count * (L - k) / (k + 1);
  return count * std::ldexp(1.0, s);
}

Vector ml_oracle(const Vector& y, const Matrix& a, const SignalPrior& prior, double budget) {
  check_problem(y, a, prior);
  const int L = prior.length();
  const int s = prior.sparsity();
  if (ml_candidate_count(L, s) > budget) {
    throw std::invalid_argument("ml_oracle: candidate count exceeds the budget");
  }
  Vector best = Vector::Zero(L);
  if (s == 0) return best;

  std::vector<int> support(s);
  std::iota(support.begin(), support.end(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  Vector residual(a.rows());
  const unsigned long sign_patterns = 1UL << s;
  while (true) {
    // Pattern bit (s-1-k) set means +1 at support[k]; counting up is
    // lexicographic with -1 < +1.
    for (unsigned long pattern = 0; pattern < sign_patterns; ++pattern) {
      residual = y;
      for (int k = 0; k < s; ++k) {
        const double sign = (pattern >> (s - 1 - k)) & 1UL ? 1.0 : -1.0;
        residual.noalias() -= sign * a.col(support[k]);
      }
      const double cost = residual.squaredNorm();
      if (cost < best_cost) {
        best_cost = cost;
        best.setZero();
        for (int k = 0; k < s; ++k) best(support[k]) = (pattern >> (s - 1 - k)) & 1UL ? 1.0 : -1.0;
      }
    }
    // Next combination in lexicographic order.
    int k = s - 1;
    while (k >= 0 && support[k] == L - s + k) --k;
    if (k < 0) break;
    ++support[k];
    for (int j = k + 1; j < s; ++j) support[j] = support[j - 1] + 1;
  }
  return best;
}

}  // namespace dcs
