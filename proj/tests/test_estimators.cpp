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


#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "dcs/estimators.hpp"
#include "dcs/measurement.hpp"
#include "oracles.hpp"

namespace dcs {
namespace {

Vector random_vector(int n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(n);
  for (auto& e : v) e = g(rng);
  return v;
}

TEST(MmseStepTest, IdentityChannelReturnsObservation) {
  Rng rng(1);
  for (double var : {1e-3, 0.1, 1.0, 4.0}) {
    const Vector y = random_vector(9, rng);
    const Vector x_hat = random_vector(9, rng, 0.3);
    const MmseStepResult r = mmse_step(y, Matrix::Identity(9, 9), x_hat, Vector::Ones(9), var);
    EXPECT_LT((r.x_tilde - y).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((r.sigma_e_sq.array() - var).abs().maxCoeff(), 1e-14 * std::max(var, 1.0) * 16);
    EXPECT_LT((r.k_diag.array() - 1.0 / (1.0 + var)).abs().maxCoeff(), 1e-15);
  }
}

TEST(MmseStepTest, MatchesLiteralFormulaOnSmallSystem) {
  Matrix a(2, 3);
  a << 0.6, -0.8, 0.3, 0.8, 0.6, -0.4;
  Vector y(2);
  y << 0.7, -1.1;
  Vector x_hat(3);
  x_hat << 0.2, -0.5, 0.0;
  Vector d(3);
  d << 0.4, 0.9, 0.1;
  const MmseStepResult got = mmse_step(y, a, x_hat, d, 0.05);
  const oracle::LiteralMmse want = oracle::literal_mmse_step(y, a, x_hat, d, 0.05);
  EXPECT_LT((got.x_tilde - want.x_tilde).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((got.sigma_e_sq - want.sigma_e_sq).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((got.k_diag - want.k_diag).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MmseStepTest, BiasIsStrictlyPresent) {
  Rng rng(2);
  const MeasurementEnsemble e = build_svd_ensemble(12, 20, rng);
  const Vector d = random_vector(20, rng).cwiseAbs().array() + 0.01;
  const MmseStepResult r = mmse_step(random_vector(12, rng), e.a(), Vector::Zero(20), d, 0.1);
  EXPECT_GT(r.k_diag.minCoeff(), 0.0);
  EXPECT_LT(r.k_diag.maxCoeff(), 1.0);
  EXPECT_GT(r.sigma_e_sq.minCoeff(), 0.0);
}

TEST(MmseStepTest, DiagonalOfFullCovarianceMatchesVariances) {
  Rng rng(3);
  const MeasurementEnsemble e = build_svd_ensemble(8, 14, rng);
  const Vector d = random_vector(14, rng).cwiseAbs().array() + 0.05;
  const MmseStepResult r = mmse_step(random_vector(8, rng), e.a(), Vector::Zero(14), d, 0.2);
  const Matrix full = full_error_covariance(e.a(), d, 0.2);
  EXPECT_LT((full.diagonal() - r.sigma_e_sq).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(MmseStepTest, RejectsNonPositiveNoise) {
  EXPECT_THROW(mmse_step(Vector::Zero(2), Matrix::Identity(2, 2), Vector::Zero(2), Vector::Ones(2), 0.0),
               std::invalid_argument);
  EXPECT_THROW(mmse_step(Vector::Zero(3), Matrix::Identity(2, 2), Vector::Zero(2), Vector::Ones(2), 0.1),
               std::invalid_argument);
}

TEST(SoftFeedbackTest, MatchesMixturePosterior) {
  const SignalPrior prior(258, 26);  // s / L close to 0.1
  for (double x : {0.8, -0.3, 0.0, 1.7}) {
    for (double var : {0.01, 0.05, 0.5}) {
      const SoftValue got = soft_feedback(x, var, prior);
      const oracle::MixturePosterior want = oracle::mixture_posterior(x, var, prior);
      EXPECT_NEAR(got.mean, static_cast<double>(want.mean), 1e-13) << x << " " << var;
      EXPECT_NEAR(got.variance, static_cast<double>(want.variance), 1e-13) << x << " " << var;
    }
  }
}

TEST(SoftFeedbackTest, OddMeanEvenVariance) {
  const SignalPrior prior(100, 10);
  for (double x : {0.1, 0.45, 0.9, 2.5}) {
    const SoftValue pos = soft_feedback(x, 0.07, prior);
    const SoftValue neg = soft_feedback(-x, 0.07, prior);
    EXPECT_EQ(pos.mean, -neg.mean);
    EXPECT_EQ(pos.variance, neg.variance);
  }
  EXPECT_EQ(soft_feedback(0.0, 0.3, prior).mean, 0.0);
}

TEST(SoftFeedbackTest, SmallVarianceApproachesHardDecision) {
  const SignalPrior prior(258, 20);
  EXPECT_NEAR(soft_feedback(0.9, 1e-4, prior).mean, 1.0, 1e-12);
  EXPECT_NEAR(soft_feedback(-0.9, 1e-4, prior).mean, -1.0, 1e-12);
  EXPECT_NEAR(soft_feedback(0.2, 1e-4, prior).mean, 0.0, 1e-12);
  EXPECT_NEAR(soft_feedback(0.2, 1e-4, prior).variance, 0.0, 1e-12);
}

TEST(SoftFeedbackTest, FiniteBoundedAndMonotoneOnWideGrid) {
  const SignalPrior prior(258, 20);
  for (double var = 1e-12; var <= 1e3; var *= 3.7) {
    double last = -2.0;
    for (double x = -30.0; x <= 30.0; x += 0.0137) {
      const SoftValue sv = soft_feedback(x, var, prior);
      ASSERT_TRUE(std::isfinite(sv.mean) && std::isfinite(sv.variance)) << x << " " << var;
      EXPECT_LE(std::abs(sv.mean), 1.0);
      EXPECT_GE(sv.variance, 0.0);
      EXPECT_LE(sv.variance, 1.0);
      EXPECT_GE(sv.mean, last);
      last = sv.mean;
    }
  }
}

TEST(SoftFeedbackTest, ZeroSparsityAndFullSupport) {
  const SoftValue zero = soft_feedback(0.8, 0.1, SignalPrior(10, 0));
  EXPECT_EQ(zero.mean, 0.0);
  EXPECT_EQ(zero.variance, 0.0);
  // Without zeros the posterior mean is tanh(x / var).
  const SoftValue full = soft_feedback(0.3, 0.2, SignalPrior(10, 10));
  EXPECT_NEAR(full.mean, std::tanh(1.5), 1e-15);
  EXPECT_NEAR(full.variance, 1.0 - std::tanh(1.5) * std::tanh(1.5), 1e-15);
}

TEST(SoftFeedbackTest, VectorFormsAgreeWithScalar) {
  const SignalPrior prior(50, 5);
  Vector x(3);
  x << 0.2, -0.7, 1.1;
  const SoftVector v = soft_feedback(x, 0.05, prior);
  for (int i = 0; i < 3; ++i) {
    const SoftValue sv = soft_feedback(x[i], 0.05, prior);
    EXPECT_EQ(v.mean[i], sv.mean);
    EXPECT_EQ(v.variance[i], sv.variance);
  }
}

TEST(ExtrinsicTest, GaussianDivision) {
  Vector post(2);
  post << 0.5, -0.25;
  Vector pri(2);
  pri << 0.0, 1.0;
  const ExtrinsicResult r = extrinsic_combine(post, 0.25, pri, 1.0);
  EXPECT_FALSE(r.no_gain);
  EXPECT_NEAR(r.variance, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.mean[0], (0.5 / 0.25) / 3.0, 1e-15);
  EXPECT_NEAR(r.mean[1], (-0.25 / 0.25 - 1.0) / 3.0, 1e-15);
}

TEST(ExtrinsicTest, NoGainClamps) {
  const Vector post = Vector::Constant(3, 0.4);
  const ExtrinsicResult r = extrinsic_combine(post, 0.5, Vector::Zero(3), 0.5);
  EXPECT_TRUE(r.no_gain);
  EXPECT_EQ(r.variance, kExtrinsicClampVariance);
  EXPECT_EQ(r.mean, post);
  EXPECT_TRUE(extrinsic_combine(post, 0.6, Vector::Zero(3), 0.5).no_gain);
}

TEST(ThresholdTest, HardKeepsLargest) {
  Vector v(5);
  v << 0.3, -2.0, 0.1, 1.5, -0.2;
  Vector want(5);
  want << 0, -2.0, 0, 1.5, 0;
  EXPECT_EQ(threshold_hard(v, 2), want);
  EXPECT_EQ(threshold_hard(v, 5), v);
  EXPECT_TRUE(threshold_hard(v, 0).isZero());
}

TEST(ThresholdTest, SoftShrinks) {
  Vector v(4);
  v << 0.3, -2.0, 0.1, 1.5;
  Vector want(4);
  want << 0.0, -1.5, 0.0, 1.0;
  EXPECT_LT((threshold_soft(v, 0.5) - want).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(threshold_soft(v, 0.0), v);
  EXPECT_THROW(threshold_soft(v, -1.0), std::invalid_argument);
}

}  // namespace
}  // namespace dcs
