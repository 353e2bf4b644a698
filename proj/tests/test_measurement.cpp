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
#include <filesystem>
#include <stdexcept>

#include <gtest/gtest.h>

#include "dcs/measurement.hpp"
#include "dcs/signal_model.hpp"

namespace dcs {
namespace {

TEST(OrthogonalMatrixTest, RandomMatrixIsOrthogonal) {
  Rng rng(1);
  const Matrix m = random_orthogonal_matrix(40, rng);
  EXPECT_LT((m * m.transpose() - Matrix::Identity(40, 40)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OrthogonalMatrixTest, DctMatrixIsOrthogonal) {
  const Matrix m = orthonormal_dct_matrix(33);
  EXPECT_LT((m * m.transpose() - Matrix::Identity(33, 33)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SvdEnsembleTest, FactorsAreConsistentAndColumnsHaveUnitNorm) {
  Rng rng(2);
  const MeasurementEnsemble e = build_svd_ensemble(129, 258, rng);
  ASSERT_TRUE(e.has_factorization());
  EXPECT_EQ(e.rows(), 129);
  EXPECT_EQ(e.cols(), 258);
  EXPECT_LT((e.u() * e.u().transpose() - Matrix::Identity(129, 129)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(e.a(), e.u() * e.c().asDiagonal());
  for (int i = 0; i < e.cols(); ++i) EXPECT_NEAR(e.a().col(i).norm(), 1.0, 1e-12);
  EXPECT_NEAR(e.c_bar_sq(), e.c().squaredNorm() / 258, 1e-15);
  // Half of the rows: column energies average K/L, so c^2 averages near 2.
  EXPECT_GT(e.c_bar_sq(), 1.9);
  EXPECT_LT(e.c_bar_sq(), 2.3);
}

TEST(SvdEnsembleTest, SquareCaseIsOrthogonalWithUnitScaling) {
  Rng rng(3);
  const MeasurementEnsemble e = build_svd_ensemble(20, 20, rng);
  EXPECT_LT((e.c().array() - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_LT((e.a().transpose() * e.a() - Matrix::Identity(20, 20)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SvdEnsembleTest, UnscaledKeepsOrthonormalRows) {
  Rng rng(4);
  const MeasurementEnsemble e = build_svd_ensemble(10, 30, rng, ColumnScaling::kNone);
  EXPECT_EQ(e.c(), Vector::Ones(30));
  EXPECT_LT((e.a() * e.a().transpose() - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DctEnsembleTest, ColumnsHaveUnitNorm) {
  Rng rng(5);
  const MeasurementEnsemble e = build_dct_ensemble(30, 64, rng);
  for (int i = 0; i < e.cols(); ++i) EXPECT_NEAR(e.a().col(i).norm(), 1.0, 1e-12);
}

TEST(SelectRowsTest, DistinctAndUniform) {
  Rng rng(6);
  const int L = 12;
  const int K = 4;
  const int draws = 20000;
  std::vector<long> hits(L, 0);
  for (int t = 0; t < draws; ++t) {
    const std::vector<int> rows = select_rows(K, L, rng);
    std::vector<bool> seen(L, false);
    for (int r : rows) {
      ASSERT_FALSE(seen[r]);
      seen[r] = true;
      ++hits[r];
    }
  }
  const double p = static_cast<double>(K) / L;
  const double expect = draws * p;
  double chi2 = 0.0;
  for (long h : hits) chi2 += (h - expect) * (h - expect) / expect;
  EXPECT_LT(chi2 / (1.0 - p), 31.3);  // 99.9% quantile of chi2(11)
}

TEST(EnsembleTest, RejectsBadInputs) {
  const Matrix m = orthonormal_dct_matrix(6);
  EXPECT_THROW(MeasurementEnsemble::from_orthogonal_rows(m, {1, 1}, ColumnScaling::kUnitNorm),
               std::invalid_argument);
  EXPECT_THROW(MeasurementEnsemble::from_orthogonal_rows(m, {7}, ColumnScaling::kUnitNorm),
               std::invalid_argument);
  EXPECT_THROW(MeasurementEnsemble::from_factors(m.topRows(2), -Vector::Ones(6)), std::invalid_argument);
  const MeasurementEnsemble plain = MeasurementEnsemble::from_matrix(m);
  EXPECT_FALSE(plain.has_factorization());
  EXPECT_THROW(plain.u(), std::logic_error);
}

TEST(ChannelTest, NoiselessIsExact) {
  Rng rng(7);
  const MeasurementEnsemble e = build_svd_ensemble(10, 20, rng);
  const Vector x = generate_sparse_signal(SignalPrior(20, 3), rng);
  const ChannelOutput out = apply_channel(e, x, 0.0, rng);
  EXPECT_EQ(out.y, e.a() * x);
  EXPECT_EQ(out.sigma_n_sq, 0.0);
  EXPECT_TRUE(apply_channel(e, Vector::Zero(20), 0.0, rng).y.isZero());
}

TEST(ChannelTest, NoiseVarianceMatches) {
  const Matrix a = Matrix::Identity(1, 1);
  const MeasurementEnsemble e = MeasurementEnsemble::from_matrix(a);
  Rng rng(8);
  const double var = 0.25;
  const int n = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  const Vector x = Vector::Zero(1);
  for (int t = 0; t < n; ++t) {
    const double v = apply_channel(e, x, var, rng).y[0];
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double sample_var = sum_sq / n - mean * mean;
  // Standard error of the sample variance is var * sqrt(2 / n).
  EXPECT_NEAR(sample_var, var, 3.0 * var * std::sqrt(2.0 / n));
}

TEST(ChannelTest, UnitNoiseIsScaled) {
  Rng rng(9);
  const MeasurementEnsemble e = build_svd_ensemble(5, 8, rng);
  const Vector x = generate_sparse_signal(SignalPrior(8, 2), rng);
  const Vector n = draw_unit_noise(5, rng);
  const ChannelOutput out = apply_channel(e, x, 0.04, n);
  EXPECT_LT((out.y - e.a() * x - 0.2 * n).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(NoiseLevelTest, DecibelConversion) {
  EXPECT_EQ(noise_level_db_to_variance(0.0), 1.0);
  EXPECT_NEAR(noise_level_db_to_variance(20.0), 0.01, 1e-17);
  EXPECT_NEAR(noise_level_db_to_variance(3.0), 0.50118723362727, 1e-13);
}

TEST(EnsembleFileTest, RoundTripIsExact) {
  Rng rng(10);
  const MeasurementEnsemble e = build_svd_ensemble(7, 13, rng);
  const auto path = std::filesystem::temp_directory_path() / "dcs_ensemble_roundtrip.txt";
  save_ensemble(e, path);
  const MeasurementEnsemble back = load_ensemble(path);
  ASSERT_TRUE(back.has_factorization());
  EXPECT_EQ(back.u(), e.u());
  EXPECT_EQ(back.c(), e.c());
  EXPECT_EQ(back.a(), e.a());

  const MeasurementEnsemble plain = MeasurementEnsemble::from_matrix(e.a());
  save_ensemble(plain, path);
  const MeasurementEnsemble plain_back = load_ensemble(path);
  EXPECT_FALSE(plain_back.has_factorization());
  EXPECT_EQ(plain_back.a(), e.a());
  std::filesystem::remove(path);
}

TEST(EnsembleFileTest, MissingFileThrows) {
  EXPECT_THROW(load_ensemble("/nonexistent/dcs/ensemble.txt"), std::runtime_error);
}

}  // namespace
}  // namespace dcs
