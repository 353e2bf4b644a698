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

#include "dcs/signal_model.hpp"

namespace dcs {
namespace {

TEST(AlphabetTest, TernaryIsSortedAndNearestBreaksTiesTowardZero) {
  const Alphabet a = Alphabet::ternary();
  ASSERT_EQ(a.symbols().size(), 3u);
  EXPECT_EQ(a.symbols()[0], -1.0);
  EXPECT_EQ(a.symbols()[1], 0.0);
  EXPECT_EQ(a.symbols()[2], 1.0);
  EXPECT_EQ(a.nearest(0.5), 0.0);
  EXPECT_EQ(a.nearest(-0.5), 0.0);
  EXPECT_EQ(a.nearest(0.51), 1.0);
  EXPECT_EQ(a.nearest(-7.0), -1.0);
  EXPECT_TRUE(a.contains(-1.0));
  EXPECT_FALSE(a.contains(0.5));
}

TEST(AlphabetTest, RejectsEmpty) { EXPECT_THROW(Alphabet(std::vector<double>{}), std::invalid_argument); }

TEST(SignalPriorTest, ProbabilitiesAndVariance) {
  const SignalPrior p(258, 20);
  EXPECT_DOUBLE_EQ(p.probability(1.0), 10.0 / 258);
  EXPECT_DOUBLE_EQ(p.probability(-1.0), 10.0 / 258);
  EXPECT_DOUBLE_EQ(p.probability(0.0), 238.0 / 258);
  EXPECT_EQ(p.probability(2.0), 0.0);
  EXPECT_DOUBLE_EQ(p.variance(), 20.0 / 258);
  EXPECT_DOUBLE_EQ(p.zero_odds(), 238.0 / 20);
  EXPECT_TRUE(std::isinf(SignalPrior(8, 0).zero_odds()));
}

TEST(SignalPriorTest, RejectsInvalidShapes) {
  EXPECT_THROW(SignalPrior(0, 0), std::invalid_argument);
  EXPECT_THROW(SignalPrior(8, 9), std::invalid_argument);
  EXPECT_THROW(SignalPrior(8, -1), std::invalid_argument);
}

TEST(GenerateSparseSignalTest, ExactSparsityAndTernarySupport) {
  const SignalPrior p(258, 20);
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const Vector x = generate_sparse_signal(p, rng);
    ASSERT_EQ(x.size(), 258);
    EXPECT_TRUE(is_sparse_signal(x, 20));
  }
}

TEST(GenerateSparseSignalTest, SignsAreBalanced) {
  const SignalPrior p(16, 4);
  Rng rng(11);
  long plus = 0;
  long nonzero = 0;
  const int draws = 25000;  // 1e5 nonzero symbols
  for (int t = 0; t < draws; ++t) {
    const Vector x = generate_sparse_signal(p, rng);
    for (double v : x) {
      if (v != 0.0) {
        ++nonzero;
        plus += v > 0.0;
      }
    }
  }
  ASSERT_EQ(nonzero, 100000);
  // Binomial(1e5, 1/2): standard deviation is about 158.
  EXPECT_LT(std::abs(plus - nonzero / 2), 4 * 158);
}

TEST(GenerateSparseSignalTest, SupportIsUniform) {
  const SignalPrior p(10, 3);
  Rng rng(5);
  std::vector<long> hits(10, 0);
  const int draws = 30000;
  for (int t = 0; t < draws; ++t) {
    const Vector x = generate_sparse_signal(p, rng);
    for (int i = 0; i < 10; ++i) hits[i] += x[i] != 0.0;
  }
  // Each position is active with probability 0.3; chi-squared with 9 dof.
  const double expect = draws * 0.3;
  double chi2 = 0.0;
  for (long h : hits) chi2 += (h - expect) * (h - expect) / expect;
  EXPECT_LT(chi2 / 0.7, 27.9);  // 99.9% quantile of chi2(9)
}

TEST(GenerateSparseSignalTest, ZeroSparsityGivesZeroVector) {
  Rng rng(1);
  EXPECT_TRUE(generate_sparse_signal(SignalPrior(12, 0), rng).isZero());
}

TEST(QuantizeTest, ElementwiseExamples) {
  Vector v(5);
  v << 0.7, -0.2, 0.5, -1.8, -0.51;
  Vector want(5);
  want << 1, 0, 0, -1, -1;
  EXPECT_EQ(quantize_elementwise(v, Alphabet::ternary()), want);
}

TEST(QuantizeTest, ElementwiseIsOddAndIdempotent) {
  Rng rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(200);
  for (auto& e : v) e = g(rng);
  const Alphabet a = Alphabet::ternary();
  const Vector q = quantize_elementwise(v, a);
  EXPECT_EQ(quantize_elementwise(q, a), q);
  Vector neg = -v;
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(std::abs(v[i]) - 0.5) > 1e-15) {
      EXPECT_EQ(quantize_elementwise(neg, a)[i], -q[i]);
    }
  }
}

TEST(QuantizeTest, SparsityMatchedKeepsLargestMagnitudes) {
  Vector v(6);
  v << 0.1, -0.9, 0.3, 0.05, -0.2, 0.8;
  Vector want(6);
  want << 0, -1, 1, 0, 0, 1;
  EXPECT_EQ(quantize_sparsity_matched(v, 3), want);
  EXPECT_TRUE(is_sparse_signal(quantize_sparsity_matched(v, 3), 3));
  EXPECT_TRUE(quantize_sparsity_matched(v, 0).isZero());
}

TEST(QuantizeTest, SparsityMatchedMapsSelectedZeroToPlusOne) {
  const Vector v = Vector::Zero(4);
  const Vector q = quantize_sparsity_matched(v, 2);
  EXPECT_TRUE(is_sparse_signal(q, 2));
  EXPECT_EQ(q[0], 1.0);
  EXPECT_EQ(q[1], 1.0);
}

TEST(QuantizeTest, LargestMagnitudeIndicesTieToLowerIndex) {
  Vector v(5);
  v << 1.0, -2.0, 2.0, 1.0, 0.0;
  const std::vector<int> idx = largest_magnitude_indices(v, 3);
  EXPECT_EQ(idx, (std::vector<int>{0, 1, 2}));
}

TEST(IsSparseSignalTest, RejectsWrongCountOrSymbols) {
  Vector v(4);
  v << 1, 0, -1, 0;
  EXPECT_TRUE(is_sparse_signal(v, 2));
  EXPECT_FALSE(is_sparse_signal(v, 1));
  v[1] = 0.5;
  EXPECT_FALSE(is_sparse_signal(v, 3));
}

}  // namespace
}  // namespace dcs
