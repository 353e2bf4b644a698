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

#include <span>
#include <vector>

#include "dcs/common.hpp"

namespace dcs {

/// Finite, symmetric set of real symbols a recovered entry may take. The
/// default is the ternary set {-1, 0, +1}.
class Alphabet {
 public:
  /// Symbols are sorted and deduplicated; must be non-empty.
  explicit Alphabet(std::vector<double> symbols);
  static Alphabet ternary();

  std::span<const double> symbols() const { return symbols_; }
  bool contains(double value) const;

  /// Nearest symbol; ties go to the smaller magnitude, then to the negative one.
  double nearest(double value) const;

 private:
  std::vector<double> symbols_;
};

/// Discrete sparse prior: exactly `sparsity` of `length` entries are nonzero,
/// nonzeros are +-1 with equal probability.
class SignalPrior {
 public:
  SignalPrior(int length, int sparsity);

  int length() const { return length_; }
  int sparsity() const { return sparsity_; }
  const Alphabet& alphabet() const { return alphabet_; }

  /// Marginal per-element probability of `symbol` (0 for symbols outside the alphabet).
  double probability(double symbol) const;
  /// Marginal per-element variance, s/L. The mean is zero.
  double variance() const { return static_cast<double>(sparsity_) / length_; }
  /// (L - s) / s. Infinite when s == 0.
  double zero_odds() const;

 private:
  int length_;
  int sparsity_;
  Alphabet alphabet_;
};

/// Draws a support of size s uniformly without replacement and an independent
/// fair sign for each support element.
Vector generate_sparse_signal(const SignalPrior& prior, Rng& rng);

Vector quantize_elementwise(const Vector& v, const Alphabet& alphabet);

/// Keeps the s largest-magnitude entries (ties: lower index) and maps them to
/// their sign; a selected exact zero maps to +1 so the output always has
/// exactly s nonzeros. All other entries become 0.
Vector quantize_sparsity_matched(const Vector& v, int s);

/// Indices of the s largest |v_i|, ties broken by lower index, sorted ascending.
std::vector<int> largest_magnitude_indices(const Vector& v, int s);

/// True when every entry is in {-1, 0, +1} and exactly s entries are nonzero.
bool is_sparse_signal(const Vector& v, int s);

}  // namespace dcs
