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

#include "dcs/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dcs {

Alphabet::Alphabet(std::vector<double> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) {
    throw std::invalid_argument("alphabet must contain at least one symbol");
  }
  std::sort(symbols_.begin(), symbols_.end());
  symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
}

Alphabet Alphabet::ternary() { return Alphabet({-1.0, 0.0, 1.0}); }

bool Alphabet::contains(double value) const {
  return std::binary_search(symbols_.begin(), symbols_.end(), value);
}

double Alphabet::nearest(double value) const {
  double best = symbols_.front();
  double best_dist = std::abs(value - best);
  for (double sym : symbols_) {
    const double dist = std::abs(value - sym);
    if (dist < best_dist ||
        (dist == best_dist && (std::abs(sym) < std::abs(best) ||
                               (std::abs(sym) == std::abs(best) && sym < best)))) {
      best = sym;
      best_dist = dist;
    }
  }
  return best;
}

SignalPrior::SignalPrior(int length, int sparsity)
    : length_(length), sparsity_(sparsity), alphabet_(Alphabet::ternary()) {
  if (length <= 0) {
    throw std::invalid_argument("signal length must be positive");
  }
  if (sparsity < 0 || sparsity > length) {
    throw std::invalid_argument("sparsity must lie in [0, L]");
  }
}

double SignalPrior::probability(double symbol) const {
  const double L = length_;
  if (symbol == 0.0) return (L - sparsity_) / L;
  if (symbol == 1.0 || symbol == -1.0) return 0.5 * sparsity_ / L;
  return 0.0;
}

double SignalPrior::zero_odds() const {
  if (sparsity_ == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(length_ - sparsity_) / sparsity_;
}

Vector generate_sparse_signal(const SignalPrior& prior, Rng& rng) {
  const int L = prior.length();
  const int s = prior.sparsity();
  std::vector<int> index(L);
  std::iota(index.begin(), index.end(), 0);
  Vector x = Vector::Zero(L);
  // Partial Fisher-Yates: the first s slots end up a uniform s-subset.
  for (int k = 0; k < s; ++k) {
    std::uniform_int_distribution<int> pick(k, L - 1);
    std::swap(index[k], index[pick(rng)]);
    x(index[k]) = (rng() >> 63) ? 1.0 : -1.0;
  }
  return x;
}

Vector quantize_elementwise(const Vector& v, const Alphabet& alphabet) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = alphabet.nearest(v(i));
  return out;
}

std::vector<int> largest_magnitude_indices(const Vector& v, int s) {
  const int n = static_cast<int>(v.size());
  if (s < 0 || s > n) {
    throw std::invalid_argument("requested more entries than the vector holds");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + s, order.end(), [&](int a, int b) {
    const double ma = std::abs(v(a));
    const double mb = std::abs(v(b));
    return ma > mb || (ma == mb && a < b);
  });
  order.resize(s);
  std::sort(order.begin(), order.end());
  return order;
}

Vector quantize_sparsity_matched(const Vector& v, int s) {
  if (s > v.size()) {
    throw std::invalid_argument("sparsity exceeds vector length");
  }
  Vector out = Vector::Zero(v.size());
  for (int i : largest_magnitude_indices(v, s)) out(i) = v(i) < 0.0 ? -1.0 : 1.0;
  return out;
}

bool is_sparse_signal(const Vector& v, int s) {
  int nonzeros = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double e = v(i);
    if (e != 0.0 && e != 1.0 && e != -1.0) return false;
    nonzeros += e != 0.0;
  }
  return nonzeros == s;
}

}  // namespace dcs
