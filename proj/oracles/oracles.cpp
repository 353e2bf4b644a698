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

#include "oracles.hpp"

#include <cmath>
#include <limits>

namespace dcs::oracle {

LiteralMmse literal_mmse_step(const Vector& y, const Matrix& a, const Vector& x_hat, const Vector& sigma_d_sq,
                              double sigma_n_sq) {
  const Eigen::Index K = a.rows();
  const Matrix phi = sigma_d_sq.cwiseMax(kVarianceFloor).asDiagonal();
  const Matrix inv = (a * phi * a.transpose() + sigma_n_sq * Matrix::Identity(K, K)).inverse();
  const Matrix b = phi * a.transpose() * inv;
  const Matrix cascade = b * a;
  const Matrix w = cascade.diagonal().cwiseInverse().asDiagonal();
  LiteralMmse out;
  out.x_tilde = x_hat + w * b * (y - a * x_hat);
  out.k_diag = cascade.diagonal();
  out.sigma_e_sq = phi.diagonal().array() * (1.0 - out.k_diag.array()) / out.k_diag.array();
  return out;
}

MixturePosterior mixture_posterior(double x_tilde, double sigma_sq, const SignalPrior& prior) {
  using ld = long double;
  const ld symbols[3] = {-1.0L, 0.0L, 1.0L};
  ld log_w[3];
  for (int k = 0; k < 3; ++k) {
    const ld p = prior.probability(static_cast<double>(symbols[k]));
    const ld d = static_cast<ld>(x_tilde) - symbols[k];
    log_w[k] = p > 0 ? std::log(p) - d * d / (2.0L * sigma_sq) : -std::numeric_limits<ld>::infinity();
  }
  const ld top = std::max({log_w[0], log_w[1], log_w[2]});
  ld w[3], total = 0;
  for (int k = 0; k < 3; ++k) {
    w[k] = std::exp(log_w[k] - top);
    total += w[k];
  }
  ld mean = 0;
  for (int k = 0; k < 3; ++k) mean += symbols[k] * w[k] / total;
  ld var = 0;
  for (int k = 0; k < 3; ++k) var += (symbols[k] - mean) * (symbols[k] - mean) * w[k] / total;
  return {mean, var};
}

Vector tsr_z_domain_step(const Vector& y, const Matrix& m, const std::vector<int>& rows, const Vector& c,
                         const Vector& x_pri, double v_pri, double sigma_n_sq) {
  const Eigen::Index L = m.rows();
  Matrix s = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), L);
  for (std::size_t j = 0; j < rows.size(); ++j) s(static_cast<Eigen::Index>(j), rows[j]) = 1.0;
  const double c_bar_sq = c.squaredNorm() / static_cast<double>(L);
  const double v_z = c_bar_sq * v_pri;
  const Matrix mc = m * c.asDiagonal();
  const Vector z_pri = mc * x_pri;
  const Vector z_post = z_pri + v_z / (v_z + sigma_n_sq) * s.transpose() * (y - s * z_pri);
  return mc.inverse() * z_post;
}

namespace {

struct Candidate {
  std::vector<int> support;
  std::vector<int> signs;
};

bool key_less(const Candidate& a, const Candidate& b) {
  if (a.support != b.support) return a.support < b.support;
  return a.signs < b.signs;
}

void recurse(int pos, int remaining, Vector& x, const Vector& y, const Matrix& a, double& best_cost,
             Candidate& best, Vector& best_x) {
  const int L = static_cast<int>(x.size());
  if (L - pos < remaining) return;
  if (pos == L) {
    const double cost = (y - a * x).squaredNorm();
    Candidate c;
    for (int i = 0; i < L; ++i) {
      if (x(i) != 0.0) {
        c.support.push_back(i);
        c.signs.push_back(x(i) > 0 ? 1 : 0);
      }
    }
    if (cost < best_cost || (cost == best_cost && key_less(c, best))) {
      best_cost = cost;
      best = std::move(c);
      best_x = x;
    }
    return;
  }
  // Reverse order: +1, then -1, then 0 at each position.
  if (remaining > 0) {
    x(pos) = 1.0;
    recurse(pos + 1, remaining - 1, x, y, a, best_cost, best, best_x);
    x(pos) = -1.0;
    recurse(pos + 1, remaining - 1, x, y, a, best_cost, best, best_x);
  }
  x(pos) = 0.0;
  recurse(pos + 1, remaining, x, y, a, best_cost, best, best_x);
}

}  // namespace

Vector exhaustive_search_reverse(const Vector& y, const Matrix& a, int s) {
  Vector x = Vector::Zero(a.cols());
  Vector best_x = x;
  Candidate best;
  double best_cost = std::numeric_limits<double>::infinity();
  recurse(0, s, x, y, a, best_cost, best, best_x);
  return best_x;
}

}  // namespace dcs::oracle
