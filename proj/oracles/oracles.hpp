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

// Reference computations that deliberately avoid the library's code paths:
// explicit inverses instead of factorizations, the un-simplified mixture
// posterior instead of the closed forms, the z-domain TSR step instead of the
// x-domain one, and a different enumeration order for the exhaustive search.

#include <cstdint>
#include <string>
#include <vector>

#include "dcs/common.hpp"
#include "dcs/signal_model.hpp"

namespace dcs::oracle {

struct LiteralMmse {
  Vector x_tilde;
  Vector sigma_e_sq;
  Vector k_diag;
};

/// B = D A^T (A D A^T + s I)^-1, K = B A, W = diag(1/K_ii), all with explicit inverses.
LiteralMmse literal_mmse_step(const Vector& y, const Matrix& a, const Vector& x_hat, const Vector& sigma_d_sq,
                              double sigma_n_sq);

struct MixturePosterior {
  long double mean;
  long double variance;
};

/// Posterior of x in {-1, 0, 1} (prior weights s/2L, (L-s)/L, s/2L) given
/// x_tilde = x + e, e ~ N(0, sigma_sq). Weights normalized in long double.
MixturePosterior mixture_posterior(double x_tilde, double sigma_sq, const SignalPrior& prior);

/// z-domain TSR linear step: z = M C x, z_post = z + g S^T (y - S z) with
/// g = v_z / (v_z + sigma_n^2), v_z = c_bar^2 v; returns C^-1 M^T z_post.
Vector tsr_z_domain_step(const Vector& y, const Matrix& m, const std::vector<int>& rows, const Vector& c,
                         const Vector& x_pri, double v_pri, double sigma_n_sq);

/// Exhaustive search over C0^L with ||x||_0 = s, visiting candidates in
/// reverse order and resolving exact ties toward the lexicographically first
/// (support, signs) key.
Vector exhaustive_search_reverse(const Vector& y, const Matrix& a, int s);

}  // namespace dcs::oracle
