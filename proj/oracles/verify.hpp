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

// Oracle-equivalence suites shared by `dcs verify` and the acceptance test.

#include <cstdint>
#include <string>
#include <vector>

namespace dcs::verify {

/// Max |diag(full covariance) - per-element error variance| over random
/// instances with K, L in [2, 20], D_ii in (0, 1], sigma_n^2 log-uniform in [1e-3, 1].
double covariance_diagonal_gap(int instances, std::uint64_t seed);

/// Max |x_tilde - literal|, |sigma_e^2 - literal| against the explicit-inverse evaluation.
double mmse_literal_gap(int instances, std::uint64_t seed);

struct SoftGridReport {
  double max_mean_error = 0.0;
  double max_variance_error = 0.0;
  long non_finite = 0;
  double max_abs_mean = 0.0;
  double min_variance = 0.0;
  double max_variance = 0.0;
  long monotonicity_violations = 0;
  long points = 0;
};

/// n x n grid, x_tilde linear in [x_lo, x_hi], sigma^2 log-spaced in [var_lo, var_hi].
SoftGridReport soft_feedback_grid(int n, double x_lo, double x_hi, double var_lo, double var_hi, int L, int s);

/// Max per-iteration |x-domain - z-domain| over random C = I instances.
double tsr_rewrite_gap(int instances, std::uint64_t seed);

struct IdentityReport {
  double max_estimate_ulps = 0.0;  ///< |x_tilde - y| in units of eps * max(|y|, |x_hat|, 1)
  double max_variance_ulps = 0.0;  ///< |sigma_e^2 - sigma_n^2| in units of eps * max(sigma_n^2, 1)
};
IdentityReport identity_channel(int cases, std::uint64_t seed);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// All suites at their pinned tolerances.
std::vector<Check> run_all(std::uint64_t seed);

}  // namespace dcs::verify
