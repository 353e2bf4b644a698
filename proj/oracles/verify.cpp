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

#include "verify.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dcs/algorithms.hpp"
#include "dcs/estimators.hpp"
#include "dcs/measurement.hpp"
#include "oracles.hpp"

namespace dcs::verify {

namespace {

Matrix gaussian(int rows, int cols, double scale, Rng& rng) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = g(rng);
  return m;
}

struct RandomMmse {
  Matrix a;
  Vector y, x_hat, d;
  double noise;
};

RandomMmse random_mmse_instance(Rng& rng) {
  std::uniform_int_distribution<int> dim(2, 20);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int K = dim(rng);
  const int L = dim(rng);
  RandomMmse r;
  r.a = gaussian(K, L, 1.0 / std::sqrt(K), rng);
  r.d.resize(L);
  for (int i = 0; i < L; ++i) r.d(i) = 1.0 - unit(rng);  // (0, 1]
  r.noise = std::pow(10.0, -3.0 * unit(rng));
  r.x_hat = gaussian(L, 1, 0.5, rng);
  r.y = gaussian(K, 1, 1.0, rng);
  return r;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

double covariance_diagonal_gap(int instances, std::uint64_t seed) {
  Rng rng(seed);
  double gap = 0.0;
  for (int n = 0; n < instances; ++n) {
    const RandomMmse r = random_mmse_instance(rng);
    const MmseStepResult step = mmse_step(r.y, r.a, r.x_hat, r.d, r.noise);
    const Matrix full = full_error_covariance(r.a, r.d, r.noise);
    gap = std::max(gap, (full.diagonal() - step.sigma_e_sq).cwiseAbs().maxCoeff());
  }
  return gap;
}

double mmse_literal_gap(int instances, std::uint64_t seed) {
  Rng rng(seed);
  double gap = 0.0;
  for (int n = 0; n < instances; ++n) {
    const RandomMmse r = random_mmse_instance(rng);
    const MmseStepResult step = mmse_step(r.y, r.a, r.x_hat, r.d, r.noise);
    const oracle::LiteralMmse lit = oracle::literal_mmse_step(r.y, r.a, r.x_hat, r.d, r.noise);
    gap = std::max({gap, (step.x_tilde - lit.x_tilde).cwiseAbs().maxCoeff(),
                    (step.sigma_e_sq - lit.sigma_e_sq).cwiseAbs().maxCoeff(),
                    (step.k_diag - lit.k_diag).cwiseAbs().maxCoeff()});
  }
  return gap;
}

SoftGridReport soft_feedback_grid(int n, double x_lo, double x_hi, double var_lo, double var_hi, int L, int s) {
  const SignalPrior prior(L, s);
  SoftGridReport rep;
  rep.min_variance = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    const double t = n > 1 ? static_cast<double>(j) / (n - 1) : 0.0;
    const double var = std::pow(10.0, std::log10(var_lo) + t * (std::log10(var_hi) - std::log10(var_lo)));
    double previous = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double x = x_lo + (n > 1 ? (x_hi - x_lo) * i / (n - 1) : 0.0);
      const SoftValue sv = soft_feedback(x, var, prior);
      ++rep.points;
      if (!std::isfinite(sv.mean) || !std::isfinite(sv.variance)) {
        ++rep.non_finite;
        continue;
      }
      const oracle::MixturePosterior ref = oracle::mixture_posterior(x, var, prior);
      rep.max_mean_error = std::max(rep.max_mean_error, static_cast<double>(std::fabs(sv.mean - ref.mean)));
      rep.max_variance_error =
          std::max(rep.max_variance_error, static_cast<double>(std::fabs(sv.variance - ref.variance)));
      rep.max_abs_mean = std::max(rep.max_abs_mean, std::abs(sv.mean));
      rep.min_variance = std::min(rep.min_variance, sv.variance);
      rep.max_variance = std::max(rep.max_variance, sv.variance);
      if (sv.mean < previous) ++rep.monotonicity_violations;
      previous = sv.mean;
    }
  }
  return rep;
}

double tsr_rewrite_gap(int instances, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> dim(8, 40);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double gap = 0.0;
  for (int n = 0; n < instances; ++n) {
    const int L = dim(rng);
    // Alternate full square selections (unit-norm scaling gives C = I) and
    // partial selections without column scaling.
    const bool square = n % 2 == 0;
    const int K = square ? L : std::max(2, static_cast<int>(L * (0.4 + 0.4 * unit(rng))));
    const Matrix m = random_orthogonal_matrix(L, rng);
    const std::vector<int> rows = select_rows(K, L, rng);
    const MeasurementEnsemble ens = MeasurementEnsemble::from_orthogonal_rows(
        m, rows, square ? ColumnScaling::kUnitNorm : ColumnScaling::kNone);
    const int s = std::max(1, L / 8);
    const SignalPrior prior(L, s);
    const Vector x = generate_sparse_signal(prior, rng);
    const double noise = std::pow(10.0, -(0.5 + 1.5 * unit(rng)));
    const Vector y = apply_channel(ens, x, noise, rng).y;

    RecoveryConfig cfg;
    cfg.max_iters = 10;
    cfg.record_trace = true;
    const RecoveryResult r = tsr_q(y, ens, noise, prior, cfg);
    for (const auto& it : r.trace) {
      const Vector z = oracle::tsr_z_domain_step(y, m, rows, ens.c(), it.prior_mean, it.prior_variance(0), noise);
      gap = std::max(gap, (z - it.linear_mean).cwiseAbs().maxCoeff());
    }
  }
  return gap;
}

IdentityReport identity_channel(int cases, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> g;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  IdentityReport rep;
  for (int n = 0; n < cases; ++n) {
    const int L = 4 + n;
    const double noise = std::pow(10.0, -4.0 + 5.0 * unit(rng));
    Vector y(L), x_hat(L);
    for (int i = 0; i < L; ++i) {
      y(i) = g(rng);
      x_hat(i) = 0.5 * g(rng);
    }
    const MmseStepResult step = mmse_step(y, Matrix::Identity(L, L), x_hat, Vector::Ones(L), noise);
    for (int i = 0; i < L; ++i) {
      const double scale = eps * std::max({std::abs(y(i)), std::abs(x_hat(i)), 1.0});
      rep.max_estimate_ulps = std::max(rep.max_estimate_ulps, std::abs(step.x_tilde(i) - y(i)) / scale);
      // D = I sets the scale of the intermediate K_ii = 1 / (1 + sigma_n^2).
      rep.max_variance_ulps =
          std::max(rep.max_variance_ulps, std::abs(step.sigma_e_sq(i) - noise) / (eps * std::max(noise, 1.0)));
    }
  }
  return rep;
}

std::vector<Check> run_all(std::uint64_t seed) {
  std::vector<Check> out;
  {
    const double gap = covariance_diagonal_gap(100, seed);
    out.push_back({"error-variance simplification vs full covariance", gap < 1e-10, "max gap " + fmt(gap) + " (< 1e-10)"});
  }
  {
    const double gap = mmse_literal_gap(100, seed + 1);
    out.push_back({"MMSE step vs explicit-inverse evaluation", gap < 1e-10, "max gap " + fmt(gap) + " (< 1e-10)"});
  }
  {
    const SoftGridReport r = soft_feedback_grid(200, -5.0, 5.0, 1e-12, 10.0, 258, 20);
    const bool ok = r.non_finite == 0 && r.max_mean_error < 1e-12 && r.max_variance_error < 1e-12;
    out.push_back({"soft feedback closed forms vs mixture posterior", ok,
                   "mean err " + fmt(r.max_mean_error) + ", var err " + fmt(r.max_variance_error) +
                       ", non-finite " + std::to_string(r.non_finite) + " (< 1e-12, 0)"});
  }
  {
    const double gap = tsr_rewrite_gap(20, seed + 2);
    out.push_back({"TSR x-domain step vs z-domain step", gap < 1e-10, "max gap " + fmt(gap) + " (< 1e-10)"});
  }
  {
    const IdentityReport r = identity_channel(10, seed + 3);
    const bool ok = r.max_estimate_ulps <= 8.0 && r.max_variance_ulps <= 8.0;
    out.push_back({"identity channel exactness", ok,
                   "estimate " + fmt(r.max_estimate_ulps) + " ulp, variance " + fmt(r.max_variance_ulps) + " ulp (<= 8)"});
  }
  return out;
}

}  // namespace dcs::verify
