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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcs/algorithms.hpp"
#include "dcs/measurement.hpp"

namespace dcs {

enum class AlgorithmId { kIms, kImsGenie, kTsr, kIht, kIst, kOmp, kMl };

struct AlgorithmSpec {
  std::string label;  ///< shown in CSV/SVG, must be unique within an experiment
  AlgorithmId id = AlgorithmId::kIms;
  RecoveryConfig config;
};

/// Known short names: ims, ims_genie_ee, ims_genie_dd, ims_genie_both, tsr,
/// tsr_zdomain, iht, ist, omp, ml. Throws std::invalid_argument otherwise.
AlgorithmSpec algorithm_from_name(std::string_view name);
std::vector<std::string> known_algorithm_names();

enum class EnsembleMode { kFreshPerTrial, kFixed };
enum class EnsembleKind { kSvd, kDct };

struct IstTuning {
  int trials = 200;
  /// tau = multiplier * sigma_n; default 0.05, 0.10, ..., 2.00.
  std::vector<double> multipliers;
  static std::vector<double> default_multipliers();
};

struct ExperimentConfig {
  int L = 258;
  int K = 129;
  int s = 20;
  std::vector<double> noise_levels_db = {15, 16, 17, 18, 19, 20, 21};
  int trials = 2000;
  std::vector<AlgorithmSpec> algorithms;
  std::uint64_t master_seed = 1;
  EnsembleMode ensemble_mode = EnsembleMode::kFreshPerTrial;
  EnsembleKind ensemble_kind = EnsembleKind::kSvd;
  /// 0: one worker per hardware thread.
  int threads = 0;
  /// Per-level IST thresholds; levels missing here are tuned before the run.
  std::map<double, double> ist_tau_by_db;
  /// Per-level OMP iteration counts; levels missing here use default_omp_iters.
  std::map<double, int> omp_iters_by_db;
  IstTuning ist_tuning{200, IstTuning::default_multipliers()};

  void validate() const;
};

/// 23 iterations at 15 dB rising linearly to 33 at 21 dB, extrapolated and
/// clamped to [1, K].
int default_omp_iters(double noise_db, int K);

struct SymbolErrors {
  long errors = 0;
  long total = 0;
};

/// Positions where x_hat differs from x_true.
SymbolErrors ser(const Vector& x_hat, const Vector& x_true);

struct SerPoint {
  std::string algorithm;
  double noise_db = 0.0;
  long trials = 0;  ///< successful trials
  long errors = 0;
  long total = 0;   ///< trials * L
  double ser = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  long diverged = 0;
  long failed = 0;  ///< trials excluded because the algorithm threw

  bool operator==(const SerPoint&) const = default;
};

struct SerCurve {
  std::vector<SerPoint> points;

  /// nullptr when absent.
  const SerPoint* find(std::string_view algorithm, double noise_db) const;
  std::vector<std::string> algorithms() const;
  /// Points of one algorithm in noise-level order.
  std::vector<SerPoint> series(std::string_view algorithm) const;
};

/// 95% Wilson score interval for `errors` out of `total`.
std::pair<double, double> wilson_interval(long errors, long total);

/// Seed of trial `trial`: derive_seed(master, 1, trial). Sub-streams:
/// tag 1 ensemble, 2 signal, 3 noise. A fixed ensemble uses derive_seed(master, 3).
/// IST tuning trials use derive_seed(master, 2, trial) as their trial seed.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

/// Everything random about one trial. The same draw is shared by every noise
/// level and algorithm: n = sqrt(sigma_n^2) * unit_noise.
struct TrialInstance {
  MeasurementEnsemble ensemble;
  Vector x;
  Vector unit_noise;
};

MeasurementEnsemble draw_ensemble(int K, int L, EnsembleKind kind, std::uint64_t seed);
TrialInstance draw_trial(const ExperimentConfig& config, std::uint64_t seed,
                         const MeasurementEnsemble* fixed_ensemble);

/// Runs one algorithm on one instance. `x_true` is only used by genie variants.
RecoveryResult run_algorithm(const AlgorithmSpec& spec, const Vector& y,
                             const MeasurementEnsemble& ensemble, double sigma_n_sq,
                             const SignalPrior& prior, const Vector& x_true);

struct TrialFailure {
  long trial = 0;
  std::string algorithm;
  double noise_db = 0.0;
  std::string message;
};

struct ExperimentResult {
  SerCurve curve;
  std::map<double, double> ist_tau_by_db;
  std::map<double, int> omp_iters_by_db;
  std::vector<TrialFailure> failures;
};

/// Grid search of the IST threshold per noise level on held-out trials.
/// Ties go to the smaller threshold.
std::map<double, double> tune_ist_tau(const ExperimentConfig& config);

/// Full Monte Carlo run. Trials may run on several threads; counts are
/// integer sums, so the result does not depend on scheduling.
ExperimentResult run_experiment(const ExperimentConfig& config);
SerCurve run_curve(const ExperimentConfig& config);

/// Noise level where log10(SER) first crosses `target`, linearly interpolated
/// between grid points (zero SER is treated as `floor`). nullopt if never reached.
std::optional<double> crossing_level(const std::vector<SerPoint>& series, double target,
                                     double floor = 1e-7);

// Config files (see README for the schema).
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Output.
void emit_csv(const SerCurve& curve, const std::filesystem::path& path);
std::string format_csv(const SerCurve& curve);
SerCurve parse_csv(std::string_view text);
SerCurve load_csv(const std::filesystem::path& path);

struct SvgOptions {
  double ser_floor = 1e-6;
  std::string title;
};
std::string format_svg(const SerCurve& curve, const SvgOptions& options = {});
void emit_svg(const SerCurve& curve, const std::filesystem::path& path, const SvgOptions& options = {});

void emit_manifest(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::filesystem::path& path);

}  // namespace dcs
