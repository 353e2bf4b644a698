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

#include "dcs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <tuple>

#include "dcs/estimators.hpp"

namespace dcs {

namespace {

constexpr std::uint64_t kTrialStream = 1;
constexpr std::uint64_t kTuningStream = 2;
constexpr std::uint64_t kFixedEnsembleStream = 3;
constexpr std::uint64_t kEnsembleTag = 1;
constexpr std::uint64_t kSignalTag = 2;
constexpr std::uint64_t kNoiseTag = 3;

struct NamedAlgorithm {
  const char* name;
  const char* label;
  AlgorithmId id;
  GenieMode genie = GenieMode::kNone;
  TsrVarianceRule tsr_rule = TsrVarianceRule::kPrinted;
};

constexpr NamedAlgorithm kAlgorithms[] = {
    {"ims", "IMS/Q", AlgorithmId::kIms},
    {"ims_genie_ee", "IMS/Q genie ee", AlgorithmId::kImsGenie, GenieMode::kTrueEe},
    {"ims_genie_dd", "IMS/Q genie dd", AlgorithmId::kImsGenie, GenieMode::kTrueDd},
    {"ims_genie_both", "IMS/Q genie both", AlgorithmId::kImsGenie, GenieMode::kBoth},
    {"tsr", "TSR/Q", AlgorithmId::kTsr},
    {"tsr_zdomain", "TSR/Q z-var", AlgorithmId::kTsr, GenieMode::kNone, TsrVarianceRule::kZDomain},
    {"iht", "IHT/Q", AlgorithmId::kIht},
    {"ist", "IST/Q", AlgorithmId::kIst},
    {"omp", "OMP/Q", AlgorithmId::kOmp},
    {"ml", "ML", AlgorithmId::kMl},
};

double level_variance(double db) { return noise_level_db_to_variance(db); }

}  // namespace

AlgorithmSpec algorithm_from_name(std::string_view name) {
  for (const auto& a : kAlgorithms) {
    if (name == a.name) {
      AlgorithmSpec spec{a.label, a.id, {}};
      spec.config.genie_mode = a.genie;
      spec.config.tsr_variance_rule = a.tsr_rule;
      return spec;
    }
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::vector<std::string> known_algorithm_names() {
  std::vector<std::string> out;
  for (const auto& a : kAlgorithms) out.emplace_back(a.name);
  return out;
}

std::vector<double> IstTuning::default_multipliers() {
  std::vector<double> m;
  for (int k = 1; k <= 40; ++k) m.push_back(0.05 * k);
  return m;
}

void ExperimentConfig::validate() const {
  if (L <= 0 || K <= 0 || K > L) throw std::invalid_argument("need 0 < K <= L");
  if (s < 0 || s > L) throw std::invalid_argument("need 0 <= s <= L");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  for (double db : noise_levels_db) {
    if (!std::isfinite(db)) throw std::invalid_argument("noise levels must be finite");
  }
  std::vector<std::string> labels;
  for (const auto& a : algorithms) {
    a.config.validate();
    if (std::find(labels.begin(), labels.end(), a.label) != labels.end()) {
      throw std::invalid_argument("duplicate algorithm label '" + a.label + "'");
    }
    labels.push_back(a.label);
  }
  if (ist_tuning.trials < 1 || ist_tuning.multipliers.empty()) {
    throw std::invalid_argument("IST tuning needs trials >= 1 and a non-empty grid");
  }
}

int default_omp_iters(double noise_db, int K) {
  const int iters = static_cast<int>(std::lround(23.0 + (noise_db - 15.0) * 10.0 / 6.0));
  return std::clamp(iters, 1, std::max(K, 1));
}

SymbolErrors ser(const Vector& x_hat, const Vector& x_true) {
  if (x_hat.size() != x_true.size()) throw std::invalid_argument("ser: length mismatch");
  return {static_cast<long>((x_hat.array() != x_true.array()).count()), static_cast<long>(x_true.size())};
}

const SerPoint* SerCurve::find(std::string_view algorithm, double noise_db) const {
  for (const auto& p : points) {
    if (p.algorithm == algorithm && p.noise_db == noise_db) return &p;
  }
  return nullptr;
}

std::vector<std::string> SerCurve::algorithms() const {
  std::vector<std::string> out;
  for (const auto& p : points) {
    if (std::find(out.begin(), out.end(), p.algorithm) == out.end()) out.push_back(p.algorithm);
  }
  return out;
}

std::vector<SerPoint> SerCurve::series(std::string_view algorithm) const {
  std::vector<SerPoint> out;
  for (const auto& p : points) {
    if (p.algorithm == algorithm) out.push_back(p);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SerPoint& a, const SerPoint& b) { return a.noise_db < b.noise_db; });
  return out;
}

std::pair<double, double> wilson_interval(long errors, long total) {
  if (total <= 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(total);
  const double p = errors / n;
  const double z2n = z * z / n;
  const double center = (p + 0.5 * z2n) / (1.0 + z2n);
  const double half = z / (1.0 + z2n) * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
  const double lo = errors == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = errors == total ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return derive_seed(master_seed, kTrialStream, trial);
}

MeasurementEnsemble draw_ensemble(int K, int L, EnsembleKind kind, std::uint64_t seed) {
  Rng rng(seed);
  return kind == EnsembleKind::kDct ? build_dct_ensemble(K, L, rng) : build_svd_ensemble(K, L, rng);
}

TrialInstance draw_trial(const ExperimentConfig& config, std::uint64_t seed,
                         const MeasurementEnsemble* fixed_ensemble) {
  const SignalPrior prior(config.L, config.s);
  Rng signal_rng(derive_seed(seed, kSignalTag));
  Rng noise_rng(derive_seed(seed, kNoiseTag));
  MeasurementEnsemble ensemble =
      fixed_ensemble ? *fixed_ensemble
                     : draw_ensemble(config.K, config.L, config.ensemble_kind, derive_seed(seed, kEnsembleTag));
  Vector x = generate_sparse_signal(prior, signal_rng);
  Vector noise = draw_unit_noise(config.K, noise_rng);
  return {std::move(ensemble), std::move(x), std::move(noise)};
}

RecoveryResult run_algorithm(const AlgorithmSpec& spec, const Vector& y,
                             const MeasurementEnsemble& ensemble, double sigma_n_sq,
                             const SignalPrior& prior, const Vector& x_true) {
  switch (spec.id) {
    case AlgorithmId::kIms:
      return ims_q(y, ensemble, sigma_n_sq, prior, spec.config);
    case AlgorithmId::kImsGenie:
      return ims_q_genie(y, ensemble, sigma_n_sq, prior, spec.config, x_true);
    case AlgorithmId::kTsr:
      return tsr_q(y, ensemble, sigma_n_sq, prior, spec.config);
    case AlgorithmId::kIht:
      return iht_q(y, ensemble.a(), prior, spec.config);
    case AlgorithmId::kIst:
      return ist_q(y, ensemble.a(), prior, spec.config);
    case AlgorithmId::kOmp:
      return omp_q(y, ensemble.a(), prior, spec.config);
    case AlgorithmId::kMl: {
      RecoveryResult r;
      r.x_hat = ml_oracle(y, ensemble.a(), prior);
      r.x_soft = r.x_hat;
      return r;
    }
  }
  throw std::logic_error("unhandled algorithm id");
}

namespace {

int worker_count(int requested, int jobs) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(n, 1, std::max(jobs, 1));
}

// Runs body(index, worker) for index in [0, jobs) across workers. Work is handed
// out through an atomic counter; the caller merges per-worker state.
template <typename Body>
void parallel_for(int jobs, int workers, Body body) {
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) body(i, 0);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < jobs; i = next++) body(i, w);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = jobs;
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

std::optional<MeasurementEnsemble> fixed_ensemble_for(const ExperimentConfig& config) {
  if (config.ensemble_mode != EnsembleMode::kFixed) return std::nullopt;
  return draw_ensemble(config.K, config.L, config.ensemble_kind,
                       derive_seed(config.master_seed, kFixedEnsembleStream));
}

}  // namespace

std::map<double, double> tune_ist_tau(const ExperimentConfig& config) {
  config.validate();
  const SignalPrior prior(config.L, config.s);
  const auto fixed = fixed_ensemble_for(config);
  const auto& grid = config.ist_tuning.multipliers;
  const std::size_t levels = config.noise_levels_db.size();
  const int jobs = config.ist_tuning.trials;
  const int workers = worker_count(config.threads, jobs);

  RecoveryConfig base;
  for (const auto& a : config.algorithms) {
    if (a.id == AlgorithmId::kIst) base = a.config;
  }

  // errors[worker][level * grid + g]
  std::vector<std::vector<long>> errors(workers, std::vector<long>(levels * grid.size(), 0));
  parallel_for(jobs, workers, [&](int t, int w) {
    const TrialInstance inst =
        draw_trial(config, derive_seed(config.master_seed, kTuningStream, t), fixed ? &*fixed : nullptr);
    for (std::size_t l = 0; l < levels; ++l) {
      const double var = level_variance(config.noise_levels_db[l]);
      const Vector y = apply_channel(inst.ensemble, inst.x, var, inst.unit_noise).y;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        RecoveryConfig rc = base;
        rc.ist_tau = grid[g] * std::sqrt(var);
        const RecoveryResult r = ist_q(y, inst.ensemble.a(), prior, rc);
        errors[w][l * grid.size() + g] += ser(r.x_hat, inst.x).errors;
      }
    }
  });

  std::map<double, double> table;
  for (std::size_t l = 0; l < levels; ++l) {
    const double sigma = std::sqrt(level_variance(config.noise_levels_db[l]));
    long best_errors = -1;
    double best_tau = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      long total = 0;
      for (const auto& per_worker : errors) total += per_worker[l * grid.size() + g];
      const double tau = grid[g] * sigma;
      if (best_errors < 0 || total < best_errors || (total == best_errors && tau < best_tau)) {
        best_errors = total;
        best_tau = tau;
      }
    }
    table[config.noise_levels_db[l]] = best_tau;
  }
  return table;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;

  const bool has_ist = std::any_of(config.algorithms.begin(), config.algorithms.end(),
                                   [](const AlgorithmSpec& a) { return a.id == AlgorithmId::kIst && !a.config.ist_tau; });
  result.ist_tau_by_db = config.ist_tau_by_db;
  if (has_ist) {
    const bool missing = std::any_of(config.noise_levels_db.begin(), config.noise_levels_db.end(),
                                     [&](double db) { return !config.ist_tau_by_db.contains(db); });
    if (missing) {
      for (const auto& [db, tau] : tune_ist_tau(config)) result.ist_tau_by_db.try_emplace(db, tau);
    }
  }
  for (double db : config.noise_levels_db) {
    const auto it = config.omp_iters_by_db.find(db);
    result.omp_iters_by_db[db] = it != config.omp_iters_by_db.end() ? it->second : default_omp_iters(db, config.K);
  }

  const SignalPrior prior(config.L, config.s);
  const auto fixed = fixed_ensemble_for(config);
  const std::size_t levels = config.noise_levels_db.size();
  const std::size_t algs = config.algorithms.size();
  const std::size_t cells = levels * algs;
  const int workers = worker_count(config.threads, config.trials);

  struct Tally {
    std::vector<long> trials, errors, diverged, failed;
    std::vector<TrialFailure> failures;
  };
  std::vector<Tally> tallies(workers);
  for (auto& t : tallies) {
    t.trials.assign(cells, 0);
    t.errors.assign(cells, 0);
    t.diverged.assign(cells, 0);
    t.failed.assign(cells, 0);
  }

  parallel_for(config.trials, workers, [&](int trial, int w) {
    Tally& tally = tallies[w];
    const TrialInstance inst =
        draw_trial(config, trial_seed(config.master_seed, trial), fixed ? &*fixed : nullptr);
    for (std::size_t l = 0; l < levels; ++l) {
      const double db = config.noise_levels_db[l];
      const double var = level_variance(db);
      const Vector y = apply_channel(inst.ensemble, inst.x, var, inst.unit_noise).y;
      for (std::size_t a = 0; a < algs; ++a) {
        AlgorithmSpec spec = config.algorithms[a];
        if (spec.id == AlgorithmId::kIst && !spec.config.ist_tau) {
          spec.config.ist_tau = result.ist_tau_by_db.at(db);
        }
        if (spec.id == AlgorithmId::kOmp && !spec.config.omp_iters) {
          spec.config.omp_iters = result.omp_iters_by_db.at(db);
        }
        const std::size_t cell = l * algs + a;
        try {
          const RecoveryResult r = run_algorithm(spec, y, inst.ensemble, var, prior, inst.x);
          tally.errors[cell] += ser(r.x_hat, inst.x).errors;
          tally.trials[cell] += 1;
          tally.diverged[cell] += r.diverged;
        } catch (const std::exception& e) {
          tally.failed[cell] += 1;
          tally.failures.push_back({trial, spec.label, db, e.what()});
        }
      }
    }
  });

  for (std::size_t a = 0; a < algs; ++a) {
    for (std::size_t l = 0; l < levels; ++l) {
      const std::size_t cell = l * algs + a;
      SerPoint p;
      p.algorithm = config.algorithms[a].label;
      p.noise_db = config.noise_levels_db[l];
      for (const auto& t : tallies) {
        p.trials += t.trials[cell];
        p.errors += t.errors[cell];
        p.diverged += t.diverged[cell];
        p.failed += t.failed[cell];
      }
      p.total = p.trials * config.L;
      p.ser = p.total > 0 ? static_cast<double>(p.errors) / p.total : 0.0;
      std::tie(p.ci_low, p.ci_high) = wilson_interval(p.errors, p.total);
      result.curve.points.push_back(std::move(p));
    }
  }
  for (auto& t : tallies) {
    result.failures.insert(result.failures.end(), t.failures.begin(), t.failures.end());
  }
  std::sort(result.failures.begin(), result.failures.end(), [](const TrialFailure& a, const TrialFailure& b) {
    return std::tie(a.trial, a.noise_db, a.algorithm) < std::tie(b.trial, b.noise_db, b.algorithm);
  });
  return result;
}

SerCurve run_curve(const ExperimentConfig& config) { return run_experiment(config).curve; }

std::optional<double> crossing_level(const std::vector<SerPoint>& series, double target, double floor) {
  auto log_ser = [floor](const SerPoint& p) { return std::log10(std::max(p.ser, floor)); };
  const double goal = std::log10(target);
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].ser > target) continue;
    if (i == 0) return series[0].noise_db;
    const double y0 = log_ser(series[i - 1]);
    const double y1 = log_ser(series[i]);
    const double x0 = series[i - 1].noise_db;
    const double x1 = series[i].noise_db;
    if (y0 == y1) return x1;
    return x0 + (goal - y0) * (x1 - x0) / (y1 - y0);
  }
  return std::nullopt;
}

}  // namespace dcs
