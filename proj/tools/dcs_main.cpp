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

// dcs: discrete sparse recovery experiments.
//
//   dcs run       Monte Carlo SER curves (CSV, SVG, JSON manifest)
//   dcs genie     IMS/Q vs genie-aided variance ablation
//   dcs tune-ist  IST threshold grid search
//   dcs curves    soft-feedback characteristic curves as CSV
//   dcs ensemble  draw and save a measurement matrix
//   dcs verify    oracle-equivalence checks
//
// Output goes to --out-dir, else $DCS_OUTPUT_DIR, else the working directory.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dcs/estimators.hpp"
#include "dcs/harness.hpp"
#include "verify.hpp"

namespace {

struct RunOptions {
  std::string config_path;
  std::optional<int> L, K, s, trials, threads;
  std::optional<std::uint64_t> seed;
  std::string algorithms;
  std::string noise_db;
  std::string out_dir;
  std::string name = "run";
};

std::filesystem::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("DCS_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "Experiment config file (dcs-config 1)");
  cmd->add_option("--L", o.L, "Signal length");
  cmd->add_option("--K", o.K, "Number of measurements");
  cmd->add_option("--s", o.s, "Sparsity");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per noise level");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--algorithms", o.algorithms, "Comma-separated algorithm names");
  cmd->add_option("--noise-db", o.noise_db, "Noise levels 1/sigma_n^2 in dB: list or start:step:stop");
  cmd->add_option("-o,--out-dir", o.out_dir, "Output directory");
  cmd->add_option("-n,--name", o.name, "Output file stem");
}

dcs::ExperimentConfig build_config(const RunOptions& o, std::string_view preset) {
  std::string text;
  if (!o.config_path.empty()) {
    std::ifstream is(o.config_path);
    if (!is) throw std::runtime_error(o.config_path + ": cannot open config");
    std::stringstream buf;
    buf << is.rdbuf();
    text = buf.str();
  } else {
    text = std::string(preset);
  }
  std::ostringstream extra;
  if (o.L) extra << "L = " << *o.L << '\n';
  if (o.K) extra << "K = " << *o.K << '\n';
  if (o.s) extra << "s = " << *o.s << '\n';
  if (o.trials) extra << "trials = " << *o.trials << '\n';
  if (o.seed) extra << "seed = " << *o.seed << '\n';
  if (o.threads) extra << "threads = " << *o.threads << '\n';
  if (!o.algorithms.empty()) extra << "algorithms = " << o.algorithms << '\n';
  if (!o.noise_db.empty()) extra << "noise_db = " << o.noise_db << '\n';
  // Later keys override earlier ones.
  return dcs::parse_experiment_config(text + "\n" + extra.str());
}

constexpr std::string_view kDefaultPreset = R"(dcs-config 1
L = 258
K = 129
s = 20
trials = 2000
noise_db = 15:1:21
algorithms = ims tsr iht ist omp
)";

constexpr std::string_view kGeniePreset = R"(dcs-config 1
L = 258
K = 129
s = 20
trials = 2000
noise_db = 10:1:16
algorithms = ims ims_genie_ee ims_genie_dd ims_genie_both
)";

void print_curve(const dcs::SerCurve& curve) {
  std::printf("%-18s %8s %8s %12s %12s %12s %8s %6s\n", "algorithm", "dB", "trials", "errors", "SER", "CI high",
              "diverged", "failed");
  for (const auto& p : curve.points) {
    std::printf("%-18s %8.2f %8ld %12ld %12.4e %12.4e %8ld %6ld\n", p.algorithm.c_str(), p.noise_db, p.trials,
                p.errors, p.ser, p.ci_high, p.diverged, p.failed);
  }
}

int run_experiment_command(const RunOptions& o, std::string_view preset, const std::string& title) {
  const dcs::ExperimentConfig config = build_config(o, preset);
  const dcs::ExperimentResult result = dcs::run_experiment(config);
  const auto dir = output_dir(o.out_dir);
  dcs::emit_csv(result.curve, dir / (o.name + ".csv"));
  dcs::emit_svg(result.curve, dir / (o.name + ".svg"), {1e-6, title});
  dcs::emit_manifest(config, result, dir / (o.name + ".json"));
  print_curve(result.curve);
  if (!result.failures.empty()) {
    std::fprintf(stderr, "%zu trial failures recorded in %s\n", result.failures.size(),
                 (dir / (o.name + ".json")).string().c_str());
  }
  std::printf("wrote %s.{csv,svg,json} in %s\n", o.name.c_str(), dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recovery of discrete-valued sparse vectors: IMS/Q, TSR/Q and baselines"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run a Monte Carlo SER experiment");
  add_run_options(run, run_opts);

  RunOptions genie_opts;
  genie_opts.name = "genie";
  auto* genie = app.add_subcommand("genie", "IMS/Q with genie-aided error variances");
  add_run_options(genie, genie_opts);

  RunOptions tune_opts;
  tune_opts.name = "ist_tau";
  auto* tune = app.add_subcommand("tune-ist", "Tune the IST threshold per noise level");
  add_run_options(tune, tune_opts);

  auto* curves = app.add_subcommand("curves", "Dump soft-feedback characteristic curves as CSV");
  std::vector<double> curve_vars = {0.01, 0.05, 0.5};
  int curve_L = 100, curve_s = 10, curve_points = 401;
  double x_min = -2.0, x_max = 2.0, curve_tau = 0.5;
  std::string curve_out;
  curves->add_option("--sigma-sq", curve_vars, "Error variances")->delimiter(',');
  curves->add_option("--L", curve_L, "Signal length");
  curves->add_option("--s", curve_s, "Sparsity");
  curves->add_option("--points", curve_points, "Samples per curve")->check(CLI::Range(2, 1000000));
  curves->add_option("--x-min", x_min);
  curves->add_option("--x-max", x_max);
  curves->add_option("--tau", curve_tau, "Soft-threshold level for the comparison column");
  curves->add_option("-o,--out", curve_out, "CSV file (default: stdout)");

  auto* ensemble = app.add_subcommand("ensemble", "Draw an SVD or DCT ensemble and save it");
  int ens_K = 129, ens_L = 258;
  std::uint64_t ens_seed = 1;
  std::string ens_kind = "svd", ens_out = "ensemble.txt";
  ensemble->add_option("--K", ens_K);
  ensemble->add_option("--L", ens_L);
  ensemble->add_option("--seed", ens_seed);
  ensemble->add_option("--kind", ens_kind)->check(CLI::IsMember({"svd", "dct"}));
  ensemble->add_option("-o,--out", ens_out);

  auto* verify = app.add_subcommand("verify", "Run the oracle-equivalence checks");
  std::uint64_t verify_seed = 2016;
  verify->add_option("--seed", verify_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_experiment_command(run_opts, kDefaultPreset, "SER vs noise level");
    if (*genie) return run_experiment_command(genie_opts, kGeniePreset, "IMS/Q genie ablation");
    if (*tune) {
      dcs::ExperimentConfig config = build_config(tune_opts, kDefaultPreset);
      if (std::none_of(config.algorithms.begin(), config.algorithms.end(),
                       [](const auto& a) { return a.id == dcs::AlgorithmId::kIst; })) {
        config.algorithms.push_back(dcs::algorithm_from_name("ist"));
      }
      const auto table = dcs::tune_ist_tau(config);
      const auto path = output_dir(tune_opts.out_dir) / (tune_opts.name + ".txt");
      std::ofstream os(path);
      os << "# noise_db tau\n";
      std::printf("%8s %12s\n", "dB", "tau");
      for (const auto& [db, tau] : table) {
        std::printf("%8.2f %12.6g\n", db, tau);
        os << db << ' ' << tau << '\n';
      }
      std::ostringstream line;
      for (const auto& [db, tau] : table) line << ' ' << db << ':' << tau;
      std::printf("config line:\nist_tau =%s\n", line.str().c_str());
      return 0;
    }
    if (*curves) {
      const dcs::SignalPrior prior(curve_L, curve_s);
      std::ostringstream os;
      os << "sigma_e_sq,x_tilde,soft_mean,soft_variance,hard,soft_threshold\n";
      for (double var : curve_vars) {
        for (int i = 0; i < curve_points; ++i) {
          const double x = x_min + (x_max - x_min) * i / (curve_points - 1);
          const dcs::SoftValue sv = dcs::soft_feedback(x, var, prior);
          const double hard = prior.alphabet().nearest(x);
          const double shrunk = dcs::threshold_soft(dcs::Vector::Constant(1, x), curve_tau)(0);
          os << var << ',' << x << ',' << sv.mean << ',' << sv.variance << ',' << hard << ',' << shrunk << '\n';
        }
      }
      if (curve_out.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream(curve_out) << os.str();
      }
      return 0;
    }
    if (*ensemble) {
      const auto ens = dcs::draw_ensemble(ens_K, ens_L, ens_kind == "dct" ? dcs::EnsembleKind::kDct : dcs::EnsembleKind::kSvd,
                                          ens_seed);
      dcs::save_ensemble(ens, ens_out);
      std::printf("wrote %dx%d ensemble (c_bar^2 = %.6f) to %s\n", ens.rows(), ens.cols(), ens.c_bar_sq(),
                  ens_out.c_str());
      return 0;
    }
    if (*verify) {
      bool ok = true;
      for (const auto& c : dcs::verify::run_all(verify_seed)) {
        std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        ok = ok && c.passed;
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dcs: %s\n", e.what());
    return 2;
  }
  return 0;
}
