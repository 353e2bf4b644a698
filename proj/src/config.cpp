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

// Experiment config files:
//
//   dcs-config 1
//   # comment
//   key = value
//
// Lists are separated by spaces or commas. noise_db also accepts
// start:step:stop. Per-level tables use db:value pairs.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dcs/harness.hpp"

namespace dcs {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == ',' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != ',' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view s, int line) {
  T value{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail(line, "bad number '" + std::string(s) + "'");
  return value;
}

std::vector<double> parse_levels(std::string_view value, int line) {
  std::vector<double> out;
  if (value.find(':') != std::string_view::npos) {
    const auto first = value.find(':');
    const auto second = value.find(':', first + 1);
    if (second == std::string_view::npos) fail(line, "range must be start:step:stop");
    const double start = parse_number<double>(trim(value.substr(0, first)), line);
    const double step = parse_number<double>(trim(value.substr(first + 1, second - first - 1)), line);
    const double stop = parse_number<double>(trim(value.substr(second + 1)), line);
    if (!(step > 0.0) || stop < start) fail(line, "range needs step > 0 and stop >= start");
    const long n = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long k = 0; k < n; ++k) out.push_back(start + k * step);
    return out;
  }
  for (auto tok : split_list(value)) out.push_back(parse_number<double>(tok, line));
  return out;
}

template <typename V>
std::map<double, V> parse_table(std::string_view value, int line) {
  std::map<double, V> out;
  for (auto tok : split_list(value)) {
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos) fail(line, "expected db:value, got '" + std::string(tok) + "'");
    out[parse_number<double>(tok.substr(0, colon), line)] = parse_number<V>(tok.substr(colon + 1), line);
  }
  return out;
}

FinalQuantizer parse_quantizer(std::string_view v, int line) {
  if (v == "elementwise") return FinalQuantizer::kElementwise;
  if (v == "sparsity_matched") return FinalQuantizer::kSparsityMatched;
  fail(line, "quantizer must be elementwise or sparsity_matched");
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  ExperimentConfig config;
  std::vector<std::string> algorithm_names = {"ims", "tsr", "iht", "ist", "omp"};
  std::optional<int> max_iters;
  std::optional<double> early_exit_tol;
  std::optional<FinalQuantizer> ims_quantizer;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view sv = trim(raw);
    if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = trim(sv.substr(0, hash));
    if (sv.empty()) continue;
    if (!header_seen) {
      if (sv != "dcs-config 1") fail(line, "expected header 'dcs-config 1'");
      header_seen = true;
      continue;
    }
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) fail(line, "expected key = value");
    const std::string key(trim(sv.substr(0, eq)));
    const std::string_view value = trim(sv.substr(eq + 1));

    if (key == "L") config.L = parse_number<int>(value, line);
    else if (key == "K") config.K = parse_number<int>(value, line);
    else if (key == "s") config.s = parse_number<int>(value, line);
    else if (key == "trials") config.trials = parse_number<int>(value, line);
    else if (key == "seed") config.master_seed = parse_number<std::uint64_t>(value, line);
    else if (key == "threads") config.threads = parse_number<int>(value, line);
    else if (key == "noise_db") config.noise_levels_db = parse_levels(value, line);
    else if (key == "algorithms") {
      algorithm_names.clear();
      for (auto tok : split_list(value)) algorithm_names.emplace_back(tok);
    } else if (key == "ensemble_mode") {
      if (value == "fresh_per_trial") config.ensemble_mode = EnsembleMode::kFreshPerTrial;
      else if (value == "fixed") config.ensemble_mode = EnsembleMode::kFixed;
      else fail(line, "ensemble_mode must be fresh_per_trial or fixed");
    } else if (key == "ensemble_kind") {
      if (value == "svd") config.ensemble_kind = EnsembleKind::kSvd;
      else if (value == "dct") config.ensemble_kind = EnsembleKind::kDct;
      else fail(line, "ensemble_kind must be svd or dct");
    } else if (key == "max_iters") max_iters = parse_number<int>(value, line);
    else if (key == "early_exit_tol") early_exit_tol = parse_number<double>(value, line);
    else if (key == "ims_quantizer") ims_quantizer = parse_quantizer(value, line);
    else if (key == "ist_tau") config.ist_tau_by_db = parse_table<double>(value, line);
    else if (key == "omp_iters") config.omp_iters_by_db = parse_table<int>(value, line);
    else if (key == "ist_tuning_trials") config.ist_tuning.trials = parse_number<int>(value, line);
    else if (key == "ist_tuning_multipliers") {
      config.ist_tuning.multipliers.clear();
      for (auto tok : split_list(value)) config.ist_tuning.multipliers.push_back(parse_number<double>(tok, line));
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }
  if (!header_seen) throw std::invalid_argument("config: missing 'dcs-config 1' header");

  for (const auto& name : algorithm_names) {
    AlgorithmSpec spec = algorithm_from_name(name);
    if (max_iters) spec.config.max_iters = *max_iters;
    if (early_exit_tol) spec.config.early_exit_tol = *early_exit_tol;
    if (ims_quantizer && (spec.id == AlgorithmId::kIms || spec.id == AlgorithmId::kImsGenie)) {
      spec.config.final_quantizer = ims_quantizer;
    }
    config.algorithms.push_back(std::move(spec));
  }
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error(path.string() + ": cannot open config");
  std::stringstream buf;
  buf << is.rdbuf();
  try {
    return parse_experiment_config(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace dcs
