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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dcs/harness.hpp"
#include "json.hpp"

namespace dcs {

namespace {

constexpr const char* kCsvHeader = "algorithm,noise_db,trials,errors,total,ser,ci_low,ci_high,diverged,failed";

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error(path.string() + ": cannot open for writing");
  os << content;
  if (!os) throw std::runtime_error(path.string() + ": write failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error(path.string() + ": cannot open for reading");
  std::stringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

template <typename T>
T field(std::string_view s, int line) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("csv line " + std::to_string(line) + ": bad field '" + std::string(s) + "'");
  }
  return v;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_csv(const SerCurve& curve) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& p : curve.points) {
    if (p.algorithm.find_first_of(",\n\"") != std::string::npos) {
      throw std::invalid_argument("algorithm label '" + p.algorithm + "' cannot be written to CSV");
    }
    out += p.algorithm + ',' + shortest(p.noise_db) + ',' + std::to_string(p.trials) + ',' +
           std::to_string(p.errors) + ',' + std::to_string(p.total) + ',' + shortest(p.ser) + ',' +
           shortest(p.ci_low) + ',' + shortest(p.ci_high) + ',' + std::to_string(p.diverged) + ',' +
           std::to_string(p.failed) + '\n';
  }
  return out;
}

void emit_csv(const SerCurve& curve, const std::filesystem::path& path) { write_file(path, format_csv(curve)); }

SerCurve parse_csv(std::string_view text) {
  SerCurve curve;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (line == 1) {
      if (raw != kCsvHeader) throw std::invalid_argument("csv: unexpected header");
      continue;
    }
    if (raw.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view sv = raw;
    for (std::size_t pos; (pos = sv.find(',')) != std::string_view::npos; sv.remove_prefix(pos + 1)) {
      f.push_back(sv.substr(0, pos));
    }
    f.push_back(sv);
    if (f.size() != 10) throw std::invalid_argument("csv line " + std::to_string(line) + ": expected 10 fields");
    SerPoint p;
    p.algorithm = std::string(f[0]);
    p.noise_db = field<double>(f[1], line);
    p.trials = field<long>(f[2], line);
    p.errors = field<long>(f[3], line);
    p.total = field<long>(f[4], line);
    p.ser = field<double>(f[5], line);
    p.ci_low = field<double>(f[6], line);
    p.ci_high = field<double>(f[7], line);
    p.diverged = field<long>(f[8], line);
    p.failed = field<long>(f[9], line);
    curve.points.push_back(std::move(p));
  }
  if (line == 0) throw std::invalid_argument("csv: empty input");
  return curve;
}

SerCurve load_csv(const std::filesystem::path& path) {
  try {
    return parse_csv(read_file(path));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

std::string format_svg(const SerCurve& curve, const SvgOptions& options) {
  constexpr double width = 720, height = 480;
  constexpr double left = 70, right = 170, top = 40, bottom = 50;
  constexpr const char* palette[] = {"#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                     "#1f77b4", "#8c564b", "#e377c2", "#17becf"};
  const double floor = options.ser_floor > 0.0 ? options.ser_floor : 1e-6;

  double x_min = 0.0, x_max = 1.0;
  if (!curve.points.empty()) {
    x_min = x_max = curve.points.front().noise_db;
    for (const auto& p : curve.points) {
      x_min = std::min(x_min, p.noise_db);
      x_max = std::max(x_max, p.noise_db);
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  const double decades_lo = std::floor(std::log10(floor));
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double db) { return left + (db - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double ser) {
    const double l = std::log10(std::max(ser, floor));
    return top + (0.0 - l) / (0.0 - decades_lo) * plot_h;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"20\" text-anchor=\"middle\">" << escape_xml(options.title)
       << "</text>\n";
  }
  for (int d = 0; d >= static_cast<int>(decades_lo); --d) {
    const double y = py(std::pow(10.0, d));
    os << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w << "\" y2=\"" << y
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  for (const auto& p : curve.series(curve.algorithms().empty() ? "" : curve.algorithms().front())) {
    os << "<text x=\"" << px(p.noise_db) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">"
       << shortest(p.noise_db) << "</text>\n";
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
     << "\" text-anchor=\"middle\">1/sigma_n^2 [dB]</text>\n";
  os << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 16 " << top + plot_h / 2
     << ")\" text-anchor=\"middle\">SER</text>\n";

  const auto names = curve.algorithms();
  for (std::size_t k = 0; k < names.size(); ++k) {
    const char* color = palette[k % std::size(palette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : curve.series(names[k])) os << px(p.noise_db) << ',' << py(p.ser) << ' ';
    os << "\"/>\n";
    const double ly = top + 16 + 18 * k;
    os << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + plot_w + 36
       << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + plot_w + 42 << "\" y=\"" << ly << "\">" << escape_xml(names[k]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_svg(const SerCurve& curve, const std::filesystem::path& path, const SvgOptions& options) {
  write_file(path, format_svg(curve, options));
}

void emit_manifest(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::filesystem::path& path) {
  using nlohmann::json;
  json j;
  j["format"] = "dcs-manifest-1";
  j["L"] = config.L;
  j["K"] = config.K;
  j["s"] = config.s;
  j["trials"] = config.trials;
  j["master_seed"] = config.master_seed;
  j["ensemble_mode"] = config.ensemble_mode == EnsembleMode::kFixed ? "fixed" : "fresh_per_trial";
  j["ensemble_kind"] = config.ensemble_kind == EnsembleKind::kDct ? "dct" : "svd";
  j["noise_db"] = config.noise_levels_db;
  json algs = json::array();
  for (const auto& a : config.algorithms) {
    algs.push_back({{"label", a.label}, {"max_iters", a.config.max_iters}, {"stop_eps", a.config.stop_eps},
                    {"early_exit_tol", a.config.early_exit_tol}});
  }
  j["algorithms"] = algs;
  json taus = json::array();
  for (const auto& [db, tau] : result.ist_tau_by_db) taus.push_back({{"noise_db", db}, {"tau", tau}});
  j["ist_tau"] = taus;
  json omp = json::array();
  for (const auto& [db, n] : result.omp_iters_by_db) omp.push_back({{"noise_db", db}, {"iters", n}});
  j["omp_iters"] = omp;
  json failures = json::array();
  for (const auto& f : result.failures) {
    failures.push_back({{"trial", f.trial}, {"algorithm", f.algorithm}, {"noise_db", f.noise_db}, {"message", f.message}});
  }
  j["failures"] = failures;
  write_file(path, j.dump(2) + "\n");
}

}  // namespace dcs
