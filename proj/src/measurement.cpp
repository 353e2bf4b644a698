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

#include "dcs/measurement.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace dcs {

MeasurementEnsemble::MeasurementEnsemble(Matrix a, std::optional<Matrix> u, std::optional<Vector> c)
    : a_(std::move(a)), u_(std::move(u)), c_(std::move(c)) {}

MeasurementEnsemble MeasurementEnsemble::from_matrix(Matrix a) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw std::invalid_argument("measurement matrix must be non-empty");
  }
  return MeasurementEnsemble(std::move(a), std::nullopt, std::nullopt);
}

MeasurementEnsemble MeasurementEnsemble::from_factors(Matrix u, Vector c) {
  if (u.rows() == 0 || u.cols() == 0 || u.cols() != c.size()) {
    throw std::invalid_argument("factor dimensions do not agree");
  }
  if (u.rows() > u.cols()) {
    throw std::invalid_argument("factorized ensembles need K <= L");
  }
  if ((c.array() <= 0.0).any() || !c.allFinite()) {
    throw std::invalid_argument("column scalings must be positive and finite");
  }
  Matrix a(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.cols(); ++i) a.col(i) = u.col(i) * c(i);
  return MeasurementEnsemble(std::move(a), std::move(u), std::move(c));
}

MeasurementEnsemble MeasurementEnsemble::from_orthogonal_rows(const Matrix& m,
                                                              const std::vector<int>& rows,
                                                              ColumnScaling scaling) {
  const Eigen::Index L = m.cols();
  if (m.rows() != L) throw std::invalid_argument("parent matrix must be square");
  if (rows.empty() || static_cast<Eigen::Index>(rows.size()) > L) {
    throw std::invalid_argument("row selection must pick between 1 and L rows");
  }
  std::vector<bool> seen(L, false);
  Matrix u(rows.size(), L);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const int r = rows[j];
    if (r < 0 || r >= L || seen[r]) throw std::invalid_argument("row selection must be distinct and in range");
    seen[r] = true;
    u.row(j) = m.row(r);
  }
  Vector c = Vector::Ones(L);
  if (scaling == ColumnScaling::kUnitNorm) {
    for (Eigen::Index i = 0; i < L; ++i) {
      const double energy = u.col(i).squaredNorm();
      if (!(energy > 0.0)) throw std::runtime_error("degenerate all-zero column in row selection");
      c(i) = std::sqrt(1.0 / energy);
    }
  }
  return from_factors(std::move(u), std::move(c));
}

const Matrix& MeasurementEnsemble::u() const {
  if (!u_) throw std::logic_error("ensemble carries no U * C factorization");
  return *u_;
}

const Vector& MeasurementEnsemble::c() const {
  if (!c_) throw std::logic_error("ensemble carries no U * C factorization");
  return *c_;
}

double MeasurementEnsemble::c_bar_sq() const { return c().squaredNorm() / static_cast<double>(c().size()); }

Matrix random_orthogonal_matrix(int L, Rng& rng) {
  if (L <= 0) throw std::invalid_argument("dimension must be positive");
  std::normal_distribution<double> gauss;
  Matrix g(L, L);
  // Column-major fill keeps the draw order well defined.
  for (Eigen::Index k = 0; k < g.size(); ++k) g.data()[k] = gauss(rng);
  Eigen::BDCSVD<Matrix> svd(g, Eigen::ComputeFullU);
  return svd.matrixU();
}

Matrix orthonormal_dct_matrix(int L) {
  if (L <= 0) throw std::invalid_argument("dimension must be positive");
  Matrix m(L, L);
  const double scale0 = std::sqrt(1.0 / L);
  const double scale = std::sqrt(2.0 / L);
  for (int k = 0; k < L; ++k) {
    for (int n = 0; n < L; ++n) {
      m(k, n) = (k == 0 ? scale0 : scale) * std::cos(std::numbers::pi * (n + 0.5) * k / L);
    }
  }
  return m;
}

std::vector<int> select_rows(int K, int L, Rng& rng) {
  if (K <= 0 || K > L) throw std::invalid_argument("need 0 < K <= L");
  std::vector<int> index(L);
  std::iota(index.begin(), index.end(), 0);
  for (int k = 0; k < K; ++k) {
    std::uniform_int_distribution<int> pick(k, L - 1);
    std::swap(index[k], index[pick(rng)]);
  }
  index.resize(K);
  return index;
}

MeasurementEnsemble build_svd_ensemble(int K, int L, Rng& rng, ColumnScaling scaling) {
  if (K <= 0 || K > L) throw std::invalid_argument("need 0 < K <= L");
  const Matrix m = random_orthogonal_matrix(L, rng);
  return MeasurementEnsemble::from_orthogonal_rows(m, select_rows(K, L, rng), scaling);
}

MeasurementEnsemble build_dct_ensemble(int K, int L, Rng& rng, ColumnScaling scaling) {
  if (K <= 0 || K > L) throw std::invalid_argument("need 0 < K <= L");
  return MeasurementEnsemble::from_orthogonal_rows(orthonormal_dct_matrix(L), select_rows(K, L, rng),
                                                   scaling);
}

Vector draw_unit_noise(int K, Rng& rng) {
  std::normal_distribution<double> gauss;
  Vector n(K);
  for (int k = 0; k < K; ++k) n(k) = gauss(rng);
  return n;
}

ChannelOutput apply_channel(const MeasurementEnsemble& ensemble, const Vector& x, double sigma_n_sq,
                            const Vector& unit_noise) {
  if (!(sigma_n_sq >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
  if (x.size() != ensemble.cols() || unit_noise.size() != ensemble.rows()) {
    throw std::invalid_argument("channel dimensions do not agree");
  }
  ChannelOutput out;
  out.y = ensemble.a() * x;
  if (sigma_n_sq > 0.0) out.y += std::sqrt(sigma_n_sq) * unit_noise;
  out.sigma_n_sq = sigma_n_sq;
  return out;
}

ChannelOutput apply_channel(const MeasurementEnsemble& ensemble, const Vector& x, double sigma_n_sq,
                            Rng& rng) {
  if (!(sigma_n_sq >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
  return apply_channel(ensemble, x, sigma_n_sq, draw_unit_noise(ensemble.rows(), rng));
}

double noise_level_db_to_variance(double level_db) { return std::pow(10.0, -level_db / 10.0); }

namespace {

constexpr const char* kEnsembleMagic = "dcs-ensemble";

void write_row(std::ostream& os, const auto& row) {
  char buf[32];
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    auto res = std::to_chars(buf, buf + sizeof(buf), static_cast<double>(row(j)));
    if (j) os << ' ';
    os.write(buf, res.ptr - buf);
  }
  os << '\n';
}

void read_values(std::istream& is, double* dst, Eigen::Index n, const std::filesystem::path& path) {
  std::string token;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(is >> token)) throw std::runtime_error(path.string() + ": truncated ensemble file");
    auto res = std::from_chars(token.data(), token.data() + token.size(), dst[k]);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
      throw std::runtime_error(path.string() + ": bad number '" + token + "'");
    }
  }
}

}  // namespace

void save_ensemble(const MeasurementEnsemble& ensemble, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error(path.string() + ": cannot open for writing");
  const bool factored = ensemble.has_factorization();
  os << kEnsembleMagic << " 1 " << (factored ? "factored" : "plain") << '\n';
  os << ensemble.rows() << ' ' << ensemble.cols() << '\n';
  if (factored) {
    write_row(os, ensemble.c());
    const Matrix& u = ensemble.u();
    for (Eigen::Index r = 0; r < u.rows(); ++r) write_row(os, u.row(r));
  } else {
    const Matrix& a = ensemble.a();
    for (Eigen::Index r = 0; r < a.rows(); ++r) write_row(os, a.row(r));
  }
  if (!os) throw std::runtime_error(path.string() + ": write failed");
}

MeasurementEnsemble load_ensemble(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error(path.string() + ": cannot open for reading");
  std::string magic, kind;
  int version = 0;
  is >> magic >> version >> kind;
  if (magic != kEnsembleMagic || version != 1 || (kind != "factored" && kind != "plain")) {
    throw std::runtime_error(path.string() + ": not a version-1 ensemble file");
  }
  long K = 0, L = 0;
  if (!(is >> K >> L) || K <= 0 || L <= 0) throw std::runtime_error(path.string() + ": bad dimensions");
  // Files are row-major; read into a row-major buffer.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(K, L);
  if (kind == "factored") {
    Vector c(L);
    read_values(is, c.data(), L, path);
    read_values(is, rows.data(), K * L, path);
    return MeasurementEnsemble::from_factors(Matrix(rows), std::move(c));
  }
  read_values(is, rows.data(), K * L, path);
  return MeasurementEnsemble::from_matrix(Matrix(rows));
}

}  // namespace dcs
