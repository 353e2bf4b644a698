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

#include <filesystem>
#include <optional>
#include <vector>

#include "dcs/common.hpp"

namespace dcs {

/// How columns of a row-selected orthogonal matrix are rescaled.
enum class ColumnScaling {
  kUnitNorm,  ///< c_i^2 = 1 / sum_j U_ji^2, every column of A has unit norm.
  kNone,      ///< C = I, the rows of A stay orthonormal.
};

/// Measurement matrix A (K x L). When built from a row-selected orthogonal
/// matrix it also carries the factorization A = U * diag(c), where U has
/// orthonormal rows.
class MeasurementEnsemble {
 public:
  /// Plain matrix without factorization metadata.
  static MeasurementEnsemble from_matrix(Matrix a);
  /// A = U * diag(c). U must have orthonormal rows, c must be positive.
  static MeasurementEnsemble from_factors(Matrix u, Vector c);
  /// Selects `rows` (distinct) of the orthogonal matrix `m` and rescales.
  static MeasurementEnsemble from_orthogonal_rows(const Matrix& m, const std::vector<int>& rows,
                                                  ColumnScaling scaling);

  const Matrix& a() const { return a_; }
  int rows() const { return static_cast<int>(a_.rows()); }
  int cols() const { return static_cast<int>(a_.cols()); }

  bool has_factorization() const { return u_.has_value(); }
  /// Throws std::logic_error when there is no factorization.
  const Matrix& u() const;
  const Vector& c() const;
  /// Mean of c_i^2.
  double c_bar_sq() const;

 private:
  MeasurementEnsemble(Matrix a, std::optional<Matrix> u, std::optional<Vector> c);

  Matrix a_;
  std::optional<Matrix> u_;
  std::optional<Vector> c_;
};

/// Left singular factor of an L x L i.i.d. standard Gaussian matrix.
Matrix random_orthogonal_matrix(int L, Rng& rng);
/// Orthonormal DCT-II matrix, row k = frequency k.
Matrix orthonormal_dct_matrix(int L);
/// K distinct indices drawn uniformly from [0, L), in draw order.
std::vector<int> select_rows(int K, int L, Rng& rng);

MeasurementEnsemble build_svd_ensemble(int K, int L, Rng& rng,
                                       ColumnScaling scaling = ColumnScaling::kUnitNorm);
MeasurementEnsemble build_dct_ensemble(int K, int L, Rng& rng,
                                       ColumnScaling scaling = ColumnScaling::kUnitNorm);

struct ChannelOutput {
  Vector y;
  double sigma_n_sq = 0.0;
};

/// y = A x + n with n ~ N(0, sigma_n_sq I).
ChannelOutput apply_channel(const MeasurementEnsemble& ensemble, const Vector& x,
                            double sigma_n_sq, Rng& rng);
/// Same channel with a caller-supplied standard-normal draw: n = sqrt(sigma_n_sq) * unit_noise.
ChannelOutput apply_channel(const MeasurementEnsemble& ensemble, const Vector& x,
                            double sigma_n_sq, const Vector& unit_noise);
Vector draw_unit_noise(int K, Rng& rng);

/// sigma_n^2 = 10^(-level_db / 10), where the level is 1/sigma_n^2 in dB.
double noise_level_db_to_variance(double level_db);

/// Text format, see docs in README: header line, dimensions, c vector, U rows.
/// Plain matrices store A directly.
void save_ensemble(const MeasurementEnsemble& ensemble, const std::filesystem::path& path);
MeasurementEnsemble load_ensemble(const std::filesystem::path& path);

}  // namespace dcs
