// Copyright 2026 The qfourier Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

// Fourier-series target functions, Cartesian input grids, MinMax scaling
// and seeded train/test splits.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qfourier {

using Complex = std::complex<double>;

/// Dense row-major matrix of doubles.
class RowMatrix {
  public:
    RowMatrix() = default;
    RowMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    RowMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    [[nodiscard]] double &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    [[nodiscard]] const std::vector<double> &data() const noexcept { return data_; }

    friend bool operator==(const RowMatrix &, const RowMatrix &) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct FourierTerm {
    std::vector<double> frequency;
    Complex coefficient;
};

/// t(x) = c0 + sum_terms 2 Re[c exp(i omega . x)].
struct TargetSpec {
    std::size_t d = 1;
    double c0 = 0.0;
    std::vector<FourierTerm> terms;

    /// 2D series over {10, 20, 30}^2 with coefficients 0.05 (1 + i) ... 0.45 (1 + i).
    static TargetSpec t2d();
    /// 4D series with mixed terms inside {x1, x2} and {x3, x4} only.
    static TargetSpec t4d();

    void validate() const;
    /// Frequency vectors of the terms, in term order.
    [[nodiscard]] std::vector<std::vector<double>> frequencies() const;
};

[[nodiscard]] double eval_target(const TargetSpec &spec, std::span<const double> x);

inline constexpr std::size_t kDefaultRowCap = 2'000'000;

/// n^d points, each axis sampling [-pi, pi] uniformly with both endpoints;
/// lexicographic order with the first dimension varying slowest.
[[nodiscard]] RowMatrix cartesian_grid(std::size_t points_per_dim, std::size_t d,
                                       std::size_t row_cap = kDefaultRowCap);

struct Scaling {
    std::vector<double> input_min;
    std::vector<double> input_max;
    double output_min = 0.0;
    double output_max = 0.0;
};

/// Scaled data: inputs in [-pi, pi] per dimension, targets in [-1, 1].
struct Dataset {
    RowMatrix inputs;
    std::vector<double> targets;
    Scaling scaling;

    [[nodiscard]] std::size_t size() const noexcept { return targets.size(); }
    [[nodiscard]] std::size_t dims() const noexcept { return inputs.cols(); }
};

[[nodiscard]] Dataset minmax_scale(const RowMatrix &raw_inputs, std::span<const double> raw_targets);
[[nodiscard]] std::vector<double> unscale_predictions(const Dataset &data,
                                                      std::span<const double> predictions);

/// Samples the target on a grid and scales the result.
[[nodiscard]] Dataset make_dataset(const TargetSpec &spec, std::size_t points_per_dim,
                                   std::size_t row_cap = kDefaultRowCap);

inline constexpr double kTestFraction = 0.2;

struct Split {
    std::vector<std::size_t> train; ///< ascending row indices
    std::vector<std::size_t> test;  ///< ascending row indices
    std::uint64_t seed = 0;
};

/// Seeded shuffle; floor(0.2 N) rows (at least one) go to the test set.
[[nodiscard]] Split split(std::size_t n_rows, std::uint64_t seed);
[[nodiscard]] inline Split split(const Dataset &data, std::uint64_t seed) {
    return split(data.size(), seed);
}

/// CSV with header x1..xd,y.
void write_csv(std::ostream &out, const RowMatrix &inputs, std::span<const double> targets);
struct RawData {
    RowMatrix inputs;
    std::vector<double> targets;
};
[[nodiscard]] RawData read_csv(std::istream &in);

} // namespace qfourier
