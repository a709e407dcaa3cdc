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

// Fourier analysis of models and targets: DFT coefficient tables,
// coefficient differences, a classical Fourier least-squares fit and
// multi-run summaries.

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qfourier/dataset.hpp"
#include "qfourier/param_circuit.hpp"

namespace qfourier {

using FrequencyVector = std::vector<long long>;

/// Coefficients c_w of f(x) = sum_w c_w exp(i w . x), in the order requested.
struct CoefficientTable {
    std::size_t n_grid = 0;
    std::vector<long long> stride; ///< per-dimension sampling stride
    std::vector<FrequencyVector> frequencies;
    std::vector<Complex> values;

    [[nodiscard]] std::size_t dims() const noexcept { return stride.size(); }
    [[nodiscard]] std::optional<Complex> find(const FrequencyVector &omega) const;
};

/// Real-valued function of a d-dimensional input.
using Evaluable = std::function<double(std::span<const double>)>;

/// Every integer vector in [-limit, limit]^d (step `stride` per dimension).
[[nodiscard]] std::vector<FrequencyVector> frequency_box(std::size_t d, long long limit,
                                                         long long stride = 1);

/// Coefficients on the endpoint-excluded grid x_j = (-pi + 2 pi j / n) / g
/// per dimension, where g is that dimension's stride (default 1). With
/// g > 1 only frequencies that are multiples of g are resolvable, and the
/// alias-free condition is n > 2 max |w / g|. Throws ConfigError naming the
/// offending frequency otherwise.
[[nodiscard]] CoefficientTable dft_coefficients(const Evaluable &f, std::size_t d,
                                                const std::vector<FrequencyVector> &freq_set,
                                                std::size_t n_grid,
                                                std::vector<long long> stride = {});

/// Model output as an evaluable; the circuit must outlive it.
[[nodiscard]] Evaluable model_function(const ParamCircuit &circuit, std::vector<double> theta);
/// Scaled target y = a t(x) + b with the dataset's output scaling.
[[nodiscard]] Evaluable scaled_target_function(const TargetSpec &spec, const Scaling &scaling);

struct CoefficientDiff {
    std::vector<FrequencyVector> frequencies;
    std::vector<Complex> diff; ///< model - target
    double max_abs = 0.0;
    FrequencyVector argmax;
};

[[nodiscard]] CoefficientDiff coefficient_diff(const CoefficientTable &model,
                                               const CoefficientTable &target);

struct FourierFit {
    std::vector<FrequencyVector> frequencies;
    double intercept = 0.0;
    std::vector<double> cos_coef;
    std::vector<double> sin_coef;
    double r2_train = 0.0;
    double r2_test = 0.0;

    [[nodiscard]] double predict(std::span<const double> x) const;
};

/// Least squares on [1, cos(w . x), sin(w . x)] over the train rows.
/// Throws ContractError if there are fewer than 2 |F| + 1 train rows and
/// DegenerateError for a rank-deficient design.
[[nodiscard]] FourierFit fourier_least_squares(const Dataset &data, const Split &split,
                                               const std::vector<FrequencyVector> &freq_set);

struct RunSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Linear-interpolation percentiles at position q (n - 1).
[[nodiscard]] double percentile(std::vector<double> values, double q);
[[nodiscard]] RunSummary summarize_runs(std::span<const double> scores);

/// Columns w1..wd,re,im.
void write_coefficients_csv(std::ostream &out, const CoefficientTable &table);

} // namespace qfourier
