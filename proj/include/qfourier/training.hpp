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

// Full-batch Adam training of circuit models on a train/test split.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qfourier/circuit.hpp"
#include "qfourier/dataset.hpp"
#include "qfourier/engine.hpp"

namespace qfourier {

[[nodiscard]] double mse(std::span<const double> pred, std::span<const double> actual);
/// 1 - SS_res / SS_tot. Throws DegenerateError if `actual` is constant.
[[nodiscard]] double r2(std::span<const double> pred, std::span<const double> actual);

struct TrainConfig {
    double learning_rate = 0.001;
    std::size_t iterations = 5000;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double init_low = 0.0;
    double init_high = 2.0 * std::numbers::pi;
    std::uint64_t seed = 42;
    EngineKind engine = EngineKind::Auto;
    /// Record the test MSE every iteration (costs one extra prediction pass).
    bool track_test_loss = false;

    void validate() const;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::size_t step = 0;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam update in place. Throws NumericError on a
/// non-finite gradient, tagged with the step index.
void adam_step(AdamState &state, std::span<double> theta, std::span<const double> grad,
               const TrainConfig &config);

struct TrainReport {
    std::vector<double> loss_history; ///< train MSE before each update
    std::vector<double> test_loss_history;
    std::vector<double> initial_theta;
    std::vector<double> final_theta;
    double final_train_mse = 0.0;
    double final_test_mse = 0.0;
    double r2_train = 0.0;
    double r2_test = 0.0;
    double wall_time = 0.0; ///< seconds; excluded from reproducibility checks
    std::uint64_t seed = 0;
    std::string engine;
};

/// Uniform initialization in [init_low, init_high) from the run's init stream.
[[nodiscard]] std::vector<double> initial_parameters(std::size_t n, const TrainConfig &config);

/// Called after every update with (iteration, train loss before the update).
using ProgressFn = std::function<void(std::size_t, double)>;

/// Trains on split(data, config.seed).
[[nodiscard]] TrainReport train(const ParamCircuit &circuit, const Dataset &data,
                                const TrainConfig &config, const ProgressFn &progress = {});
[[nodiscard]] TrainReport train(const ParamCircuit &circuit, const Dataset &data,
                                const Split &split, const TrainConfig &config,
                                const ProgressFn &progress = {});

/// Run k uses seed base + k for both initialization and split.
[[nodiscard]] std::vector<TrainReport> multi_run(const ModelConfig &model, const Dataset &data,
                                                 const TrainConfig &config, std::size_t n_runs);

} // namespace qfourier
