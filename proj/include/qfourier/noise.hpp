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

// Shot-based execution with depolarizing gate errors and readout flips,
// simulated as pure-state Monte-Carlo trajectories.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qfourier/dataset.hpp"
#include "qfourier/param_circuit.hpp"
#include "qfourier/training.hpp"

namespace qfourier {

struct NoiseModel {
    double p_1q = 2.789e-4;
    double p_2q = 2.656e-3;
    double p_readout = 8.423e-3;
    std::size_t shots = 4096;

    /// All error rates zero; shot noise only.
    [[nodiscard]] static NoiseModel noiseless(std::size_t shots = 4096);
    void validate() const;
};

/// Per-group empirical <Z>. Shot s of this call draws from the stream
/// derived from (seed, stream, s), so results do not depend on shot order.
[[nodiscard]] std::vector<double> sample_expectation(const ParamCircuit &circuit,
                                                     std::span<const double> x,
                                                     std::span<const double> theta,
                                                     const NoiseModel &noise, std::uint64_t seed,
                                                     std::uint64_t stream = 0);

struct NoisyEvaluation {
    std::vector<std::size_t> rows;
    std::vector<double> predictions;
    std::vector<double> targets;
    double r2 = 0.0;
};

/// Group-combined estimates for the given dataset rows; row r uses stream r.
[[nodiscard]] NoisyEvaluation noisy_evaluate(const ParamCircuit &circuit, const Dataset &data,
                                             std::span<const std::size_t> rows,
                                             std::span<const double> theta,
                                             const NoiseModel &noise, std::uint64_t seed);

/// `k` distinct rows drawn from `rows` with a seeded shuffle, returned ascending.
[[nodiscard]] std::vector<std::size_t> subset_rows(std::span<const std::size_t> rows,
                                                   std::size_t k, std::uint64_t seed);

inline constexpr std::size_t kNoisyTrainParamLimit = 300;

/// Adam on noisy losses with parameter-shift gradients (two shifted
/// evaluations per parameter per iteration). Experimental.
[[nodiscard]] TrainReport noisy_train(const ParamCircuit &circuit, const Dataset &data,
                                      const TrainConfig &config, const NoiseModel &noise,
                                      std::uint64_t seed,
                                      std::size_t max_params = kNoisyTrainParamLimit,
                                      const ProgressFn &progress = {});

} // namespace qfourier
