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

// Structured run configuration (JSON) and report serialization.
//
// Every section is optional in the input file and falls back to the
// defaults below; unknown keys anywhere are rejected. Reports embed the
// fully resolved configuration so a run can be reproduced from its report.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfourier/analysis.hpp"
#include "qfourier/circuit.hpp"
#include "qfourier/dataset.hpp"
#include "qfourier/noise.hpp"
#include "qfourier/training.hpp"

namespace qfourier {

inline constexpr int kSchemaVersion = 1;

struct DataConfig {
    std::size_t points_per_dim = 30;
    std::size_t row_cap = kDefaultRowCap;
};

struct AnalysisConfig {
    std::size_t n_grid = 128;
    long long limit = 63;         ///< coefficient box [-limit, limit]^d
    std::vector<long long> stride; ///< empty means 1 per dimension
};

struct NoisyEvalConfig {
    std::size_t subset = 50; ///< rows drawn from the test split; 0 means all
    std::uint64_t seed = 7;
};

struct RunConfig {
    std::string target_name = "t2d"; ///< preset name, or "inline"
    TargetSpec target = TargetSpec::t2d();
    DataConfig data;
    ModelConfig model;
    TrainConfig train;
    NoiseModel noise;
    NoisyEvalConfig noisy_eval;
    AnalysisConfig analysis;
    std::size_t n_runs = 1;

    /// Cross-module checks done before any computation.
    void validate() const;
};

[[nodiscard]] TargetSpec target_preset(const std::string &name);

[[nodiscard]] RunConfig parse_config(const nlohmann::json &j);
[[nodiscard]] RunConfig load_config(const std::filesystem::path &path);
[[nodiscard]] nlohmann::json to_json(const RunConfig &config);

[[nodiscard]] nlohmann::json to_json(const ModelConfig &model);
[[nodiscard]] nlohmann::json to_json(const TrainConfig &train);
[[nodiscard]] nlohmann::json to_json(const NoiseModel &noise);
[[nodiscard]] nlohmann::json to_json(const TargetSpec &target);
[[nodiscard]] ModelConfig parse_model(const nlohmann::json &j);
[[nodiscard]] TrainConfig parse_train(const nlohmann::json &j);
[[nodiscard]] NoiseModel parse_noise(const nlohmann::json &j);
[[nodiscard]] TargetSpec parse_target(const nlohmann::json &j);

/// Report body for a training run; wall time is left out on purpose.
[[nodiscard]] nlohmann::json to_json(const TrainReport &report, bool with_history = false);
[[nodiscard]] nlohmann::json to_json(const RunSummary &summary);
[[nodiscard]] nlohmann::json to_json(const CoefficientTable &table);

/// Writes `value` with a trailing newline; creates parent directories.
void write_json(const std::filesystem::path &path, const nlohmann::json &value);
[[nodiscard]] nlohmann::json read_json(const std::filesystem::path &path);

} // namespace qfourier
