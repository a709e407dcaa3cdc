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

// Experiment presets comparing frequency-selected or dimensionally
// separated models against dense or all-mixed ones.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qfourier/analysis.hpp"
#include "qfourier/circuit.hpp"
#include "qfourier/config.hpp"
#include "qfourier/training.hpp"

namespace qfourier {

struct VariantSpec {
    std::string name;
    ModelConfig model; ///< blocks_per_layer is chosen per budget
};

struct ExperimentPreset {
    std::string name;
    std::string target_name;
    TargetSpec target;
    DataConfig data;
    TrainConfig train;
    std::size_t n_runs = 3;
    std::vector<VariantSpec> variants;
    /// Parameter budgets; each variant uses the largest B that fits.
    std::vector<std::size_t> budgets;
    AnalysisConfig analysis;
};

/// "exp2d" or "exp4d". Full scale (--paper-scale) uses the 50x50 / 20^4 grids, 5000
/// iterations and 100 runs.
[[nodiscard]] ExperimentPreset make_preset(const std::string &name, bool paper_scale = false);

/// Keeps only the named variants, in preset order. Unknown names are errors.
void select_variants(ExperimentPreset &preset, const std::vector<std::string> &names);

/// Largest B whose parameter count fits the budget, if any.
[[nodiscard]] std::optional<std::size_t> blocks_for_budget(ModelConfig model, std::size_t budget);

struct VariantResult {
    std::string name;
    ModelConfig model;
    std::size_t budget = 0;
    std::size_t n_params = 0;
    std::vector<TrainReport> runs;
    RunSummary r2_test;
    RunSummary r2_train;
};

struct ExperimentResult {
    std::vector<VariantResult> variants;
    std::vector<std::string> skipped; ///< variant/budget pairs with no fitting B
    /// Coefficients of the best run of the best parallel variant.
    std::optional<std::size_t> best_parallel;
    std::optional<CoefficientTable> model_coefficients;
    std::optional<CoefficientTable> target_coefficients;
    std::optional<CoefficientDiff> coefficient_diff;
};

using LogFn = std::function<void(const std::string &)>;

[[nodiscard]] ExperimentResult run_experiment(const ExperimentPreset &preset,
                                              const LogFn &log = {});

[[nodiscard]] nlohmann::json to_json(const ExperimentPreset &preset);
[[nodiscard]] nlohmann::json to_json(const ExperimentResult &result);

} // namespace qfourier
