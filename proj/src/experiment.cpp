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
#include "qfourier/experiment.hpp"

#include <algorithm>

#include "qfourier/errors.hpp"

namespace qfourier {

using nlohmann::json;

namespace {

ModelConfig variant(Architecture arch, std::vector<double> prefactors, std::size_t d,
                    std::vector<std::vector<std::size_t>> groups = {}) {
    ModelConfig m;
    m.architecture = arch;
    m.prefactors.assign(d, std::move(prefactors));
    m.groups = std::move(groups);
    return m;
}

} // namespace

ExperimentPreset make_preset(const std::string &name, bool paper_scale) {
    ExperimentPreset p;
    p.name = name;
    p.train.iterations = paper_scale ? 5000 : 3000;
    p.n_runs = paper_scale ? 100 : 3;
    if (name == "exp2d") {
        p.target_name = "t2d";
        p.target = TargetSpec::t2d();
        p.data.points_per_dim = paper_scale ? 50 : 30;
        const std::vector<double> selected{10.0, 20.0};
        const std::vector<double> dense{1.0, 3.0, 9.0, 27.0};
        p.variants = {
            {"selected-parallel", variant(Architecture::Parallel, selected, 2)},
            {"dense-parallel", variant(Architecture::Parallel, dense, 2)},
            {"selected-serial", variant(Architecture::Serial, selected, 2)},
            {"dense-serial", variant(Architecture::Serial, dense, 2)},
        };
        p.budgets = {240, 336};
        p.analysis.n_grid = 128;
        p.analysis.limit = 63;
    } else if (name == "exp4d") {
        p.target_name = "t4d";
        p.target = TargetSpec::t4d();
        p.data.points_per_dim = paper_scale ? 20 : 12;
        const std::vector<double> pf{10.0, 30.0};
        const std::vector<std::vector<std::size_t>> separated{{0, 1}, {2, 3}};
        p.variants = {
            {"separated-parallel", variant(Architecture::Parallel, pf, 4, separated)},
            {"all-mixed-parallel", variant(Architecture::Parallel, pf, 4)},
            {"separated-serial", variant(Architecture::Serial, pf, 4, separated)},
            {"all-mixed-serial", variant(Architecture::Serial, pf, 4)},
        };
        p.budgets = {144};
        // Every frequency is a multiple of 10: sample one period of x / 10.
        p.analysis.n_grid = 16;
        p.analysis.limit = 40;
        p.analysis.stride = {10, 10, 10, 10};
    } else {
        throw ConfigError("unknown experiment preset \"" + name + "\" (expected exp2d or exp4d)");
    }
    return p;
}

void select_variants(ExperimentPreset &preset, const std::vector<std::string> &names) {
    for (const auto &n : names) {
        const bool known = std::any_of(preset.variants.begin(), preset.variants.end(),
                                       [&](const VariantSpec &v) { return v.name == n; });
        if (!known) {
            throw ConfigError("preset " + preset.name + " has no variant \"" + n + "\"");
        }
    }
    std::erase_if(preset.variants, [&](const VariantSpec &v) {
        return std::find(names.begin(), names.end(), v.name) == names.end();
    });
}

std::optional<std::size_t> blocks_for_budget(ModelConfig model, std::size_t budget) {
    model.blocks_per_layer = 1;
    const std::size_t per_block = param_count(model);
    if (per_block == 0 || per_block > budget) {
        return std::nullopt;
    }
    return budget / per_block;
}

ExperimentResult run_experiment(const ExperimentPreset &preset, const LogFn &log) {
    auto say = [&](const std::string &msg) {
        if (log) {
            log(msg);
        }
    };
    // Validate everything before training anything.
    for (const auto &v : preset.variants) {
        v.model.validate();
        if (v.model.n_features() != preset.target.d) {
            throw ConfigError("variant " + v.name + " does not match the target dimension");
        }
    }
    preset.train.validate();
    if (preset.n_runs < 1) {
        throw ConfigError("n_runs must be at least 1");
    }
    const Dataset data =
        make_dataset(preset.target, preset.data.points_per_dim, preset.data.row_cap);

    ExperimentResult result;
    for (std::size_t budget : preset.budgets) {
        for (const auto &v : preset.variants) {
            const auto blocks = blocks_for_budget(v.model, budget);
            if (!blocks) {
                result.skipped.push_back(v.name + "@" + std::to_string(budget));
                continue;
            }
            VariantResult vr;
            vr.name = v.name;
            vr.model = v.model;
            vr.model.blocks_per_layer = *blocks;
            vr.budget = budget;
            vr.n_params = param_count(vr.model);
            say(v.name + ": budget " + std::to_string(budget) + ", B = " + std::to_string(*blocks) +
                ", " + std::to_string(vr.n_params) + " parameters");
            vr.runs = multi_run(vr.model, data, preset.train, preset.n_runs);
            std::vector<double> test;
            std::vector<double> train;
            for (const auto &r : vr.runs) {
                test.push_back(r.r2_test);
                train.push_back(r.r2_train);
                say("  seed " + std::to_string(r.seed) + ": r2_test " + std::to_string(r.r2_test));
            }
            vr.r2_test = summarize_runs(test);
            vr.r2_train = summarize_runs(train);
            result.variants.push_back(std::move(vr));
        }
    }

    for (std::size_t i = 0; i < result.variants.size(); ++i) {
        const auto &v = result.variants[i];
        if (v.model.architecture != Architecture::Parallel) {
            continue;
        }
        if (!result.best_parallel ||
            v.r2_test.median > result.variants[*result.best_parallel].r2_test.median) {
            result.best_parallel = i;
        }
    }
    if (result.best_parallel) {
        const auto &v = result.variants[*result.best_parallel];
        const auto best = std::max_element(
            v.runs.begin(), v.runs.end(),
            [](const TrainReport &a, const TrainReport &b) { return a.r2_test < b.r2_test; });
        say("coefficients: " + v.name + ", seed " + std::to_string(best->seed));
        const ParamCircuit circuit = build_circuit(v.model);
        const auto freqs =
            frequency_box(preset.target.d, preset.analysis.limit,
                          preset.analysis.stride.empty() ? 1 : preset.analysis.stride.front());
        result.model_coefficients =
            dft_coefficients(model_function(circuit, best->final_theta), preset.target.d, freqs,
                             preset.analysis.n_grid, preset.analysis.stride);
        result.target_coefficients =
            dft_coefficients(scaled_target_function(preset.target, data.scaling),
                             preset.target.d, freqs, preset.analysis.n_grid,
                             preset.analysis.stride);
        result.coefficient_diff =
            coefficient_diff(*result.model_coefficients, *result.target_coefficients);
    }
    return result;
}

json to_json(const ExperimentPreset &p) {
    json variants = json::array();
    for (const auto &v : p.variants) {
        json m = to_json(v.model);
        m.erase("blocks_per_layer");
        variants.push_back(json{{"name", v.name}, {"model", m}});
    }
    return json{{"schema_version", kSchemaVersion},
                {"preset", p.name},
                {"target", p.target_name},
                {"data", {{"points_per_dim", p.data.points_per_dim}, {"row_cap", p.data.row_cap}}},
                {"train", to_json(p.train)},
                {"n_runs", p.n_runs},
                {"budgets", p.budgets},
                {"variants", variants},
                {"analysis",
                 {{"n_grid", p.analysis.n_grid},
                  {"limit", p.analysis.limit},
                  {"stride", p.analysis.stride}}}};
}

json to_json(const ExperimentResult &r) {
    json variants = json::array();
    for (const auto &v : r.variants) {
        json runs = json::array();
        for (const auto &run : v.runs) {
            runs.push_back(to_json(run));
        }
        variants.push_back(json{{"name", v.name},
                                {"budget", v.budget},
                                {"blocks_per_layer", v.model.blocks_per_layer},
                                {"n_params", v.n_params},
                                {"r2_test", to_json(v.r2_test)},
                                {"r2_train", to_json(v.r2_train)},
                                {"runs", runs}});
    }
    json j{{"variants", variants}, {"skipped", r.skipped}};
    if (r.best_parallel) {
        j["best_parallel"] = r.variants[*r.best_parallel].name + "@" +
                             std::to_string(r.variants[*r.best_parallel].budget);
    }
    if (r.coefficient_diff) {
        j["coefficient_diff_max_abs"] = r.coefficient_diff->max_abs;
        j["coefficient_diff_argmax"] = r.coefficient_diff->argmax;
    }
    return j;
}

} // namespace qfourier
