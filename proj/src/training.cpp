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
#include "qfourier/training.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "qfourier/errors.hpp"
#include "qfourier/rng.hpp"

namespace qfourier {

namespace {

void check_lengths(std::span<const double> pred, std::span<const double> actual) {
    if (pred.size() != actual.size()) {
        throw ContractError("length mismatch: " + std::to_string(pred.size()) + " predictions, " +
                            std::to_string(actual.size()) + " targets");
    }
    if (pred.empty()) {
        throw ContractError("metrics need at least one value");
    }
}

std::vector<double> gather(std::span<const double> values, std::span<const std::size_t> rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        out.push_back(values[r]);
    }
    return out;
}

} // namespace

double mse(std::span<const double> pred, std::span<const double> actual) {
    check_lengths(pred, actual);
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double r = pred[i] - actual[i];
        s += r * r;
    }
    return s / static_cast<double>(pred.size());
}

double r2(std::span<const double> pred, std::span<const double> actual) {
    check_lengths(pred, actual);
    double mean = 0.0;
    for (double a : actual) {
        mean += a;
    }
    mean /= static_cast<double>(actual.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        ss_tot += (actual[i] - mean) * (actual[i] - mean);
        ss_res += (actual[i] - pred[i]) * (actual[i] - pred[i]);
    }
    if (!(ss_tot > 0.0)) {
        throw DegenerateError("R2 is undefined for targets with zero variance");
    }
    return 1.0 - ss_res / ss_tot;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning_rate must be positive");
    }
    if (iterations < 1) {
        throw ConfigError("iterations must be at least 1");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ConfigError("Adam betas must lie in [0, 1)");
    }
    if (!(epsilon > 0.0)) {
        throw ConfigError("Adam epsilon must be positive");
    }
    if (!(init_low < init_high) || !std::isfinite(init_low) || !std::isfinite(init_high)) {
        throw ConfigError("init_low must be below init_high");
    }
}

void adam_step(AdamState &state, std::span<double> theta, std::span<const double> grad,
               const TrainConfig &config) {
    if (theta.size() != grad.size() || state.m.size() != theta.size() ||
        state.v.size() != theta.size()) {
        throw ContractError("Adam state, parameters and gradient differ in length");
    }
    const std::size_t t = state.step + 1;
    for (double g : grad) {
        if (!std::isfinite(g)) {
            throw NumericError("non-finite gradient", t);
        }
    }
    state.step = t;
    const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(t));
    for (std::size_t k = 0; k < theta.size(); ++k) {
        state.m[k] = config.beta1 * state.m[k] + (1.0 - config.beta1) * grad[k];
        state.v[k] = config.beta2 * state.v[k] + (1.0 - config.beta2) * grad[k] * grad[k];
        const double mhat = state.m[k] / c1;
        const double vhat = state.v[k] / c2;
        theta[k] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.epsilon);
    }
}

std::vector<double> initial_parameters(std::size_t n, const TrainConfig &config) {
    Rng rng = make_rng(config.seed, Stream::Init);
    std::vector<double> theta(n);
    for (double &t : theta) {
        t = config.init_low + (config.init_high - config.init_low) * uniform01(rng);
    }
    return theta;
}

TrainReport train(const ParamCircuit &circuit, const Dataset &data, const TrainConfig &config,
                  const ProgressFn &progress) {
    config.validate();
    return train(circuit, data, split(data, config.seed), config, progress);
}

TrainReport train(const ParamCircuit &circuit, const Dataset &data, const Split &split,
                  const TrainConfig &config, const ProgressFn &progress) {
    config.validate();
    if (circuit.n_features() != data.dims()) {
        throw ContractError("circuit has " + std::to_string(circuit.n_features()) +
                            " features, dataset has " + std::to_string(data.dims()));
    }
    const auto start = std::chrono::steady_clock::now();
    auto engine = make_engine(circuit, data.inputs, data.targets, split.train, config.engine);

    TrainReport report;
    report.seed = config.seed;
    report.engine = std::string(engine->name());
    std::vector<double> theta = initial_parameters(circuit.n_params(), config);
    report.initial_theta = theta;
    report.loss_history.reserve(config.iterations);

    const std::vector<double> y_train = gather(data.targets, split.train);
    const std::vector<double> y_test = gather(data.targets, split.test);
    std::vector<double> grad(theta.size());
    AdamState adam(theta.size());
    for (std::size_t it = 0; it < config.iterations; ++it) {
        const double loss = engine->loss_and_gradient(theta, grad);
        if (!std::isfinite(loss)) {
            throw NumericError("non-finite training loss", it);
        }
        report.loss_history.push_back(loss);
        if (config.track_test_loss) {
            report.test_loss_history.push_back(mse(engine->predict(theta, split.test), y_test));
        }
        try {
            adam_step(adam, theta, grad, config);
        } catch (const NumericError &) {
            throw NumericError("non-finite gradient during training", it);
        }
        if (progress) {
            progress(it, loss);
        }
    }

    const std::vector<double> p_train = engine->predict(theta, split.train);
    const std::vector<double> p_test = engine->predict(theta, split.test);
    report.final_train_mse = mse(p_train, y_train);
    report.final_test_mse = mse(p_test, y_test);
    report.r2_train = r2(p_train, y_train);
    report.r2_test = r2(p_test, y_test);
    report.final_theta = std::move(theta);
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<TrainReport> multi_run(const ModelConfig &model, const Dataset &data,
                                   const TrainConfig &config, std::size_t n_runs) {
    if (n_runs < 1) {
        throw ConfigError("n_runs must be at least 1");
    }
    const ParamCircuit circuit = build_circuit(model);
    std::vector<TrainReport> out;
    out.reserve(n_runs);
    for (std::size_t k = 0; k < n_runs; ++k) {
        TrainConfig run = config;
        run.seed = config.seed + k;
        out.push_back(train(circuit, data, run));
    }
    return out;
}

} // namespace qfourier
