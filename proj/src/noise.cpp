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
#include "qfourier/noise.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "qfourier/errors.hpp"
#include "qfourier/rng.hpp"
#include "qfourier/simulator.hpp"

namespace qfourier {

namespace {

/// Error site after each gate: the last op it compiled to and its qubits.
struct Site {
    std::size_t last_op = 0;
    bool two_qubit = false;
    std::size_t q0 = 0;
    std::size_t q1 = 0;
};

std::vector<Site> error_sites(const ParamCircuit &circuit) {
    std::vector<Site> sites;
    const auto &ops = circuit.ops();
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i + 1 < ops.size() && ops[i + 1].gate == ops[i].gate) {
            continue;
        }
        Site s;
        s.last_op = i;
        s.two_qubit = ops[i].is_cnot;
        s.q0 = ops[i].target;
        s.q1 = ops[i].is_cnot ? ops[i].control : ops[i].target;
        sites.push_back(s);
    }
    return sites;
}

constexpr Axis kPaulis[3] = {Axis::X, Axis::Y, Axis::Z};

struct Fault {
    std::size_t op;
    std::size_t qubit;
    Axis pauli;
};

std::size_t sample_index(std::span<const double> cdf, double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<double> cumulative(std::span<const Complex> amps) {
    std::vector<double> cdf(amps.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        acc += std::norm(amps[i]);
        cdf[i] = acc;
    }
    return cdf;
}

StateVector run_with_faults(const ParamCircuit &circuit, std::span<const double> x,
                            std::span<const double> theta, std::span<const Fault> faults) {
    StateVector state(circuit.n_qubits());
    std::size_t f = 0;
    const auto &ops = circuit.ops();
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const Op &op = ops[i];
        state.apply_op(op, op.is_cnot ? 0.0 : op.angle(x, theta));
        for (; f < faults.size() && faults[f].op == i; ++f) {
            state.apply_pauli(faults[f].pauli, faults[f].qubit);
        }
    }
    return state;
}

double combine_groups(const ParamCircuit &circuit, std::span<const double> groups) {
    double s = 0.0;
    for (double g : groups) {
        s += g;
    }
    return circuit.group_weight() * s;
}

} // namespace

NoiseModel NoiseModel::noiseless(std::size_t shots) {
    NoiseModel m;
    m.p_1q = 0.0;
    m.p_2q = 0.0;
    m.p_readout = 0.0;
    m.shots = shots;
    return m;
}

void NoiseModel::validate() const {
    for (double p : {p_1q, p_2q, p_readout}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("noise probabilities must lie in [0, 1]");
        }
    }
    if (shots < 1) {
        throw ConfigError("shots must be at least 1");
    }
}

std::vector<double> sample_expectation(const ParamCircuit &circuit, std::span<const double> x,
                                       std::span<const double> theta, const NoiseModel &noise,
                                       std::uint64_t seed, std::uint64_t stream) {
    noise.validate();
    circuit.check_inputs(x, theta);
    const std::vector<Site> sites = error_sites(circuit);
    const auto &measured = circuit.measurement_qubits();

    // Fault-free shots sample the noiseless distribution.
    const StateVector clean = run_circuit(circuit, x, theta);
    const std::vector<double> clean_cdf = cumulative(clean.amplitudes());

    std::vector<double> sums(measured.size(), 0.0);
    std::vector<Fault> faults;
    const bool gate_noise = noise.p_1q > 0.0 || noise.p_2q > 0.0;
    for (std::size_t shot = 0; shot < noise.shots; ++shot) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(Stream::Shots), stream, shot));
        faults.clear();
        if (gate_noise) {
            for (const Site &s : sites) {
                const double p = s.two_qubit ? noise.p_2q : noise.p_1q;
                if (p > 0.0 && uniform01(rng) < p) {
                    if (s.two_qubit) {
                        // Independent non-identity Pauli on each touched qubit.
                        faults.push_back({s.last_op, s.q1, kPaulis[uniform_index(rng, 3)]});
                        faults.push_back({s.last_op, s.q0, kPaulis[uniform_index(rng, 3)]});
                    } else {
                        faults.push_back({s.last_op, s.q0, kPaulis[uniform_index(rng, 3)]});
                    }
                }
            }
        }
        std::size_t outcome = 0;
        if (faults.empty()) {
            outcome = sample_index(clean_cdf, uniform01(rng));
        } else {
            const StateVector noisy = run_with_faults(circuit, x, theta, faults);
            outcome = sample_index(cumulative(noisy.amplitudes()), uniform01(rng));
        }
        for (std::size_t g = 0; g < measured.size(); ++g) {
            bool bit = ((outcome >> measured[g]) & 1U) != 0U;
            if (noise.p_readout > 0.0 && uniform01(rng) < noise.p_readout) {
                bit = !bit;
            }
            sums[g] += bit ? -1.0 : 1.0;
        }
    }
    for (double &s : sums) {
        s /= static_cast<double>(noise.shots);
    }
    return sums;
}

NoisyEvaluation noisy_evaluate(const ParamCircuit &circuit, const Dataset &data,
                               std::span<const std::size_t> rows, std::span<const double> theta,
                               const NoiseModel &noise, std::uint64_t seed) {
    if (circuit.n_features() != data.dims()) {
        throw ContractError("circuit and dataset dimensions differ");
    }
    NoisyEvaluation out;
    out.rows.assign(rows.begin(), rows.end());
    for (std::size_t r : rows) {
        if (r >= data.size()) {
            throw ContractError("row index " + std::to_string(r) + " out of range");
        }
        const auto groups = sample_expectation(circuit, data.inputs.row(r), theta, noise, seed, r);
        out.predictions.push_back(combine_groups(circuit, groups));
        out.targets.push_back(data.targets[r]);
    }
    out.r2 = r2(out.predictions, out.targets);
    return out;
}

std::vector<std::size_t> subset_rows(std::span<const std::size_t> rows, std::size_t k,
                                     std::uint64_t seed) {
    std::vector<std::size_t> v(rows.begin(), rows.end());
    if (k >= v.size()) {
        std::sort(v.begin(), v.end());
        return v;
    }
    Rng rng = make_rng(seed, Stream::Subset);
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(v[i], v[i + uniform_index(rng, v.size() - i)]);
    }
    v.resize(k);
    std::sort(v.begin(), v.end());
    return v;
}

TrainReport noisy_train(const ParamCircuit &circuit, const Dataset &data,
                        const TrainConfig &config, const NoiseModel &noise, std::uint64_t seed,
                        std::size_t max_params, const ProgressFn &progress) {
    config.validate();
    noise.validate();
    if (circuit.n_features() != data.dims()) {
        throw ContractError("circuit and dataset dimensions differ");
    }
    const std::size_t n = circuit.n_params();
    if (n > max_params) {
        throw ResourceError("noisy training of " + std::to_string(n) +
                            " parameters exceeds the limit of " + std::to_string(max_params) +
                            "; reduce blocks_per_layer or raise the limit");
    }
    // The shift rule needs each slot to drive exactly one Pauli rotation.
    std::vector<int> uses(n, 0);
    for (const Op &op : circuit.ops()) {
        if (!op.is_cnot && op.source == Op::Source::Slot) {
            ++uses[op.index];
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (uses[k] != 1) {
            throw ConfigError("parameter-shift training needs every slot used exactly once");
        }
    }

    const auto start = std::chrono::steady_clock::now();
    const Split sp = split(data, config.seed);
    TrainReport report;
    report.seed = config.seed;
    report.engine = "noisy-parameter-shift";
    std::vector<double> theta = initial_parameters(n, config);
    report.initial_theta = theta;

    std::uint64_t evaluation = 0;
    auto outputs = [&](std::span<const double> t) {
        const std::uint64_t s = derive_seed(seed, evaluation++);
        std::vector<double> f;
        f.reserve(sp.train.size());
        for (std::size_t r : sp.train) {
            f.push_back(combine_groups(
                circuit, sample_expectation(circuit, data.inputs.row(r), t, noise, s, r)));
        }
        return f;
    };

    std::vector<double> y_train;
    for (std::size_t r : sp.train) {
        y_train.push_back(data.targets[r]);
    }
    const double scale = 2.0 / static_cast<double>(sp.train.size());
    std::vector<double> grad(n);
    AdamState adam(n);
    for (std::size_t it = 0; it < config.iterations; ++it) {
        const std::vector<double> f = outputs(theta);
        const double loss = mse(f, y_train);
        report.loss_history.push_back(loss);
        std::vector<double> shifted = theta;
        for (std::size_t k = 0; k < n; ++k) {
            shifted[k] = theta[k] + std::numbers::pi / 2.0;
            const std::vector<double> fp = outputs(shifted);
            shifted[k] = theta[k] - std::numbers::pi / 2.0;
            const std::vector<double> fm = outputs(shifted);
            shifted[k] = theta[k];
            double g = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) {
                g += scale * (f[i] - y_train[i]) * 0.5 * (fp[i] - fm[i]);
            }
            grad[k] = g;
        }
        try {
            adam_step(adam, theta, grad, config);
        } catch (const NumericError &) {
            throw NumericError("non-finite gradient during noisy training", it);
        }
        if (progress) {
            progress(it, loss);
        }
    }

    const NoisyEvaluation train_eval = noisy_evaluate(circuit, data, sp.train, theta, noise,
                                                      derive_seed(seed, evaluation++));
    const NoisyEvaluation test_eval = noisy_evaluate(circuit, data, sp.test, theta, noise,
                                                     derive_seed(seed, evaluation++));
    report.final_train_mse = mse(train_eval.predictions, train_eval.targets);
    report.final_test_mse = mse(test_eval.predictions, test_eval.targets);
    report.r2_train = train_eval.r2;
    report.r2_test = test_eval.r2;
    report.final_theta = std::move(theta);
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace qfourier
