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
#include "qfourier/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qfourier/errors.hpp"

namespace qfourier {

std::vector<std::vector<std::size_t>> ModelConfig::resolved_groups() const {
    std::vector<std::vector<std::size_t>> out = groups;
    if (out.empty()) {
        out.emplace_back(n_features());
        std::iota(out.back().begin(), out.back().end(), std::size_t{0});
    }
    for (auto &g : out) {
        std::sort(g.begin(), g.end());
    }
    return out;
}

void ModelConfig::validate() const {
    if (prefactors.empty()) {
        throw ConfigError("model needs at least one feature");
    }
    for (std::size_t f = 0; f < prefactors.size(); ++f) {
        if (prefactors[f].empty()) {
            throw ConfigError("feature " + std::to_string(f) + " has no prefactors");
        }
        for (double p : prefactors[f]) {
            if (!std::isfinite(p) || p <= 0.0) {
                throw ConfigError("feature " + std::to_string(f) +
                                  " has a non-positive prefactor");
            }
        }
    }
    if (blocks_per_layer < 1) {
        throw ConfigError("blocks_per_layer must be at least 1");
    }
    if (encoding_axis == GateKind::ROT || encoding_axis == GateKind::CNOT) {
        throw ConfigError("encoding axis must be RX, RY or RZ");
    }
    std::vector<int> seen(n_features(), 0);
    for (const auto &g : resolved_groups()) {
        if (g.empty()) {
            throw ConfigError("groups must not be empty");
        }
        for (std::size_t f : g) {
            if (f >= n_features()) {
                throw ConfigError("group references unknown feature " + std::to_string(f));
            }
            ++seen[f];
        }
    }
    for (std::size_t f = 0; f < seen.size(); ++f) {
        if (seen[f] != 1) {
            throw ConfigError("groups must partition the features; feature " +
                              std::to_string(f) + " appears " + std::to_string(seen[f]) +
                              " times");
        }
    }
}

std::size_t encoding_layers(const ModelConfig &config) {
    if (config.architecture == Architecture::Parallel) {
        return 1;
    }
    std::size_t layers = 0;
    for (const auto &p : config.prefactors) {
        layers = std::max(layers, p.size());
    }
    return layers;
}

std::size_t qubit_count(const ModelConfig &config) {
    config.validate();
    if (config.architecture == Architecture::Serial) {
        return config.n_features();
    }
    std::size_t n = 0;
    for (const auto &p : config.prefactors) {
        n += p.size();
    }
    return n;
}

std::size_t param_count(const ModelConfig &config) {
    return (encoding_layers(config) + 1) * config.blocks_per_layer * 3 * qubit_count(config);
}

MixedSpectrum model_spectrum(const ModelConfig &config) {
    config.validate();
    return mixed_spectrum(config.prefactors, config.resolved_groups());
}

SufficiencyReport parameter_sufficiency(const ModelConfig &config) {
    SufficiencyReport r;
    r.n_params = param_count(config);
    r.spectrum_cardinality = mixed_cardinality(model_spectrum(config)).total;
    r.sufficient = r.n_params >= r.spectrum_cardinality;
    return r;
}

ParamCircuit build_circuit(const ModelConfig &config) {
    config.validate();
    const auto groups = config.resolved_groups();
    const std::size_t d = config.n_features();

    // Qubit assignment. Parallel: one qubit per (feature, prefactor), features
    // ascending, prefactors ascending. Serial: one qubit per feature.
    struct Encoding {
        std::size_t qubit;
        std::size_t feature;
        double prefactor;
        std::size_t layer;
    };
    std::vector<Encoding> encodings;
    std::vector<std::size_t> feature_qubit_base(d, 0);
    std::size_t n_qubits = 0;
    for (std::size_t f = 0; f < d; ++f) {
        std::vector<double> p = config.prefactors[f];
        std::stable_sort(p.begin(), p.end());
        feature_qubit_base[f] = n_qubits;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (config.architecture == Architecture::Parallel) {
                encodings.push_back({n_qubits + k, f, p[k], 0});
            } else {
                encodings.push_back({n_qubits, f, p[k], k});
            }
        }
        n_qubits += config.architecture == Architecture::Parallel ? p.size() : 1;
    }

    std::vector<std::vector<std::size_t>> qubit_groups;
    for (const auto &g : groups) {
        std::vector<std::size_t> qubits;
        for (const auto &e : encodings) {
            if (std::find(g.begin(), g.end(), e.feature) != g.end()) {
                qubits.push_back(e.qubit);
            }
        }
        std::sort(qubits.begin(), qubits.end());
        qubits.erase(std::unique(qubits.begin(), qubits.end()), qubits.end());
        qubit_groups.push_back(std::move(qubits));
    }

    const std::size_t layers = encoding_layers(config);
    std::vector<Gate> gates;
    std::size_t slot = 0;
    for (std::size_t layer = 0; layer <= layers; ++layer) {
        for (const auto &qubits : qubit_groups) {
            for (std::size_t b = 0; b < config.blocks_per_layer; ++b) {
                // Bottom wire is the highest index.
                for (std::size_t k = qubits.size(); k-- > 0;) {
                    if (k + 1 < qubits.size()) {
                        gates.push_back(Gate::cnot(qubits[k + 1], qubits[k]));
                    }
                    gates.push_back(Gate::rot(qubits[k], slot));
                    slot += 3;
                }
            }
        }
        if (layer == layers) {
            break;
        }
        for (const auto &e : encodings) {
            if (e.layer == layer) {
                gates.push_back(Gate::rotation(config.encoding_axis, e.qubit,
                                               FeatureAngle{e.feature, e.prefactor}));
            }
        }
    }
    return ParamCircuit(n_qubits, d, std::move(gates), std::move(qubit_groups), config.combine);
}

} // namespace qfourier
