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

// Declarative model description and its compilation into the serial and
// parallel ansatz families.
//
// Every ansatz layer holds `blocks_per_layer` training blocks per group.
// A block walks the group's qubits from the bottom wire upwards: ROT on the
// bottom qubit, then for each next-higher qubit a CNOT controlled by the
// wire below it followed by a ROT on that qubit. Measurement is on the top
// qubit of each group.

#include <cstddef>
#include <vector>

#include "qfourier/param_circuit.hpp"

namespace qfourier {

enum class Architecture { Serial, Parallel };

struct ModelConfig {
    Architecture architecture = Architecture::Parallel;
    /// Encoding prefactors per feature; one feature map per entry.
    std::vector<std::vector<double>> prefactors;
    /// Partition of feature indices into mixed-frequency groups. Empty means
    /// one group with every feature.
    std::vector<std::vector<std::size_t>> groups;
    std::size_t blocks_per_layer = 1;
    GateKind encoding_axis = GateKind::RX;
    Combine combine = Combine::Sum;

    [[nodiscard]] std::size_t n_features() const noexcept { return prefactors.size(); }
    /// Groups with the empty default expanded and each group sorted.
    [[nodiscard]] std::vector<std::vector<std::size_t>> resolved_groups() const;
    /// Throws ConfigError on a violated invariant.
    void validate() const;
};

struct SufficiencyReport {
    std::size_t n_params = 0;
    std::uint64_t spectrum_cardinality = 0;
    bool sufficient = false;
};

[[nodiscard]] ParamCircuit build_circuit(const ModelConfig &config);
[[nodiscard]] std::size_t qubit_count(const ModelConfig &config);
[[nodiscard]] std::size_t param_count(const ModelConfig &config);
/// Number of encoding layers L; the ansatz has L + 1 layers.
[[nodiscard]] std::size_t encoding_layers(const ModelConfig &config);
[[nodiscard]] MixedSpectrum model_spectrum(const ModelConfig &config);
/// Compares the parameter count with the plain per-group cardinality sum.
[[nodiscard]] SufficiencyReport parameter_sufficiency(const ModelConfig &config);

} // namespace qfourier
