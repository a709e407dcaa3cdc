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
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qfourier/analysis.hpp"
#include "qfourier/circuit.hpp"
#include "qfourier/errors.hpp"
#include "qfourier/simulator.hpp"

namespace qfourier {
namespace {

ModelConfig make(Architecture arch, std::vector<double> pf, std::size_t d, std::size_t blocks,
                 std::vector<std::vector<std::size_t>> groups = {}) {
    ModelConfig m;
    m.architecture = arch;
    m.prefactors.assign(d, std::move(pf));
    m.blocks_per_layer = blocks;
    m.groups = std::move(groups);
    return m;
}

std::vector<double> random_theta(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
    std::vector<double> t(n);
    for (auto &v : t) {
        v = u(rng);
    }
    return t;
}

TEST(ParamCount, ReferenceConfigurations) {
    EXPECT_EQ(param_count(make(Architecture::Parallel, {10, 20}, 2, 10)), 240U);
    EXPECT_EQ(param_count(make(Architecture::Parallel, {1, 3, 9, 27}, 2, 7)), 336U);
    EXPECT_EQ(param_count(make(Architecture::Parallel, {10, 30}, 4, 3, {{0, 1}, {2, 3}})), 144U);
    EXPECT_EQ(param_count(make(Architecture::Parallel, {10, 30}, 4, 3)), 144U);
    // Serial: 2 qubits, 2 encoding layers, 3 trainable layers.
    EXPECT_EQ(param_count(make(Architecture::Serial, {10, 20}, 2, 13)), 234U);
    EXPECT_EQ(param_count(make(Architecture::Serial, {1, 3, 9, 27}, 2, 11)), 330U);
}

TEST(ParamCount, ClosedFormMatchesCompiledCircuit) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> dim(1, 4);
    std::uniform_int_distribution<int> npf(1, 3);
    std::uniform_int_distribution<int> blocks(1, 4);
    for (int trial = 0; trial < 40; ++trial) {
        ModelConfig m;
        m.architecture = trial % 2 == 0 ? Architecture::Parallel : Architecture::Serial;
        const int d = dim(rng);
        for (int f = 0; f < d; ++f) {
            std::vector<double> p;
            const int k = npf(rng);
            for (int j = 0; j < k; ++j) {
                p.push_back(std::pow(3.0, j));
            }
            m.prefactors.push_back(p);
        }
        m.blocks_per_layer = static_cast<std::size_t>(blocks(rng));
        if (d >= 2 && trial % 3 == 0) {
            m.groups = {{0}, {}};
            for (int f = 1; f < d; ++f) {
                m.groups[1].push_back(static_cast<std::size_t>(f));
            }
        }
        const ParamCircuit c = build_circuit(m);
        EXPECT_EQ(c.n_params(), param_count(m));
        EXPECT_EQ(c.n_qubits(), qubit_count(m));
        std::size_t rot = 0;
        for (const Gate &g : c.gates()) {
            rot += g.kind == GateKind::ROT ? 1 : 0;
        }
        EXPECT_EQ(3 * rot, c.n_params());
    }
}

TEST(Circuit, NoEntanglerCrossesGroups) {
    const ModelConfig m = make(Architecture::Parallel, {10, 30}, 4, 2, {{0, 1}, {2, 3}});
    const ParamCircuit c = build_circuit(m);
    ASSERT_EQ(c.qubit_groups().size(), 2U);
    std::size_t cnots = 0;
    for (const Gate &g : c.gates()) {
        if (g.kind == GateKind::CNOT) {
            ++cnots;
            EXPECT_EQ(c.group_of(g.control), c.group_of(g.target));
        }
    }
    EXPECT_GT(cnots, 0U);
}

TEST(Circuit, EncodingGatesCarryPrefactors) {
    const ParamCircuit c = build_circuit(make(Architecture::Parallel, {10, 20}, 2, 1));
    std::vector<double> seen;
    for (const Gate &g : c.gates()) {
        if (g.is_encoding()) {
            seen.push_back(std::get<FeatureAngle>(g.binding).prefactor);
        }
    }
    EXPECT_EQ(seen, (std::vector<double>{10, 20, 10, 20}));
}

TEST(Circuit, SpectrumOfSerialAndParallelAgree) {
    for (const auto &pf : {std::vector<double>{1, 3}, std::vector<double>{10, 20},
                           std::vector<double>{1, 3, 9, 27}}) {
        const auto par = build_circuit(make(Architecture::Parallel, pf, 2, 1));
        const auto ser = build_circuit(make(Architecture::Serial, pf, 2, 1));
        EXPECT_EQ(par.spectrum(), ser.spectrum());
        EXPECT_EQ(mixed_cardinality(par.spectrum()).total, mixed_cardinality(ser.spectrum()).total);
    }
}

TEST(Sufficiency, ReferenceExamples) {
    const auto sel = parameter_sufficiency(make(Architecture::Parallel, {10, 20}, 2, 10));
    EXPECT_EQ(sel.n_params, 240U);
    EXPECT_EQ(sel.spectrum_cardinality, 49U);
    EXPECT_TRUE(sel.sufficient);
    const auto dense = parameter_sufficiency(make(Architecture::Parallel, {1, 3, 9, 27}, 2, 7));
    EXPECT_EQ(dense.spectrum_cardinality, 6561U);
    EXPECT_FALSE(dense.sufficient);
    const auto sep =
        parameter_sufficiency(make(Architecture::Parallel, {10, 30}, 4, 3, {{0, 1}, {2, 3}}));
    EXPECT_EQ(sep.spectrum_cardinality, 162U);
    EXPECT_FALSE(sep.sufficient);
}

TEST(ModelConfig, RejectsInvalid) {
    ModelConfig empty;
    EXPECT_THROW(empty.validate(), ConfigError);
    auto bad_group = make(Architecture::Parallel, {1}, 3, 1, {{0, 1}, {1, 2}});
    EXPECT_THROW(bad_group.validate(), ConfigError);
    auto missing = make(Architecture::Parallel, {1}, 3, 1, {{0, 1}});
    EXPECT_THROW(missing.validate(), ConfigError);
    auto zero_blocks = make(Architecture::Parallel, {1}, 1, 0);
    EXPECT_THROW(zero_blocks.validate(), ConfigError);
    auto negative = make(Architecture::Parallel, {-1}, 1, 1);
    EXPECT_THROW(negative.validate(), ConfigError);
    auto axis = make(Architecture::Parallel, {1}, 1, 1);
    axis.encoding_axis = GateKind::CNOT;
    EXPECT_THROW(axis.validate(), ConfigError);
}

// Any trained model can only contain frequencies of its declared spectrum.
void expect_confined(const ModelConfig &m, long long limit, std::size_t n_grid) {
    const ParamCircuit c = build_circuit(m);
    const auto theta = random_theta(c.n_params(), 99);
    const std::size_t d = m.n_features();
    const auto box = frequency_box(d, limit);
    const auto table = dft_coefficients(model_function(c, theta), d, box, n_grid);
    double inside = 0.0;
    for (std::size_t k = 0; k < box.size(); ++k) {
        const std::vector<double> omega(box[k].begin(), box[k].end());
        if (contains(c.spectrum(), omega)) {
            inside = std::max(inside, std::abs(table.values[k]));
        } else {
            EXPECT_LT(std::abs(table.values[k]), 1e-8);
        }
    }
    EXPECT_GT(inside, 1e-3);
}

TEST(Circuit, ModelIsConfinedToDeclaredSpectrum) {
    expect_confined(make(Architecture::Parallel, {1, 3}, 2, 2), 7, 16);
    expect_confined(make(Architecture::Serial, {1, 2}, 2, 2), 5, 12);
    expect_confined(make(Architecture::Parallel, {1, 2}, 3, 1, {{0}, {1, 2}}), 4, 10);
    ModelConfig ry = make(Architecture::Parallel, {1, 3}, 1, 2);
    ry.encoding_axis = GateKind::RY;
    expect_confined(ry, 7, 16);
}

} // namespace
} // namespace qfourier
