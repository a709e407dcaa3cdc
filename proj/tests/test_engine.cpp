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
#include <numbers>
#include <string>
#include <vector>

#include "qfourier/circuit.hpp"
#include "qfourier/engine.hpp"
#include "qfourier/errors.hpp"
#include "qfourier/rng.hpp"
#include "qfourier/simulator.hpp"

namespace qfourier {
namespace {

struct Problem {
    ParamCircuit circuit;
    RowMatrix inputs;
    std::vector<double> targets;
    std::vector<std::size_t> train;
    std::vector<double> theta;
};

// Inputs snapped to a coarse lattice so rows share coordinates.
Problem make_problem(const ModelConfig &config, std::size_t rows, std::uint64_t seed) {
    Problem p{build_circuit(config), RowMatrix(rows, config.n_features()), {}, {}, {}};
    Rng rng(seed);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t f = 0; f < config.n_features(); ++f) {
            p.inputs(r, f) = -std::numbers::pi + 0.37 * static_cast<double>(uniform_index(rng, 17));
        }
        p.targets.push_back(2.0 * uniform01(rng) - 1.0);
        if (r % 3 != 0) {
            p.train.push_back(r);
        }
    }
    for (std::size_t k = 0; k < p.circuit.n_params(); ++k) {
        p.theta.push_back(2.0 * std::numbers::pi * uniform01(rng));
    }
    return p;
}

void expect_routes_agree(const ModelConfig &config, std::uint64_t seed) {
    const Problem p = make_problem(config, 40, seed);
    ASSERT_TRUE(spectral_supported(p.circuit, p.inputs));
    auto direct = make_engine(p.circuit, p.inputs, p.targets, p.train, EngineKind::Direct);
    auto spectral = make_engine(p.circuit, p.inputs, p.targets, p.train, EngineKind::Spectral);
    ASSERT_EQ(spectral->name(), "spectral");

    std::vector<double> gd(p.theta.size());
    std::vector<double> gs(p.theta.size());
    const double ld = direct->loss_and_gradient(p.theta, gd);
    const double ls = spectral->loss_and_gradient(p.theta, gs);
    EXPECT_NEAR(ld, ls, 1e-10);
    for (std::size_t k = 0; k < gd.size(); ++k) {
        EXPECT_NEAR(gd[k], gs[k], 1e-9) << "slot " << k;
    }
    std::vector<std::size_t> all(p.inputs.rows());
    for (std::size_t r = 0; r < all.size(); ++r) {
        all[r] = r;
    }
    const auto pd = direct->predict(p.theta, all);
    const auto ps = spectral->predict(p.theta, all);
    for (std::size_t r = 0; r < all.size(); ++r) {
        EXPECT_NEAR(pd[r], ps[r], 1e-10);
    }
}

TEST(Engine, ParallelMixedRoutesAgree) {
    ModelConfig c;
    c.prefactors = {{1.0, 3.0}, {2.0}};
    c.blocks_per_layer = 2;
    expect_routes_agree(c, 1);
}

TEST(Engine, ParallelSeparatedMeanRoutesAgree) {
    ModelConfig c;
    c.prefactors = {{1.0}, {2.0}, {1.0, 3.0}};
    c.groups = {{0, 2}, {1}};
    c.combine = Combine::Mean;
    expect_routes_agree(c, 2);
}

TEST(Engine, EncodingAxesRoutesAgree) {
    for (GateKind axis : {GateKind::RY, GateKind::RZ}) {
        ModelConfig c;
        c.prefactors = {{1.0, 2.0}, {3.0}};
        c.encoding_axis = axis;
        expect_routes_agree(c, 3);
    }
}

TEST(Engine, SerialRoutesAgree) {
    ModelConfig c;
    c.architecture = Architecture::Serial;
    c.prefactors = {{1.0, 3.0}, {2.0}};
    expect_routes_agree(c, 4);
}

TEST(Engine, GradientMatchesFiniteDifference) {
    ModelConfig c;
    c.prefactors = {{1.0, 2.0}, {1.0}};
    Problem p = make_problem(c, 30, 5);
    auto engine = make_engine(p.circuit, p.inputs, p.targets, p.train, EngineKind::Spectral);
    std::vector<double> g(p.theta.size());
    engine->loss_and_gradient(p.theta, g);
    std::vector<double> scratch(p.theta.size());
    const double h = 1e-5;
    for (std::size_t k = 0; k < p.theta.size(); k += 5) {
        auto plus = p.theta;
        auto minus = p.theta;
        plus[k] += h;
        minus[k] -= h;
        const double fd = (engine->loss_and_gradient(plus, scratch) -
                           engine->loss_and_gradient(minus, scratch)) /
                          (2.0 * h);
        EXPECT_NEAR(g[k], fd, 1e-7);
    }
}

TEST(Engine, RejectsMismatchedData) {
    ModelConfig c;
    c.prefactors = {{1.0}};
    const ParamCircuit circuit = build_circuit(c);
    RowMatrix inputs(4, 2);
    std::vector<double> targets(4, 0.0);
    EXPECT_THROW((void)make_engine(circuit, inputs, targets, {0, 1}), ContractError);
    RowMatrix ok(4, 1);
    EXPECT_THROW((void)make_engine(circuit, ok, targets, {}), ContractError);
    EXPECT_THROW((void)make_engine(circuit, ok, targets, {7}), ContractError);
}

// Property: on random architectures the two routes compute the same loss,
// gradient and predictions.
TEST(Engine, RandomConfigurationsAgree) {
    Rng rng(2026);
    const GateKind axes[3] = {GateKind::RX, GateKind::RY, GateKind::RZ};
    for (int trial = 0; trial < 12; ++trial) {
        ModelConfig c;
        c.architecture = trial % 2 == 0 ? Architecture::Parallel : Architecture::Serial;
        const std::size_t d = 1 + uniform_index(rng, 3);
        for (std::size_t f = 0; f < d; ++f) {
            std::vector<double> pf;
            const std::size_t k = 1 + uniform_index(rng, 2);
            for (std::size_t j = 0; j < k; ++j) {
                pf.push_back(static_cast<double>(1 + uniform_index(rng, 3)));
            }
            c.prefactors.push_back(pf);
        }
        if (d == 3 && uniform_index(rng, 2) == 0) {
            c.groups = {{0}, {1, 2}};
        }
        c.blocks_per_layer = 1 + uniform_index(rng, 2);
        c.encoding_axis = axes[uniform_index(rng, 3)];
        c.combine = uniform_index(rng, 2) == 0 ? Combine::Sum : Combine::Mean;
        SCOPED_TRACE("trial " + std::to_string(trial));
        expect_routes_agree(c, 100 + static_cast<std::uint64_t>(trial));
    }
}

} // namespace
} // namespace qfourier
