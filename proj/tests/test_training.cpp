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
#include <vector>

#include "qfourier/errors.hpp"
#include "qfourier/training.hpp"

namespace qfourier {
namespace {

TEST(Metrics, ReferenceValues) {
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{1, 2, 4};
    EXPECT_NEAR(mse(a, b), 1.0 / 3.0, 1e-15);
    EXPECT_EQ(mse(a, a), 0.0);
    EXPECT_EQ(r2(a, a), 1.0);
    const std::vector<double> mean{2, 2, 2};
    EXPECT_NEAR(r2(mean, a), 0.0, 1e-15);
    EXPECT_THROW((void)mse(a, std::vector<double>{1, 2}), ContractError);
    EXPECT_THROW((void)mse(std::vector<double>{}, std::vector<double>{}), ContractError);
    EXPECT_THROW((void)r2(a, mean), DegenerateError);
}

TEST(Adam, FirstStepHasLearningRateMagnitude) {
    TrainConfig cfg;
    cfg.learning_rate = 0.01;
    AdamState st(3);
    std::vector<double> theta{0.0, 1.0, 2.0};
    const std::vector<double> grad{5.0, -0.001, 1e3};
    adam_step(st, theta, grad, cfg);
    // Bias-corrected m / sqrt(v) = sign(g) on step one.
    EXPECT_NEAR(theta[0], -0.01, 1e-8);
    EXPECT_NEAR(theta[1], 1.01, 1e-6);
    EXPECT_NEAR(theta[2], 1.99, 1e-8);
    EXPECT_EQ(st.step, 1U);
}

TEST(Adam, ZeroGradientLeavesParameters) {
    TrainConfig cfg;
    AdamState st(2);
    std::vector<double> theta{0.5, -0.5};
    for (int i = 0; i < 10; ++i) {
        adam_step(st, theta, std::vector<double>{0.0, 0.0}, cfg);
    }
    EXPECT_EQ(theta, (std::vector<double>{0.5, -0.5}));
}

TEST(Adam, ConvexQuadraticConverges) {
    TrainConfig cfg;
    cfg.learning_rate = 0.01;
    AdamState st(3);
    const std::vector<double> target{1.5, -2.0, 0.25};
    std::vector<double> theta{0.0, 0.0, 0.0};
    std::vector<double> grad(3);
    for (int i = 0; i < 10000; ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            grad[k] = 2.0 * (theta[k] - target[k]);
        }
        adam_step(st, theta, grad, cfg);
    }
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(theta[k], target[k], 1e-3);
    }
}

TEST(Adam, NonFiniteGradientIsNumericError) {
    TrainConfig cfg;
    AdamState st(1);
    std::vector<double> theta{0.0};
    EXPECT_THROW(adam_step(st, theta, std::vector<double>{NAN}, cfg), NumericError);
    EXPECT_THROW(adam_step(st, theta, std::vector<double>{1.0, 2.0}, cfg), ContractError);
}

TEST(TrainConfig, Validation) {
    TrainConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.iterations = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = TrainConfig{};
    cfg.learning_rate = -1;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = TrainConfig{};
    cfg.init_high = cfg.init_low;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(InitialParameters, DeterministicAndInRange) {
    TrainConfig cfg;
    const auto a = initial_parameters(100, cfg);
    EXPECT_EQ(a, initial_parameters(100, cfg));
    for (double v : a) {
        EXPECT_GE(v, cfg.init_low);
        EXPECT_LT(v, cfg.init_high);
    }
    cfg.seed = 43;
    EXPECT_NE(a, initial_parameters(100, cfg));
}

Dataset cos_data() {
    TargetSpec spec;
    spec.d = 1;
    spec.terms = {{{1.0}, Complex{0.5, 0.0}}};
    return make_dataset(spec, 200);
}

ModelConfig cos_model() {
    ModelConfig m;
    m.prefactors = {{1.0}};
    return m;
}

TEST(Train, FitsSingleCosine) {
    TrainConfig cfg;
    cfg.learning_rate = 0.01;
    cfg.iterations = 1000;
    const Dataset data = cos_data();
    const TrainReport r = train(build_circuit(cos_model()), data, cfg);
    EXPECT_EQ(r.loss_history.size(), 1000U);
    EXPECT_GT(r.r2_test, 0.99);
    EXPECT_LT(r.final_train_mse, r.loss_history.front());
    EXPECT_EQ(r.initial_theta, initial_parameters(3 * 2, cfg));
}

TEST(Train, IsDeterministic) {
    TrainConfig cfg;
    cfg.iterations = 50;
    cfg.track_test_loss = true;
    const Dataset data = cos_data();
    const ParamCircuit c = build_circuit(cos_model());
    const TrainReport a = train(c, data, cfg);
    const TrainReport b = train(c, data, cfg);
    EXPECT_EQ(a.loss_history, b.loss_history);
    EXPECT_EQ(a.test_loss_history, b.test_loss_history);
    EXPECT_EQ(a.final_theta, b.final_theta);
    EXPECT_EQ(a.test_loss_history.size(), 50U);
}

TEST(Train, EnginesAgree) {
    TrainConfig cfg;
    cfg.iterations = 20;
    ModelConfig m;
    m.prefactors = {{1.0, 3.0}, {2.0}};
    m.blocks_per_layer = 2;
    TargetSpec spec;
    spec.d = 2;
    spec.terms = {{{1.0, 2.0}, Complex{0.3, 0.1}}, {{3.0, 0.0}, Complex{0.0, 0.2}}};
    const Dataset data = make_dataset(spec, 24);
    const ParamCircuit c = build_circuit(m);
    cfg.engine = EngineKind::Direct;
    const TrainReport direct = train(c, data, cfg);
    cfg.engine = EngineKind::Spectral;
    const TrainReport spectral = train(c, data, cfg);
    ASSERT_EQ(direct.loss_history.size(), spectral.loss_history.size());
    for (std::size_t i = 0; i < direct.loss_history.size(); ++i) {
        EXPECT_NEAR(direct.loss_history[i], spectral.loss_history[i], 1e-9);
    }
    for (std::size_t k = 0; k < direct.final_theta.size(); ++k) {
        EXPECT_NEAR(direct.final_theta[k], spectral.final_theta[k], 1e-7);
    }
}

TEST(MultiRun, UsesConsecutiveSeeds) {
    TrainConfig cfg;
    cfg.iterations = 5;
    cfg.seed = 100;
    const auto runs = multi_run(cos_model(), cos_data(), cfg, 3);
    ASSERT_EQ(runs.size(), 3U);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(runs[k].seed, 100 + k);
    }
    EXPECT_NE(runs[0].initial_theta, runs[1].initial_theta);
    EXPECT_THROW((void)multi_run(cos_model(), cos_data(), cfg, 0), ConfigError);
}

} // namespace
} // namespace qfourier
