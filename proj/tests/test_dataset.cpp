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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "qfourier/dataset.hpp"
#include "qfourier/errors.hpp"

namespace qfourier {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Target, ValuesAtOrigin) {
    const std::vector<double> zero2(2, 0.0);
    const std::vector<double> zero4(4, 0.0);
    EXPECT_NEAR(eval_target(TargetSpec::t2d(), zero2), 5.0, 1e-12);
    EXPECT_NEAR(eval_target(TargetSpec::t4d(), zero4), 1.42, 1e-12);
}

TEST(Target, IsRealFourierSeries) {
    // Independent evaluation: c0 + sum c e^{iwx} + conj(c) e^{-iwx}.
    const TargetSpec spec = TargetSpec::t2d();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> x{u(rng), u(rng)};
        Complex acc = spec.c0;
        for (const auto &t : spec.terms) {
            const double ph = t.frequency[0] * x[0] + t.frequency[1] * x[1];
            acc += t.coefficient * std::exp(Complex{0, ph}) +
                   std::conj(t.coefficient) * std::exp(Complex{0, -ph});
        }
        EXPECT_NEAR(acc.imag(), 0.0, 1e-12);
        EXPECT_NEAR(eval_target(spec, x), acc.real(), 1e-12);
    }
}

TEST(Target, Validation) {
    TargetSpec bad = TargetSpec::t2d();
    bad.terms[0].frequency = {1.0};
    EXPECT_THROW(bad.validate(), ConfigError);
    EXPECT_THROW((void)eval_target(TargetSpec::t2d(), std::vector<double>{0.0}), ContractError);
}

TEST(Grid, SizesAndEndpoints) {
    const RowMatrix g = cartesian_grid(50, 2);
    EXPECT_EQ(g.rows(), 2500U);
    EXPECT_EQ(g.cols(), 2U);
    EXPECT_DOUBLE_EQ(g(0, 0), -kPi);
    EXPECT_DOUBLE_EQ(g(2499, 1), kPi);
    EXPECT_EQ(cartesian_grid(20, 4).rows(), 160000U);
    EXPECT_THROW((void)cartesian_grid(50, 4, 1'000'000), ResourceError);
    EXPECT_THROW((void)cartesian_grid(1, 2), ConfigError);
}

TEST(Scaling, MapsOntoCanonicalRanges) {
    const RowMatrix x(3, 1, {1.0, 2.0, 3.0});
    const std::vector<double> y{2.0, 4.0, 6.0};
    const Dataset d = minmax_scale(x, y);
    EXPECT_EQ(d.targets, (std::vector<double>{-1.0, 0.0, 1.0}));
    EXPECT_DOUBLE_EQ(d.inputs(0, 0), -kPi);
    EXPECT_NEAR(d.inputs(1, 0), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(d.inputs(2, 0), kPi);
}

TEST(Scaling, RoundTripsPredictions) {
    const Dataset d = make_dataset(TargetSpec::t2d(), 30);
    const auto back = unscale_predictions(d, d.targets);
    const RowMatrix grid = cartesian_grid(30, 2);
    for (std::size_t r = 0; r < d.size(); ++r) {
        EXPECT_NEAR(back[r], eval_target(TargetSpec::t2d(), grid.row(r)), 1e-12);
    }
    const auto [lo, hi] = std::minmax_element(d.targets.begin(), d.targets.end());
    EXPECT_EQ(*lo, -1.0);
    EXPECT_EQ(*hi, 1.0);
}

TEST(Scaling, DegenerateInputsRejected) {
    EXPECT_THROW((void)minmax_scale(RowMatrix(3, 1, {1, 2, 3}), std::vector<double>{1, 1, 1}),
                 DegenerateError);
    EXPECT_THROW((void)minmax_scale(RowMatrix(3, 1, {1, 1, 1}), std::vector<double>{1, 2, 3}),
                 DegenerateError);
    EXPECT_THROW((void)minmax_scale(RowMatrix(2, 1, {1, 2}), std::vector<double>{1}),
                 ContractError);
}

TEST(Split, SizesPartitionAndDeterminism) {
    for (std::size_t n : {2500U, 160000U}) {
        const Split s = split(n, 42);
        EXPECT_EQ(s.test.size(), n / 5);
        EXPECT_EQ(s.train.size(), n - n / 5);
        std::vector<std::size_t> all = s.train;
        all.insert(all.end(), s.test.begin(), s.test.end());
        std::sort(all.begin(), all.end());
        for (std::size_t i = 0; i < n; ++i) {
            ASSERT_EQ(all[i], i);
        }
        EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
    }
    EXPECT_EQ(split(2500, 42).test, split(2500, 42).test);
    EXPECT_NE(split(2500, 42).test, split(2500, 43).test);
    EXPECT_EQ(split(5, 1).test.size(), 1U);
    EXPECT_THROW((void)split(4, 1), ConfigError);
}

TEST(Csv, RoundTripIsExact) {
    const Dataset d = make_dataset(TargetSpec::t2d(), 12);
    std::stringstream ss;
    write_csv(ss, d.inputs, d.targets);
    const RawData back = read_csv(ss);
    EXPECT_EQ(back.inputs, d.inputs);
    EXPECT_EQ(back.targets, d.targets);
}

TEST(Csv, RejectsMalformedInput) {
    std::stringstream empty;
    EXPECT_THROW((void)read_csv(empty), ConfigError);
    std::stringstream header("a,b\n1,2\n");
    EXPECT_THROW((void)read_csv(header), ConfigError);
    std::stringstream ragged("x1,y\n1,2\n3\n");
    EXPECT_THROW((void)read_csv(ragged), ConfigError);
    std::stringstream word("x1,y\n1,abc\n");
    EXPECT_THROW((void)read_csv(word), ConfigError);
}

} // namespace
} // namespace qfourier
