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

// Full-batch loss and gradient evaluation for training.
//
// Two interchangeable routes compute the same quantities:
//
//  * DirectEngine runs the statevector simulator with an adjoint sweep for
//    every training row.
//  * SpectralEngine uses the fact that each measurement group outputs a
//    finite Fourier series over an integer frequency lattice. Per iteration
//    it computes the group's coefficient box once (from the circuit's
//    unitaries for single-encoding-layer groups, or from an alias-free
//    sample of the group circuit otherwise), evaluates the series on the
//    Cartesian product of the dataset's coordinate values, and pulls the
//    loss gradient back through the coefficients. The cost is independent
//    of the number of rows sharing coordinates.

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "qfourier/dataset.hpp"
#include "qfourier/param_circuit.hpp"

namespace qfourier {

class ModelEngine {
  public:
    virtual ~ModelEngine() = default;

    [[nodiscard]] virtual std::string_view name() const noexcept = 0;
    /// Training MSE at theta; writes d MSE / d theta into grad.
    virtual double loss_and_gradient(std::span<const double> theta, std::span<double> grad) = 0;
    /// Model outputs at the given dataset rows.
    [[nodiscard]] virtual std::vector<double> predict(std::span<const double> theta,
                                                      std::span<const std::size_t> rows) = 0;
};

enum class EngineKind { Auto, Direct, Spectral };

/// The circuit, inputs and targets must outlive the engine.
[[nodiscard]] std::unique_ptr<ModelEngine>
make_engine(const ParamCircuit &circuit, const RowMatrix &inputs, std::span<const double> targets,
            std::vector<std::size_t> train_rows, EngineKind kind = EngineKind::Auto);

/// Whether the spectral route supports this circuit/data combination.
[[nodiscard]] bool spectral_supported(const ParamCircuit &circuit, const RowMatrix &inputs);

} // namespace qfourier
