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

// Exact statevector simulation of the rotation/CNOT gate set with Pauli-Z
// readout and adjoint-mode gradients.
//
// Qubit k corresponds to bit k of the basis-state index; qubit 0 is the top
// wire. Rotations follow R_sigma(phi) = exp(-i phi sigma / 2).

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qfourier/param_circuit.hpp"

namespace qfourier {

using Complex = std::complex<double>;

class StateVector {
  public:
    /// |0...0> on n_qubits qubits.
    explicit StateVector(std::size_t n_qubits);
    StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amps_; }
    [[nodiscard]] double norm_squared() const noexcept;

    void apply_rotation(Axis axis, std::size_t qubit, double angle);
    void apply_pauli(Axis axis, std::size_t qubit);
    void apply_cnot(std::size_t control, std::size_t target);
    /// Applies op with its resolved angle; inverse applies the adjoint.
    void apply_op(const Op &op, double angle, bool inverse = false);

  private:
    void check_qubit(std::size_t qubit) const;

    std::size_t n_qubits_;
    std::vector<Complex> amps_;
};

/// Applies one gate. angles holds 1 value for RX/RY/RZ, 3 for ROT (a, b, c
/// with RZ(a) applied first), none for CNOT.
[[nodiscard]] StateVector apply_gate(StateVector state, const Gate &gate,
                                     std::span<const double> angles);

/// <Z> on one qubit.
[[nodiscard]] double expectation_z(const StateVector &state, std::size_t qubit);

/// Final state of the circuit applied to |0...0>.
[[nodiscard]] StateVector run_circuit(const ParamCircuit &circuit, std::span<const double> x,
                                      std::span<const double> theta);

/// Pauli-Z expectation of each group's measurement qubit.
[[nodiscard]] std::vector<double> group_expectations(const ParamCircuit &circuit,
                                                     std::span<const double> x,
                                                     std::span<const double> theta);

/// Combined model output (sum or mean over groups).
[[nodiscard]] double model_output(const ParamCircuit &circuit, std::span<const double> x,
                                  std::span<const double> theta);

/// d model_output / d theta via a reverse (adjoint) sweep.
[[nodiscard]] std::vector<double> gradient(const ParamCircuit &circuit, std::span<const double> x,
                                           std::span<const double> theta);

/// Returns model_output and adds weight * d model_output / d theta to grad.
double accumulate_gradient(const ParamCircuit &circuit, std::span<const double> x,
                           std::span<const double> theta, double weight, std::span<double> grad);

/// As above with the weight computed from the model output (e.g. a residual).
double accumulate_gradient(const ParamCircuit &circuit, std::span<const double> x,
                           std::span<const double> theta,
                           const std::function<double(double)> &weight_of_output,
                           std::span<double> grad);

} // namespace qfourier
