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
#include "qfourier/simulator.hpp"

#include <cmath>
#include <string>

#include "qfourier/errors.hpp"

namespace qfourier {

namespace {

constexpr Complex kI{0.0, 1.0};

/// <a| sigma_q |b>.
Complex pauli_overlap(std::span<const Complex> a, std::span<const Complex> b, Axis axis,
                      std::size_t qubit) {
    const std::size_t mask = std::size_t{1} << qubit;
    Complex acc{0.0, 0.0};
    switch (axis) {
    case Axis::Z:
        for (std::size_t i = 0; i < a.size(); ++i) {
            const Complex t = std::conj(a[i]) * b[i];
            acc += (i & mask) != 0U ? -t : t;
        }
        break;
    case Axis::X:
        for (std::size_t i = 0; i < a.size(); ++i) {
            acc += std::conj(a[i]) * b[i ^ mask];
        }
        break;
    case Axis::Y:
        for (std::size_t i = 0; i < a.size(); ++i) {
            const Complex t = std::conj(a[i]) * b[i ^ mask];
            acc += (i & mask) != 0U ? kI * t : -kI * t;
        }
        break;
    }
    return acc;
}

} // namespace

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 30) {
        throw ConfigError("state vector needs between 1 and 30 qubits");
    }
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits < 1 || n_qubits > 30 || amps_.size() != (std::size_t{1} << n_qubits)) {
        throw ContractError("amplitude count must equal 2^n_qubits");
    }
}

double StateVector::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

void StateVector::check_qubit(std::size_t qubit) const {
    if (qubit >= n_qubits_) {
        throw ConfigError("qubit index " + std::to_string(qubit) + " out of range for " +
                          std::to_string(n_qubits_) + " qubits");
    }
}

void StateVector::apply_rotation(Axis axis, std::size_t qubit, double angle) {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const std::size_t n = amps_.size();
    switch (axis) {
    case Axis::Z: {
        const Complex lo{c, -s};
        const Complex hi{c, s};
        for (std::size_t i = 0; i < n; ++i) {
            amps_[i] *= (i & mask) != 0U ? hi : lo;
        }
        break;
    }
    case Axis::X:
        for (std::size_t i = 0; i < n; ++i) {
            if ((i & mask) == 0U) {
                const Complex a0 = amps_[i];
                const Complex a1 = amps_[i | mask];
                amps_[i] = c * a0 + Complex{0.0, -s} * a1;
                amps_[i | mask] = Complex{0.0, -s} * a0 + c * a1;
            }
        }
        break;
    case Axis::Y:
        for (std::size_t i = 0; i < n; ++i) {
            if ((i & mask) == 0U) {
                const Complex a0 = amps_[i];
                const Complex a1 = amps_[i | mask];
                amps_[i] = c * a0 - s * a1;
                amps_[i | mask] = s * a0 + c * a1;
            }
        }
        break;
    }
}

void StateVector::apply_pauli(Axis axis, std::size_t qubit) {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & mask) != 0U) {
            continue;
        }
        Complex &a0 = amps_[i];
        Complex &a1 = amps_[i | mask];
        switch (axis) {
        case Axis::X:
            std::swap(a0, a1);
            break;
        case Axis::Y: {
            const Complex t0 = a0;
            a0 = -kI * a1;
            a1 = kI * t0;
            break;
        }
        case Axis::Z:
            a1 = -a1;
            break;
        }
    }
}

void StateVector::apply_cnot(std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw ConfigError("CNOT control and target must differ");
    }
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & cmask) != 0U && (i & tmask) == 0U) {
            std::swap(amps_[i], amps_[i | tmask]);
        }
    }
}

void StateVector::apply_op(const Op &op, double angle, bool inverse) {
    if (op.is_cnot) {
        apply_cnot(op.control, op.target);
    } else {
        apply_rotation(op.axis, op.target, inverse ? -angle : angle);
    }
}

StateVector apply_gate(StateVector state, const Gate &gate, std::span<const double> angles) {
    for (double a : angles) {
        if (!std::isfinite(a)) {
            throw ContractError("gate angles must be finite");
        }
    }
    auto need = [&](std::size_t n) {
        if (angles.size() != n) {
            throw ContractError("gate expects " + std::to_string(n) + " angle(s), got " +
                                std::to_string(angles.size()));
        }
    };
    switch (gate.kind) {
    case GateKind::RX:
        need(1);
        state.apply_rotation(Axis::X, gate.target, angles[0]);
        break;
    case GateKind::RY:
        need(1);
        state.apply_rotation(Axis::Y, gate.target, angles[0]);
        break;
    case GateKind::RZ:
        need(1);
        state.apply_rotation(Axis::Z, gate.target, angles[0]);
        break;
    case GateKind::ROT:
        need(3);
        state.apply_rotation(Axis::Z, gate.target, angles[0]);
        state.apply_rotation(Axis::Y, gate.target, angles[1]);
        state.apply_rotation(Axis::Z, gate.target, angles[2]);
        break;
    case GateKind::CNOT:
        need(0);
        state.apply_cnot(gate.control, gate.target);
        break;
    }
    return state;
}

double expectation_z(const StateVector &state, std::size_t qubit) {
    if (qubit >= state.n_qubits()) {
        throw ConfigError("qubit index " + std::to_string(qubit) + " out of range");
    }
    const std::size_t mask = std::size_t{1} << qubit;
    double acc = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        acc += (i & mask) != 0U ? -p : p;
    }
    return acc;
}

StateVector run_circuit(const ParamCircuit &circuit, std::span<const double> x,
                        std::span<const double> theta) {
    circuit.check_inputs(x, theta);
    StateVector state(circuit.n_qubits());
    for (const Op &op : circuit.ops()) {
        state.apply_op(op, op.is_cnot ? 0.0 : op.angle(x, theta));
    }
    return state;
}

std::vector<double> group_expectations(const ParamCircuit &circuit, std::span<const double> x,
                                       std::span<const double> theta) {
    const StateVector state = run_circuit(circuit, x, theta);
    std::vector<double> out;
    out.reserve(circuit.measurement_qubits().size());
    for (std::size_t q : circuit.measurement_qubits()) {
        out.push_back(expectation_z(state, q));
    }
    return out;
}

double model_output(const ParamCircuit &circuit, std::span<const double> x,
                    std::span<const double> theta) {
    double acc = 0.0;
    for (double e : group_expectations(circuit, x, theta)) {
        acc += e;
    }
    return acc * circuit.group_weight();
}

double accumulate_gradient(const ParamCircuit &circuit, std::span<const double> x,
                           std::span<const double> theta, double weight, std::span<double> grad) {
    return accumulate_gradient(
        circuit, x, theta, [weight](double) { return weight; }, grad);
}

double accumulate_gradient(const ParamCircuit &circuit, std::span<const double> x,
                           std::span<const double> theta,
                           const std::function<double(double)> &weight_of_output,
                           std::span<double> grad) {
    if (grad.size() != circuit.n_params()) {
        throw ContractError("gradient buffer has wrong length");
    }
    StateVector psi = run_circuit(circuit, x, theta);

    // Observable M = w * sum_g Z_g is diagonal; mu = weight * M psi.
    const auto amps = psi.amplitudes();
    std::vector<Complex> mu(amps.size());
    const double w = circuit.group_weight();
    double value = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        double diag = 0.0;
        for (std::size_t q : circuit.measurement_qubits()) {
            diag += ((i >> q) & 1U) != 0U ? -1.0 : 1.0;
        }
        diag *= w;
        value += diag * std::norm(amps[i]);
        mu[i] = diag * amps[i];
    }
    const double weight = weight_of_output(value);
    for (auto &m : mu) {
        m *= weight;
    }
    StateVector adj(circuit.n_qubits(), std::move(mu));

    const auto &ops = circuit.ops();
    for (std::size_t k = ops.size(); k-- > 0;) {
        const Op &op = ops[k];
        const double angle = op.is_cnot ? 0.0 : op.angle(x, theta);
        if (!op.is_cnot && op.source == Op::Source::Slot) {
            grad[op.index] -=
                std::imag(pauli_overlap(psi.amplitudes(), adj.amplitudes(), op.axis, op.target));
        }
        psi.apply_op(op, angle, true);
        adj.apply_op(op, angle, true);
    }
    return value;
}

std::vector<double> gradient(const ParamCircuit &circuit, std::span<const double> x,
                             std::span<const double> theta) {
    circuit.check_inputs(x, theta);
    std::vector<double> grad(circuit.n_params(), 0.0);
    accumulate_gradient(circuit, x, theta, 1.0, grad);
    return grad;
}

} // namespace qfourier
