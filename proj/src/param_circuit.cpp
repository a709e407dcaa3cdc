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
#include "qfourier/param_circuit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qfourier/errors.hpp"

namespace qfourier {

Gate Gate::rotation(GateKind kind, std::size_t target, Binding binding) {
    if (kind == GateKind::CNOT || kind == GateKind::ROT) {
        throw ConfigError("Gate::rotation expects RX, RY or RZ");
    }
    return Gate{kind, target, kNoQubit, binding};
}

Gate Gate::rot(std::size_t target, std::size_t first_slot) {
    return Gate{GateKind::ROT, target, kNoQubit, ParamSlot{first_slot}};
}

Gate Gate::cnot(std::size_t control, std::size_t target) {
    return Gate{GateKind::CNOT, target, control, std::monostate{}};
}

namespace {

Axis axis_of(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
        return Axis::X;
    case GateKind::RY:
        return Axis::Y;
    default:
        return Axis::Z;
    }
}

} // namespace

ParamCircuit::ParamCircuit(std::size_t n_qubits, std::size_t n_features, std::vector<Gate> gates,
                           std::vector<std::vector<std::size_t>> qubit_groups, Combine combine)
    : n_qubits_(n_qubits), n_features_(n_features), gates_(std::move(gates)),
      qubit_groups_(std::move(qubit_groups)), combine_(combine) {
    if (n_qubits_ < 1 || n_qubits_ > 24) {
        throw ConfigError("circuit needs between 1 and 24 qubits, got " +
                          std::to_string(n_qubits_));
    }
    if (qubit_groups_.empty()) {
        qubit_groups_.emplace_back();
        for (std::size_t q = 0; q < n_qubits_; ++q) {
            qubit_groups_.back().push_back(q);
        }
    }
    group_of_.assign(n_qubits_, kNoQubit);
    for (std::size_t g = 0; g < qubit_groups_.size(); ++g) {
        auto &group = qubit_groups_[g];
        if (group.empty()) {
            throw ConfigError("measurement group " + std::to_string(g) + " is empty");
        }
        std::sort(group.begin(), group.end());
        for (std::size_t q : group) {
            if (q >= n_qubits_ || group_of_[q] != kNoQubit) {
                throw ConfigError("qubit groups must partition the register (qubit " +
                                  std::to_string(q) + ")");
            }
            group_of_[q] = g;
        }
        measured_.push_back(group.front());
    }
    if (std::find(group_of_.begin(), group_of_.end(), kNoQubit) != group_of_.end()) {
        throw ConfigError("qubit groups must cover every qubit");
    }

    // Per group, per feature: absolute encoding prefactors.
    std::vector<std::vector<std::vector<double>>> enc(
        qubit_groups_.size(), std::vector<std::vector<double>>(n_features_));

    for (std::size_t gi = 0; gi < gates_.size(); ++gi) {
        const Gate &gate = gates_[gi];
        if (gate.target >= n_qubits_) {
            throw ConfigError("gate " + std::to_string(gi) + " targets qubit " +
                              std::to_string(gate.target) + " outside a " +
                              std::to_string(n_qubits_) + "-qubit register");
        }
        if (gate.kind == GateKind::CNOT) {
            if (gate.control >= n_qubits_ || gate.control == gate.target) {
                throw ConfigError("CNOT " + std::to_string(gi) + " has an invalid control qubit");
            }
            if (group_of_[gate.control] != group_of_[gate.target]) {
                throw ConfigError("CNOT " + std::to_string(gi) +
                                  " connects two measurement groups");
            }
            Op op;
            op.is_cnot = true;
            op.target = gate.target;
            op.control = gate.control;
            op.gate = gi;
            ops_.push_back(op);
            continue;
        }
        if (gate.kind == GateKind::ROT) {
            const auto *slot = std::get_if<ParamSlot>(&gate.binding);
            if (slot == nullptr) {
                throw ConfigError("ROT gate " + std::to_string(gi) +
                                  " must bind three trainable slots");
            }
            const Axis axes[3] = {Axis::Z, Axis::Y, Axis::Z};
            for (std::size_t k = 0; k < 3; ++k) {
                Op op;
                op.axis = axes[k];
                op.target = gate.target;
                op.source = Op::Source::Slot;
                op.index = slot->slot + k;
                op.gate = gi;
                ops_.push_back(op);
            }
            n_params_ = std::max(n_params_, slot->slot + 3);
            continue;
        }
        Op op;
        op.axis = axis_of(gate.kind);
        op.target = gate.target;
        op.gate = gi;
        if (const auto *slot = std::get_if<ParamSlot>(&gate.binding)) {
            op.source = Op::Source::Slot;
            op.index = slot->slot;
            n_params_ = std::max(n_params_, slot->slot + 1);
        } else if (const auto *feat = std::get_if<FeatureAngle>(&gate.binding)) {
            if (feat->feature >= n_features_) {
                throw ConfigError("encoding gate " + std::to_string(gi) + " reads feature " +
                                  std::to_string(feat->feature) + " of " +
                                  std::to_string(n_features_));
            }
            if (!std::isfinite(feat->prefactor) || feat->prefactor == 0.0) {
                throw ConfigError("encoding gate " + std::to_string(gi) +
                                  " needs a finite nonzero prefactor");
            }
            op.source = Op::Source::Feature;
            op.index = feat->feature;
            op.value = feat->prefactor;
            enc[group_of_[gate.target]][feat->feature].push_back(std::abs(feat->prefactor));
        } else if (const auto *fixed = std::get_if<FixedAngle>(&gate.binding)) {
            op.source = Op::Source::Fixed;
            op.value = fixed->angle;
        } else {
            throw ConfigError("rotation gate " + std::to_string(gi) + " has no angle binding");
        }
        ops_.push_back(op);
    }

    // Feature blocks: each feature belongs to the single group that encodes it;
    // features without any encoding join the first group with spectrum {0}.
    feature_groups_.assign(qubit_groups_.size(), {});
    spectrum_.n_dims = n_features_;
    spectrum_.blocks.assign(qubit_groups_.size(), {});
    for (std::size_t f = 0; f < n_features_; ++f) {
        std::size_t owner = kNoQubit;
        for (std::size_t g = 0; g < qubit_groups_.size(); ++g) {
            if (!enc[g][f].empty()) {
                if (owner != kNoQubit) {
                    throw ConfigError("feature " + std::to_string(f) +
                                      " is encoded in more than one measurement group");
                }
                owner = g;
            }
        }
        const std::size_t g = owner == kNoQubit ? 0 : owner;
        feature_groups_[g].push_back(f);
        spectrum_.blocks[g].dims.push_back(f);
        spectrum_.blocks[g].spectra.push_back(
            owner == kNoQubit ? Spectrum1D() : spectrum_from_prefactors(enc[g][f]));
    }
    spectrum_.validate();
}

double ParamCircuit::group_weight() const noexcept {
    return combine_ == Combine::Mean ? 1.0 / static_cast<double>(qubit_groups_.size()) : 1.0;
}

void ParamCircuit::check_inputs(std::span<const double> x, std::span<const double> theta) const {
    if (x.size() != n_features_) {
        throw ContractError("expected " + std::to_string(n_features_) + " features, got " +
                            std::to_string(x.size()));
    }
    if (theta.size() != n_params_) {
        throw ContractError("expected " + std::to_string(n_params_) + " parameters, got " +
                            std::to_string(theta.size()));
    }
}

} // namespace qfourier
