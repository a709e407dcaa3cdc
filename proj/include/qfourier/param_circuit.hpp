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

#include <cstddef>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "qfourier/spectrum.hpp"

namespace qfourier {

enum class GateKind { RX, RY, RZ, ROT, CNOT };
enum class Axis { X, Y, Z };

/// First of the trainable parameter slots a gate reads (ROT reads three).
struct ParamSlot {
    std::size_t slot = 0;
};

/// Encoding rotation with angle prefactor * x[feature].
struct FeatureAngle {
    std::size_t feature = 0;
    double prefactor = 1.0;
};

struct FixedAngle {
    double angle = 0.0;
};

using Binding = std::variant<std::monostate, ParamSlot, FeatureAngle, FixedAngle>;

inline constexpr std::size_t kNoQubit = std::numeric_limits<std::size_t>::max();

struct Gate {
    GateKind kind = GateKind::RX;
    std::size_t target = 0;
    std::size_t control = kNoQubit;
    Binding binding;

    static Gate rotation(GateKind kind, std::size_t target, Binding binding);
    /// ROT = RZ(c) RY(b) RZ(a) reading slots (slot, slot+1, slot+2) as (a, b, c).
    static Gate rot(std::size_t target, std::size_t first_slot);
    static Gate cnot(std::size_t control, std::size_t target);

    [[nodiscard]] bool is_encoding() const noexcept {
        return std::holds_alternative<FeatureAngle>(binding);
    }
    [[nodiscard]] bool is_two_qubit() const noexcept { return kind == GateKind::CNOT; }
};

/// Primitive step of a compiled circuit: a Pauli rotation or a CNOT.
struct Op {
    enum class Source { Slot, Feature, Fixed };

    bool is_cnot = false;
    Axis axis = Axis::Z;
    std::size_t target = 0;
    std::size_t control = kNoQubit;
    Source source = Source::Fixed;
    std::size_t index = 0; ///< parameter slot or feature index
    double value = 0.0;    ///< prefactor (Feature) or angle (Fixed)
    std::size_t gate = 0;  ///< index of the gate this op came from

    [[nodiscard]] double angle(std::span<const double> x, std::span<const double> theta) const {
        switch (source) {
        case Source::Slot:
            return theta[index];
        case Source::Feature:
            return value * x[index];
        case Source::Fixed:
            break;
        }
        return value;
    }
};

enum class Combine { Sum, Mean };

/// Immutable compiled circuit: gate list, parameter slots, measurement
/// groups and the declared frequency spectrum.
///
/// Each measurement group is a set of qubits measured through Pauli-Z on its
/// lowest-index (top) qubit. The model output combines the per-group
/// expectations by sum or mean. No two-qubit gate may join two groups.
class ParamCircuit {
  public:
    /// Builds a circuit from an explicit gate list. An empty group list means
    /// one group spanning every qubit. The declared spectrum is derived from
    /// the encoding gates of each group.
    ParamCircuit(std::size_t n_qubits, std::size_t n_features, std::vector<Gate> gates,
                 std::vector<std::vector<std::size_t>> qubit_groups = {},
                 Combine combine = Combine::Sum);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t n_features() const noexcept { return n_features_; }
    [[nodiscard]] std::size_t n_params() const noexcept { return n_params_; }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept { return gates_; }
    [[nodiscard]] const std::vector<Op> &ops() const noexcept { return ops_; }
    [[nodiscard]] const std::vector<std::vector<std::size_t>> &qubit_groups() const noexcept {
        return qubit_groups_;
    }
    /// Features encoded inside each group (ascending).
    [[nodiscard]] const std::vector<std::vector<std::size_t>> &feature_groups() const noexcept {
        return feature_groups_;
    }
    [[nodiscard]] const std::vector<std::size_t> &measurement_qubits() const noexcept {
        return measured_;
    }
    [[nodiscard]] Combine combine() const noexcept { return combine_; }
    /// Weight applied to every group expectation (1 for sum, 1/m for mean).
    [[nodiscard]] double group_weight() const noexcept;
    [[nodiscard]] const MixedSpectrum &spectrum() const noexcept { return spectrum_; }
    /// Group index of a qubit.
    [[nodiscard]] std::size_t group_of(std::size_t qubit) const { return group_of_[qubit]; }

    /// Checks x and theta lengths; throws ContractError.
    void check_inputs(std::span<const double> x, std::span<const double> theta) const;

  private:
    std::size_t n_qubits_;
    std::size_t n_features_;
    std::size_t n_params_ = 0;
    std::vector<Gate> gates_;
    std::vector<Op> ops_;
    std::vector<std::vector<std::size_t>> qubit_groups_;
    std::vector<std::vector<std::size_t>> feature_groups_;
    std::vector<std::size_t> group_of_;
    std::vector<std::size_t> measured_;
    Combine combine_;
    MixedSpectrum spectrum_;
};

} // namespace qfourier
