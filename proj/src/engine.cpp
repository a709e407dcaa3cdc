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
#include "qfourier/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

#include "qfourier/errors.hpp"
#include "qfourier/simulator.hpp"
#include "separable.hpp"

namespace qfourier {

namespace {

using detail::contract;
using detail::pointers;
using detail::Rect;

constexpr Complex kI{0.0, 1.0};

// ---------------------------------------------------------------------------
// Small dense kernels on 2^k x 2^k row-major matrices.

struct Mat2 {
    Complex m00, m01, m10, m11;
};

Mat2 dagger(const Mat2 &u) {
    return {std::conj(u.m00), std::conj(u.m10), std::conj(u.m01), std::conj(u.m11)};
}

Mat2 rotation_matrix(Axis axis, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (axis) {
    case Axis::X:
        return {c, Complex{0.0, -s}, Complex{0.0, -s}, c};
    case Axis::Y:
        return {c, -s, s, c};
    case Axis::Z:
        break;
    }
    return {Complex{c, -s}, 0.0, 0.0, Complex{c, s}};
}

/// Change of basis V with V Z V^dagger equal to the encoding Pauli.
Mat2 encoding_basis(Axis axis) {
    const double r = 1.0 / std::numbers::sqrt2;
    switch (axis) {
    case Axis::X:
        return {r, r, r, -r};
    case Axis::Y:
        return {r, r, Complex{0.0, r}, Complex{0.0, -r}};
    case Axis::Z:
        break;
    }
    return {1.0, 0.0, 0.0, 1.0};
}

void vec_apply(std::vector<Complex> &v, const Mat2 &u, std::size_t q) {
    const std::size_t mask = std::size_t{1} << q;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if ((i & mask) == 0U) {
            const Complex a0 = v[i];
            const Complex a1 = v[i | mask];
            v[i] = u.m00 * a0 + u.m01 * a1;
            v[i | mask] = u.m10 * a0 + u.m11 * a1;
        }
    }
}

void vec_cnot(std::vector<Complex> &v, std::size_t control, std::size_t target) {
    const std::size_t cm = std::size_t{1} << control;
    const std::size_t tm = std::size_t{1} << target;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if ((i & cm) != 0U && (i & tm) == 0U) {
            std::swap(v[i], v[i | tm]);
        }
    }
}

/// M <- U M on qubit q.
void left_apply(std::vector<Complex> &m, std::size_t dim, const Mat2 &u, std::size_t q) {
    const std::size_t mask = std::size_t{1} << q;
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & mask) != 0U) {
            continue;
        }
        Complex *r0 = m.data() + i * dim;
        Complex *r1 = m.data() + (i | mask) * dim;
        for (std::size_t j = 0; j < dim; ++j) {
            const Complex a0 = r0[j];
            const Complex a1 = r1[j];
            r0[j] = u.m00 * a0 + u.m01 * a1;
            r1[j] = u.m10 * a0 + u.m11 * a1;
        }
    }
}

/// M <- M U^dagger on qubit q.
void right_apply_dagger(std::vector<Complex> &m, std::size_t dim, const Mat2 &u, std::size_t q) {
    const std::size_t mask = std::size_t{1} << q;
    const Mat2 d = dagger(u);
    for (std::size_t i = 0; i < dim; ++i) {
        Complex *row = m.data() + i * dim;
        for (std::size_t j = 0; j < dim; ++j) {
            if ((j & mask) != 0U) {
                continue;
            }
            const Complex a0 = row[j];
            const Complex a1 = row[j | mask];
            row[j] = a0 * d.m00 + a1 * d.m10;
            row[j | mask] = a0 * d.m01 + a1 * d.m11;
        }
    }
}

/// M <- G M G^dagger for a primitive op.
void conjugate(std::vector<Complex> &m, std::size_t dim, const Op &op, double angle) {
    if (op.is_cnot) {
        const std::size_t cm = std::size_t{1} << op.control;
        const std::size_t tm = std::size_t{1} << op.target;
        auto perm = [&](std::size_t i) { return (i & cm) != 0U ? i ^ tm : i; };
        // Swap rows, then columns.
        for (std::size_t i = 0; i < dim; ++i) {
            const std::size_t p = perm(i);
            if (p > i) {
                std::swap_ranges(m.begin() + static_cast<std::ptrdiff_t>(i * dim),
                                 m.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim),
                                 m.begin() + static_cast<std::ptrdiff_t>(p * dim));
            }
        }
        for (std::size_t i = 0; i < dim; ++i) {
            Complex *row = m.data() + i * dim;
            for (std::size_t j = 0; j < dim; ++j) {
                const std::size_t p = perm(j);
                if (p > j) {
                    std::swap(row[j], row[p]);
                }
            }
        }
        return;
    }
    const std::size_t mask = std::size_t{1} << op.target;
    if (op.axis == Axis::Z) {
        const Complex down{std::cos(angle), -std::sin(angle)}; // row bit 0, column bit 1
        const Complex up = std::conj(down);
        for (std::size_t i = 0; i < dim; ++i) {
            Complex *row = m.data() + i * dim;
            const bool bi = (i & mask) != 0U;
            for (std::size_t j = 0; j < dim; ++j) {
                if ((j & mask) == 0U) {
                    if (bi) {
                        row[j] *= up;
                    } else {
                        row[j | mask] *= down;
                    }
                }
            }
        }
        return;
    }
    // Fused U M U^dagger on each 2x2 block.
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const bool is_y = op.axis == Axis::Y;
    auto times_i = [](Complex z) { return Complex{-z.imag(), z.real()}; };
    for (std::size_t i0 = 0; i0 < dim; ++i0) {
        if ((i0 & mask) != 0U) {
            continue;
        }
        Complex *r0 = m.data() + i0 * dim;
        Complex *r1 = m.data() + (i0 | mask) * dim;
        for (std::size_t j0 = 0; j0 < dim; ++j0) {
            if ((j0 & mask) != 0U) {
                continue;
            }
            const std::size_t j1 = j0 | mask;
            const Complex m00 = r0[j0];
            const Complex m01 = r0[j1];
            const Complex m10 = r1[j0];
            const Complex m11 = r1[j1];
            if (is_y) {
                const Complex t00 = c * m00 - s * m01;
                const Complex t01 = s * m00 + c * m01;
                const Complex t10 = c * m10 - s * m11;
                const Complex t11 = s * m10 + c * m11;
                r0[j0] = c * t00 - s * t10;
                r1[j0] = s * t00 + c * t10;
                r0[j1] = c * t01 - s * t11;
                r1[j1] = s * t01 + c * t11;
            } else {
                const Complex t00 = c * m00 + s * times_i(m01);
                const Complex t01 = s * times_i(m00) + c * m01;
                const Complex t10 = c * m10 + s * times_i(m11);
                const Complex t11 = s * times_i(m10) + c * m11;
                r0[j0] = c * t00 - s * times_i(t10);
                r0[j1] = c * t01 - s * times_i(t11);
                r1[j0] = c * t10 - s * times_i(t00);
                r1[j1] = c * t11 - s * times_i(t01);
            }
        }
    }
}

/// Im Tr(L sigma_q R) for Hermitian L.
double im_trace_pauli(const std::vector<Complex> &l, const std::vector<Complex> &r,
                      std::size_t dim, Axis axis, std::size_t q) {
    const std::size_t mask = std::size_t{1} << q;
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < dim; ++j) {
        // (sigma R)_{j,i} = s_j * R_{src(j), i}
        std::size_t src = j;
        Complex s{1.0, 0.0};
        const bool bit = (j & mask) != 0U;
        switch (axis) {
        case Axis::Z:
            s = bit ? -1.0 : 1.0;
            break;
        case Axis::X:
            src = j ^ mask;
            break;
        case Axis::Y:
            src = j ^ mask;
            s = bit ? kI : -kI;
            break;
        }
        const Complex *rrow = r.data() + src * dim;
        const Complex *lrow = l.data() + j * dim;
        Complex part{0.0, 0.0};
        for (std::size_t i = 0; i < dim; ++i) {
            part += std::conj(lrow[i]) * rrow[i];
        }
        acc += s * part;
    }
    return acc.imag();
}

/// -Im <a| sigma_q |b>.
double neg_im_overlap(const std::vector<Complex> &a, const std::vector<Complex> &b, Axis axis,
                      std::size_t q) {
    const std::size_t mask = std::size_t{1} << q;
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool bit = (i & mask) != 0U;
        switch (axis) {
        case Axis::Z:
            acc += (bit ? -1.0 : 1.0) * std::conj(a[i]) * b[i];
            break;
        case Axis::X:
            acc += std::conj(a[i]) * b[i ^ mask];
            break;
        case Axis::Y:
            acc += (bit ? kI : -kI) * std::conj(a[i]) * b[i ^ mask];
            break;
        }
    }
    return -acc.imag();
}

// ---------------------------------------------------------------------------

struct Lattice {
    long long stride = 1;
    long long half = 0;
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(2 * half + 1); }
    [[nodiscard]] double frequency(std::size_t k) const {
        return static_cast<double>((static_cast<long long>(k) - half) * stride);
    }
};

std::optional<Lattice> lattice_of(const Spectrum1D &s) {
    if (!s.integral()) {
        return std::nullopt;
    }
    long long g = 0;
    long long top = 0;
    for (double f : s.frequencies()) {
        const long long v = std::llabs(std::llround(f));
        g = std::gcd(g, v);
        top = std::max(top, v);
    }
    Lattice l;
    l.stride = g == 0 ? 1 : g;
    l.half = top / l.stride;
    return l;
}

struct CoordinateIndex {
    std::vector<std::vector<double>> values;         // per feature, sorted unique
    std::vector<std::vector<std::uint32_t>> position; // per feature, per row
};

CoordinateIndex index_coordinates(const RowMatrix &inputs) {
    CoordinateIndex ci;
    ci.values.resize(inputs.cols());
    ci.position.resize(inputs.cols());
    for (std::size_t f = 0; f < inputs.cols(); ++f) {
        std::vector<double> v(inputs.rows());
        for (std::size_t r = 0; r < inputs.rows(); ++r) {
            v[r] = inputs(r, f);
        }
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        ci.position[f].resize(inputs.rows());
        for (std::size_t r = 0; r < inputs.rows(); ++r) {
            ci.position[f][r] = static_cast<std::uint32_t>(
                std::lower_bound(v.begin(), v.end(), inputs(r, f)) - v.begin());
        }
        ci.values[f] = std::move(v);
    }
    return ci;
}

/// One measurement group compiled into a standalone local circuit.
struct GroupModel {
    std::optional<ParamCircuit> sub;
    std::vector<std::size_t> slot_map; // local slot -> global slot
    std::vector<std::size_t> dims;     // local feature -> global feature
    std::vector<Lattice> lattice;
    std::vector<std::size_t> box_shape;
    std::size_t box_size = 1;
    double weight = 1.0;

    // Evaluation grid over the dataset's unique coordinates.
    std::vector<std::size_t> grid_shape;
    std::vector<Rect> to_grid;   // |U_d| x s_d, exp(i w x)
    std::vector<Rect> from_grid; // s_d x |U_d|, exp(i w x)
    std::vector<std::uint32_t> row_cell;

    bool matrix_mode = false;
    // Matrix mode.
    std::size_t dim = 0;
    std::vector<Op> pre;
    std::vector<Op> post;
    std::vector<Mat2> basis; // per local qubit
    std::vector<std::uint32_t> pair_index;
    // Sample mode.
    RowMatrix sample_x;
    std::vector<Rect> sample_fwd; // s_d x s_d: exp(-i k t_m) / s_d
    std::vector<Rect> sample_bwd; // s_d x s_d: transpose of sample_fwd
};

std::optional<GroupModel> compile_group(const ParamCircuit &circuit, std::size_t g,
                                        const CoordinateIndex &coords, std::size_t n_rows) {
    GroupModel gm;
    const auto &qubits = circuit.qubit_groups()[g];
    gm.dims = circuit.feature_groups()[g];
    gm.weight = circuit.group_weight();
    const auto &block = circuit.spectrum().blocks[g];

    std::map<std::size_t, std::size_t> local_qubit;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
        local_qubit[qubits[k]] = k;
    }
    std::map<std::size_t, std::size_t> local_feature;
    for (std::size_t k = 0; k < gm.dims.size(); ++k) {
        local_feature[gm.dims[k]] = k;
    }
    std::map<std::size_t, std::size_t> local_slot;
    auto map_slot = [&](std::size_t s) {
        auto [it, inserted] = local_slot.emplace(s, gm.slot_map.size());
        if (inserted) {
            gm.slot_map.push_back(s);
        }
        return it->second;
    };

    std::vector<Gate> gates;
    for (const Gate &gate : circuit.gates()) {
        if (circuit.group_of(gate.target) != g) {
            continue;
        }
        Gate local = gate;
        local.target = local_qubit.at(gate.target);
        if (gate.kind == GateKind::CNOT) {
            local.control = local_qubit.at(gate.control);
        }
        if (const auto *s = std::get_if<ParamSlot>(&gate.binding)) {
            const std::size_t width = gate.kind == GateKind::ROT ? 3 : 1;
            const std::size_t first = map_slot(s->slot);
            for (std::size_t k = 1; k < width; ++k) {
                if (map_slot(s->slot + k) != first + k) {
                    return std::nullopt; // overlapping slot layouts are left to the direct route
                }
            }
            local.binding = ParamSlot{first};
        } else if (const auto *f = std::get_if<FeatureAngle>(&gate.binding)) {
            local.binding = FeatureAngle{local_feature.at(f->feature), f->prefactor};
        }
        gates.push_back(local);
    }
    // Every local slot must be used for the local circuit to be well formed.
    gm.sub.emplace(qubits.size(), std::max<std::size_t>(gm.dims.size(), 1), std::move(gates));
    if (gm.sub->n_params() != gm.slot_map.size()) {
        return std::nullopt;
    }

    // Frequency lattice per local dimension.
    for (std::size_t k = 0; k < gm.dims.size(); ++k) {
        auto lat = lattice_of(block.spectra[k]);
        if (!lat) {
            return std::nullopt;
        }
        gm.lattice.push_back(*lat);
        gm.box_shape.push_back(lat->size());
        gm.box_size *= lat->size();
    }

    // Evaluation grid.
    std::size_t cells = 1;
    for (std::size_t k = 0; k < gm.dims.size(); ++k) {
        const auto &vals = coords.values[gm.dims[k]];
        gm.grid_shape.push_back(vals.size());
        cells *= vals.size();
        if (cells > std::max<std::size_t>(4 * n_rows, 1U << 16U)) {
            return std::nullopt;
        }
        const Lattice &lat = gm.lattice[k];
        Rect to{vals.size(), lat.size(), std::vector<Complex>(vals.size() * lat.size())};
        Rect from{lat.size(), vals.size(), std::vector<Complex>(vals.size() * lat.size())};
        for (std::size_t u = 0; u < vals.size(); ++u) {
            for (std::size_t j = 0; j < lat.size(); ++j) {
                const double ph = lat.frequency(j) * vals[u];
                const Complex e{std::cos(ph), std::sin(ph)};
                to.data[u * lat.size() + j] = e;
                from.data[j * vals.size() + u] = e;
            }
        }
        gm.to_grid.push_back(std::move(to));
        gm.from_grid.push_back(std::move(from));
    }
    gm.row_cell.assign(n_rows, 0);
    for (std::size_t r = 0; r < n_rows; ++r) {
        std::size_t cell = 0;
        for (std::size_t k = 0; k < gm.dims.size(); ++k) {
            cell = cell * gm.grid_shape[k] + coords.position[gm.dims[k]][r];
        }
        gm.row_cell[r] = static_cast<std::uint32_t>(cell);
    }

    // Matrix mode: ops = [pre][one encoding per qubit at most][post].
    const auto &ops = gm.sub->ops();
    std::size_t first = ops.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (!ops[i].is_cnot && ops[i].source == Op::Source::Feature) {
            first = std::min(first, i);
            last = i;
        }
    }
    bool ok = qubits.size() <= 10;
    std::vector<int> encoded(qubits.size(), 0);
    if (first < ops.size()) {
        for (std::size_t i = first; i <= last && ok; ++i) {
            ok = !ops[i].is_cnot && ops[i].source == Op::Source::Feature &&
                 ++encoded[ops[i].target] == 1;
        }
    }
    if (ok) {
        gm.matrix_mode = true;
        gm.dim = std::size_t{1} << qubits.size();
        const std::size_t split_at = first < ops.size() ? first : ops.size();
        gm.pre.assign(ops.begin(), ops.begin() + static_cast<std::ptrdiff_t>(split_at));
        if (first < ops.size()) {
            gm.post.assign(ops.begin() + static_cast<std::ptrdiff_t>(last + 1), ops.end());
        }
        gm.basis.assign(qubits.size(), encoding_basis(Axis::Z));
        // Eigenvalue (per local dim) of each rotated basis state.
        std::vector<std::vector<double>> lambda(gm.dim, std::vector<double>(gm.dims.size(), 0.0));
        if (first < ops.size()) {
            for (std::size_t i = first; i <= last; ++i) {
                const Op &op = ops[i];
                gm.basis[op.target] = encoding_basis(op.axis);
                for (std::size_t a = 0; a < gm.dim; ++a) {
                    const bool bit = ((a >> op.target) & 1U) != 0U;
                    lambda[a][op.index] += bit ? -op.value / 2.0 : op.value / 2.0;
                }
            }
        }
        gm.pair_index.resize(gm.dim * gm.dim);
        for (std::size_t a = 0; a < gm.dim; ++a) {
            for (std::size_t b = 0; b < gm.dim; ++b) {
                std::size_t idx = 0;
                for (std::size_t k = 0; k < gm.dims.size(); ++k) {
                    const double w = lambda[a][k] - lambda[b][k];
                    const double pos = w / static_cast<double>(gm.lattice[k].stride) +
                                       static_cast<double>(gm.lattice[k].half);
                    const long long p = std::llround(pos);
                    if (std::abs(pos - static_cast<double>(p)) > 1e-6 || p < 0 ||
                        p >= static_cast<long long>(gm.lattice[k].size())) {
                        return std::nullopt;
                    }
                    idx = idx * gm.lattice[k].size() + static_cast<std::size_t>(p);
                }
                gm.pair_index[a * gm.dim + b] = static_cast<std::uint32_t>(idx);
            }
        }
        return gm;
    }

    // Sample mode: alias-free grid t_m = -pi + 2 pi m / s, x = t / stride.
    gm.sample_x = RowMatrix(gm.box_size, gm.sub->n_features());
    for (std::size_t k = 0; k < gm.dims.size(); ++k) {
        const Lattice &lat = gm.lattice[k];
        const std::size_t s = lat.size();
        Rect fwd{s, s, std::vector<Complex>(s * s)};
        Rect bwd{s, s, std::vector<Complex>(s * s)};
        for (std::size_t m = 0; m < s; ++m) {
            const double t = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(m) /
                                                     static_cast<double>(s);
            for (std::size_t j = 0; j < s; ++j) {
                const double ph = -(static_cast<double>(j) - static_cast<double>(lat.half)) * t;
                const Complex e = Complex{std::cos(ph), std::sin(ph)} / static_cast<double>(s);
                fwd.data[j * s + m] = e;
                bwd.data[m * s + j] = e;
            }
        }
        gm.sample_fwd.push_back(std::move(fwd));
        gm.sample_bwd.push_back(std::move(bwd));
    }
    for (std::size_t m = 0; m < gm.box_size; ++m) {
        std::size_t rest = m;
        for (std::size_t k = gm.dims.size(); k-- > 0;) {
            const Lattice &lat = gm.lattice[k];
            const std::size_t j = rest % lat.size();
            rest /= lat.size();
            const double t = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                                     static_cast<double>(lat.size());
            gm.sample_x(m, k) = t / static_cast<double>(lat.stride);
        }
    }
    return gm;
}

// ---------------------------------------------------------------------------

class DirectEngine final : public ModelEngine {
  public:
    DirectEngine(const ParamCircuit &circuit, const RowMatrix &inputs,
                 std::span<const double> targets, std::vector<std::size_t> train)
        : circuit_(circuit), inputs_(inputs), targets_(targets), train_(std::move(train)) {}

    [[nodiscard]] std::string_view name() const noexcept override { return "direct"; }

    double loss_and_gradient(std::span<const double> theta, std::span<double> grad) override {
        std::fill(grad.begin(), grad.end(), 0.0);
        const double scale = 2.0 / static_cast<double>(train_.size());
        double loss = 0.0;
        for (std::size_t r : train_) {
            const double y = targets_[r];
            accumulate_gradient(
                circuit_, inputs_.row(r), theta,
                [&](double f) {
                    const double res = f - y;
                    loss += res * res;
                    return scale * res;
                },
                grad);
        }
        return loss / static_cast<double>(train_.size());
    }

    std::vector<double> predict(std::span<const double> theta,
                                std::span<const std::size_t> rows) override {
        std::vector<double> out;
        out.reserve(rows.size());
        for (std::size_t r : rows) {
            out.push_back(model_output(circuit_, inputs_.row(r), theta));
        }
        return out;
    }

  private:
    const ParamCircuit &circuit_;
    const RowMatrix &inputs_;
    std::span<const double> targets_;
    std::vector<std::size_t> train_;
};

class SpectralEngine final : public ModelEngine {
  public:
    SpectralEngine(std::vector<GroupModel> groups, std::span<const double> targets,
                   std::vector<std::size_t> train)
        : groups_(std::move(groups)), targets_(targets), train_(std::move(train)) {}

    [[nodiscard]] std::string_view name() const noexcept override { return "spectral"; }

    double loss_and_gradient(std::span<const double> theta, std::span<double> grad) override {
        std::fill(grad.begin(), grad.end(), 0.0);
        std::vector<State> states;
        states.reserve(groups_.size());
        for (const auto &gm : groups_) {
            states.push_back(forward(gm, theta));
        }
        const double scale = 2.0 / static_cast<double>(train_.size());
        double loss = 0.0;
        std::vector<std::vector<Complex>> residual_grid(groups_.size());
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            residual_grid[g].assign(states[g].grid_values.size(), Complex{0.0, 0.0});
        }
        for (std::size_t r : train_) {
            double f = 0.0;
            for (std::size_t g = 0; g < groups_.size(); ++g) {
                f += states[g].grid_values[groups_[g].row_cell[r]];
            }
            const double res = f - targets_[r];
            loss += res * res;
            for (std::size_t g = 0; g < groups_.size(); ++g) {
                residual_grid[g][groups_[g].row_cell[r]] += scale * res;
            }
        }
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            const GroupModel &gm = groups_[g];
            // G_w = sum_r rho_r exp(i w . x_r)
            const std::vector<Complex> box_grad =
                contract(std::move(residual_grid[g]), gm.grid_shape, pointers(gm.from_grid));
            backward(gm, states[g], box_grad, grad);
        }
        return loss / static_cast<double>(train_.size());
    }

    std::vector<double> predict(std::span<const double> theta,
                                std::span<const std::size_t> rows) override {
        std::vector<double> out(rows.size(), 0.0);
        for (const auto &gm : groups_) {
            const State st = forward(gm, theta);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                out[i] += st.grid_values[gm.row_cell[rows[i]]];
            }
        }
        return out;
    }

  private:
    struct State {
        std::vector<double> theta_local;
        std::vector<Complex> psi;   // rotated basis (matrix mode)
        std::vector<Complex> psi1;  // physical state after pre ops
        std::vector<Complex> a_phys;
        std::vector<Complex> a_rot;
        std::vector<double> grid_values;
    };

    static std::vector<double> local_theta(const GroupModel &gm, std::span<const double> theta) {
        std::vector<double> t(gm.slot_map.size());
        for (std::size_t k = 0; k < t.size(); ++k) {
            t[k] = theta[gm.slot_map[k]];
        }
        return t;
    }

    static State forward(const GroupModel &gm, std::span<const double> theta) {
        State st;
        st.theta_local = local_theta(gm, theta);
        const std::vector<double> no_x(gm.sub->n_features(), 0.0);
        std::vector<Complex> box(gm.box_size, Complex{0.0, 0.0});
        if (gm.matrix_mode) {
            const std::size_t n = gm.dim;
            StateVector sv(gm.sub->n_qubits());
            for (const Op &op : gm.pre) {
                sv.apply_op(op, op.is_cnot ? 0.0 : op.angle(no_x, st.theta_local));
            }
            st.psi1.assign(sv.amplitudes().begin(), sv.amplitudes().end());
            // Heisenberg-picture observable w * Z_top pulled back through the post ops.
            st.a_phys.assign(n * n, Complex{0.0, 0.0});
            for (std::size_t i = 0; i < n; ++i) {
                st.a_phys[i * n + i] = (i & 1U) != 0U ? -gm.weight : gm.weight;
            }
            for (std::size_t k = gm.post.size(); k-- > 0;) {
                const Op &op = gm.post[k];
                const double angle = op.is_cnot ? 0.0 : op.angle(no_x, st.theta_local);
                conjugate(st.a_phys, n, op, -angle); // G^dagger A G
            }
            st.psi = st.psi1;
            st.a_rot = st.a_phys;
            for (std::size_t q = 0; q < gm.basis.size(); ++q) {
                const Mat2 vd = dagger(gm.basis[q]);
                vec_apply(st.psi, vd, q);
                left_apply(st.a_rot, n, vd, q);
                right_apply_dagger(st.a_rot, n, vd, q);
            }
            for (std::size_t a = 0; a < n; ++a) {
                const Complex ca = std::conj(st.psi[a]);
                for (std::size_t b = 0; b < n; ++b) {
                    box[gm.pair_index[a * n + b]] += ca * st.a_rot[a * n + b] * st.psi[b];
                }
            }
        } else {
            std::vector<Complex> samples(gm.box_size);
            for (std::size_t m = 0; m < gm.box_size; ++m) {
                samples[m] = gm.weight * model_output(*gm.sub, gm.sample_x.row(m), st.theta_local);
            }
            box = contract(std::move(samples), gm.box_shape, pointers(gm.sample_fwd));
        }
        const std::vector<Complex> values = contract(std::move(box), gm.box_shape, pointers(gm.to_grid));
        st.grid_values.resize(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            st.grid_values[i] = values[i].real();
        }
        return st;
    }

    static void backward(const GroupModel &gm, const State &st,
                         const std::vector<Complex> &box_grad, std::span<double> grad) {
        std::vector<double> local(gm.slot_map.size(), 0.0);
        const std::vector<double> no_x(gm.sub->n_features(), 0.0);
        if (gm.matrix_mode) {
            const std::size_t n = gm.dim;
            // K_ab = G(w(a,b)); R_ba = K_ab conj(psi_a) psi_b; u_a = sum_b K_ab A_ab psi_b.
            std::vector<Complex> r(n * n);
            std::vector<Complex> u(n, Complex{0.0, 0.0});
            for (std::size_t a = 0; a < n; ++a) {
                const Complex ca = std::conj(st.psi[a]);
                for (std::size_t b = 0; b < n; ++b) {
                    const Complex k = box_grad[gm.pair_index[a * n + b]];
                    r[b * n + a] = k * ca * st.psi[b];
                    u[a] += k * st.a_rot[a * n + b] * st.psi[b];
                }
            }
            for (std::size_t q = 0; q < gm.basis.size(); ++q) {
                vec_apply(u, gm.basis[q], q);
                left_apply(r, n, gm.basis[q], q);
                right_apply_dagger(r, n, gm.basis[q], q);
            }
            // Pre ops: reverse sweep with the adjoint vector.
            std::vector<Complex> psi = st.psi1;
            for (std::size_t k = gm.pre.size(); k-- > 0;) {
                const Op &op = gm.pre[k];
                const double angle = op.is_cnot ? 0.0 : op.angle(no_x, st.theta_local);
                if (!op.is_cnot && op.source == Op::Source::Slot) {
                    local[op.index] += neg_im_overlap(psi, u, op.axis, op.target);
                }
                if (op.is_cnot) {
                    vec_cnot(psi, op.control, op.target);
                    vec_cnot(u, op.control, op.target);
                } else {
                    const Mat2 inv = rotation_matrix(op.axis, -angle);
                    vec_apply(psi, inv, op.target);
                    vec_apply(u, inv, op.target);
                }
            }
            // Post ops: forward sweep carrying the observable and the residual density.
            std::vector<Complex> lam = st.a_phys;
            for (const Op &op : gm.post) {
                const double angle = op.is_cnot ? 0.0 : op.angle(no_x, st.theta_local);
                conjugate(lam, n, op, angle);
                conjugate(r, n, op, angle);
                if (!op.is_cnot && op.source == Op::Source::Slot) {
                    local[op.index] += im_trace_pauli(lam, r, n, op.axis, op.target);
                }
            }
        } else {
            // w_m = Re sum_k G_k exp(-i k t_m) / M; grad = sum_m w_m grad f(x_m).
            const std::vector<Complex> w =
                contract(box_grad, gm.box_shape, pointers(gm.sample_bwd));
            for (std::size_t m = 0; m < gm.box_size; ++m) {
                const double wm = gm.weight * w[m].real();
                if (wm != 0.0) {
                    accumulate_gradient(*gm.sub, gm.sample_x.row(m), st.theta_local, wm, local);
                }
            }
        }
        for (std::size_t k = 0; k < local.size(); ++k) {
            grad[gm.slot_map[k]] += local[k];
        }
    }

    std::vector<GroupModel> groups_;
    std::span<const double> targets_;
    std::vector<std::size_t> train_;
};

std::optional<std::vector<GroupModel>> compile_groups(const ParamCircuit &circuit,
                                                      const RowMatrix &inputs) {
    if (inputs.cols() != circuit.n_features() || inputs.rows() == 0) {
        return std::nullopt;
    }
    const CoordinateIndex coords = index_coordinates(inputs);
    std::vector<GroupModel> out;
    for (std::size_t g = 0; g < circuit.qubit_groups().size(); ++g) {
        auto gm = compile_group(circuit, g, coords, inputs.rows());
        if (!gm) {
            return std::nullopt;
        }
        out.push_back(std::move(*gm));
    }
    return out;
}

} // namespace

bool spectral_supported(const ParamCircuit &circuit, const RowMatrix &inputs) {
    return compile_groups(circuit, inputs).has_value();
}

std::unique_ptr<ModelEngine> make_engine(const ParamCircuit &circuit, const RowMatrix &inputs,
                                         std::span<const double> targets,
                                         std::vector<std::size_t> train_rows, EngineKind kind) {
    if (inputs.cols() != circuit.n_features()) {
        throw ContractError("dataset has " + std::to_string(inputs.cols()) +
                            " features, circuit expects " + std::to_string(circuit.n_features()));
    }
    if (inputs.rows() != targets.size()) {
        throw ContractError("input and target row counts differ");
    }
    if (train_rows.empty()) {
        throw ContractError("training set is empty");
    }
    for (std::size_t r : train_rows) {
        if (r >= inputs.rows()) {
            throw ContractError("training row index out of range");
        }
    }
    if (kind != EngineKind::Direct) {
        auto groups = compile_groups(circuit, inputs);
        if (groups) {
            // Sampled groups pay one circuit evaluation per lattice point.
            std::size_t sampled = 0;
            for (const auto &gm : *groups) {
                sampled += gm.matrix_mode ? 0 : gm.box_size;
            }
            if (kind == EngineKind::Spectral || sampled <= train_rows.size()) {
                return std::make_unique<SpectralEngine>(std::move(*groups), targets,
                                                        std::move(train_rows));
            }
        } else if (kind == EngineKind::Spectral) {
            throw ConfigError("spectral engine does not support this circuit or dataset");
        }
    }
    return std::make_unique<DirectEngine>(circuit, inputs, targets, std::move(train_rows));
}

} // namespace qfourier
