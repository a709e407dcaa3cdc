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
#include "qfourier/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qfourier/errors.hpp"
#include "qfourier/rng.hpp"

namespace qfourier {

RowMatrix::RowMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ContractError("matrix data does not match its shape");
    }
}

TargetSpec TargetSpec::t2d() {
    TargetSpec spec;
    spec.d = 2;
    spec.c0 = 0.5;
    const double omegas[3] = {10.0, 20.0, 30.0};
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            const double c = 0.05 * static_cast<double>(3 * k + l + 1);
            spec.terms.push_back({{omegas[k], omegas[l]}, Complex{c, c}});
        }
    }
    return spec;
}

TargetSpec TargetSpec::t4d() {
    TargetSpec spec;
    spec.d = 4;
    spec.c0 = 0.1;
    spec.terms = {
        {{20.0, 30.0, 0.0, 0.0}, Complex{0.15, 0.17}},
        {{10.0, 40.0, 0.0, 0.0}, Complex{0.21, 0.23}},
        {{0.0, 0.0, 10.0, 20.0}, Complex{0.27, 0.34}},
        {{0.0, 0.0, 30.0, 40.0}, Complex{0.03, 0.71}},
    };
    return spec;
}

void TargetSpec::validate() const {
    if (d < 1) {
        throw ConfigError("target dimension must be at least 1");
    }
    if (!std::isfinite(c0)) {
        throw ConfigError("target constant must be finite");
    }
    for (const auto &t : terms) {
        if (t.frequency.size() != d) {
            throw ConfigError("target term frequency has " + std::to_string(t.frequency.size()) +
                              " components, expected " + std::to_string(d));
        }
        for (double w : t.frequency) {
            if (!std::isfinite(w)) {
                throw ConfigError("target frequencies must be finite");
            }
        }
        if (!std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag())) {
            throw ConfigError("target coefficients must be finite");
        }
    }
}

std::vector<std::vector<double>> TargetSpec::frequencies() const {
    std::vector<std::vector<double>> out;
    out.reserve(terms.size());
    for (const auto &t : terms) {
        out.push_back(t.frequency);
    }
    return out;
}

double eval_target(const TargetSpec &spec, std::span<const double> x) {
    if (x.size() != spec.d) {
        throw ContractError("target expects " + std::to_string(spec.d) + " inputs, got " +
                            std::to_string(x.size()));
    }
    double acc = spec.c0;
    for (const auto &t : spec.terms) {
        double phase = 0.0;
        for (std::size_t i = 0; i < spec.d; ++i) {
            phase += t.frequency[i] * x[i];
        }
        // 2 Re[c e^{i phase}]
        acc += 2.0 * (t.coefficient.real() * std::cos(phase) - t.coefficient.imag() * std::sin(phase));
    }
    return acc;
}

RowMatrix cartesian_grid(std::size_t points_per_dim, std::size_t d, std::size_t row_cap) {
    if (points_per_dim < 2) {
        throw ConfigError("grid needs at least 2 points per dimension");
    }
    if (d < 1) {
        throw ConfigError("grid needs at least one dimension");
    }
    std::size_t rows = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (rows > row_cap / points_per_dim) {
            throw ResourceError("grid of " + std::to_string(points_per_dim) + "^" +
                                std::to_string(d) + " rows exceeds the row cap of " +
                                std::to_string(row_cap));
        }
        rows *= points_per_dim;
    }
    std::vector<double> axis(points_per_dim);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(points_per_dim - 1);
    for (std::size_t k = 0; k < points_per_dim; ++k) {
        axis[k] = -std::numbers::pi + step * static_cast<double>(k);
    }
    axis.back() = std::numbers::pi;

    RowMatrix grid(rows, d);
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t rest = r;
        for (std::size_t i = d; i-- > 0;) {
            grid(r, i) = axis[rest % points_per_dim];
            rest /= points_per_dim;
        }
    }
    return grid;
}

Dataset minmax_scale(const RowMatrix &raw_inputs, std::span<const double> raw_targets) {
    if (raw_inputs.rows() != raw_targets.size()) {
        throw ContractError("input and target row counts differ");
    }
    if (raw_targets.empty()) {
        throw ConfigError("dataset is empty");
    }
    Dataset out;
    const std::size_t n = raw_inputs.rows();
    const std::size_t d = raw_inputs.cols();
    out.scaling.input_min.assign(d, INFINITY);
    out.scaling.input_max.assign(d, -INFINITY);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            out.scaling.input_min[i] = std::min(out.scaling.input_min[i], raw_inputs(r, i));
            out.scaling.input_max[i] = std::max(out.scaling.input_max[i], raw_inputs(r, i));
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (!(out.scaling.input_max[i] > out.scaling.input_min[i])) {
            throw DegenerateError("input dimension " + std::to_string(i) + " is constant");
        }
    }
    const auto [lo, hi] = std::minmax_element(raw_targets.begin(), raw_targets.end());
    out.scaling.output_min = *lo;
    out.scaling.output_max = *hi;
    if (!(*hi > *lo)) {
        throw DegenerateError("targets are constant; MinMax scaling is undefined");
    }

    const double pi = std::numbers::pi;
    out.inputs = RowMatrix(n, d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            const double lo_i = out.scaling.input_min[i];
            const double hi_i = out.scaling.input_max[i];
            const double v = raw_inputs(r, i);
            // Endpoints map exactly.
            out.inputs(r, i) = v == lo_i   ? -pi
                               : v == hi_i ? pi
                                           : -pi + 2.0 * pi * ((v - lo_i) / (hi_i - lo_i));
        }
    }
    out.targets.resize(n);
    const double span = *hi - *lo;
    for (std::size_t r = 0; r < n; ++r) {
        out.targets[r] = -1.0 + 2.0 * ((raw_targets[r] - *lo) / span);
    }
    return out;
}

std::vector<double> unscale_predictions(const Dataset &data, std::span<const double> predictions) {
    const double lo = data.scaling.output_min;
    const double span = data.scaling.output_max - lo;
    std::vector<double> out(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        out[i] = lo + (predictions[i] + 1.0) * 0.5 * span;
    }
    return out;
}

Dataset make_dataset(const TargetSpec &spec, std::size_t points_per_dim, std::size_t row_cap) {
    spec.validate();
    RowMatrix grid = cartesian_grid(points_per_dim, spec.d, row_cap);
    std::vector<double> y(grid.rows());
    for (std::size_t r = 0; r < grid.rows(); ++r) {
        y[r] = eval_target(spec, grid.row(r));
    }
    return minmax_scale(grid, y);
}

Split split(std::size_t n_rows, std::uint64_t seed) {
    if (n_rows < 5) {
        throw ConfigError("train/test split needs at least 5 rows, got " + std::to_string(n_rows));
    }
    std::vector<std::size_t> perm(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        perm[i] = i;
    }
    Rng rng = make_rng(seed, Stream::Split);
    for (std::size_t i = n_rows - 1; i > 0; --i) {
        std::swap(perm[i], perm[uniform_index(rng, i + 1)]);
    }
    const auto n_test = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(kTestFraction * static_cast<double>(n_rows))));
    Split s;
    s.seed = seed;
    s.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    s.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
    std::sort(s.test.begin(), s.test.end());
    std::sort(s.train.begin(), s.train.end());
    return s;
}

namespace {

void put_double(std::ostream &out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf);
}

} // namespace

void write_csv(std::ostream &out, const RowMatrix &inputs, std::span<const double> targets) {
    if (inputs.rows() != targets.size()) {
        throw ContractError("input and target row counts differ");
    }
    for (std::size_t i = 0; i < inputs.cols(); ++i) {
        out << 'x' << (i + 1) << ',';
    }
    out << "y\n";
    for (std::size_t r = 0; r < inputs.rows(); ++r) {
        for (std::size_t i = 0; i < inputs.cols(); ++i) {
            put_double(out, inputs(r, i));
            out << ',';
        }
        put_double(out, targets[r]);
        out << '\n';
    }
}

RawData read_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("CSV input is empty");
    }
    std::size_t cols = 0;
    {
        std::stringstream header(line);
        std::string cell;
        std::vector<std::string> names;
        while (std::getline(header, cell, ',')) {
            names.push_back(cell);
        }
        if (names.size() < 2 || names.back() != "y") {
            throw ConfigError("CSV header must be x1,...,xd,y");
        }
        for (std::size_t i = 0; i + 1 < names.size(); ++i) {
            if (names[i] != "x" + std::to_string(i + 1)) {
                throw ConfigError("unexpected CSV column '" + names[i] + "'");
            }
        }
        cols = names.size() - 1;
    }
    std::vector<double> xs;
    std::vector<double> ys;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<double> vals;
        const char *p = line.data();
        const char *end = line.data() + line.size();
        while (p <= end) {
            double v = 0.0;
            const auto res = std::from_chars(p, end, v);
            if (res.ec != std::errc()) {
                throw ConfigError("CSV line " + std::to_string(line_no) + " has a bad number");
            }
            vals.push_back(v);
            p = res.ptr;
            if (p == end) {
                break;
            }
            if (*p != ',') {
                throw ConfigError("CSV line " + std::to_string(line_no) + " is malformed");
            }
            ++p;
        }
        if (vals.size() != cols + 1) {
            throw ConfigError("CSV line " + std::to_string(line_no) + " has " +
                              std::to_string(vals.size()) + " fields, expected " +
                              std::to_string(cols + 1));
        }
        xs.insert(xs.end(), vals.begin(), vals.end() - 1);
        ys.push_back(vals.back());
    }
    return RawData{RowMatrix(ys.size(), cols, std::move(xs)), std::move(ys)};
}

} // namespace qfourier
