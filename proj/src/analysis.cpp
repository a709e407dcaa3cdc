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
#include "qfourier/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <string>

#include "qfourier/errors.hpp"
#include "qfourier/simulator.hpp"
#include "qfourier/training.hpp"
#include "separable.hpp"

namespace qfourier {

namespace {

std::string format_frequency(const FrequencyVector &w) {
    std::string s = "(";
    for (std::size_t i = 0; i < w.size(); ++i) {
        s += (i ? ", " : "") + std::to_string(w[i]);
    }
    return s + ")";
}

double dot(const FrequencyVector &w, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        s += static_cast<double>(w[i]) * x[i];
    }
    return s;
}

} // namespace

std::optional<Complex> CoefficientTable::find(const FrequencyVector &omega) const {
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        if (frequencies[i] == omega) {
            return values[i];
        }
    }
    return std::nullopt;
}

std::vector<FrequencyVector> frequency_box(std::size_t d, long long limit, long long stride) {
    if (limit < 0 || stride < 1) {
        throw ConfigError("frequency box needs limit >= 0 and stride >= 1");
    }
    std::vector<long long> axis;
    for (long long w = -(limit / stride) * stride; w <= limit; w += stride) {
        axis.push_back(w);
    }
    std::vector<FrequencyVector> out{FrequencyVector{}};
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<FrequencyVector> next;
        next.reserve(out.size() * axis.size());
        for (const auto &prefix : out) {
            for (long long w : axis) {
                next.push_back(prefix);
                next.back().push_back(w);
            }
        }
        out = std::move(next);
    }
    return out;
}

CoefficientTable dft_coefficients(const Evaluable &f, std::size_t d,
                                  const std::vector<FrequencyVector> &freq_set,
                                  std::size_t n_grid, std::vector<long long> stride) {
    if (d < 1) {
        throw ConfigError("DFT needs at least one dimension");
    }
    if (stride.empty()) {
        stride.assign(d, 1);
    }
    if (stride.size() != d) {
        throw ContractError("stride must have one entry per dimension");
    }
    for (long long g : stride) {
        if (g < 1) {
            throw ConfigError("DFT stride must be positive");
        }
    }
    // Distinct per-dimension frequencies, checked against the sampling limits.
    std::vector<std::vector<long long>> axis_values(d);
    for (const auto &w : freq_set) {
        if (w.size() != d) {
            throw ContractError("frequency " + format_frequency(w) + " has the wrong dimension");
        }
        for (std::size_t k = 0; k < d; ++k) {
            if (w[k] % stride[k] != 0) {
                throw ConfigError("frequency " + format_frequency(w) +
                                  " is not a multiple of the sampling stride " +
                                  std::to_string(stride[k]));
            }
            const auto reduced = static_cast<std::size_t>(std::llabs(w[k] / stride[k]));
            if (n_grid <= 2 * reduced) {
                throw ConfigError("frequency " + format_frequency(w) + " aliases on a " +
                                  std::to_string(n_grid) + "-point grid (need more than " +
                                  std::to_string(2 * reduced) + " points)");
            }
            axis_values[k].push_back(w[k]);
        }
    }
    std::uint64_t cells = 1;
    for (std::size_t k = 0; k < d; ++k) {
        cells *= n_grid;
        if (cells > kDefaultRowCap) {
            throw ResourceError("DFT grid exceeds " + std::to_string(kDefaultRowCap) + " points");
        }
        auto &v = axis_values[k];
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    std::vector<std::vector<double>> grid(d, std::vector<double>(n_grid));
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t j = 0; j < n_grid; ++j) {
            grid[k][j] = (-std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                                  static_cast<double>(n_grid)) /
                         static_cast<double>(stride[k]);
        }
    }
    std::vector<Complex> samples(cells);
    std::vector<double> x(d);
    for (std::size_t c = 0; c < cells; ++c) {
        std::size_t rest = c;
        for (std::size_t k = d; k-- > 0;) {
            x[k] = grid[k][rest % n_grid];
            rest /= n_grid;
        }
        samples[c] = f(x);
    }

    std::vector<detail::Rect> mats(d);
    for (std::size_t k = 0; k < d; ++k) {
        auto &m = mats[k];
        m.rows = axis_values[k].size();
        m.cols = n_grid;
        m.data.resize(m.rows * m.cols);
        for (std::size_t i = 0; i < m.rows; ++i) {
            for (std::size_t j = 0; j < n_grid; ++j) {
                const double ph = -static_cast<double>(axis_values[k][i]) * grid[k][j];
                m.data[i * n_grid + j] =
                    Complex{std::cos(ph), std::sin(ph)} / static_cast<double>(n_grid);
            }
        }
    }
    const std::vector<Complex> box = detail::contract(
        std::move(samples), std::vector<std::size_t>(d, n_grid), detail::pointers(mats));

    CoefficientTable table;
    table.n_grid = n_grid;
    table.stride = stride;
    table.frequencies = freq_set;
    table.values.reserve(freq_set.size());
    for (const auto &w : freq_set) {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < d; ++k) {
            const auto &v = axis_values[k];
            idx = idx * v.size() +
                  static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), w[k]) - v.begin());
        }
        table.values.push_back(box[idx]);
    }
    return table;
}

Evaluable model_function(const ParamCircuit &circuit, std::vector<double> theta) {
    return [&circuit, theta = std::move(theta)](std::span<const double> x) {
        return model_output(circuit, x, theta);
    };
}

Evaluable scaled_target_function(const TargetSpec &spec, const Scaling &scaling) {
    spec.validate();
    if (scaling.input_min.size() != spec.d || scaling.input_max.size() != spec.d) {
        throw ContractError("scaling and target dimensions differ");
    }
    return [spec, scaling](std::span<const double> x) {
        std::vector<double> raw(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double u = (x[i] + std::numbers::pi) / (2.0 * std::numbers::pi);
            raw[i] = scaling.input_min[i] + u * (scaling.input_max[i] - scaling.input_min[i]);
        }
        const double t = eval_target(spec, raw);
        return -1.0 + 2.0 * (t - scaling.output_min) / (scaling.output_max - scaling.output_min);
    };
}

CoefficientDiff coefficient_diff(const CoefficientTable &model, const CoefficientTable &target) {
    if (model.frequencies != target.frequencies) {
        throw ContractError("coefficient tables cover different frequency sets");
    }
    CoefficientDiff out;
    out.frequencies = model.frequencies;
    out.diff.reserve(model.values.size());
    for (std::size_t i = 0; i < model.values.size(); ++i) {
        const Complex d = model.values[i] - target.values[i];
        out.diff.push_back(d);
        if (std::abs(d) > out.max_abs || out.argmax.empty()) {
            out.max_abs = std::max(out.max_abs, std::abs(d));
            out.argmax = model.frequencies[i];
        }
    }
    return out;
}

double FourierFit::predict(std::span<const double> x) const {
    double y = intercept;
    for (std::size_t k = 0; k < frequencies.size(); ++k) {
        const double ph = dot(frequencies[k], x);
        y += cos_coef[k] * std::cos(ph) + sin_coef[k] * std::sin(ph);
    }
    return y;
}

FourierFit fourier_least_squares(const Dataset &data, const Split &split,
                                 const std::vector<FrequencyVector> &freq_set) {
    for (const auto &w : freq_set) {
        if (w.size() != data.dims()) {
            throw ContractError("frequency " + format_frequency(w) + " has the wrong dimension");
        }
    }
    const std::size_t cols = 2 * freq_set.size() + 1;
    if (split.train.size() < cols) {
        throw ContractError("least squares needs at least " + std::to_string(cols) +
                            " training rows, got " + std::to_string(split.train.size()));
    }
    FourierFit fit;
    fit.frequencies = freq_set;
    fit.cos_coef.assign(freq_set.size(), 0.0);
    fit.sin_coef.assign(freq_set.size(), 0.0);

    std::vector<double> y_train;
    for (std::size_t r : split.train) {
        y_train.push_back(data.targets[r]);
    }
    if (freq_set.empty()) {
        double mean = 0.0;
        for (double y : y_train) {
            mean += y;
        }
        fit.intercept = mean / static_cast<double>(y_train.size());
    } else {
        Eigen::MatrixXd a(static_cast<Eigen::Index>(split.train.size()),
                          static_cast<Eigen::Index>(cols));
        Eigen::VectorXd b(static_cast<Eigen::Index>(split.train.size()));
        for (std::size_t i = 0; i < split.train.size(); ++i) {
            const auto x = data.inputs.row(split.train[i]);
            const auto row = static_cast<Eigen::Index>(i);
            a(row, 0) = 1.0;
            for (std::size_t k = 0; k < freq_set.size(); ++k) {
                const double ph = dot(freq_set[k], x);
                a(row, static_cast<Eigen::Index>(1 + 2 * k)) = std::cos(ph);
                a(row, static_cast<Eigen::Index>(2 + 2 * k)) = std::sin(ph);
            }
            b(row) = y_train[i];
        }
        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
        if (qr.rank() < static_cast<Eigen::Index>(cols)) {
            throw DegenerateError("Fourier design matrix is rank deficient (rank " +
                                  std::to_string(qr.rank()) + " of " + std::to_string(cols) +
                                  ")");
        }
        const Eigen::VectorXd coef = qr.solve(b);
        fit.intercept = coef(0);
        for (std::size_t k = 0; k < freq_set.size(); ++k) {
            fit.cos_coef[k] = coef(static_cast<Eigen::Index>(1 + 2 * k));
            fit.sin_coef[k] = coef(static_cast<Eigen::Index>(2 + 2 * k));
        }
    }

    auto score = [&](const std::vector<std::size_t> &rows) {
        std::vector<double> pred;
        std::vector<double> actual;
        for (std::size_t r : rows) {
            pred.push_back(fit.predict(data.inputs.row(r)));
            actual.push_back(data.targets[r]);
        }
        return r2(pred, actual);
    };
    fit.r2_train = score(split.train);
    fit.r2_test = split.test.empty() ? fit.r2_train : score(split.test);
    return fit;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw ContractError("percentile of an empty list");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw ContractError("percentile level must lie in [0, 1]");
    }
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

RunSummary summarize_runs(std::span<const double> scores) {
    if (scores.empty()) {
        throw ContractError("cannot summarize an empty score list");
    }
    const std::vector<double> v(scores.begin(), scores.end());
    RunSummary s;
    s.n = v.size();
    double sum = 0.0;
    for (double x : v) {
        sum += x;
    }
    s.mean = sum / static_cast<double>(v.size());
    s.median = percentile(v, 0.5);
    s.q25 = percentile(v, 0.25);
    s.q75 = percentile(v, 0.75);
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    return s;
}

void write_coefficients_csv(std::ostream &out, const CoefficientTable &table) {
    for (std::size_t k = 0; k < table.dims(); ++k) {
        out << 'w' << (k + 1) << ',';
    }
    out << "re,im\n";
    const auto old = out.precision(17);
    for (std::size_t i = 0; i < table.frequencies.size(); ++i) {
        for (long long w : table.frequencies[i]) {
            out << w << ',';
        }
        out << table.values[i].real() << ',' << table.values[i].imag() << '\n';
    }
    out.precision(old);
}

} // namespace qfourier
