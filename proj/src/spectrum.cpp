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
#include "qfourier/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "qfourier/errors.hpp"

namespace qfourier {

namespace {

void check_prefactors(std::span<const double> prefactors) {
    if (prefactors.empty()) {
        throw ConfigError("prefactor list must not be empty");
    }
    for (double p : prefactors) {
        if (!std::isfinite(p) || p <= 0.0) {
            throw ConfigError("prefactors must be finite and positive, got " +
                              std::to_string(p));
        }
    }
}

bool is_integer(double v) { return std::abs(v - std::round(v)) <= kFrequencyTolerance; }

std::vector<double> dedupe_sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    out.reserve(v.size());
    for (double f : v) {
        if (out.empty() || f - out.back() > kFrequencyTolerance) {
            out.push_back(f);
        }
    }
    return out;
}

} // namespace

Spectrum1D::Spectrum1D(std::vector<double> freqs) : freqs_(dedupe_sorted(std::move(freqs))) {
    for (double f : freqs_) {
        if (!std::isfinite(f)) {
            throw ConfigError("spectrum frequencies must be finite");
        }
    }
}

bool Spectrum1D::contains(double omega) const noexcept {
    auto it = std::lower_bound(freqs_.begin(), freqs_.end(), omega - kFrequencyTolerance);
    return it != freqs_.end() && std::abs(*it - omega) <= kFrequencyTolerance;
}

bool Spectrum1D::integral() const noexcept {
    return std::all_of(freqs_.begin(), freqs_.end(), is_integer);
}

double Spectrum1D::max_abs() const noexcept {
    double m = 0.0;
    for (double f : freqs_) {
        m = std::max(m, std::abs(f));
    }
    return m;
}

void MixedSpectrum::validate() const {
    std::vector<int> seen(n_dims, 0);
    for (const auto &block : blocks) {
        if (block.dims.size() != block.spectra.size()) {
            throw ConfigError("spectrum block needs one spectrum per dimension");
        }
        for (std::size_t dim : block.dims) {
            if (dim >= n_dims) {
                throw ConfigError("spectrum block dimension " + std::to_string(dim) +
                                  " out of range");
            }
            ++seen[dim];
        }
    }
    for (std::size_t i = 0; i < n_dims; ++i) {
        if (seen[i] != 1) {
            throw ConfigError("spectrum blocks must partition the input dimensions (dimension " +
                              std::to_string(i) + ")");
        }
    }
}

std::vector<double> eigenvalue_ladder(std::span<const double> prefactors) {
    check_prefactors(prefactors);
    const std::size_t r = prefactors.size();
    if (r > 24) {
        throw ResourceError("eigenvalue ladder limited to 24 prefactors");
    }
    std::vector<double> ladder(std::size_t{1} << r);
    for (std::size_t a = 0; a < ladder.size(); ++a) {
        double sum = 0.0;
        for (std::size_t i = 0; i < r; ++i) {
            const bool flipped = ((a >> (r - 1 - i)) & 1U) != 0U;
            sum += flipped ? -prefactors[i] / 2.0 : prefactors[i] / 2.0;
        }
        ladder[a] = sum;
    }
    return ladder;
}

Spectrum1D spectrum_from_prefactors(std::span<const double> prefactors) {
    check_prefactors(prefactors);
    // Differences of ladder entries are sums of {-p_i, 0, +p_i}; build the
    // sumset one prefactor at a time.
    if (std::all_of(prefactors.begin(), prefactors.end(), is_integer)) {
        std::set<long long> sums{0};
        for (double p : prefactors) {
            const auto step = static_cast<long long>(std::llround(p));
            std::set<long long> next;
            for (long long s : sums) {
                next.insert(s - step);
                next.insert(s);
                next.insert(s + step);
            }
            sums.swap(next);
        }
        return Spectrum1D(std::vector<double>(sums.begin(), sums.end()));
    }
    std::vector<double> sums{0.0};
    for (double p : prefactors) {
        std::vector<double> next;
        next.reserve(sums.size() * 3);
        for (double s : sums) {
            next.push_back(s - p);
            next.push_back(s);
            next.push_back(s + p);
        }
        sums = dedupe_sorted(std::move(next));
    }
    return Spectrum1D(std::move(sums));
}

std::vector<double> ternary_prefactors(int layers) {
    if (layers < 1) {
        throw ConfigError("ternary encoding needs at least one layer");
    }
    std::vector<double> out;
    double p = 1.0;
    for (int i = 0; i < layers; ++i) {
        out.push_back(p);
        p *= 3.0;
    }
    return out;
}

MixedSpectrum mixed_spectrum(const std::vector<std::vector<double>> &prefactors,
                             const std::vector<std::vector<std::size_t>> &groups) {
    MixedSpectrum out;
    out.n_dims = prefactors.size();
    for (const auto &group : groups) {
        MixedSpectrum::Block block;
        block.dims = group;
        std::sort(block.dims.begin(), block.dims.end());
        for (std::size_t dim : block.dims) {
            if (dim >= prefactors.size()) {
                throw ConfigError("group references feature " + std::to_string(dim) +
                                  " but only " + std::to_string(prefactors.size()) +
                                  " features exist");
            }
            block.spectra.push_back(spectrum_from_prefactors(prefactors[dim]));
        }
        out.blocks.push_back(std::move(block));
    }
    out.validate();
    return out;
}

Cardinality mixed_cardinality(const MixedSpectrum &spectrum) {
    spectrum.validate();
    Cardinality c;
    for (const auto &block : spectrum.blocks) {
        std::uint64_t n = 1;
        for (const auto &s : block.spectra) {
            n *= s.size();
        }
        c.per_block.push_back(n);
        c.total += n;
    }
    // Blocks only share the all-zero vector, and only when each of them has it.
    std::uint64_t with_zero = 0;
    for (const auto &block : spectrum.blocks) {
        const bool has_zero = std::all_of(block.spectra.begin(), block.spectra.end(),
                                          [](const Spectrum1D &s) { return s.contains(0.0); });
        with_zero += has_zero ? 1 : 0;
    }
    c.shared_zero = with_zero > 0 ? with_zero - 1 : 0;
    c.distinct = c.total - c.shared_zero;
    return c;
}

Coverage<double> covers(const Spectrum1D &spectrum, std::span<const double> targets) {
    Coverage<double> out;
    for (double t : targets) {
        if (!spectrum.contains(t)) {
            out.covered = false;
            out.missing.push_back(t);
        }
    }
    return out;
}

bool contains(const MixedSpectrum &spectrum, std::span<const double> omega) {
    if (omega.size() != spectrum.n_dims) {
        throw ContractError("frequency vector has " + std::to_string(omega.size()) +
                            " components, spectrum has " + std::to_string(spectrum.n_dims) +
                            " dimensions");
    }
    for (const auto &block : spectrum.blocks) {
        bool inside = true;
        std::vector<bool> in_block(spectrum.n_dims, false);
        for (std::size_t k = 0; k < block.dims.size() && inside; ++k) {
            in_block[block.dims[k]] = true;
            inside = block.spectra[k].contains(omega[block.dims[k]]);
        }
        for (std::size_t i = 0; i < spectrum.n_dims && inside; ++i) {
            if (!in_block[i] && std::abs(omega[i]) > kFrequencyTolerance) {
                inside = false;
            }
        }
        if (inside) {
            return true;
        }
    }
    return false;
}

Coverage<std::vector<double>> covers(const MixedSpectrum &spectrum,
                                     const std::vector<std::vector<double>> &targets) {
    Coverage<std::vector<double>> out;
    for (const auto &t : targets) {
        if (!contains(spectrum, t)) {
            out.covered = false;
            out.missing.push_back(t);
        }
    }
    return out;
}

std::vector<std::vector<double>> enumerate(const MixedSpectrum &spectrum,
                                           std::uint64_t max_vectors) {
    const Cardinality card = mixed_cardinality(spectrum);
    if (card.distinct > max_vectors) {
        throw ResourceError("spectrum has " + std::to_string(card.distinct) +
                            " vectors, above the materialization cap of " +
                            std::to_string(max_vectors));
    }
    std::vector<std::vector<double>> out;
    std::vector<double> zero(spectrum.n_dims, 0.0);
    bool zero_emitted = false;
    for (const auto &block : spectrum.blocks) {
        std::vector<std::size_t> idx(block.dims.size(), 0);
        while (true) {
            std::vector<double> v(spectrum.n_dims, 0.0);
            bool is_zero = true;
            for (std::size_t k = 0; k < idx.size(); ++k) {
                v[block.dims[k]] = block.spectra[k].frequencies()[idx[k]];
                is_zero = is_zero && std::abs(v[block.dims[k]]) <= kFrequencyTolerance;
            }
            if (!is_zero || !zero_emitted) {
                zero_emitted = zero_emitted || is_zero;
                out.push_back(std::move(v));
            }
            std::size_t k = 0;
            for (; k < idx.size(); ++k) {
                if (++idx[k] < block.spectra[k].size()) {
                    break;
                }
                idx[k] = 0;
            }
            if (k == idx.size()) {
                break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace qfourier
