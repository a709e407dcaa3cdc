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

// Frequency spectra of angle-encoded models.
//
// A feature encoded by rotations with prefactors p_1..p_r exposes the
// frequencies {sum_i k_i p_i : k_i in {-1, 0, 1}}, i.e. all pairwise
// differences of the encoding generator's eigenvalues. Several features
// combine through a Cartesian product inside an entangled block; separate
// blocks add up without producing cross-block mixed frequencies.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qfourier {

/// Tolerance used to deduplicate and match non-integer frequencies.
inline constexpr double kFrequencyTolerance = 1e-9;

/// Sorted, duplicate-free set of frequencies for one input dimension.
class Spectrum1D {
  public:
    Spectrum1D() : freqs_{0.0} {}
    explicit Spectrum1D(std::vector<double> freqs);

    [[nodiscard]] const std::vector<double> &frequencies() const noexcept { return freqs_; }
    [[nodiscard]] std::size_t size() const noexcept { return freqs_.size(); }
    [[nodiscard]] bool contains(double omega) const noexcept;
    /// True when every frequency is an integer (within tolerance).
    [[nodiscard]] bool integral() const noexcept;
    [[nodiscard]] double max_abs() const noexcept;

    friend bool operator==(const Spectrum1D &, const Spectrum1D &) = default;

  private:
    std::vector<double> freqs_;
};

/// Spectrum of a model whose input dimensions are partitioned into blocks.
struct MixedSpectrum {
    struct Block {
        std::vector<std::size_t> dims;   ///< ascending
        std::vector<Spectrum1D> spectra; ///< one per entry of dims
        friend bool operator==(const Block &, const Block &) = default;
    };

    std::size_t n_dims = 0;
    std::vector<Block> blocks;

    /// Validates that blocks partition {0, ..., n_dims-1}.
    void validate() const;
    friend bool operator==(const MixedSpectrum &, const MixedSpectrum &) = default;
};

struct Cardinality {
    std::vector<std::uint64_t> per_block;
    std::uint64_t total = 0;          ///< plain sum over blocks
    std::uint64_t shared_zero = 0;    ///< copies of the zero vector counted more than once
    std::uint64_t distinct = 0;       ///< size of the union as a set of d-vectors
};

template <typename T> struct Coverage {
    bool covered = true;
    std::vector<T> missing;
};

/// All sign combinations sum_i +-p_i/2; basis index bit (r-1-i) selects the
/// sign of prefactor i (first prefactor is the most significant bit).
[[nodiscard]] std::vector<double> eigenvalue_ladder(std::span<const double> prefactors);

/// Unique pairwise differences of the eigenvalue ladder.
[[nodiscard]] Spectrum1D spectrum_from_prefactors(std::span<const double> prefactors);

/// Prefactors 3^0, ..., 3^(L-1).
[[nodiscard]] std::vector<double> ternary_prefactors(int layers);

/// Spectrum for per-dimension prefactor lists grouped into blocks.
[[nodiscard]] MixedSpectrum
mixed_spectrum(const std::vector<std::vector<double>> &prefactors,
               const std::vector<std::vector<std::size_t>> &groups);

[[nodiscard]] Cardinality mixed_cardinality(const MixedSpectrum &spectrum);

[[nodiscard]] Coverage<double> covers(const Spectrum1D &spectrum,
                                      std::span<const double> targets);
[[nodiscard]] Coverage<std::vector<double>>
covers(const MixedSpectrum &spectrum, const std::vector<std::vector<double>> &targets);

/// Membership of a single frequency vector.
[[nodiscard]] bool contains(const MixedSpectrum &spectrum, std::span<const double> omega);

/// Materializes every distinct frequency vector of the spectrum.
/// Throws ResourceError above max_vectors.
[[nodiscard]] std::vector<std::vector<double>>
enumerate(const MixedSpectrum &spectrum, std::uint64_t max_vectors = 1'000'000);

} // namespace qfourier
