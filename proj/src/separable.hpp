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

#include <complex>
#include <cstddef>
#include <vector>

namespace qfourier::detail {

using Complex = std::complex<double>;

// Separable tensor contraction: out[.., i_d, ..] = sum_k mats[d](i_d, k) in[.., k, ..]
// applied along every axis. Tensors are row-major, first axis slowest.

struct Rect {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Complex> data;
};

inline std::vector<Complex> contract(std::vector<Complex> tensor, std::vector<std::size_t> shape,
                                     const std::vector<const Rect *> &mats) {
    for (std::size_t axis = 0; axis < shape.size(); ++axis) {
        const Rect &m = *mats[axis];
        std::size_t outer = 1;
        for (std::size_t k = 0; k < axis; ++k) {
            outer *= shape[k];
        }
        std::size_t inner = 1;
        for (std::size_t k = axis + 1; k < shape.size(); ++k) {
            inner *= shape[k];
        }
        const std::size_t n_in = shape[axis];
        std::vector<Complex> out(outer * m.rows * inner, Complex{0.0, 0.0});
        for (std::size_t a = 0; a < outer; ++a) {
            const Complex *src = tensor.data() + a * n_in * inner;
            Complex *dst = out.data() + a * m.rows * inner;
            for (std::size_t i = 0; i < m.rows; ++i) {
                Complex *drow = dst + i * inner;
                const Complex *mrow = m.data.data() + i * m.cols;
                for (std::size_t k = 0; k < n_in; ++k) {
                    const Complex w = mrow[k];
                    const Complex *srow = src + k * inner;
                    for (std::size_t b = 0; b < inner; ++b) {
                        drow[b] += w * srow[b];
                    }
                }
            }
        }
        tensor.swap(out);
        shape[axis] = m.rows;
    }
    return tensor;
}


inline std::vector<const Rect *> pointers(const std::vector<Rect> &v) {
    std::vector<const Rect *> out;
    out.reserve(v.size());
    for (const auto &r : v) {
        out.push_back(&r);
    }
    return out;
}

} // namespace qfourier::detail
