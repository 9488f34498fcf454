// SPDX-License-Identifier: Apache-2.0
//
// msisac: multistatic OFDM sensing simulator for cellular layouts
// Copyright (C) 2026 The msisac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "dft.hpp"

#include <algorithm>
#include <mutex>
#include <new>

namespace msisac::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// dst (cols x rows) = transpose of src (rows x cols), in cache-sized tiles.
void transpose(const fftw_complex* src, fftw_complex* dst, std::size_t rows, std::size_t cols) {
    constexpr std::size_t kTile = 32;
    for (std::size_t r0 = 0; r0 < rows; r0 += kTile) {
        const std::size_t r1 = std::min(rows, r0 + kTile);
        for (std::size_t c0 = 0; c0 < cols; c0 += kTile) {
            const std::size_t c1 = std::min(cols, c0 + kTile);
            for (std::size_t r = r0; r < r1; ++r)
                for (std::size_t c = c0; c < c1; ++c) {
                    dst[c * rows + r][0] = src[r * cols + c][0];
                    dst[c * rows + r][1] = src[r * cols + c][1];
                }
        }
    }
}

}  // namespace

Dft2d::Dft2d(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    std::lock_guard lock(planner_mutex());
    data_ = fftw_alloc_complex(rows * cols);
    scratch_ = fftw_alloc_complex(rows * cols);
    if (data_ == nullptr || scratch_ == nullptr) {
        fftw_free(data_);
        fftw_free(scratch_);
        throw std::bad_alloc();
    }
    const int r = static_cast<int>(rows), c = static_cast<int>(cols);
    row_plan_ = fftw_plan_many_dft(1, &c, r, data_, nullptr, 1, c, data_, nullptr, 1, c, FFTW_FORWARD, FFTW_ESTIMATE);
    col_plan_ =
        fftw_plan_many_dft(1, &r, c, scratch_, nullptr, 1, r, scratch_, nullptr, 1, r, FFTW_FORWARD, FFTW_ESTIMATE);
}

Dft2d::~Dft2d() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(row_plan_);
    fftw_destroy_plan(col_plan_);
    fftw_free(data_);
    fftw_free(scratch_);
}

// fftw_complex is layout-compatible with std::complex<double>.
std::span<std::complex<double>> Dft2d::input() {
    return {reinterpret_cast<std::complex<double>*>(data_), rows_ * cols_};
}

std::span<const std::complex<double>> Dft2d::output() const {
    return {reinterpret_cast<const std::complex<double>*>(data_), rows_ * cols_};
}

void Dft2d::execute() {
    fftw_execute(row_plan_);
    transpose(data_, scratch_, rows_, cols_);
    fftw_execute(col_plan_);
    transpose(scratch_, data_, cols_, rows_);
}

std::span<const std::complex<double>> Dft2d::execute_transposed() {
    fftw_execute(row_plan_);
    transpose(data_, scratch_, rows_, cols_);
    fftw_execute(col_plan_);
    return {reinterpret_cast<const std::complex<double>*>(scratch_), rows_ * cols_};
}

}  // namespace msisac::detail
