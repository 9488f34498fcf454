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

#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace msisac::detail {

/// Forward 2-D DFT of a row-major rows x cols grid. Row transforms, a tiled
/// transpose, then contiguous column transforms: with FFTW_ESTIMATE this runs
/// well ahead of a single 2-D plan, and plans stay independent of timing.
/// Planning goes through a process-wide lock because the FFTW planner is not
/// reentrant; execution is lock-free. execute() overwrites the input.
class Dft2d {
public:
    Dft2d(std::size_t rows, std::size_t cols);
    ~Dft2d();
    Dft2d(const Dft2d&) = delete;
    Dft2d& operator=(const Dft2d&) = delete;

    std::span<std::complex<double>> input();
    /// Row-major rows x cols, valid after execute().
    std::span<const std::complex<double>> output() const;
    void execute();
    /// Skips the final transpose; the result is cols x rows, row-major.
    std::span<const std::complex<double>> execute_transposed();

private:
    std::size_t rows_;
    std::size_t cols_;
    fftw_complex* data_ = nullptr;
    fftw_complex* scratch_ = nullptr;
    fftw_plan row_plan_ = nullptr;
    fftw_plan col_plan_ = nullptr;
};

}  // namespace msisac::detail
