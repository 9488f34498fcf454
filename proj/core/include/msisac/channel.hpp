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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "msisac/geometry.hpp"

namespace msisac {

/// Ns x Nc x N grid of frequency-domain OFDM symbols.
///
/// Storage is antenna-major: each antenna (or transmit stream) owns one
/// contiguous Ns*Nc plane, symbol-major within the plane. The estimator
/// sweeps planes element-wise, so this keeps its inner loops unit-stride.
class SymbolGrid {
public:
    SymbolGrid() = default;
    explicit SymbolGrid(const OfdmConfig& cfg);

    const OfdmConfig& cfg() const { return cfg_; }
    std::size_t Ns() const { return cfg_.Ns; }
    std::size_t Nc() const { return cfg_.Nc; }
    std::size_t N() const { return cfg_.N; }
    std::size_t plane_size() const { return cfg_.Ns * cfg_.Nc; }

    cplx& at(std::size_t ns, std::size_t nc, std::size_t n) { return data_[n * plane_size() + ns * cfg_.Nc + nc]; }
    const cplx& at(std::size_t ns, std::size_t nc, std::size_t n) const {
        return data_[n * plane_size() + ns * cfg_.Nc + nc];
    }

    std::span<cplx> plane(std::size_t n) { return {data_.data() + n * plane_size(), plane_size()}; }
    std::span<const cplx> plane(std::size_t n) const { return {data_.data() + n * plane_size(), plane_size()}; }

    std::span<cplx> data() { return data_; }
    std::span<const cplx> data() const { return data_; }

    bool all_finite() const;
    bool same_shape(const SymbolGrid& other) const;

    SymbolGrid& operator+=(const SymbolGrid& other);
    SymbolGrid& operator*=(double s);

private:
    OfdmConfig cfg_{};
    std::vector<cplx> data_;
};

/// Radar-equation and noise parameters of one tx/rx link.
struct LinkBudget {
    double pt_dbm = 30.0;
    double gt_db = 12.0;
    double gr_db = 12.0;
    double nf_db = 10.0;
    double alpha = 0.0;                   ///< linear self-interference coefficient, I0 = alpha * PT

    void validate() const;
    double pt_mw() const;
};

/// Complex amplitude, Doppler and delay of one propagation path.
struct PathComplexGain {
    cplx beta;
    double f_doppler = 0.0;               ///< Hz; -range_rate * fc / c
    double tau = 0.0;                     ///< s; bistatic_range / c
};

struct SynthesisOptions {
    bool add_noise = true;                ///< thermal noise plus alpha * PT self-interference
};

double db_to_linear(double db);
double linear_to_db(double lin);

/// Unit-modulus QPSK symbols from a stream keyed by `seed`.
SymbolGrid gen_tx_symbols(const OfdmConfig& cfg, std::uint64_t seed);

/// Bistatic radar equation, linear power gain. Throws DegenerateGeometry for a zero leg.
double path_gain(const LinkBudget& link, double rcs, double d_T, double d_R, double fc);

/// Thermal noise over `bandwidth` Hz in mW: -174 dBm/Hz + 10 log10(BW) + NF.
double noise_power(const LinkBudget& link, double bandwidth);

/// Per-resource-element noise-plus-interference variance in mW.
double noise_plus_interference(const LinkBudget& link, const OfdmConfig& cfg);

/// Path parameters for one object; `phase` is the carrier phase of beta.
PathComplexGain path_complex_gain(const LinkBudget& link, const OfdmConfig& cfg, const PropagationTruth& truth,
                                  double rcs, double phase);

/// Received grid of receiver `rx_index`: the sum of every object's echo
/// plus circular complex Gaussian noise. Deterministic in (inputs, seed).
SymbolGrid synthesize_rx(const SceneConfig& scene, const OfdmConfig& cfg, const LinkBudget& link,
                         std::size_t rx_index, const SymbolGrid& tx_symbols, std::uint64_t seed,
                         const SynthesisOptions& options = {});

}  // namespace msisac
