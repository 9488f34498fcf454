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
#include <span>
#include <vector>

#include "msisac/channel.hpp"
#include "msisac/geometry.hpp"

namespace msisac {

/// Beam-swept sum of |a^H(phi) y| over every resource element.
struct AoaSpectrum {
    std::vector<double> phi_grid;
    std::vector<double> power;
};

/// Averaged range-Doppler magnitude map. Row p is Doppler bin p (centered:
/// row Ns/2 is 0 Hz), column q0 is delay bin q0 (0-based; q = q0 + 1 in the
/// 1-based convention used by peak_to_params).
struct RangeDopplerMap {
    std::size_t Ns = 0;
    std::size_t Nc = 0;
    std::vector<double> values;                     ///< Ns*Nc, row-major
    std::vector<double> doppler_axis;               ///< Hz, length Ns
    std::vector<double> range_axis;                 ///< bistatic range in m, length Nc
    std::vector<std::vector<double>> stream_values; ///< per-stream |G_i|, only when requested

    double at(std::size_t p, std::size_t q0) const { return values[p * Nc + q0]; }
};

struct Detection {
    double aoa = 0.0;                     ///< rad
    double bistatic_range = 0.0;          ///< m
    double range_rate = 0.0;              ///< m/s, positive when the path lengthens
    double peak_power = 0.0;              ///< averaged map magnitude at the peak
    std::size_t rx_index = 0;
    double p_index = 0.0;                 ///< Doppler bin, 0-based, may be fractional
    double q_index = 1.0;                 ///< delay bin, 1-based, may be fractional
};

struct RangeAndRate {
    double range_rate = 0.0;
    double bistatic_range = 0.0;
};

/// How per-stream range-Doppler maps are combined before parameter readout.
enum class PeakAggregation {
    MapAverage,     ///< average |G_i| over streams, then find peaks
    IndexAverage,   ///< find peaks per stream, then average their bin indices
};

struct DetectorParams {
    double aoa_step = deg2rad(0.5);
    double sector_half_width = deg2rad(60.0);
    double aoa_threshold = 2.0;           ///< relative to the spectrum median
    double rd_threshold = 10.0;           ///< relative to the map median
    /// Peaks below this fraction of the map maximum are discarded; only
    /// matters for noiseless maps whose median is rounding dust.
    double rd_floor = 1e-9;
    bool interpolate = false;             ///< parabolic sub-bin refinement
    PeakAggregation aggregation = PeakAggregation::MapAverage;

    void validate() const;
};

/// AoA scan grid: boresight + i*step for |i*step| <= half_width.
std::vector<double> sector_grid(double boresight, double half_width, double step);

AoaSpectrum aoa_spectrum(const SymbolGrid& rx, const ArrayConfig& array, std::span<const double> phi_grid);

/// Strict local maxima of the spectrum above threshold_factor * median.
/// Throws NoPeaks when none qualify.
std::vector<double> find_peaks_1d(const AoaSpectrum& spec, double threshold_factor);

/// Same as find_peaks_1d but returns grid indices and never throws.
std::vector<std::size_t> find_peak_indices_1d(std::span<const double> power, double threshold_factor);

/// Centered 2-D DFT of an Ns x Nc row-major block:
/// G(p,q0) = 1/(Ns Nc) sum h(ns,nc) exp(-j(p-Ns/2)2 pi ns/Ns) exp(+j q0 2 pi nc/Nc).
std::vector<cplx> range_doppler_dft(std::span<const cplx> h, std::size_t Ns, std::size_t Nc);

/// a^H(phi) y per resource element (Ns*Nc, row-major).
std::vector<cplx> beamform(const SymbolGrid& rx, const ArrayConfig& array, double phi);

/// Divide by each known transmit stream, beamform toward phi_hat, 2-D DFT,
/// and average the magnitude maps over streams.
RangeDopplerMap range_doppler_maps(const SymbolGrid& rx, const SymbolGrid& tx, double phi_hat,
                                   const ArrayConfig& array, bool keep_streams = false);

struct MapPeak {
    double p = 0.0;                       ///< 0-based Doppler index
    double q0 = 0.0;                      ///< 0-based delay index
    double value = 0.0;
};

/// Strict local maxima (8-neighbourhood, circular in both axes) above
/// max(threshold * median, floor * max).
std::vector<MapPeak> find_peaks_2d(const RangeDopplerMap& map, double threshold, double floor);

/// Bin indices to (range rate, bistatic range). p_hat is 0-based and centered
/// at Ns/2; q_hat is 1-based. Range rate uses the path-lengthening-positive sign.
RangeAndRate peak_to_params(double p_hat, double q_hat, const OfdmConfig& cfg);

/// Full per-receiver chain: AoA scan, peak pick, range-Doppler maps at every
/// AoA peak, 2-D peak pick, conversion to physical parameters.
std::vector<Detection> detect(const SymbolGrid& rx, const SymbolGrid& tx, const ArrayConfig& array,
                              const DetectorParams& params, std::size_t rx_index = 0);

}  // namespace msisac
