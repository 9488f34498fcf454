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
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "msisac/channel.hpp"
#include "msisac/geometry.hpp"

namespace msisac {

enum class SnrMode { Monostatic, Bistatic, Multistatic };

std::string_view to_string(SnrMode mode);
/// Accepts "monostatic", "bistatic", "multistatic". Throws ConfigError otherwise.
SnrMode parse_snr_mode(std::string_view name);

/// Two receiver indices serving one sub-sensing cell. `first` is the receiver
/// counterclockwise of the cell centre.
using RxPair = std::pair<std::size_t, std::size_t>;

/// Index 0, 1, 2 of the 120-degree sub-sensing cell containing `azimuth`
/// (relative to tx). Cell j covers [120j - 60, 120j + 60) degrees.
std::size_t sub_cell_index(double azimuth);

/// Azimuth of the centre of sub-sensing cell `cell`.
double sub_cell_center(std::size_t cell);

/// The two adjacent receivers whose bearings from tx bracket the sub-cell
/// containing `target_azimuth`. Requires a six-receiver layout.
RxPair schedule_receivers(const SceneConfig& layout, double target_azimuth);

struct SnrQuery {
    SnrMode mode = SnrMode::Multistatic;
    Vec2 obj_position;
    double rcs = 1.0;
};

/// Bistatic SNR in dB through receiver `rx_index`, interference-free.
double bistatic_snr_db(const SceneConfig& scene, const LinkBudget& link, const OfdmConfig& cfg,
                       std::size_t rx_index, Vec2 obj_position, double rcs);

/// Echo SNR in dB. Monostatic uses d_T = d_R = |obj - tx| and I0 = link.alpha * PT.
/// Bistatic uses pair->first; multistatic takes the larger of the pair; both
/// ignore link.alpha. Without an explicit pair the scheduled one is used
/// (six receivers), or receiver 0 / all receivers for other layouts.
double snr_db(const SceneConfig& scene, const LinkBudget& link, const OfdmConfig& cfg, const SnrQuery& query,
              std::optional<RxPair> pair = std::nullopt);

/// Triangle tx, rx_a, rx_b dilated by d0 / 4.
struct SubCellRegion {
    Vec2 a, b, c;
    double margin = 0.0;

    bool contains(Vec2 p) const;
    /// Axis-aligned bounding box of the dilated triangle.
    std::pair<Vec2, Vec2> bounds() const;
};

SubCellRegion sub_cell_region(const SceneConfig& scene, const RxPair& pair);

struct Heatmap {
    Vec2 origin;
    double step = 1.0;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> values;           ///< row-major in y, NaN on stations

    Vec2 point(std::size_t ix, std::size_t iy) const {
        return {origin.x + static_cast<double>(ix) * step, origin.y + static_cast<double>(iy) * step};
    }
    double at(std::size_t ix, std::size_t iy) const { return values[iy * nx + ix]; }
};

/// Evaluates snr_db on a lattice of spacing `step` covering [lo, hi].
Heatmap snr_heatmap(const SceneConfig& scene, const LinkBudget& link, const OfdmConfig& cfg, SnrMode mode,
                    Vec2 lo, Vec2 hi, double step, std::optional<RxPair> pair = std::nullopt, double rcs = 1.0);

}  // namespace msisac
