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
#include <span>
#include <vector>

#include "msisac/estimator.hpp"
#include "msisac/geometry.hpp"

namespace msisac {

/// One receiver's detection and the position it implies.
struct PositionedDetection {
    std::size_t rx_index = 0;
    Detection detection;
    Vec2 position;
};

using Cluster = std::vector<PositionedDetection>;

/// Fused estimate of one object.
struct FusedTrack {
    Vec2 position;
    std::optional<Vec2> velocity;
    double aod = 0.0;
    std::vector<PositionedDetection> members;
};

enum class VelocitySolveMode {
    TwoRxWithAod,     ///< one equation per receiver, AoD supplied by the caller
    ThreeRxAodFree,   ///< AoD terms cancelled by differencing, needs three receivers
};

/// Distance from rx to the point at bearing `aoa` whose bistatic range is `d_hat`.
/// Throws InsideBaseline when d_hat <= |tx - rx| (1 + 1e-9).
double ellipse_range(double d_hat, double aoa, Vec2 rx, Vec2 tx);

/// rx + ellipse_range(...) * (cos aoa, sin aoa).
Vec2 position_from_detection(const Detection& det, Vec2 rx, Vec2 tx);

/// Greedy nearest-centroid clustering. A position joins the closest cluster
/// whose centroid lies within `radius`, otherwise it founds a new one. A
/// cluster holds at most one member per receiver; on conflict the member
/// nearer to the centroid stays and the other is re-clustered.
std::vector<Cluster> cluster_positions(std::span<const PositionedDetection> per_rx, double radius);

struct FusedPosition {
    Vec2 position;
    double aod = 0.0;
};

/// Mean member position and the AoD from tx to it.
FusedPosition fuse_position(const Cluster& cluster, Vec2 tx);

/// Full velocity vector from the members' range rates and AoAs. `aod` is used
/// only by TwoRxWithAod. Extra members are handled by least squares.
/// Throws SingularGeometry when the system is rank deficient (condition
/// number above 1e8) and ConfigError when there are too few members.
Vec2 velocity_solve(const Cluster& cluster, VelocitySolveMode mode, double aod);

/// Colocated tx/rx: position at half the bistatic range along the AoA,
/// velocity is the radial component only.
FusedTrack monostatic_estimate(const Detection& det, Vec2 station);

/// Single separated pair: ellipse position and the minimum-norm velocity
/// consistent with the one range-rate equation.
FusedTrack bistatic_estimate(const Detection& det, Vec2 rx, Vec2 tx);

}  // namespace msisac
