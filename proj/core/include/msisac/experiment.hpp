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
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "msisac/config.hpp"
#include "msisac/fusion.hpp"
#include "msisac/linkbudget.hpp"
#include "msisac/random.hpp"

namespace msisac {

struct RmseRecord {
    SnrMode mode = SnrMode::Multistatic;
    double sweep = 0.0;
    double position_rmse = 0.0;           ///< m; NaN when nothing was detected
    double velocity_rmse = 0.0;           ///< m/s; NaN when nothing was detected
    double detection_rate = 0.0;
    std::size_t trials = 0;
};

/// Transmitter, six receivers and arrays of the configured layout. The
/// transmit array faces the centre of the configured sub-sensing cell.
SceneConfig make_layout(const ExperimentConfig& cfg);

/// The two receivers serving the configured sub-sensing cell.
RxPair scheduled_pair(const ExperimentConfig& cfg);

/// Uniform draw inside the triangle tx, rx_a, rx_b at least `guard` from every
/// edge; speed uniform in [0, velocity_max], heading uniform.
SensingObject draw_object(const ExperimentConfig& cfg, Rng& rng);

/// Config with one sweep value applied (Nc, Ns or a transmit power offset).
ExperimentConfig at_sweep_point(const ExperimentConfig& cfg, double value);

/// Estimates of one mode for one trial; empty when nothing was detected.
struct ModeEstimate {
    bool detected = false;
    Vec2 position;
    Vec2 velocity;
};

struct TrialOutcome {
    SensingObject truth;
    std::vector<ModeEstimate> estimates;  ///< parallel to cfg.modes
};

/// One Monte Carlo trial at a fixed sweep point. The object and every random
/// stream depend only on (cfg.seed, trial), so sweep points share scenes.
TrialOutcome run_trial(const ExperimentConfig& cfg, std::size_t trial);

/// Multistatic fusion of detections from the scheduled pair: per-receiver
/// positions, clustering, largest cluster, mean position and velocity.
std::optional<FusedTrack> fuse_multistatic(const SceneConfig& layout, std::span<const Detection> detections,
                                           double cluster_radius);

/// Every (mode, sweep value) record, modes in config order within each sweep value.
std::vector<RmseRecord> run_rmse_sweep(const ExperimentConfig& cfg);

/// One traced pipeline pass with every intermediate result.
nlohmann::json run_single_shot(const ExperimentConfig& cfg, std::uint64_t seed);

/// SNR heatmap of the configured sub-sensing cell at bandwidth snr_map.nc.
Heatmap run_snr_map(const ExperimentConfig& cfg, SnrMode mode);

}  // namespace msisac
