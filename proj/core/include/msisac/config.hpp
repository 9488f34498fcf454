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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "msisac/channel.hpp"
#include "msisac/estimator.hpp"
#include "msisac/geometry.hpp"
#include "msisac/linkbudget.hpp"

namespace msisac {

inline constexpr int kSchemaVersion = 1;

enum class SweepAxis { None, Nc, Ns, PtOffsetDb };

std::string_view to_string(SweepAxis axis);

struct SceneParams {
    Vec2 tx;
    double d0 = 300.0;
    std::size_t n_rx = 6;
    std::size_t sub_cell = 0;             ///< sub-sensing cell the objects are drawn in
    double guard = 30.0;                  ///< m, minimum distance of a drawn object from the cell edges
    double spacing_wavelengths = 0.5;
    double rcs = 1.0;
    std::vector<SensingObject> objects;   ///< fixed objects for single-shot runs; drawn when empty
};

struct SnrMapParams {
    std::size_t nc = 1024;                ///< bandwidth used for the map
    double step = 5.0;                    ///< lattice pitch, m
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    bool noiseless = false;
    double velocity_max = 30.0;
    std::vector<SnrMode> modes{SnrMode::Monostatic, SnrMode::Bistatic, SnrMode::Multistatic};

    OfdmConfig ofdm;
    SceneParams scene;
    LinkBudget link;                      ///< alpha is ignored; see monostatic_alpha
    double monostatic_alpha = 1e-7;
    DetectorParams detector;
    double cluster_radius_bins = 3.0;     ///< cluster radius in range bins

    SweepAxis sweep_axis = SweepAxis::None;
    std::vector<double> sweep_values;

    SnrMapParams snr_map;
    std::string output = "out";
    std::size_t threads = 0;              ///< 0 = hardware concurrency

    void validate() const;
};

/// Parses a config document. `source` names the origin in error messages,
/// which are anchored as "source:line: message".
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");

/// Reads and parses a config file. Throws ConfigError on I/O or content errors.
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace msisac
