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

#include <gtest/gtest.h>

#include <string>

#include "msisac/config.hpp"
#include "msisac/errors.hpp"

using namespace msisac;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text, "cfg.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, MinimalDocumentGivesDeskDefaults) {
    const ExperimentConfig c = parse_config(R"({"schema_version": 1})");
    EXPECT_EQ(c.ofdm.Nc, 256u);
    EXPECT_EQ(c.ofdm.Ns, 56u);
    EXPECT_EQ(c.ofdm.N, 8u);
    EXPECT_EQ(c.trials, 1000u);
    EXPECT_EQ(c.velocity_max, 30.0);
    EXPECT_EQ(c.modes.size(), 3u);
    EXPECT_EQ(c.monostatic_alpha, 1e-7);
    EXPECT_EQ(c.link.pt_dbm, 30.0);
    EXPECT_EQ(c.link.nf_db, 10.0);
    EXPECT_EQ(c.scene.d0, 300.0);
    EXPECT_EQ(c.sweep_axis, SweepAxis::None);
}

TEST(Config, ParsesEveryBlock) {
    const ExperimentConfig c = parse_config(R"({
  "schema_version": 1,
  "seed": 9,
  "trials": 12,
  "noiseless": true,
  "modes": ["multistatic", "bistatic"],
  "ofdm": {"nc": 128, "ns": 28, "n_antennas": 4},
  "scene": {"sub_cell": 1, "objects": [{"position_m": [1, 2], "velocity_mps": [3, 4]}]},
  "link": {"pt_dbm": 40, "monostatic_alpha": 0},
  "detector": {"aoa_step_deg": 1, "interpolate": true, "aggregation": "index_average", "cluster_radius_bins": 2},
  "sweep": {"axis": "ns", "values": [28, 56]},
  "snr_map": {"nc": 512, "step_m": 10},
  "output": "x",
  "threads": 2
})");
    EXPECT_EQ(c.seed, 9u);
    EXPECT_TRUE(c.noiseless);
    ASSERT_EQ(c.modes.size(), 2u);
    EXPECT_EQ(c.modes[0], SnrMode::Multistatic);
    EXPECT_EQ(c.ofdm.N, 4u);
    EXPECT_EQ(c.scene.sub_cell, 1u);
    ASSERT_EQ(c.scene.objects.size(), 1u);
    EXPECT_EQ(c.scene.objects[0].velocity, (Vec2{3, 4}));
    EXPECT_EQ(c.link.pt_dbm, 40.0);
    EXPECT_EQ(c.monostatic_alpha, 0.0);
    EXPECT_NEAR(c.detector.aoa_step, deg2rad(1.0), 1e-15);
    EXPECT_EQ(c.detector.aggregation, PeakAggregation::IndexAverage);
    EXPECT_EQ(c.sweep_axis, SweepAxis::Ns);
    EXPECT_EQ(c.sweep_values, (std::vector<double>{28, 56}));
    EXPECT_EQ(c.snr_map.nc, 512u);
    EXPECT_EQ(c.threads, 2u);
}

TEST(Config, OddNsCitesTheEvenRuleWithItsLine) {
    const std::string msg = error_of("{\n  \"schema_version\": 1,\n  \"ofdm\": {\n    \"ns\": 57\n  }\n}\n");
    EXPECT_NE(msg.find("even"), std::string::npos) << msg;
    EXPECT_EQ(msg.rfind("cfg.json:4:", 0), 0u) << msg;
}

TEST(Config, OddNsInASweepIsRejected) {
    const std::string msg = error_of(R"({"schema_version": 1, "sweep": {"axis": "ns", "values": [56, 57]}})");
    EXPECT_NE(msg.find("even"), std::string::npos) << msg;
}

TEST(Config, UnknownKeyIsRejectedWithItsLine) {
    const std::string msg = error_of("{\n  \"schema_version\": 1,\n  \"link\": {\n    \"pt_dbm\": 30,\n    \"ptdbm\": 3\n  }\n}");
    EXPECT_NE(msg.find("unknown key 'link.ptdbm'"), std::string::npos) << msg;
    EXPECT_EQ(msg.rfind("cfg.json:5:", 0), 0u) << msg;
}

TEST(Config, MalformedJsonReportsALine) {
    const std::string msg = error_of("{\n  \"schema_version\": 1,\n  \"seed\": ,\n}");
    EXPECT_EQ(msg.rfind("cfg.json:3:", 0), 0u) << msg;
    EXPECT_NE(msg.find("malformed JSON"), std::string::npos);
}

TEST(Config, SchemaVersionIsRequiredAndChecked) {
    EXPECT_NE(error_of(R"({"seed": 1})").find("schema_version"), std::string::npos);
    EXPECT_NE(error_of(R"({"schema_version": 2})").find("unsupported version 2"), std::string::npos);
}

TEST(Config, RejectsBadValues) {
    EXPECT_FALSE(error_of(R"({"schema_version": 1, "trials": 0})").empty());
    EXPECT_FALSE(error_of(R"({"schema_version": 1, "modes": ["radar"]})").empty());
    EXPECT_FALSE(error_of(R"({"schema_version": 1, "modes": ["bistatic", "bistatic"]})").empty());
    EXPECT_FALSE(error_of(R"({"schema_version": 1, "sweep": {"axis": "nc"}})").empty());
    EXPECT_FALSE(error_of(R"({"schema_version": 1, "sweep": {"axis": "bandwidth", "values": [1]}})").empty());
    EXPECT_FALSE(error_of(R"({"schema_version": 1, "scene": {"n_rx": 5}})").empty());
    EXPECT_FALSE(error_of(R"({"schema_version": 1, "ofdm": {"nc": "many"}})").empty());
    EXPECT_FALSE(error_of(R"([1, 2])").empty());
}

TEST(Config, ToJsonRoundTrips) {
    const ExperimentConfig a = parse_config(R"({"schema_version": 1, "seed": 5, "ofdm": {"nc": 64, "ns": 14},
        "sweep": {"axis": "pt_offset_db", "values": [-3, 0, 3]}, "detector": {"aoa_step_deg": 0.25}})");
    const ExperimentConfig b = parse_config(to_json(a).dump());
    EXPECT_EQ(to_json(a), to_json(b));
    EXPECT_EQ(b.ofdm.Nc, 64u);
    EXPECT_EQ(b.sweep_axis, SweepAxis::PtOffsetDb);
    EXPECT_NEAR(b.detector.aoa_step, deg2rad(0.25), 1e-15);
}

TEST(Config, MissingFileIsAConfigError) {
    EXPECT_THROW(load_config("/nonexistent/dir/cfg.json"), ConfigError);
}
