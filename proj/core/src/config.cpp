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

#include "msisac/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "msisac/errors.hpp"

namespace msisac {

namespace {

using json = nlohmann::json;
using Path = std::vector<std::string>;

std::string join(const Path& path) {
    std::string s;
    for (const auto& p : path) {
        if (!s.empty()) s += '.';
        s += p;
    }
    return s.empty() ? "<root>" : s;
}

class Reader {
public:
    Reader(std::string_view text, std::string_view source) : text_(text), source_(source) {}

    /// 1-based line of the last key of `path`, found by walking the keys in
    /// document order. Falls back to the deepest key that was found.
    std::size_t line_of(const Path& path) const {
        std::size_t pos = 0, found = std::string_view::npos;
        for (const auto& key : path) {
            const auto p = text_.find("\"" + key + "\"", pos);
            if (p == std::string_view::npos) break;
            found = pos = p;
        }
        return found == std::string_view::npos ? 1 : line_at(found);
    }

    std::size_t line_at(std::size_t byte) const {
        const auto end = std::min(byte, text_.size());
        return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
    }

    [[noreturn]] void fail(const Path& path, const std::string& msg) const { fail_at(line_of(path), msg); }

    [[noreturn]] void fail_at(std::size_t line, const std::string& msg) const {
        throw ConfigError(std::string(source_) + ":" + std::to_string(line) + ": " + msg);
    }

    void check(bool ok, const Path& path, const std::string& msg) const {
        if (!ok) fail(path, join(path) + ": " + msg);
    }

    void only_keys(const json& obj, const Path& path, std::initializer_list<std::string_view> allowed) const {
        if (!obj.is_object()) fail(path, join(path) + ": expected an object");
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
                Path p = path;
                p.push_back(it.key());
                fail(p, "unknown key '" + join(p) + "'");
            }
        }
    }

    double number(const json& obj, const Path& parent, const std::string& key, double def) const {
        if (!obj.contains(key)) return def;
        const Path p = with(parent, key);
        const json& v = obj.at(key);
        if (!v.is_number()) fail(p, join(p) + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(p, join(p) + ": must be finite");
        return d;
    }

    std::uint64_t integer(const json& obj, const Path& parent, const std::string& key, std::uint64_t def) const {
        if (!obj.contains(key)) return def;
        const Path p = with(parent, key);
        const json& v = obj.at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
            fail(p, join(p) + ": expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    bool boolean(const json& obj, const Path& parent, const std::string& key, bool def) const {
        if (!obj.contains(key)) return def;
        const Path p = with(parent, key);
        if (!obj.at(key).is_boolean()) fail(p, join(p) + ": expected true or false");
        return obj.at(key).get<bool>();
    }

    std::string string(const json& obj, const Path& parent, const std::string& key, const std::string& def) const {
        if (!obj.contains(key)) return def;
        const Path p = with(parent, key);
        if (!obj.at(key).is_string()) fail(p, join(p) + ": expected a string");
        return obj.at(key).get<std::string>();
    }

    Vec2 vec2(const json& obj, const Path& parent, const std::string& key, Vec2 def) const {
        if (!obj.contains(key)) return def;
        const Path p = with(parent, key);
        const json& v = obj.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            fail(p, join(p) + ": expected [x, y]");
        const Vec2 out{v[0].get<double>(), v[1].get<double>()};
        if (!out.finite()) fail(p, join(p) + ": must be finite");
        return out;
    }

    static Path with(const Path& parent, const std::string& key) {
        Path p = parent;
        p.push_back(key);
        return p;
    }

private:
    std::string_view text_;
    std::string_view source_;
};

SweepAxis parse_axis(const std::string& s, const Reader& r, const Path& p) {
    if (s == "none") return SweepAxis::None;
    if (s == "nc") return SweepAxis::Nc;
    if (s == "ns") return SweepAxis::Ns;
    if (s == "pt_offset_db") return SweepAxis::PtOffsetDb;
    r.fail(p, join(p) + ": unknown sweep axis '" + s + "' (expected none, nc, ns or pt_offset_db)");
}

PeakAggregation parse_aggregation(const std::string& s, const Reader& r, const Path& p) {
    if (s == "map_average") return PeakAggregation::MapAverage;
    if (s == "index_average") return PeakAggregation::IndexAverage;
    r.fail(p, join(p) + ": unknown aggregation '" + s + "' (expected map_average or index_average)");
}

// Degrees for output, rounded so 60 deg does not print as 59.99999999999999.
double degrees_out(double rad) { return std::round(rad2deg(rad) * 1e9) / 1e9; }

std::string_view to_string(PeakAggregation a) {
    return a == PeakAggregation::IndexAverage ? "index_average" : "map_average";
}

void parse_ofdm(const json& o, const Reader& r, OfdmConfig& c) {
    const Path P{"ofdm"};
    r.only_keys(o, P, {"fc_hz", "f_delta_hz", "ts_s", "nc", "ns", "n_antennas"});
    c.fc = r.number(o, P, "fc_hz", c.fc);
    c.f_delta = r.number(o, P, "f_delta_hz", c.f_delta);
    c.Ts = r.number(o, P, "ts_s", c.Ts);
    c.Nc = r.integer(o, P, "nc", c.Nc);
    c.Ns = r.integer(o, P, "ns", c.Ns);
    c.N = r.integer(o, P, "n_antennas", c.N);
    r.check(c.fc > 0, Reader::with(P, "fc_hz"), "must be positive");
    r.check(c.f_delta > 0, Reader::with(P, "f_delta_hz"), "must be positive");
    r.check(c.Ts > 0, Reader::with(P, "ts_s"), "must be positive");
    r.check(c.Nc > 0, Reader::with(P, "nc"), "must be positive");
    r.check(c.N > 0, Reader::with(P, "n_antennas"), "must be positive");
    r.check(c.Ns > 0 && c.Ns % 2 == 0, Reader::with(P, "ns"),
            "Ns must be positive and even (centered Doppler axis), got " + std::to_string(c.Ns));
}

void parse_scene(const json& o, const Reader& r, SceneParams& s) {
    const Path P{"scene"};
    r.only_keys(o, P, {"tx_m", "d0_m", "n_rx", "sub_cell", "guard_m", "spacing_wavelengths", "rcs_m2", "objects"});
    s.tx = r.vec2(o, P, "tx_m", s.tx);
    s.d0 = r.number(o, P, "d0_m", s.d0);
    s.n_rx = r.integer(o, P, "n_rx", s.n_rx);
    s.sub_cell = r.integer(o, P, "sub_cell", s.sub_cell);
    s.guard = r.number(o, P, "guard_m", s.guard);
    s.spacing_wavelengths = r.number(o, P, "spacing_wavelengths", s.spacing_wavelengths);
    s.rcs = r.number(o, P, "rcs_m2", s.rcs);
    r.check(s.d0 > 0, Reader::with(P, "d0_m"), "must be positive");
    r.check(s.n_rx == 6, Reader::with(P, "n_rx"), "the sub-sensing cell layout needs exactly 6 receivers");
    r.check(s.sub_cell < 3, Reader::with(P, "sub_cell"), "must be 0, 1 or 2");
    r.check(s.guard >= 0 && s.guard < s.d0 / 4, Reader::with(P, "guard_m"), "must be in [0, d0/4)");
    r.check(s.spacing_wavelengths > 0 && s.spacing_wavelengths <= 0.5, Reader::with(P, "spacing_wavelengths"),
            "must be in (0, 0.5]");
    r.check(s.rcs > 0, Reader::with(P, "rcs_m2"), "must be positive");

    s.objects.clear();
    if (o.contains("objects")) {
        const Path OP = Reader::with(P, "objects");
        if (!o.at("objects").is_array()) r.fail(OP, join(OP) + ": expected an array");
        for (const auto& obj : o.at("objects")) {
            r.only_keys(obj, OP, {"position_m", "velocity_mps", "rcs_m2"});
            SensingObject so;
            so.position = r.vec2(obj, OP, "position_m", {});
            so.velocity = r.vec2(obj, OP, "velocity_mps", {});
            so.rcs = r.number(obj, OP, "rcs_m2", s.rcs);
            r.check(so.rcs > 0, Reader::with(OP, "rcs_m2"), "must be positive");
            s.objects.push_back(so);
        }
    }
}

void parse_link(const json& o, const Reader& r, ExperimentConfig& c) {
    const Path P{"link"};
    r.only_keys(o, P, {"pt_dbm", "gt_db", "gr_db", "nf_db", "monostatic_alpha"});
    c.link.pt_dbm = r.number(o, P, "pt_dbm", c.link.pt_dbm);
    c.link.gt_db = r.number(o, P, "gt_db", c.link.gt_db);
    c.link.gr_db = r.number(o, P, "gr_db", c.link.gr_db);
    c.link.nf_db = r.number(o, P, "nf_db", c.link.nf_db);
    c.monostatic_alpha = r.number(o, P, "monostatic_alpha", c.monostatic_alpha);
    r.check(c.monostatic_alpha >= 0, Reader::with(P, "monostatic_alpha"), "must be >= 0");
}

void parse_detector(const json& o, const Reader& r, ExperimentConfig& c) {
    const Path P{"detector"};
    r.only_keys(o, P, {"aoa_step_deg", "sector_half_width_deg", "aoa_threshold", "rd_threshold", "rd_floor",
                       "interpolate", "aggregation", "cluster_radius_bins"});
    DetectorParams& d = c.detector;
    d.aoa_step = deg2rad(r.number(o, P, "aoa_step_deg", rad2deg(d.aoa_step)));
    d.sector_half_width = deg2rad(r.number(o, P, "sector_half_width_deg", rad2deg(d.sector_half_width)));
    d.aoa_threshold = r.number(o, P, "aoa_threshold", d.aoa_threshold);
    d.rd_threshold = r.number(o, P, "rd_threshold", d.rd_threshold);
    d.rd_floor = r.number(o, P, "rd_floor", d.rd_floor);
    d.interpolate = r.boolean(o, P, "interpolate", d.interpolate);
    d.aggregation = parse_aggregation(r.string(o, P, "aggregation", std::string(to_string(d.aggregation))), r,
                                      Reader::with(P, "aggregation"));
    c.cluster_radius_bins = r.number(o, P, "cluster_radius_bins", c.cluster_radius_bins);
    r.check(d.aoa_step > 0, Reader::with(P, "aoa_step_deg"), "must be positive");
    r.check(d.sector_half_width >= 0, Reader::with(P, "sector_half_width_deg"), "must be >= 0");
    r.check(d.aoa_threshold > 1, Reader::with(P, "aoa_threshold"), "must be > 1");
    r.check(d.rd_threshold > 1, Reader::with(P, "rd_threshold"), "must be > 1");
    r.check(d.rd_floor >= 0 && d.rd_floor < 1, Reader::with(P, "rd_floor"), "must be in [0, 1)");
    r.check(c.cluster_radius_bins > 0, Reader::with(P, "cluster_radius_bins"), "must be positive");
}

void parse_sweep(const json& o, const Reader& r, ExperimentConfig& c) {
    const Path P{"sweep"};
    r.only_keys(o, P, {"axis", "values"});
    c.sweep_axis = parse_axis(r.string(o, P, "axis", "none"), r, Reader::with(P, "axis"));
    c.sweep_values.clear();
    const Path VP = Reader::with(P, "values");
    if (o.contains("values")) {
        if (!o.at("values").is_array()) r.fail(VP, join(VP) + ": expected an array of numbers");
        for (const auto& v : o.at("values")) {
            if (!v.is_number()) r.fail(VP, join(VP) + ": expected an array of numbers");
            c.sweep_values.push_back(v.get<double>());
        }
    }
    if (c.sweep_axis == SweepAxis::None) {
        r.check(c.sweep_values.empty(), VP, "values given but axis is none");
        return;
    }
    r.check(!c.sweep_values.empty(), VP, "sweep must be nonempty");
    for (double v : c.sweep_values) {
        r.check(std::isfinite(v), VP, "values must be finite");
        if (c.sweep_axis == SweepAxis::Nc || c.sweep_axis == SweepAxis::Ns) {
            r.check(v >= 1 && v == std::floor(v), VP, "values must be positive integers");
            if (c.sweep_axis == SweepAxis::Ns)
                r.check(static_cast<std::uint64_t>(v) % 2 == 0, VP,
                        "Ns must be positive and even (centered Doppler axis)");
        }
    }
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::None: return "none";
        case SweepAxis::Nc: return "nc";
        case SweepAxis::Ns: return "ns";
        case SweepAxis::PtOffsetDb: return "pt_offset_db";
    }
    return "none";
}

void ExperimentConfig::validate() const {
    if (schema_version != kSchemaVersion) throw ConfigError("unsupported schema_version");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (!(velocity_max >= 0.0)) throw ConfigError("velocity_max_mps must be >= 0");
    if (modes.empty()) throw ConfigError("modes must be nonempty");
    ofdm.validate();
    detector.validate();
    link.validate();
    if (scene.n_rx != 6) throw ConfigError("scene.n_rx must be 6");
    if (scene.sub_cell > 2) throw ConfigError("scene.sub_cell must be 0, 1 or 2");
    if (!(scene.d0 > 0.0)) throw ConfigError("scene.d0_m must be positive");
    if (!(scene.guard >= 0.0 && scene.guard < scene.d0 / 4.0)) throw ConfigError("scene.guard_m must be in [0, d0/4)");
    if (sweep_axis != SweepAxis::None && sweep_values.empty()) throw ConfigError("sweep must be nonempty");
    if (sweep_axis == SweepAxis::Ns)
        for (double v : sweep_values)
            if (static_cast<std::uint64_t>(v) % 2 != 0)
                throw ConfigError("Ns must be positive and even (centered Doppler axis)");
    if (!(snr_map.step > 0.0) || snr_map.nc == 0) throw ConfigError("snr_map: step and nc must be positive");
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
    const Reader r(text, source);
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        std::string what = e.what();
        if (const auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
        r.fail_at(r.line_at(byte), "malformed JSON: " + what);
    }
    if (!j.is_object()) r.fail_at(1, "top level must be a JSON object");

    r.only_keys(j, {}, {"schema_version", "seed", "trials", "noiseless", "velocity_max_mps", "modes", "ofdm", "scene",
                        "link", "detector", "sweep", "snr_map", "output", "threads"});

    ExperimentConfig c;
    if (!j.contains("schema_version")) r.fail_at(1, "missing required key 'schema_version'");
    c.schema_version = static_cast<int>(r.integer(j, {}, "schema_version", kSchemaVersion));
    r.check(c.schema_version == kSchemaVersion, {"schema_version"},
            "unsupported version " + std::to_string(c.schema_version) + " (expected " +
                std::to_string(kSchemaVersion) + ")");

    c.seed = r.integer(j, {}, "seed", c.seed);
    c.trials = r.integer(j, {}, "trials", c.trials);
    r.check(c.trials >= 1, {"trials"}, "must be >= 1");
    c.noiseless = r.boolean(j, {}, "noiseless", c.noiseless);
    c.velocity_max = r.number(j, {}, "velocity_max_mps", c.velocity_max);
    r.check(c.velocity_max >= 0, {"velocity_max_mps"}, "must be >= 0");
    c.output = r.string(j, {}, "output", c.output);
    c.threads = r.integer(j, {}, "threads", c.threads);

    if (j.contains("modes")) {
        const json& m = j.at("modes");
        if (!m.is_array() || m.empty()) r.fail({"modes"}, "modes: expected a nonempty array of mode names");
        c.modes.clear();
        for (const auto& v : m) {
            if (!v.is_string()) r.fail({"modes"}, "modes: expected mode names");
            try {
                const SnrMode mode = parse_snr_mode(v.get<std::string>());
                if (std::find(c.modes.begin(), c.modes.end(), mode) != c.modes.end())
                    r.fail({"modes"}, "modes: duplicate mode '" + v.get<std::string>() + "'");
                c.modes.push_back(mode);
            } catch (const ConfigError& e) {
                if (std::string_view(e.what()).starts_with(std::string(source))) throw;
                r.fail({"modes"}, std::string("modes: ") + e.what());
            }
        }
    }

    if (j.contains("ofdm")) parse_ofdm(j.at("ofdm"), r, c.ofdm);
    if (j.contains("scene")) parse_scene(j.at("scene"), r, c.scene);
    if (j.contains("link")) parse_link(j.at("link"), r, c);
    if (j.contains("detector")) parse_detector(j.at("detector"), r, c);
    if (j.contains("sweep")) parse_sweep(j.at("sweep"), r, c);
    if (j.contains("snr_map")) {
        const Path P{"snr_map"};
        const json& o = j.at("snr_map");
        r.only_keys(o, P, {"nc", "step_m"});
        c.snr_map.nc = r.integer(o, P, "nc", c.snr_map.nc);
        c.snr_map.step = r.number(o, P, "step_m", c.snr_map.step);
        r.check(c.snr_map.nc > 0, Reader::with(P, "nc"), "must be positive");
        r.check(c.snr_map.step > 0, Reader::with(P, "step_m"), "must be positive");
    }

    try {
        c.validate();
    } catch (const ConfigError& e) {
        r.fail_at(1, e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

nlohmann::json to_json(const ExperimentConfig& c) {
    json modes = json::array();
    for (auto m : c.modes) modes.push_back(std::string(to_string(m)));
    json objects = json::array();
    for (const auto& o : c.scene.objects)
        objects.push_back({{"position_m", {o.position.x, o.position.y}},
                           {"velocity_mps", {o.velocity.x, o.velocity.y}},
                           {"rcs_m2", o.rcs}});
    return {
        {"schema_version", c.schema_version},
        {"seed", c.seed},
        {"trials", c.trials},
        {"noiseless", c.noiseless},
        {"velocity_max_mps", c.velocity_max},
        {"modes", modes},
        {"ofdm",
         {{"fc_hz", c.ofdm.fc},
          {"f_delta_hz", c.ofdm.f_delta},
          {"ts_s", c.ofdm.Ts},
          {"nc", c.ofdm.Nc},
          {"ns", c.ofdm.Ns},
          {"n_antennas", c.ofdm.N}}},
        {"scene",
         {{"tx_m", {c.scene.tx.x, c.scene.tx.y}},
          {"d0_m", c.scene.d0},
          {"n_rx", c.scene.n_rx},
          {"sub_cell", c.scene.sub_cell},
          {"guard_m", c.scene.guard},
          {"spacing_wavelengths", c.scene.spacing_wavelengths},
          {"rcs_m2", c.scene.rcs},
          {"objects", objects}}},
        {"link",
         {{"pt_dbm", c.link.pt_dbm},
          {"gt_db", c.link.gt_db},
          {"gr_db", c.link.gr_db},
          {"nf_db", c.link.nf_db},
          {"monostatic_alpha", c.monostatic_alpha}}},
        {"detector",
         {{"aoa_step_deg", degrees_out(c.detector.aoa_step)},
          {"sector_half_width_deg", degrees_out(c.detector.sector_half_width)},
          {"aoa_threshold", c.detector.aoa_threshold},
          {"rd_threshold", c.detector.rd_threshold},
          {"rd_floor", c.detector.rd_floor},
          {"interpolate", c.detector.interpolate},
          {"aggregation", std::string(to_string(c.detector.aggregation))},
          {"cluster_radius_bins", c.cluster_radius_bins}}},
        {"sweep", {{"axis", std::string(to_string(c.sweep_axis))}, {"values", c.sweep_values}}},
        {"snr_map", {{"nc", c.snr_map.nc}, {"step_m", c.snr_map.step}}},
        {"output", c.output},
        {"threads", c.threads},
    };
}

}  // namespace msisac
