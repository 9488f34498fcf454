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

#include "msisac/linkbudget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "msisac/errors.hpp"

namespace msisac {

namespace {

constexpr double kCellWidth = 2.0 * kPi / 3.0;

std::size_t nearest_by_bearing(const SceneConfig& layout, double azimuth) {
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < layout.rx_positions.size(); ++k) {
        const double err = std::abs(wrap_angle((layout.rx_positions[k] - layout.tx_position).bearing() - azimuth));
        if (err < best_err) {
            best_err = err;
            best = k;
        }
    }
    return best;
}

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return distance(p, a + ab * t);
}

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

}  // namespace

std::string_view to_string(SnrMode mode) {
    switch (mode) {
        case SnrMode::Monostatic: return "monostatic";
        case SnrMode::Bistatic: return "bistatic";
        case SnrMode::Multistatic: return "multistatic";
    }
    return "unknown";
}

SnrMode parse_snr_mode(std::string_view name) {
    if (name == "monostatic") return SnrMode::Monostatic;
    if (name == "bistatic") return SnrMode::Bistatic;
    if (name == "multistatic") return SnrMode::Multistatic;
    throw ConfigError("unknown sensing mode '" + std::string(name) + "'");
}

std::size_t sub_cell_index(double azimuth) {
    const double shifted = wrap_angle(azimuth) + kCellWidth / 2.0;   // in (-pi/3, 4pi/3]
    const auto j = static_cast<long>(std::floor(shifted / kCellWidth));
    return static_cast<std::size_t>(((j % 3) + 3) % 3);
}

double sub_cell_center(std::size_t cell) { return wrap_angle(static_cast<double>(cell % 3) * kCellWidth); }

RxPair schedule_receivers(const SceneConfig& layout, double target_azimuth) {
    if (layout.rx_positions.size() != 6)
        throw ConfigError("schedule_receivers: needs a six-receiver layout, got " +
                          std::to_string(layout.rx_positions.size()));
    const double center = sub_cell_center(sub_cell_index(target_azimuth));
    return {nearest_by_bearing(layout, center + kPi / 6.0), nearest_by_bearing(layout, center - kPi / 6.0)};
}

double bistatic_snr_db(const SceneConfig& scene, const LinkBudget& link, const OfdmConfig& cfg,
                       std::size_t rx_index, Vec2 obj_position, double rcs) {
    const Vec2 rx = scene.rx_positions.at(rx_index);
    const double pg = path_gain(link, rcs, distance(obj_position, scene.tx_position), distance(obj_position, rx), cfg.fc);
    return linear_to_db(pg * link.pt_mw() / noise_power(link, cfg.bandwidth()));
}

double snr_db(const SceneConfig& scene, const LinkBudget& link, const OfdmConfig& cfg, const SnrQuery& query,
              std::optional<RxPair> pair) {
    if (query.mode == SnrMode::Monostatic) {
        const double d = distance(query.obj_position, scene.tx_position);
        const double pg = path_gain(link, query.rcs, d, d, cfg.fc);
        return linear_to_db(pg * link.pt_mw() / noise_plus_interference(link, cfg));
    }
    const double az = (query.obj_position - scene.tx_position).bearing();
    if (!pair && scene.rx_positions.size() == 6) pair = schedule_receivers(scene, az);

    if (query.mode == SnrMode::Bistatic)
        return bistatic_snr_db(scene, link, cfg, pair ? pair->first : 0, query.obj_position, query.rcs);

    if (pair)
        return std::max(bistatic_snr_db(scene, link, cfg, pair->first, query.obj_position, query.rcs),
                        bistatic_snr_db(scene, link, cfg, pair->second, query.obj_position, query.rcs));
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < scene.rx_positions.size(); ++k)
        best = std::max(best, bistatic_snr_db(scene, link, cfg, k, query.obj_position, query.rcs));
    return best;
}

bool SubCellRegion::contains(Vec2 p) const {
    const double s1 = cross(b - a, p - a), s2 = cross(c - b, p - b), s3 = cross(a - c, p - c);
    const bool inside = (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
    if (inside) return true;
    return std::min({distance_to_segment(p, a, b), distance_to_segment(p, b, c), distance_to_segment(p, c, a)}) <=
           margin;
}

std::pair<Vec2, Vec2> SubCellRegion::bounds() const {
    const Vec2 lo{std::min({a.x, b.x, c.x}) - margin, std::min({a.y, b.y, c.y}) - margin};
    const Vec2 hi{std::max({a.x, b.x, c.x}) + margin, std::max({a.y, b.y, c.y}) + margin};
    return {lo, hi};
}

SubCellRegion sub_cell_region(const SceneConfig& scene, const RxPair& pair) {
    return {scene.tx_position, scene.rx_positions.at(pair.first), scene.rx_positions.at(pair.second),
            scene.d0 / 4.0};
}

Heatmap snr_heatmap(const SceneConfig& scene, const LinkBudget& link, const OfdmConfig& cfg, SnrMode mode,
                    Vec2 lo, Vec2 hi, double step, std::optional<RxPair> pair, double rcs) {
    if (!(step > 0.0)) throw ConfigError("snr_heatmap: step must be positive");
    if (!(hi.x >= lo.x && hi.y >= lo.y)) throw ConfigError("snr_heatmap: empty region");

    Heatmap map;
    map.origin = lo;
    map.step = step;
    map.nx = static_cast<std::size_t>(std::floor((hi.x - lo.x) / step + 1e-9)) + 1;
    map.ny = static_cast<std::size_t>(std::floor((hi.y - lo.y) / step + 1e-9)) + 1;
    map.values.assign(map.nx * map.ny, std::numeric_limits<double>::quiet_NaN());

    const double tol = 1e-9 * step;
    auto on_station = [&](Vec2 p) {
        if (distance(p, scene.tx_position) <= tol) return true;
        return std::any_of(scene.rx_positions.begin(), scene.rx_positions.end(),
                           [&](Vec2 rx) { return distance(p, rx) <= tol; });
    };

    for (std::size_t iy = 0; iy < map.ny; ++iy)
        for (std::size_t ix = 0; ix < map.nx; ++ix) {
            const Vec2 p = map.point(ix, iy);
            if (on_station(p)) continue;
            map.values[iy * map.nx + ix] = snr_db(scene, link, cfg, {mode, p, rcs}, pair);
        }
    return map;
}

}  // namespace msisac
