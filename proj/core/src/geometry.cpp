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

#include "msisac/geometry.hpp"

#include <string>

#include "msisac/errors.hpp"

namespace msisac {

double wrap_angle(double rad) {
    double w = std::remainder(rad, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

void OfdmConfig::validate() const {
    if (!(fc > 0.0) || !std::isfinite(fc)) throw ConfigError("ofdm: carrier frequency must be positive");
    if (!(f_delta > 0.0) || !std::isfinite(f_delta)) throw ConfigError("ofdm: subcarrier spacing must be positive");
    if (!(Ts > 0.0) || !std::isfinite(Ts)) throw ConfigError("ofdm: symbol period must be positive");
    if (Nc == 0) throw ConfigError("ofdm: Nc must be positive");
    if (N == 0) throw ConfigError("ofdm: N must be positive");
    if (Ns == 0 || Ns % 2 != 0)
        throw ConfigError("ofdm: Ns must be positive and even (centered Doppler axis), got " + std::to_string(Ns));
}

void ArrayConfig::validate() const {
    if (n_elements == 0) throw ConfigError("array: n_elements must be >= 1");
    if (!(spacing_wavelengths > 0.0 && spacing_wavelengths <= 0.5))
        throw ConfigError("array: spacing_wavelengths must be in (0, 0.5]");
    if (!std::isfinite(boresight)) throw ConfigError("array: boresight must be finite");
}

void SceneConfig::validate() const {
    if (rx_positions.empty()) throw ConfigError("scene: at least one receiver is required");
    if (!tx_position.finite()) throw ConfigError("scene: tx position must be finite");
    for (const auto& rx : rx_positions)
        if (!rx.finite()) throw ConfigError("scene: rx positions must be finite");
    for (const auto& obj : objects) {
        if (!(obj.rcs > 0.0)) throw ConfigError("scene: object rcs must be positive");
        if (!obj.position.finite() || !obj.velocity.finite())
            throw ConfigError("scene: object state must be finite");
    }
    tx_array.validate();
    rx_array.validate();
}

bool SceneConfig::is_monostatic(std::size_t k) const {
    return rx_positions.at(k) == tx_position;
}

ArrayConfig SceneConfig::receiver_array(std::size_t k) const {
    if (is_monostatic(k)) return tx_array;
    ArrayConfig a = rx_array;
    a.boresight = (tx_position - rx_positions.at(k)).bearing();
    return a;
}

std::vector<Vec2> hex_rx_positions(Vec2 tx, double d0, std::size_t K) {
    if (K == 0 || !(d0 > 0.0)) throw ConfigError("hex_rx_positions: need K >= 1 and d0 > 0");
    std::vector<Vec2> out;
    out.reserve(K);
    for (std::size_t k = 1; k <= K; ++k) {
        const double az = (2.0 * static_cast<double>(k) - 1.0) * kPi / static_cast<double>(K);
        out.push_back(tx + Vec2::polar(d0, az));
    }
    return out;
}

std::vector<cplx> steering_vector(const ArrayConfig& array, double phi, double /*fc*/) {
    const double s = std::sin(phi - array.boresight);
    std::vector<cplx> a(array.n_elements);
    for (std::size_t n = 0; n < a.size(); ++n)
        a[n] = std::polar(1.0, 2.0 * kPi * array.spacing_wavelengths * static_cast<double>(n) * s);
    return a;
}

PropagationTruth propagation_truth(Vec2 tx, Vec2 rx, const SensingObject& obj) {
    const Vec2 to_obj_t = obj.position - tx;
    const Vec2 to_obj_r = obj.position - rx;
    const double d_T = to_obj_t.norm();
    const double d_R = to_obj_r.norm();
    if (d_T == 0.0 || d_R == 0.0) throw ObjectAtStation("object coincides with a station");

    PropagationTruth t;
    t.d_T = d_T;
    t.d_R = d_R;
    t.bistatic_range = d_T + d_R;
    t.range_rate = dot(obj.velocity, to_obj_t) / d_T + dot(obj.velocity, to_obj_r) / d_R;
    t.aoa = to_obj_r.bearing();
    t.aod = to_obj_t.bearing();
    return t;
}

}  // namespace msisac
