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

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace msisac {

using cplx = std::complex<double>;

/// Exact SI value; used by both the synthesizer and the estimator.
inline constexpr double kSpeedOfLight = 299'792'458.0;
inline constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle to (-pi, pi].
double wrap_angle(double rad);

/// Planar vector in the global frame. Meters for positions, m/s for velocities.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return a -= b; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;

    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }
    /// Azimuth counterclockwise from +x, in (-pi, pi].
    double bearing() const { return std::atan2(y, x); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }

    static Vec2 polar(double r, double azimuth) { return {r * std::cos(azimuth), r * std::sin(azimuth)}; }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// OFDM numerology and array size shared by transmitter and receivers.
struct OfdmConfig {
    double fc = 2.6e9;                    ///< carrier, Hz
    double f_delta = 30e3;                ///< subcarrier spacing, Hz
    double Ts = 0.5e-3 / 14.0;            ///< OFDM symbol period, s
    std::size_t Nc = 256;                 ///< subcarriers
    std::size_t Ns = 56;                  ///< OFDM symbols (even)
    std::size_t N = 8;                    ///< antennas per sector array

    /// Throws ConfigError on non-positive fields or odd Ns.
    void validate() const;

    double bandwidth() const { return static_cast<double>(Nc) * f_delta; }
    double wavelength() const { return kSpeedOfLight / fc; }
    /// Size of one delay bin expressed as bistatic range, c / (Nc f_delta).
    double range_bin() const { return kSpeedOfLight / bandwidth(); }
    /// Size of one Doppler bin expressed as bistatic range rate, c / (Ns Ts fc).
    double range_rate_bin() const { return kSpeedOfLight / (static_cast<double>(Ns) * Ts * fc); }
    std::size_t resource_elements() const { return Ns * Nc; }
};

/// Uniform linear array facing `boresight`; element pitch in carrier wavelengths.
struct ArrayConfig {
    std::size_t n_elements = 8;
    double spacing_wavelengths = 0.5;
    double boresight = 0.0;               ///< radians, global frame

    void validate() const;
};

struct SensingObject {
    Vec2 position;
    Vec2 velocity;
    double rcs = 1.0;                     ///< m^2
};

struct SceneConfig {
    Vec2 tx_position;
    std::vector<Vec2> rx_positions;
    double d0 = 300.0;
    std::vector<SensingObject> objects;
    ArrayConfig tx_array;
    ArrayConfig rx_array;                 ///< template; boresight is set per receiver

    void validate() const;

    /// True when receiver k is colocated with the transmitter (monostatic).
    bool is_monostatic(std::size_t k) const;

    /// Array of receiver k: the rx template turned to face the transmitter,
    /// or the transmit array itself for a colocated receiver.
    ArrayConfig receiver_array(std::size_t k) const;
};

/// Noiseless geometry of one tx -> object -> rx path.
struct PropagationTruth {
    double d_T = 0.0;
    double d_R = 0.0;
    double bistatic_range = 0.0;          ///< d_T + d_R
    double range_rate = 0.0;              ///< d/dt (d_T + d_R); positive when receding
    double aoa = 0.0;                     ///< bearing rx -> object
    double aod = 0.0;                     ///< bearing tx -> object
};

/// K receivers on a circle of radius d0 around tx; receiver k (1-based) at azimuth (2k-1)pi/K.
std::vector<Vec2> hex_rx_positions(Vec2 tx, double d0, std::size_t K);

/// exp(+j 2 pi s n sin(phi - boresight)) for n = 0..N-1. `fc` is unused because the
/// pitch is expressed in wavelengths; kept so callers state the carrier explicitly.
std::vector<cplx> steering_vector(const ArrayConfig& array, double phi, double fc);

/// Throws ObjectAtStation when the object coincides with tx or rx.
PropagationTruth propagation_truth(Vec2 tx, Vec2 rx, const SensingObject& obj);

}  // namespace msisac
