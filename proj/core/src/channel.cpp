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

#include "msisac/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "msisac/errors.hpp"
#include "msisac/random.hpp"

namespace msisac {

SymbolGrid::SymbolGrid(const OfdmConfig& cfg) : cfg_(cfg), data_(cfg.Ns * cfg.Nc * cfg.N) {}

bool SymbolGrid::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool SymbolGrid::same_shape(const SymbolGrid& other) const {
    return Ns() == other.Ns() && Nc() == other.Nc() && N() == other.N();
}

SymbolGrid& SymbolGrid::operator+=(const SymbolGrid& other) {
    if (!same_shape(other)) throw ConfigError("SymbolGrid: shape mismatch in +=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

SymbolGrid& SymbolGrid::operator*=(double s) {
    for (auto& z : data_) z *= s;
    return *this;
}

void LinkBudget::validate() const {
    if (!(alpha >= 0.0)) throw ConfigError("link: alpha must be >= 0");
    for (double v : {pt_dbm, gt_db, gr_db, nf_db})
        if (!std::isfinite(v)) throw ConfigError("link: dB fields must be finite");
}

double LinkBudget::pt_mw() const { return db_to_linear(pt_dbm); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

SymbolGrid gen_tx_symbols(const OfdmConfig& cfg, std::uint64_t seed) {
    SymbolGrid grid(cfg);
    Rng rng = derive_stream(seed, {stream_tag::kTxSymbols});
    const double a = 1.0 / std::sqrt(2.0);
    auto out = grid.data();
    std::uint64_t bits = 0;
    int left = 0;
    for (auto& z : out) {
        if (left == 0) {
            bits = rng();
            left = 32;
        }
        const double re = (bits & 1u) ? -a : a;
        const double im = (bits & 2u) ? -a : a;
        z = {re, im};
        bits >>= 2;
        --left;
    }
    return grid;
}

double path_gain(const LinkBudget& link, double rcs, double d_T, double d_R, double fc) {
    if (!(d_T > 0.0) || !(d_R > 0.0)) throw DegenerateGeometry("path_gain: zero-length propagation leg");
    const double gt = db_to_linear(link.gt_db);
    const double gr = db_to_linear(link.gr_db);
    const double four_pi_cubed = std::pow(4.0 * kPi, 3);
    return rcs * gt * gr * kSpeedOfLight * kSpeedOfLight /
           (four_pi_cubed * d_T * d_T * d_R * d_R * fc * fc);
}

double noise_power(const LinkBudget& link, double bandwidth) {
    if (!(bandwidth > 0.0)) throw ConfigError("noise_power: bandwidth must be positive");
    return db_to_linear(-174.0 + 10.0 * std::log10(bandwidth) + link.nf_db);
}

double noise_plus_interference(const LinkBudget& link, const OfdmConfig& cfg) {
    return noise_power(link, cfg.bandwidth()) + link.alpha * link.pt_mw();
}

PathComplexGain path_complex_gain(const LinkBudget& link, const OfdmConfig& cfg, const PropagationTruth& truth,
                                  double rcs, double phase) {
    const double pg = path_gain(link, rcs, truth.d_T, truth.d_R, cfg.fc);
    PathComplexGain g;
    g.beta = std::polar(std::sqrt(pg * link.pt_mw()), phase);
    g.f_doppler = -truth.range_rate * cfg.fc / kSpeedOfLight;
    g.tau = truth.bistatic_range / kSpeedOfLight;
    return g;
}

SymbolGrid synthesize_rx(const SceneConfig& scene, const OfdmConfig& cfg, const LinkBudget& link,
                         std::size_t rx_index, const SymbolGrid& tx_symbols, std::uint64_t seed,
                         const SynthesisOptions& options) {
    cfg.validate();
    if (rx_index >= scene.rx_positions.size()) throw ConfigError("synthesize_rx: rx_index out of range");
    if (tx_symbols.Ns() != cfg.Ns || tx_symbols.Nc() != cfg.Nc || tx_symbols.N() != cfg.N)
        throw ConfigError("synthesize_rx: tx symbol grid does not match the OFDM config");
    if (scene.tx_array.n_elements != cfg.N || scene.rx_array.n_elements != cfg.N)
        throw ConfigError("synthesize_rx: array sizes must equal cfg.N");

    const Vec2 rx = scene.rx_positions[rx_index];
    const ArrayConfig rx_array = scene.receiver_array(rx_index);
    const std::size_t Ns = cfg.Ns, Nc = cfg.Nc, N = cfg.N, P = Ns * Nc;

    SymbolGrid y(cfg);
    std::vector<cplx> doppler(Ns), delay(Nc), path(P);

    for (std::size_t l = 0; l < scene.objects.size(); ++l) {
        const SensingObject& obj = scene.objects[l];
        const PropagationTruth truth = propagation_truth(scene.tx_position, rx, obj);
        Rng phase_rng = derive_stream(seed, {stream_tag::kPathPhase, rx_index, l});
        const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(phase_rng);
        const PathComplexGain g = path_complex_gain(link, cfg, truth, obj.rcs, phase);

        const auto a_T = steering_vector(scene.tx_array, truth.aod, cfg.fc);
        const auto a_R = steering_vector(rx_array, truth.aoa, cfg.fc);

        for (std::size_t ns = 0; ns < Ns; ++ns)
            doppler[ns] = std::polar(1.0, 2.0 * kPi * cfg.Ts * g.f_doppler * static_cast<double>(ns));
        for (std::size_t nc = 0; nc < Nc; ++nc)
            delay[nc] = std::polar(1.0, -2.0 * kPi * g.tau * cfg.f_delta * static_cast<double>(nc));

        // a_T^T x over the transmit streams, per resource element
        std::fill(path.begin(), path.end(), cplx{});
        for (std::size_t i = 0; i < N; ++i) {
            const auto x = tx_symbols.plane(i);
            const cplx w = a_T[i];
            for (std::size_t r = 0; r < P; ++r) path[r] += w * x[r];
        }
        for (std::size_t ns = 0; ns < Ns; ++ns) {
            const cplx bd = g.beta * doppler[ns];
            cplx* row = path.data() + ns * Nc;
            for (std::size_t nc = 0; nc < Nc; ++nc) row[nc] *= bd * delay[nc];
        }
        for (std::size_t n = 0; n < N; ++n) {
            auto out = y.plane(n);
            const cplx w = a_R[n];
            for (std::size_t r = 0; r < P; ++r) out[r] += w * path[r];
        }
    }

    if (options.add_noise) {
        const double sigma = std::sqrt(noise_plus_interference(link, cfg) / 2.0);
        Rng noise_rng = derive_stream(seed, {stream_tag::kNoise, rx_index});
        std::normal_distribution<double> gauss(0.0, sigma);
        for (auto& z : y.data()) {
            const double re = gauss(noise_rng);
            const double im = gauss(noise_rng);
            z += cplx{re, im};
        }
    }
    return y;
}

}  // namespace msisac
