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

#include <cmath>

#include "msisac/channel.hpp"
#include "msisac/errors.hpp"
#include "test_support.hpp"

using namespace msisac;
using msisac::testing::ofdm;
using msisac::testing::reference_scene;

namespace {

/// Radar equation evaluated independently in long double.
long double radar_equation(long double rcs, long double gt_db, long double gr_db, long double c, long double d_T,
                           long double d_R, long double fc) {
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double gt = std::pow(10.0L, gt_db / 10.0L), gr = std::pow(10.0L, gr_db / 10.0L);
    return rcs * gt * gr * c * c / (std::pow(4.0L * pi, 3.0L) * d_T * d_T * d_R * d_R * fc * fc);
}

}  // namespace

TEST(PathGain, ReferenceParametersAt300m) {
    const LinkBudget link;  // 12 dB gains
    const double pg = path_gain(link, 1.0, 300.0, 300.0, 2.6e9);
    const long double oracle = radar_equation(1, 12, 12, kSpeedOfLight, 300, 300, 2.6e9);
    EXPECT_NEAR(pg / static_cast<double>(oracle), 1.0, 1e-12);
    // With c = 3e8 the hand value is 2.08e-13, i.e. -126.8 dB.
    const long double rounded_c = radar_equation(1, 12, 12, 3e8, 300, 300, 2.6e9);
    EXPECT_NEAR(static_cast<double>(rounded_c), 2.08e-13, 0.005e-13);
    EXPECT_NEAR(linear_to_db(pg), -126.8, 0.05);
}

TEST(PathGain, InverseSquareAndLinearInRcs) {
    const LinkBudget link;
    const double base = path_gain(link, 1.0, 300.0, 250.0, 2.6e9);
    EXPECT_NEAR(path_gain(link, 1.0, 600.0, 250.0, 2.6e9), base / 4.0, 1e-25);
    EXPECT_NEAR(path_gain(link, 4.0, 300.0, 250.0, 2.6e9) / base, 4.0, 1e-14);
}

TEST(PathGain, ZeroLegThrows) {
    EXPECT_THROW(path_gain(LinkBudget{}, 1.0, 0.0, 10.0, 2.6e9), DegenerateGeometry);
    EXPECT_THROW(path_gain(LinkBudget{}, 1.0, 10.0, 0.0, 2.6e9), DegenerateGeometry);
}

TEST(NoisePower, Anchors) {
    LinkBudget link;
    EXPECT_NEAR(linear_to_db(noise_power(link, 1024 * 30e3)), -89.13, 0.005);
    link.nf_db = 0.0;
    EXPECT_NEAR(linear_to_db(noise_power(link, 1.0)), -174.0, 1e-12);
    EXPECT_NEAR(linear_to_db(noise_power(link, 1e7)) - linear_to_db(noise_power(link, 1e6)), 10.0, 1e-12);
}

TEST(TxSymbols, DeterministicUnitModulusQpsk) {
    const OfdmConfig cfg = ofdm(8, 32, 4);
    const SymbolGrid a = gen_tx_symbols(cfg, 42), b = gen_tx_symbols(cfg, 42), c = gen_tx_symbols(cfg, 43);
    ASSERT_EQ(a.data().size(), 8u * 32u * 4u);
    EXPECT_TRUE(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
    EXPECT_FALSE(std::equal(a.data().begin(), a.data().end(), c.data().begin()));
    for (const cplx& z : a.data()) EXPECT_NEAR(std::abs(z), 1.0, 1e-12);
}

TEST(TxSymbols, TinyGridIsInTheConstellation) {
    const SymbolGrid g = gen_tx_symbols(ofdm(2, 2, 1), 0);
    const double h = 1.0 / std::sqrt(2.0);
    for (const cplx& z : g.data()) {
        EXPECT_DOUBLE_EQ(std::abs(z.real()), h);
        EXPECT_DOUBLE_EQ(std::abs(z.imag()), h);
    }
}

TEST(Synthesis, EmptySceneIsNoiseOfTheConfiguredPower) {
    const OfdmConfig cfg = ofdm(56, 256, 8);   // 114688 elements
    SceneConfig scene = reference_scene(8);
    const LinkBudget link;
    const SymbolGrid tx = gen_tx_symbols(cfg, 1);
    const SymbolGrid y = synthesize_rx(scene, cfg, link, 0, tx, 9);
    double p = 0.0;
    for (const cplx& z : y.data()) p += std::norm(z);
    p /= static_cast<double>(y.data().size());
    EXPECT_NEAR(p / noise_power(link, cfg.bandwidth()), 1.0, 0.05);
}

TEST(Synthesis, NoiselessStaticObjectHasConstantModulus) {
    // One transmit stream, so a_T^T x keeps the unit modulus of the symbols.
    const OfdmConfig cfg = ofdm(16, 64, 1);
    SceneConfig scene = reference_scene(1);
    scene.objects = {{{150, 0}, {0, 0}, 1.0}};
    const SymbolGrid y = synthesize_rx(scene, cfg, LinkBudget{}, 0, gen_tx_symbols(cfg, 1), 3, {false});
    const double m0 = std::abs(y.at(0, 0, 0));
    for (std::size_t ns = 0; ns < cfg.Ns; ++ns)
        for (std::size_t nc = 0; nc < cfg.Nc; ++nc) EXPECT_NEAR(std::abs(y.at(ns, nc, 0)) / m0, 1.0, 1e-12);
}

TEST(Synthesis, PerElementSignalPowerEqualsBetaSquared) {
    const OfdmConfig cfg = ofdm(8, 16, 1);
    SceneConfig scene = reference_scene(1);
    scene.objects = {{{120, 40}, {3, -2}, 2.0}};
    const LinkBudget link;
    const SymbolGrid y = synthesize_rx(scene, cfg, link, 0, gen_tx_symbols(cfg, 5), 5, {false});
    const auto truth = propagation_truth(scene.tx_position, scene.rx_positions[0], scene.objects[0]);
    const double beta2 = path_gain(link, 2.0, truth.d_T, truth.d_R, cfg.fc) * link.pt_mw();
    for (const cplx& z : y.data()) EXPECT_NEAR(std::norm(z) / beta2, 1.0, 1e-10);
}

TEST(Synthesis, LinearInObjects) {
    const OfdmConfig cfg = ofdm(8, 32, 4);
    const SensingObject o1{{150, 20}, {5, 1}, 1.0}, o2{{90, -60}, {-3, 7}, 3.0};
    // Object l draws its carrier phase from stream l, so o2 alone keeps a
    // zero-RCS placeholder at index 0 to see the same phase as in the pair.
    SceneConfig first = reference_scene(4), second = reference_scene(4), both = reference_scene(4);
    first.objects = {o1};
    second.objects = {SensingObject{{500, 500}, {}, 0.0}, o2};
    both.objects = {o1, o2};
    const SymbolGrid tx = gen_tx_symbols(cfg, 8);
    SymbolGrid sum = synthesize_rx(first, cfg, LinkBudget{}, 1, tx, 4, {false});
    sum += synthesize_rx(second, cfg, LinkBudget{}, 1, tx, 4, {false});
    const SymbolGrid joint = synthesize_rx(both, cfg, LinkBudget{}, 1, tx, 4, {false});
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < joint.data().size(); ++i) {
        num += std::norm(sum.data()[i] - joint.data()[i]);
        den += std::norm(joint.data()[i]);
    }
    EXPECT_LT(std::sqrt(num / den), 1e-10);
}

TEST(Synthesis, Deterministic) {
    const OfdmConfig cfg = ofdm(8, 32, 4);
    SceneConfig s = reference_scene(4);
    s.objects = {{{150, 20}, {5, 1}, 1.0}};
    const SymbolGrid tx = gen_tx_symbols(cfg, 8);
    const SymbolGrid y1 = synthesize_rx(s, cfg, LinkBudget{}, 0, tx, 77);
    const SymbolGrid y2 = synthesize_rx(s, cfg, LinkBudget{}, 0, tx, 77);
    EXPECT_TRUE(std::equal(y1.data().begin(), y1.data().end(), y2.data().begin()));
}

TEST(Synthesis, PhaseSlopesMatchDopplerAndDelay) {
    OfdmConfig cfg = ofdm(16, 64, 1);
    SceneConfig scene;
    scene.tx_position = {0, 0};
    scene.rx_positions = {{260, 150}};
    scene.tx_array = scene.rx_array = {1, 0.5, 0.0};
    scene.objects = {{{150, 0}, {20, 0}, 1.0}};
    // All-ones symbols isolate the channel phase.
    SymbolGrid tx(cfg);
    for (auto& z : tx.data()) z = 1.0;
    const SymbolGrid y = synthesize_rx(scene, cfg, LinkBudget{}, 0, tx, 1, {false});

    const auto truth = propagation_truth(scene.tx_position, scene.rx_positions[0], scene.objects[0]);
    EXPECT_NEAR(truth.range_rate, 20.0 * (1.0 - 110.0 / std::sqrt(110.0 * 110.0 + 150.0 * 150.0)), 1e-12);
    EXPECT_NEAR(truth.range_rate, 8.172, 1e-3);
    const double f_d = -cfg.fc * truth.range_rate / kSpeedOfLight;
    // About -70.8 Hz; the c = 3e8 value is -70.83.
    EXPECT_NEAR(f_d, -70.85, 0.1);

    const double tau = truth.bistatic_range / kSpeedOfLight;
    auto wrapped_diff = [](double a, double b) { return std::remainder(a - b, 2.0 * kPi); };
    for (std::size_t ns = 1; ns < cfg.Ns; ++ns) {
        const double step = std::arg(y.at(ns, 3, 0) / y.at(ns - 1, 3, 0));
        EXPECT_NEAR(wrapped_diff(step, 2.0 * kPi * cfg.Ts * f_d), 0.0, 1e-9);
    }
    for (std::size_t nc = 1; nc < cfg.Nc; ++nc) {
        const double step = std::arg(y.at(5, nc, 0) / y.at(5, nc - 1, 0));
        EXPECT_NEAR(wrapped_diff(step, -2.0 * kPi * tau * cfg.f_delta), 0.0, 1e-9);
    }
}

TEST(Synthesis, ValidatesInputs) {
    const OfdmConfig cfg = ofdm(8, 16, 4);
    SceneConfig s = reference_scene(4);
    const SymbolGrid tx = gen_tx_symbols(cfg, 1);
    EXPECT_THROW(synthesize_rx(s, cfg, LinkBudget{}, 6, tx, 1), ConfigError);
    EXPECT_THROW(synthesize_rx(s, ofdm(8, 32, 4), LinkBudget{}, 0, tx, 1), ConfigError);
    s.objects = {{s.rx_positions[0], {}, 1.0}};
    EXPECT_THROW(synthesize_rx(s, cfg, LinkBudget{}, 0, tx, 1), ObjectAtStation);
}

TEST(Synthesis, SelfInterferenceRaisesTheFloor) {
    const OfdmConfig cfg = ofdm(16, 64, 2);
    SceneConfig s = reference_scene(2);
    s.rx_positions = {s.tx_position};
    LinkBudget link;
    link.alpha = 1e-7;
    const SymbolGrid y = synthesize_rx(s, cfg, link, 0, gen_tx_symbols(cfg, 1), 2);
    double p = 0.0;
    for (const cplx& z : y.data()) p += std::norm(z);
    p /= static_cast<double>(y.data().size());
    EXPECT_NEAR(linear_to_db(p), -40.0, 0.3);
}
