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

#include <benchmark/benchmark.h>

#include "msisac/channel.hpp"
#include "msisac/estimator.hpp"
#include "msisac/experiment.hpp"

namespace {

using namespace msisac;

struct Fixture {
    OfdmConfig cfg;
    SceneConfig scene;
    SymbolGrid tx;
    SymbolGrid rx;

    Fixture(std::size_t Ns, std::size_t Nc, std::size_t N) {
        cfg.Ns = Ns;
        cfg.Nc = Nc;
        cfg.N = N;
        scene.tx_position = {0.0, 0.0};
        scene.rx_positions = hex_rx_positions(scene.tx_position, 300.0, 6);
        scene.tx_array = {N, 0.5, 0.0};
        scene.rx_array = {N, 0.5, 0.0};
        scene.objects = {{{150.0, 20.0}, {12.0, -7.0}, 1.0}};
        tx = gen_tx_symbols(cfg, 1);
        rx = synthesize_rx(scene, cfg, LinkBudget{}, 0, tx, 1);
    }
};

void args(benchmark::internal::Benchmark* b) {
    b->Args({56, 256, 8})->Args({224, 256, 8})->Args({224, 256, 4})->Args({896, 256, 8})->Unit(benchmark::kMillisecond);
}

void BM_SynthesizeRx(benchmark::State& state) {
    Fixture f(state.range(0), state.range(1), state.range(2));
    for (auto _ : state) benchmark::DoNotOptimize(synthesize_rx(f.scene, f.cfg, LinkBudget{}, 0, f.tx, 2));
}
BENCHMARK(BM_SynthesizeRx)->Apply(args);

void BM_AoaSpectrum(benchmark::State& state) {
    Fixture f(state.range(0), state.range(1), state.range(2));
    const ArrayConfig array = f.scene.receiver_array(0);
    const auto grid = sector_grid(array.boresight, deg2rad(60.0), deg2rad(0.5));
    for (auto _ : state) benchmark::DoNotOptimize(aoa_spectrum(f.rx, array, grid));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * grid.size() * f.rx.data().size()));
}
BENCHMARK(BM_AoaSpectrum)->Apply(args);

void BM_RangeDopplerMaps(benchmark::State& state) {
    Fixture f(state.range(0), state.range(1), state.range(2));
    const ArrayConfig array = f.scene.receiver_array(0);
    for (auto _ : state) benchmark::DoNotOptimize(range_doppler_maps(f.rx, f.tx, 0.3, array));
}
BENCHMARK(BM_RangeDopplerMaps)->Apply(args);

void BM_Detect(benchmark::State& state) {
    Fixture f(state.range(0), state.range(1), state.range(2));
    const ArrayConfig array = f.scene.receiver_array(0);
    for (auto _ : state) benchmark::DoNotOptimize(detect(f.rx, f.tx, array, DetectorParams{}));
}
BENCHMARK(BM_Detect)->Apply(args);

void BM_Trial(benchmark::State& state) {
    ExperimentConfig cfg;
    cfg.ofdm.Ns = state.range(0);
    cfg.ofdm.Nc = state.range(1);
    cfg.ofdm.N = state.range(2);
    cfg.noiseless = true;
    std::size_t t = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_trial(cfg, t++));
}
BENCHMARK(BM_Trial)->Apply(args);

}  // namespace
BENCHMARK_MAIN();
