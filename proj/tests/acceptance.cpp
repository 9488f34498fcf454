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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
//   msisac_acceptance --cli <path to msisac> --workdir <scratch dir> [--only AC2,AC4]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "msisac/msisac.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace msisac;
using msisac::testing::object_from_measurement;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Detection exact_detection(const SceneConfig& s, std::size_t k, const SensingObject& obj) {
    const auto t = propagation_truth(s.tx_position, s.rx_positions[k], obj);
    Detection d;
    d.aoa = t.aoa;
    d.bistatic_range = t.bistatic_range;
    d.range_rate = t.range_rate;
    d.rx_index = k;
    return d;
}

const Detection* strongest(const std::vector<Detection>& dets) {
    if (dets.empty()) return nullptr;
    return &*std::max_element(dets.begin(), dets.end(),
                              [](const Detection& a, const Detection& b) { return a.peak_power < b.peak_power; });
}

// AC1 ---------------------------------------------------------------------

Outcome ac1() {
    const ExperimentConfig cfg;
    const SceneConfig layout = make_layout(cfg);
    const RxPair pair = scheduled_pair(cfg);
    // Third receiver for the AoD-free solve: the next one counterclockwise.
    const std::size_t third = (pair.first + 1) % 6;
    Rng rng(20240101);
    const std::size_t n = 100000;
    double pos_err = 0.0, vel2_err = 0.0, vel3_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const SensingObject obj = draw_object(cfg, rng);
        Cluster two, three;
        for (std::size_t k : {pair.first, pair.second}) {
            const Detection d = exact_detection(layout, k, obj);
            const Vec2 p = position_from_detection(d, layout.rx_positions[k], layout.tx_position);
            pos_err = std::max(pos_err, distance(p, obj.position));
            two.push_back({k, d, p});
        }
        three = two;
        three.push_back({third, exact_detection(layout, third, obj), obj.position});
        const double aod = (obj.position - layout.tx_position).bearing();
        vel2_err = std::max(vel2_err, distance(velocity_solve(two, VelocitySolveMode::TwoRxWithAod, aod), obj.velocity));
        vel3_err =
            std::max(vel3_err, distance(velocity_solve(three, VelocitySolveMode::ThreeRxAodFree, 0.0), obj.velocity));
    }
    Outcome o;
    o.pass = pos_err <= 1e-9 && vel2_err <= 1e-9 && vel3_err <= 1e-9;
    o.detail = fmt("%zu scenes, max position error %.3g m, max velocity error %.3g (two-rx) / %.3g (three-rx) m/s",
                   n, pos_err, vel2_err, vel3_err);
    return o;
}

// AC2 ---------------------------------------------------------------------

struct QuantStats {
    double range = 0.0, rate = 0.0, aoa = 0.0;
    std::size_t detected = 0;
};

QuantStats quantization_run(const OfdmConfig& cfg, std::size_t trials, std::uint64_t seed) {
    SceneConfig scene = testing::reference_scene(cfg.N);
    const ArrayConfig arr = scene.receiver_array(0);
    const DetectorParams params;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ua(-deg2rad(59.0), deg2rad(59.0)), ud(330.0, 900.0),
        uv(-10.0 * cfg.range_rate_bin(), 10.0 * cfg.range_rate_bin());
    QuantStats s;
    for (std::size_t t = 0; t < trials; ++t) {
        const double aoa = arr.boresight + ua(rng), d = ud(rng), v = uv(rng);
        scene.objects = {object_from_measurement(scene, 0, aoa, d, v)};
        const SymbolGrid tx = gen_tx_symbols(cfg, seed + 2 * t);
        const SymbolGrid y = synthesize_rx(scene, cfg, LinkBudget{}, 0, tx, seed + 2 * t + 1, {false});
        const Detection* best = nullptr;
        const auto dets = detect(y, tx, arr, params);
        best = strongest(dets);
        if (!best) continue;
        s.range += std::abs(best->bistatic_range - d);
        s.rate += std::abs(best->range_rate - v);
        s.aoa += std::abs(best->aoa - aoa);
        ++s.detected;
    }
    if (s.detected) {
        s.range /= static_cast<double>(s.detected);
        s.rate /= static_cast<double>(s.detected);
        s.aoa /= static_cast<double>(s.detected);
    }
    return s;
}

Outcome ac2() {
    OfdmConfig base;
    base.Nc = 256;
    base.Ns = 56;
    base.N = 4;
    OfdmConfig wide = base, long_ = base;
    wide.Nc *= 2;
    long_.Ns *= 2;
    const std::size_t trials = 10000;
    const QuantStats b = quantization_run(base, trials, 1001);
    const QuantStats w = quantization_run(wide, trials, 2002);
    const QuantStats l = quantization_run(long_, trials, 3003);

    const double range_ref = base.range_bin() / 4.0;
    const double rate_ref = base.range_rate_bin() / 4.0;
    const double aoa_ref = DetectorParams{}.aoa_step / 4.0;
    auto within = [](double v, double ref) { return std::abs(v / ref - 1.0) <= 0.10; };
    const double r_nc = w.range / b.range, r_ns = l.rate / b.rate;
    Outcome o;
    o.pass = b.detected == trials && w.detected == trials && l.detected == trials && within(b.range, range_ref) &&
             within(b.rate, rate_ref) && within(b.aoa, aoa_ref) && r_nc >= 0.45 && r_nc <= 0.55 && r_ns >= 0.45 &&
             r_ns <= 0.55;
    o.detail = fmt("N=4, %zu trials/point, detected %zu/%zu/%zu; mean range err %.3f m (ref %.3f), "
                   "range-rate err %.3f m/s (ref %.3f), AoA err %.4f deg (ref %.4f); "
                   "2Nc range ratio %.3f, 2Ns rate ratio %.3f",
                   trials, b.detected, w.detected, l.detected, b.range, range_ref, b.rate, rate_ref, rad2deg(b.aoa),
                   rad2deg(aoa_ref), r_nc, r_ns);
    return o;
}

// AC3 ---------------------------------------------------------------------

Outcome ac3() {
    // Hand chain in long double: PG = G_T G_R c^2 / ((4 pi)^3 d_T^2 d_R^2 fc^2), N0 = -174 + 10 log BW + NF.
    const long double pi = 3.141592653589793238462643383279502884L, c = 299792458.0L;
    const long double pg_db = 24.0L + 20.0L * std::log10(c / 2.6e9L) - 30.0L * std::log10(4.0L * pi) -
                              20.0L * std::log10(300.0L * 300.0L);
    const long double n0_dbm = -174.0L + 10.0L * std::log10(1024.0L * 30e3L) + 10.0L;
    const double hand = static_cast<double>(pg_db + 30.0L - n0_dbm);

    SceneConfig pair_scene;
    pair_scene.tx_position = {0, 0};
    pair_scene.rx_positions = {{600, 0}};
    OfdmConfig cfg;
    cfg.Nc = 1024;
    const double got = snr_db(pair_scene, LinkBudget{}, cfg, {SnrMode::Bistatic, {300, 0}, 1.0});

    ExperimentConfig ecfg;
    ecfg.snr_map.nc = 1024;
    ecfg.snr_map.step = 5.0;
    const Heatmap map = run_snr_map(ecfg, SnrMode::Multistatic);
    const SubCellRegion region = sub_cell_region(make_layout(ecfg), scheduled_pair(ecfg));
    double lo = std::numeric_limits<double>::infinity();
    std::size_t points = 0;
    for (std::size_t iy = 0; iy < map.ny; ++iy)
        for (std::size_t ix = 0; ix < map.nx; ++ix)
            if (region.contains(map.point(ix, iy)) && !std::isnan(map.at(ix, iy))) {
                lo = std::min(lo, map.at(ix, iy));
                ++points;
            }
    Outcome o;
    o.pass = std::abs(got - (-7.7)) <= 0.2 && std::abs(got - hand) <= 1e-9 && lo >= -12.0;
    o.detail = fmt("SNR at d_T=d_R=300 m: %.3f dB (hand chain %.3f, target -7.7 +- 0.2); "
                   "multistatic heatmap minimum %.2f dB over %zu sub-cell points (floor -12)",
                   got, hand, lo, points);
    return o;
}

// AC4 ---------------------------------------------------------------------

const RmseRecord& find(const std::vector<RmseRecord>& r, SnrMode m, double sweep) {
    for (const auto& x : r)
        if (x.mode == m && x.sweep == sweep) return x;
    throw std::runtime_error("missing record");
}

Outcome ac4(const fs::path& config_dir) {
    const ExperimentConfig nc_cfg = load_config((config_dir / "nc_sweep.json").string());
    const ExperimentConfig ns_cfg = load_config((config_dir / "ns_sweep.json").string());
    const auto nc = run_rmse_sweep(nc_cfg);
    const auto ns = run_rmse_sweep(ns_cfg);

    bool a = true, b = true, c = true, d = true;
    std::ostringstream table;
    auto check_point = [&](const std::vector<RmseRecord>& recs, double v, const char* axis) {
        const auto& mono = find(recs, SnrMode::Monostatic, v);
        const auto& bi = find(recs, SnrMode::Bistatic, v);
        const auto& multi = find(recs, SnrMode::Multistatic, v);
        a = a && multi.velocity_rmse < bi.velocity_rmse && multi.velocity_rmse < mono.velocity_rmse;
        b = b && multi.position_rmse < bi.position_rmse;
        c = c && mono.position_rmse <= multi.position_rmse;
        table << fmt(" [%s=%g pos mono/bi/multi %.2f/%.2f/%.2f m, vel %.2f/%.2f/%.2f m/s]", axis, v,
                     mono.position_rmse, bi.position_rmse, multi.position_rmse, mono.velocity_rmse, bi.velocity_rmse,
                     multi.velocity_rmse);
    };
    for (double v : nc_cfg.sweep_values) check_point(nc, v, "Nc");
    for (double v : ns_cfg.sweep_values) check_point(ns, v, "Ns");
    for (SnrMode m : nc_cfg.modes) {
        for (std::size_t i = 1; i < nc_cfg.sweep_values.size(); ++i)
            d = d && find(nc, m, nc_cfg.sweep_values[i]).position_rmse <
                         find(nc, m, nc_cfg.sweep_values[i - 1]).position_rmse;
        for (std::size_t i = 1; i < ns_cfg.sweep_values.size(); ++i)
            d = d && find(ns, m, ns_cfg.sweep_values[i]).velocity_rmse <
                         find(ns, m, ns_cfg.sweep_values[i - 1]).velocity_rmse;
    }
    Outcome o;
    o.pass = a && b && c && d;
    o.detail = fmt("%zu trials/point, noiseless; (a) %s (b) %s (c) %s (d) %s;", nc_cfg.trials, a ? "ok" : "FAIL",
                   b ? "ok" : "FAIL", c ? "ok" : "FAIL", d ? "ok" : "FAIL") +
               table.str();
    return o;
}

// AC5 ---------------------------------------------------------------------

Outcome ac5() {
    OfdmConfig cfg;   // Ns=56, Nc=256, N=8
    SceneConfig scene = testing::reference_scene(cfg.N);
    const ArrayConfig arr = scene.receiver_array(0);
    const DetectorParams params;
    std::mt19937_64 rng(555);
    std::uniform_int_distribution<int> ui(-118, 118), up(2, static_cast<int>(cfg.Ns) - 3), uq(9, 23);
    std::size_t exact = 0;
    double worst_energy = 0.0;
    for (int t = 0; t < 100; ++t) {
        const double aoa = arr.boresight + ui(rng) * params.aoa_step;
        const int p = up(rng), q0 = uq(rng);
        const double d = q0 * cfg.range_bin();
        const double v = -(p - static_cast<double>(cfg.Ns) / 2.0) * cfg.range_rate_bin();
        scene.objects = {object_from_measurement(scene, 0, aoa, d, v)};
        const SymbolGrid tx = gen_tx_symbols(cfg, 9000 + t);
        const SymbolGrid y = synthesize_rx(scene, cfg, LinkBudget{}, 0, tx, 9100 + t, {false});
        const Detection* best = nullptr;
        const auto dets = detect(y, tx, arr, params);
        best = strongest(dets);
        if (best && best->p_index == p && best->q_index == q0 + 1 && std::abs(best->aoa - aoa) <= 1e-12 &&
            std::abs(best->bistatic_range - d) <= 1e-9 * d && std::abs(best->range_rate - v) <= 1e-9)
            ++exact;

        // Energy identity: sum |G|^2 * Ns Nc equals the beamformed energy of stream 0.
        const RangeDopplerMap map = range_doppler_maps(y, tx, aoa, arr, true);
        SymbolGrid g(cfg);
        for (std::size_t ns = 0; ns < cfg.Ns; ++ns)
            for (std::size_t nc = 0; nc < cfg.Nc; ++nc)
                for (std::size_t n = 0; n < cfg.N; ++n) g.at(ns, nc, n) = y.at(ns, nc, n) / tx.at(ns, nc, 0);
        double e_in = 0.0, e_out = 0.0;
        for (const cplx& z : beamform(g, arr, aoa)) e_in += std::norm(z);
        for (double m : map.stream_values[0]) e_out += m * m;
        worst_energy = std::max(worst_energy, std::abs(e_out * static_cast<double>(cfg.Ns * cfg.Nc) / e_in - 1.0));
    }
    Outcome o;
    o.pass = exact == 100 && worst_energy <= 1e-9;
    o.detail = fmt("%zu/100 on-bin scenes recovered exactly (AoA, d, range rate); worst energy identity error %.3g",
                   exact, worst_energy);
    return o;
}

// AC6 ---------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome ac6(const std::string& cli, const fs::path& work, const fs::path& config_dir) {
    fs::create_directories(work);
    const std::string cfg = (config_dir / "default.json").string();
    struct Job {
        std::string name, args, artifact;
    };
    const std::vector<Job> jobs{
        {"rmse", "rmse -c '" + cfg + "' --trials 500 --seed 7", "rmse.csv"},
        {"snr-map", "snr-map -c '" + cfg + "' --mode multistatic", "snr_map.csv"},
        {"snr-map-mono", "snr-map -c '" + cfg + "' --mode monostatic", "snr_map.csv"},
        {"single-shot", "single-shot -c '" + cfg + "' --seed 7", "trace.json"},
    };
    std::size_t identical = 0;
    std::string notes;
    for (const Job& j : jobs) {
        std::string contents[2];
        bool ok = true;
        for (int run = 0; run < 2; ++run) {
            const fs::path out = work / (j.name + "_" + std::to_string(run)) / j.artifact;
            fs::remove(out);
            const std::string cmd = "'" + cli + "' " + j.args + " -o '" + out.string() + "' > /dev/null";
            if (std::system(cmd.c_str()) != 0 || !fs::exists(out)) {
                ok = false;
                notes += " " + j.name + ": command failed;";
                break;
            }
            contents[run] = slurp(out);
        }
        if (ok && !contents[0].empty() && contents[0] == contents[1]) {
            ++identical;
        } else if (ok) {
            notes += " " + j.name + ": outputs differ;";
        }
    }
    Outcome o;
    o.pass = identical == jobs.size();
    o.detail = fmt("%zu/%zu artifacts byte-identical across two runs", identical, jobs.size()) + notes;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli, only;
    fs::path work = fs::temp_directory_path() / "msisac_acceptance";
    fs::path config_dir = MSISAC_CONFIG_DIR;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string k = argv[i];
        if (k == "--cli") cli = argv[i + 1];
        else if (k == "--workdir") work = argv[i + 1];
        else if (k == "--configs") config_dir = argv[i + 1];
        else if (k == "--only") only = argv[i + 1];
        else {
            std::cerr << "unknown argument " << k << '\n';
            return 2;
        }
    }

    struct Criterion {
        const char* id;
        const char* title;
        std::function<Outcome()> run;
        double budget_s;
    };
    const std::vector<Criterion> criteria{
        {"AC1", "geometric round trip", ac1, 10.0},
        {"AC2", "quantization statistics", ac2, 300.0},
        {"AC3", "SNR anchor and heatmap floor", ac3, 60.0},
        {"AC4", "RMSE orderings", [&] { return ac4(config_dir); }, 1200.0},
        {"AC5", "estimator oracle equivalence", ac5, std::numeric_limits<double>::infinity()},
        {"AC6", "CLI determinism",
         [&] {
             if (cli.empty()) return Outcome{false, "no --cli given"};
             return ac6(cli, work, config_dir);
         },
         std::numeric_limits<double>::infinity()},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && only.find(c.id) == std::string::npos) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failures;
        std::string budget = std::isfinite(c.budget_s) ? fmt(", budget %.0f s", c.budget_s) : std::string();
        std::cout << (pass ? "PASS " : "FAIL ") << c.id << " " << c.title << ": " << o.detail
                  << fmt(" (%.1f s", secs) << budget << (in_time ? "" : ", over budget") << ")" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
