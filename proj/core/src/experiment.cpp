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

#include "msisac/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "msisac/channel.hpp"
#include "msisac/errors.hpp"
#include "msisac/estimator.hpp"

namespace msisac {

namespace {

using json = nlohmann::json;

double edge_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return distance(p, a + ab * t);
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial, std::uint64_t role) {
    return derive_seed(seed, {stream_tag::kTrial, trial, role});
}

enum Role : std::uint64_t { kSignal = 1, kMonostatic = 2 };

const Detection* strongest(const std::vector<Detection>& dets) {
    if (dets.empty()) return nullptr;
    return &*std::max_element(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
        return a.peak_power < b.peak_power;
    });
}

SceneConfig monostatic_scene(const SceneConfig& layout) {
    SceneConfig mono = layout;
    mono.rx_positions = {layout.tx_position};
    return mono;
}

/// Received grids of one trial, synthesized on first use.
class TrialGrids {
public:
    TrialGrids(const ExperimentConfig& cfg, const SceneConfig& layout, std::size_t trial)
        : cfg_(cfg), layout_(layout), mono_(monostatic_scene(layout)),
          signal_seed_(trial_seed(cfg.seed, trial, kSignal)), mono_seed_(trial_seed(cfg.seed, trial, kMonostatic)),
          tx_(gen_tx_symbols(cfg.ofdm, signal_seed_)) {}

    const SymbolGrid& tx() const { return tx_; }

    const SymbolGrid& rx(std::size_t k) {
        auto it = std::find_if(rx_.begin(), rx_.end(), [&](const auto& e) { return e.first == k; });
        if (it != rx_.end()) return it->second;
        LinkBudget link = cfg_.link;
        link.alpha = 0.0;
        rx_.emplace_back(k, synthesize_rx(layout_, cfg_.ofdm, link, k, tx_, signal_seed_, {!cfg_.noiseless}));
        return rx_.back().second;
    }

    const SymbolGrid& monostatic() {
        if (!mono_grid_) {
            LinkBudget link = cfg_.link;
            link.alpha = cfg_.noiseless ? 0.0 : cfg_.monostatic_alpha;
            mono_grid_ = synthesize_rx(mono_, cfg_.ofdm, link, 0, tx_, mono_seed_, {!cfg_.noiseless});
        }
        return *mono_grid_;
    }

    const SceneConfig& mono_scene() const { return mono_; }

private:
    const ExperimentConfig& cfg_;
    const SceneConfig& layout_;
    SceneConfig mono_;
    std::uint64_t signal_seed_;
    std::uint64_t mono_seed_;
    SymbolGrid tx_;
    std::vector<std::pair<std::size_t, SymbolGrid>> rx_;
    std::optional<SymbolGrid> mono_grid_;
};

std::vector<Detection> detect_at(TrialGrids& grids, const SceneConfig& layout, const DetectorParams& params,
                                 std::size_t k) {
    return detect(grids.rx(k), grids.tx(), layout.receiver_array(k), params, k);
}

std::vector<Detection> detect_monostatic(TrialGrids& grids, const DetectorParams& params) {
    return detect(grids.monostatic(), grids.tx(), grids.mono_scene().receiver_array(0), params, 0);
}

std::optional<FusedTrack> safe_bistatic(const Detection* det, const SceneConfig& layout) {
    if (!det) return std::nullopt;
    try {
        return bistatic_estimate(*det, layout.rx_positions.at(det->rx_index), layout.tx_position);
    } catch (const InsideBaseline&) {
        return std::nullopt;
    }
}

ModeEstimate to_estimate(const std::optional<FusedTrack>& t) {
    ModeEstimate e;
    if (t && t->velocity) {
        e.detected = true;
        e.position = t->position;
        e.velocity = *t->velocity;
    }
    return e;
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

json detection_json(const Detection& d) {
    return {{"rx_index", d.rx_index},
            {"aoa_deg", rad2deg(d.aoa)},
            {"bistatic_range_m", d.bistatic_range},
            {"range_rate_mps", d.range_rate},
            {"peak_power", d.peak_power},
            {"p_index", d.p_index},
            {"q_index", d.q_index}};
}

json track_json(const std::optional<FusedTrack>& t, const SensingObject& truth) {
    if (!t) return {{"detected", false}};
    json members = json::array();
    for (const auto& m : t->members) members.push_back(m.rx_index);
    json out = {{"detected", true},
                {"position_m", vec_json(t->position)},
                {"aod_deg", rad2deg(t->aod)},
                {"members", members},
                {"position_error_m", distance(t->position, truth.position)}};
    if (t->velocity) {
        out["velocity_mps"] = vec_json(*t->velocity);
        out["velocity_error_mps"] = distance(*t->velocity, truth.velocity);
    }
    return out;
}

/// AoA spectrum peaks and range-Doppler peaks of one receiver, as detect sees them.
json receiver_trace(const SymbolGrid& rx, const SymbolGrid& tx, const ArrayConfig& array, const DetectorParams& p,
                    std::size_t index, Vec2 position) {
    const auto grid = sector_grid(array.boresight, p.sector_half_width, p.aoa_step);
    const AoaSpectrum spec = aoa_spectrum(rx, array, grid);
    json aoa_peaks = json::array();
    for (std::size_t i : find_peak_indices_1d(spec.power, p.aoa_threshold)) {
        const RangeDopplerMap map = range_doppler_maps(rx, tx, spec.phi_grid[i], array);
        json rd = json::array();
        for (const MapPeak& pk : find_peaks_2d(map, p.rd_threshold, p.rd_floor))
            rd.push_back({{"p", pk.p}, {"q", pk.q0 + 1.0}, {"value", pk.value}});
        aoa_peaks.push_back({{"aoa_deg", rad2deg(spec.phi_grid[i])}, {"power", spec.power[i]}, {"rd_peaks", rd}});
    }
    double power = 0.0;
    for (const cplx& z : rx.data()) power += std::norm(z);
    const auto detections = detect(rx, tx, array, p, index);
    json dets = json::array();
    for (const auto& d : detections) dets.push_back(detection_json(d));
    return {{"rx_index", index},
            {"position_m", vec_json(position)},
            {"boresight_deg", rad2deg(array.boresight)},
            {"mean_element_power_mw", power / static_cast<double>(rx.data().size())},
            {"aoa_peaks", aoa_peaks},
            {"detections", dets}};
}

}  // namespace

SceneConfig make_layout(const ExperimentConfig& cfg) {
    SceneConfig s;
    s.tx_position = cfg.scene.tx;
    s.d0 = cfg.scene.d0;
    s.rx_positions = hex_rx_positions(cfg.scene.tx, cfg.scene.d0, cfg.scene.n_rx);
    s.tx_array = {cfg.ofdm.N, cfg.scene.spacing_wavelengths, sub_cell_center(cfg.scene.sub_cell)};
    s.rx_array = {cfg.ofdm.N, cfg.scene.spacing_wavelengths, 0.0};
    s.objects = cfg.scene.objects;
    return s;
}

RxPair scheduled_pair(const ExperimentConfig& cfg) {
    return schedule_receivers(make_layout(cfg), sub_cell_center(cfg.scene.sub_cell));
}

SensingObject draw_object(const ExperimentConfig& cfg, Rng& rng) {
    const SceneConfig layout = make_layout(cfg);
    const RxPair pair = schedule_receivers(layout, sub_cell_center(cfg.scene.sub_cell));
    const Vec2 A = layout.tx_position, B = layout.rx_positions[pair.first], C = layout.rx_positions[pair.second];

    std::uniform_real_distribution<double> u(0.0, 1.0);
    SensingObject obj;
    obj.rcs = cfg.scene.rcs;
    for (;;) {
        double r1 = u(rng), r2 = u(rng);
        if (r1 + r2 > 1.0) {
            r1 = 1.0 - r1;
            r2 = 1.0 - r2;
        }
        const Vec2 p = A + (B - A) * r1 + (C - A) * r2;
        if (std::min({edge_distance(p, A, B), edge_distance(p, B, C), edge_distance(p, C, A)}) >= cfg.scene.guard) {
            obj.position = p;
            break;
        }
    }
    const double speed = cfg.velocity_max * u(rng);
    const double heading = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
    obj.velocity = Vec2::polar(speed, heading);
    return obj;
}

ExperimentConfig at_sweep_point(const ExperimentConfig& cfg, double value) {
    ExperimentConfig c = cfg;
    switch (cfg.sweep_axis) {
        case SweepAxis::None: break;
        case SweepAxis::Nc: c.ofdm.Nc = static_cast<std::size_t>(value); break;
        case SweepAxis::Ns: c.ofdm.Ns = static_cast<std::size_t>(value); break;
        case SweepAxis::PtOffsetDb: c.link.pt_dbm += value; break;
    }
    c.ofdm.validate();
    return c;
}

std::optional<FusedTrack> fuse_multistatic(const SceneConfig& layout, std::span<const Detection> detections,
                                           double cluster_radius) {
    std::vector<PositionedDetection> positioned;
    for (const Detection& d : detections) {
        try {
            positioned.push_back(
                {d.rx_index, d, position_from_detection(d, layout.rx_positions.at(d.rx_index), layout.tx_position)});
        } catch (const InsideBaseline&) {
        }
    }
    if (positioned.empty()) return std::nullopt;

    const auto clusters = cluster_positions(positioned, cluster_radius);
    auto score = [](const Cluster& c) {
        double s = 0.0;
        for (const auto& m : c) s += m.detection.peak_power;
        return s;
    };
    const Cluster* best = &clusters.front();
    for (const Cluster& c : clusters)
        if (c.size() > best->size() || (c.size() == best->size() && score(c) > score(*best))) best = &c;

    const FusedPosition fp = fuse_position(*best, layout.tx_position);
    FusedTrack t;
    t.position = fp.position;
    t.aod = fp.aod;
    t.members = *best;

    if (best->size() >= 2) {
        try {
            t.velocity = velocity_solve(*best, VelocitySolveMode::TwoRxWithAod, fp.aod);
        } catch (const SingularGeometry&) {
        }
    }
    if (!t.velocity) {
        // One usable equation: minimum-norm solution, as in the bistatic case.
        const Detection& d = best->front().detection;
        const Vec2 a{std::cos(d.aoa) + std::cos(fp.aod), std::sin(d.aoa) + std::sin(fp.aod)};
        const double a2 = a.norm2();
        t.velocity = a2 > std::numeric_limits<double>::epsilon() ? a * (d.range_rate / a2) : Vec2{};
    }
    return t;
}

TrialOutcome run_trial(const ExperimentConfig& cfg, std::size_t trial) {
    SceneConfig layout = make_layout(cfg);
    const RxPair pair = schedule_receivers(layout, sub_cell_center(cfg.scene.sub_cell));

    TrialOutcome out;
    Rng rng = derive_stream(cfg.seed, {stream_tag::kTrial, trial});
    out.truth = draw_object(cfg, rng);
    layout.objects = {out.truth};

    TrialGrids grids(cfg, layout, trial);
    const double radius = cfg.cluster_radius_bins * cfg.ofdm.range_bin();
    std::optional<std::vector<Detection>> dets_a;
    auto first_rx = [&]() -> const std::vector<Detection>& {
        if (!dets_a) dets_a = detect_at(grids, layout, cfg.detector, pair.first);
        return *dets_a;
    };

    for (const SnrMode mode : cfg.modes) {
        std::optional<FusedTrack> track;
        switch (mode) {
            case SnrMode::Monostatic: {
                const auto dets = detect_monostatic(grids, cfg.detector);
                if (const Detection* d = strongest(dets)) track = monostatic_estimate(*d, layout.tx_position);
                break;
            }
            case SnrMode::Bistatic:
                track = safe_bistatic(strongest(first_rx()), layout);
                break;
            case SnrMode::Multistatic: {
                std::vector<Detection> all = first_rx();
                const auto dets_b = detect_at(grids, layout, cfg.detector, pair.second);
                all.insert(all.end(), dets_b.begin(), dets_b.end());
                track = fuse_multistatic(layout, all, radius);
                break;
            }
        }
        out.estimates.push_back(to_estimate(track));
    }
    return out;
}

std::vector<RmseRecord> run_rmse_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<double> points =
        cfg.sweep_axis == SweepAxis::None ? std::vector<double>{0.0} : cfg.sweep_values;
    const std::size_t n_threads =
        std::max<std::size_t>(1, cfg.threads ? cfg.threads : std::thread::hardware_concurrency());

    std::vector<RmseRecord> records;
    for (const double value : points) {
        const ExperimentConfig c = at_sweep_point(cfg, value);
        std::vector<TrialOutcome> outcomes(c.trials);

        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= c.trials || failed.load()) return;
                try {
                    outcomes[t] = run_trial(c, t);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed = true;
                }
            }
        };
        if (n_threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (std::size_t i = 0; i < std::min(n_threads, c.trials); ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        if (error) std::rethrow_exception(error);

        for (std::size_t m = 0; m < c.modes.size(); ++m) {
            double pos2 = 0.0, vel2 = 0.0;
            std::size_t hits = 0;
            for (const TrialOutcome& o : outcomes) {
                const ModeEstimate& e = o.estimates[m];
                if (!e.detected) continue;
                pos2 += (e.position - o.truth.position).norm2();
                vel2 += (e.velocity - o.truth.velocity).norm2();
                ++hits;
            }
            RmseRecord r;
            r.mode = c.modes[m];
            r.sweep = value;
            r.trials = c.trials;
            r.detection_rate = static_cast<double>(hits) / static_cast<double>(c.trials);
            r.position_rmse = hits ? std::sqrt(pos2 / static_cast<double>(hits)) : std::nan("");
            r.velocity_rmse = hits ? std::sqrt(vel2 / static_cast<double>(hits)) : std::nan("");
            records.push_back(r);
        }
    }
    return records;
}

json run_single_shot(const ExperimentConfig& cfg_in, std::uint64_t seed) {
    ExperimentConfig cfg = cfg_in;
    cfg.seed = seed;
    cfg.validate();

    SceneConfig layout = make_layout(cfg);
    const RxPair pair = schedule_receivers(layout, sub_cell_center(cfg.scene.sub_cell));
    if (layout.objects.empty()) {
        Rng rng = derive_stream(seed, {stream_tag::kTrial, 0});
        layout.objects = {draw_object(cfg, rng)};
    }
    layout.validate();

    json warnings = json::array();
    const SubCellRegion region = sub_cell_region(layout, pair);
    json truth = json::array();
    for (std::size_t l = 0; l < layout.objects.size(); ++l) {
        const SensingObject& o = layout.objects[l];
        if (!region.contains(o.position))
            warnings.push_back("object " + std::to_string(l) + " lies outside the scheduled sub-sensing cell");
        json paths = json::array();
        for (std::size_t k : {pair.first, pair.second}) {
            const PropagationTruth t = propagation_truth(layout.tx_position, layout.rx_positions[k], o);
            paths.push_back({{"rx_index", k},
                             {"d_t_m", t.d_T},
                             {"d_r_m", t.d_R},
                             {"bistatic_range_m", t.bistatic_range},
                             {"range_rate_mps", t.range_rate},
                             {"aoa_deg", rad2deg(t.aoa)},
                             {"aod_deg", rad2deg(t.aod)}});
        }
        truth.push_back({{"position_m", vec_json(o.position)},
                         {"velocity_mps", vec_json(o.velocity)},
                         {"rcs_m2", o.rcs},
                         {"paths", paths}});
    }

    TrialGrids grids(cfg, layout, 0);
    const double radius = cfg.cluster_radius_bins * cfg.ofdm.range_bin();
    const SensingObject& primary = layout.objects.front();

    json receivers = json::array();
    json modes = json::object();
    const bool want_pair = std::any_of(cfg.modes.begin(), cfg.modes.end(), [](SnrMode m) {
        return m != SnrMode::Monostatic;
    });
    if (want_pair) {
        for (std::size_t k : {pair.first, pair.second})
            receivers.push_back(receiver_trace(grids.rx(k), grids.tx(), layout.receiver_array(k), cfg.detector, k,
                                               layout.rx_positions[k]));
    }
    for (const SnrMode mode : cfg.modes) {
        std::optional<FusedTrack> track;
        if (mode == SnrMode::Monostatic) {
            json tr = receiver_trace(grids.monostatic(), grids.tx(), grids.mono_scene().receiver_array(0),
                                     cfg.detector, 0, layout.tx_position);
            tr["monostatic"] = true;
            receivers.push_back(tr);
            const auto dets = detect_monostatic(grids, cfg.detector);
            if (const Detection* d = strongest(dets)) track = monostatic_estimate(*d, layout.tx_position);
        } else if (mode == SnrMode::Bistatic) {
            const auto dets = detect_at(grids, layout, cfg.detector, pair.first);
            track = safe_bistatic(strongest(dets), layout);
        } else {
            auto all = detect_at(grids, layout, cfg.detector, pair.first);
            const auto b = detect_at(grids, layout, cfg.detector, pair.second);
            all.insert(all.end(), b.begin(), b.end());
            track = fuse_multistatic(layout, all, radius);
        }
        if (!track) warnings.push_back(std::string(to_string(mode)) + ": no detection");
        modes[std::string(to_string(mode))] = track_json(track, primary);
    }

    return {{"seed", seed},
            {"config", to_json(cfg)},
            {"layout",
             {{"tx_m", vec_json(layout.tx_position)},
              {"scheduled_pair", {pair.first, pair.second}},
              {"rx_m", [&] {
                   json a = json::array();
                   for (Vec2 p : layout.rx_positions) a.push_back(vec_json(p));
                   return a;
               }()}}},
            {"grid", {{"ns", cfg.ofdm.Ns}, {"nc", cfg.ofdm.Nc}, {"n_antennas", cfg.ofdm.N},
                      {"range_bin_m", cfg.ofdm.range_bin()}, {"range_rate_bin_mps", cfg.ofdm.range_rate_bin()}}},
            {"truth", truth},
            {"receivers", receivers},
            {"tracks", modes},
            {"warnings", warnings}};
}

Heatmap run_snr_map(const ExperimentConfig& cfg, SnrMode mode) {
    cfg.validate();
    const SceneConfig layout = make_layout(cfg);
    const RxPair pair = schedule_receivers(layout, sub_cell_center(cfg.scene.sub_cell));
    OfdmConfig ofdm = cfg.ofdm;
    ofdm.Nc = cfg.snr_map.nc;
    LinkBudget link = cfg.link;
    link.alpha = mode == SnrMode::Monostatic ? cfg.monostatic_alpha : 0.0;

    const double step = cfg.snr_map.step;
    auto [lo, hi] = sub_cell_region(layout, pair).bounds();
    lo = {std::floor(lo.x / step) * step, std::floor(lo.y / step) * step};
    hi = {std::ceil(hi.x / step) * step, std::ceil(hi.y / step) * step};
    return snr_heatmap(layout, link, ofdm, mode, lo, hi, step, pair, cfg.scene.rcs);
}

}  // namespace msisac
