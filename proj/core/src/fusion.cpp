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

#include "msisac/fusion.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "msisac/errors.hpp"

namespace msisac {

namespace {

constexpr double kMaxCondition = 1e8;

Vec2 centroid(const Cluster& c) {
    Vec2 sum;
    for (const auto& m : c) sum += m.position;
    return sum / static_cast<double>(c.size());
}

Vec2 solve_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, Eigen::Index n_unknowns) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (s.size() < n_unknowns || !(s(s.size() - 1) > 0.0) || s(0) / s(s.size() - 1) > kMaxCondition)
        throw SingularGeometry("velocity_solve: receiver bearings are (nearly) collinear");
    const Eigen::VectorXd v = svd.solve(b);
    return {v(0), v(1)};
}

}  // namespace

double ellipse_range(double d_hat, double aoa, Vec2 rx, Vec2 tx) {
    const Vec2 baseline = tx - rx;
    const double d_b = baseline.norm();
    if (!(d_hat > d_b * (1.0 + 1e-9)))
        throw InsideBaseline("ellipse_range: bistatic range does not exceed the baseline");
    const double gamma = d_b > 0.0 ? aoa - baseline.bearing() : 0.0;
    return (d_hat * d_hat - d_b * d_b) / (2.0 * (d_hat - d_b * std::cos(gamma)));
}

Vec2 position_from_detection(const Detection& det, Vec2 rx, Vec2 tx) {
    return rx + Vec2::polar(ellipse_range(det.bistatic_range, det.aoa, rx, tx), det.aoa);
}

std::vector<Cluster> cluster_positions(std::span<const PositionedDetection> per_rx, double radius) {
    if (!(radius > 0.0)) throw ConfigError("cluster_positions: radius must be positive");
    std::vector<Cluster> clusters;
    std::deque<PositionedDetection> pending(per_rx.begin(), per_rx.end());

    // Evictions re-queue an item; the budget keeps a pathological input from cycling.
    std::size_t budget = 4 * per_rx.size() + 16;
    while (!pending.empty()) {
        PositionedDetection item = pending.front();
        pending.pop_front();

        std::vector<std::pair<double, std::size_t>> near;
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            const double dist = distance(item.position, centroid(clusters[c]));
            if (dist <= radius) near.emplace_back(dist, c);
        }
        std::sort(near.begin(), near.end());

        bool placed = false;
        for (const auto& [dist, c] : near) {
            Cluster& cl = clusters[c];
            auto same = std::find_if(cl.begin(), cl.end(),
                                     [&](const PositionedDetection& m) { return m.rx_index == item.rx_index; });
            if (same == cl.end()) {
                cl.push_back(item);
                placed = true;
                break;
            }
            const Vec2 ctr = centroid(cl);
            if (budget > 0 && distance(item.position, ctr) < distance(same->position, ctr)) {
                --budget;
                pending.push_back(*same);
                *same = item;
                placed = true;
                break;
            }
        }
        if (!placed) clusters.push_back({item});
    }
    return clusters;
}

FusedPosition fuse_position(const Cluster& cluster, Vec2 tx) {
    if (cluster.empty()) throw ConfigError("fuse_position: empty cluster");
    FusedPosition out;
    out.position = centroid(cluster);
    out.aod = (out.position - tx).bearing();
    return out;
}

Vec2 velocity_solve(const Cluster& cluster, VelocitySolveMode mode, double aod) {
    const auto m = static_cast<Eigen::Index>(cluster.size());
    if (mode == VelocitySolveMode::TwoRxWithAod) {
        if (m < 2) throw ConfigError("velocity_solve: TwoRxWithAod needs at least two receivers");
        Eigen::MatrixXd A(m, 2);
        Eigen::VectorXd b(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            const Detection& d = cluster[static_cast<std::size_t>(k)].detection;
            A(k, 0) = std::cos(d.aoa) + std::cos(aod);
            A(k, 1) = std::sin(d.aoa) + std::sin(aod);
            b(k) = d.range_rate;
        }
        return solve_least_squares(A, b, 2);
    }
    if (m < 3) throw ConfigError("velocity_solve: ThreeRxAodFree needs at least three receivers");
    // The transmit-side projection v . u_T is common to every receiver, so it
    // is carried as a third unknown; eliminating it is the same as differencing.
    Eigen::MatrixXd A(m, 3);
    Eigen::VectorXd b(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const Detection& d = cluster[static_cast<std::size_t>(k)].detection;
        A(k, 0) = std::cos(d.aoa);
        A(k, 1) = std::sin(d.aoa);
        A(k, 2) = 1.0;
        b(k) = d.range_rate;
    }
    return solve_least_squares(A, b, 3);
}

FusedTrack monostatic_estimate(const Detection& det, Vec2 station) {
    FusedTrack t;
    const Vec2 u = Vec2::polar(1.0, det.aoa);
    t.position = station + u * (0.5 * det.bistatic_range);
    t.velocity = u * (0.5 * det.range_rate);
    t.aod = det.aoa;
    t.members.push_back({det.rx_index, det, t.position});
    return t;
}

FusedTrack bistatic_estimate(const Detection& det, Vec2 rx, Vec2 tx) {
    FusedTrack t;
    t.position = position_from_detection(det, rx, tx);
    t.aod = (t.position - tx).bearing();
    const Vec2 a{std::cos(det.aoa) + std::cos(t.aod), std::sin(det.aoa) + std::sin(t.aod)};
    const double a2 = a.norm2();
    t.velocity = a2 > std::numeric_limits<double>::epsilon() ? a * (det.range_rate / a2) : Vec2{};
    t.members.push_back({det.rx_index, det, t.position});
    return t;
}

}  // namespace msisac
