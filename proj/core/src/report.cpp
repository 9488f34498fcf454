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

#include "msisac/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace msisac {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_rmse_csv(std::ostream& os, std::span<const RmseRecord> records) {
    os << kRmseCsvHeader << '\n';
    for (const auto& r : records) {
        os << to_string(r.mode) << ',' << format_number(r.sweep) << ',' << format_number(r.position_rmse) << ','
           << format_number(r.velocity_rmse) << ',' << format_number(r.detection_rate) << ',' << r.trials << '\n';
    }
}

void write_snr_map_csv(std::ostream& os, const Heatmap& map) {
    os << kSnrMapCsvHeader << '\n';
    for (std::size_t iy = 0; iy < map.ny; ++iy)
        for (std::size_t ix = 0; ix < map.nx; ++ix) {
            const Vec2 p = map.point(ix, iy);
            os << format_number(p.x) << ',' << format_number(p.y) << ',' << format_number(map.at(ix, iy)) << '\n';
        }
}

}  // namespace msisac
