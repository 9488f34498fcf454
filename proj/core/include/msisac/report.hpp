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

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "msisac/experiment.hpp"
#include "msisac/linkbudget.hpp"

namespace msisac {

/// Column order of rmse.csv. Changing it breaks downstream readers.
inline constexpr std::string_view kRmseCsvHeader =
    "mode,sweep,position_rmse_m,velocity_rmse_mps,detection_rate,trials";

/// Column order of snr_map.csv; rows run x-fastest from the lattice origin.
inline constexpr std::string_view kSnrMapCsvHeader = "x_m,y_m,snr_db";

/// "%.10g" formatting; "nan" for NaN.
std::string format_number(double v);

void write_rmse_csv(std::ostream& os, std::span<const RmseRecord> records);
void write_snr_map_csv(std::ostream& os, const Heatmap& map);

}  // namespace msisac
