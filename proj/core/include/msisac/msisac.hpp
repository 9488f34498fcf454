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

#include "msisac/channel.hpp"
#include "msisac/config.hpp"
#include "msisac/errors.hpp"
#include "msisac/estimator.hpp"
#include "msisac/experiment.hpp"
#include "msisac/fusion.hpp"
#include "msisac/geometry.hpp"
#include "msisac/linkbudget.hpp"
#include "msisac/random.hpp"
#include "msisac/report.hpp"
