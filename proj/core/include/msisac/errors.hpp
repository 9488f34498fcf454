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

#include <stdexcept>
#include <string>

namespace msisac {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (bad sizes, odd Ns, unknown mode, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A sensing object sits on a station, so its bearing is undefined.
class ObjectAtStation : public Error {
public:
    using Error::Error;
};

/// Zero-length propagation leg in the radar equation.
class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

/// Peak search returned nothing above threshold.
class NoPeaks : public Error {
public:
    using Error::Error;
};

/// Bistatic range not larger than the tx-rx baseline; no ellipse point exists.
class InsideBaseline : public Error {
public:
    using Error::Error;
};

/// Velocity system is rank deficient or too badly conditioned to invert.
class SingularGeometry : public Error {
public:
    using Error::Error;
};

}  // namespace msisac
