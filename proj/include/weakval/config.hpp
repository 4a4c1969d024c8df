// Copyright 2026 The weakval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weakval/detector.hpp"
#include "weakval/meter.hpp"

namespace weakval {

/// Target weak-value range lo:hi:n driving post-selection angles through the
/// anomalous-angle solver.
struct WeakValueRange {
    double lo;
    double hi;
    int count;
};

/// Flat experiment description assembled from a key = value file and/or
/// command-line flags (flags win). Fields stay optional until resolve() so
/// that missing required keys can be reported by name.
struct ExperimentConfig {
    std::optional<std::string> preset;  // "thin" | "thick"
    std::optional<double> a_x;
    std::optional<double> a_y;
    std::optional<double> sigma;
    std::optional<double> theta_i;
    std::optional<double> theta_f;
    std::vector<double> theta_f_list;
    std::optional<WeakValueRange> aw_range;
    std::optional<double> epsilon;
    std::optional<double> search_lo;
    std::optional<double> search_hi;
    std::optional<long long> shots;
    std::optional<double> efficiency;
    std::optional<double> dark_rate_hz;
    std::optional<double> gate_s;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;

    /// Coupling from preset or explicit fields; throws ConfigError naming the
    /// missing/invalid field.
    CouplingConfig resolve_coupling() const;

    /// Detection block; defaults fill unset fields.
    DetectionConfig resolve_detection() const;

    bool has_detection() const { return shots.has_value(); }

    /// Canonical "key = value" echo of every set field, ordered, suitable for
    /// output metadata.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Parses a flat UTF-8 "key = value" file with '#' comments. Unknown keys,
/// type mismatches and malformed lines raise ConfigError naming the line.
ExperimentConfig parse_config(std::istream& in, const std::string& source_name = "<config>");
ExperimentConfig parse_config_file(const std::string& path);

/// Angle literal: plain radians, or degrees with a "deg" suffix.
double parse_angle(const std::string& text);

/// "lo:hi:count" literal for weak-value target grids.
WeakValueRange parse_aw_range(const std::string& text, const std::string& where);

/// FNV-1a hash of the canonical echo, printed as 16 hex digits; identifies a
/// configuration in output metadata without embedding timestamps.
std::string config_hash(const std::vector<std::pair<std::string, std::string>>& echo);

/// "%.16e" round-trip-exact text form used by every CSV writer.
std::string format_double(double v);

}  // namespace weakval
