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

#include "weakval/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace weakval {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_number(const std::string& value, const std::string& where) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + value + "'");
    }
    if (used != value.size()) {
        throw ConfigError(where + ": trailing characters in number '" + value + "'");
    }
    return out;
}

long long parse_integer(const std::string& value, const std::string& where) {
    std::size_t used = 0;
    long long out = 0;
    try {
        out = std::stoll(value, &used);
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + value + "'");
    }
    if (used != value.size()) {
        throw ConfigError(where + ": trailing characters in integer '" + value + "'");
    }
    return out;
}

}  // namespace

double parse_angle(const std::string& text) {
    const std::string t = trim(text);
    if (t.size() > 3 && t.substr(t.size() - 3) == "deg") {
        return parse_number(trim(t.substr(0, t.size() - 3)), "angle") * M_PI / 180.0;
    }
    return parse_number(t, "angle");
}

WeakValueRange parse_aw_range(const std::string& text, const std::string& where) {
    std::stringstream ss(text);
    std::string lo, hi, n;
    if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, n)) {
        throw ConfigError(where + ": aw_range must be lo:hi:count, got '" + text + "'");
    }
    WeakValueRange range{parse_number(trim(lo), where), parse_number(trim(hi), where),
                         static_cast<int>(parse_integer(trim(n), where))};
    if (range.count < 1) {
        throw ConfigError(where + ": aw_range count must be >= 1");
    }
    if (!(range.lo <= range.hi)) {
        throw ConfigError(where + ": aw_range lo must not exceed hi");
    }
    return range;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source_name) {
    ExperimentConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = source_name + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(where + ": empty key or value");
        }

        if (key == "preset") {
            if (value != "thin" && value != "thick") {
                throw ConfigError(where + ": preset must be 'thin' or 'thick', got '" + value + "'");
            }
            cfg.preset = value;
        } else if (key == "a_x") {
            cfg.a_x = parse_number(value, where + " (a_x)");
        } else if (key == "a_y") {
            cfg.a_y = parse_number(value, where + " (a_y)");
        } else if (key == "sigma") {
            cfg.sigma = parse_number(value, where + " (sigma)");
        } else if (key == "theta_i") {
            cfg.theta_i = parse_angle(value);
        } else if (key == "theta_f") {
            cfg.theta_f = parse_angle(value);
        } else if (key == "theta_f_list") {
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                cfg.theta_f_list.push_back(parse_angle(item));
            }
        } else if (key == "aw_range") {
            cfg.aw_range = parse_aw_range(value, where + " (aw_range)");
        } else if (key == "epsilon") {
            cfg.epsilon = parse_number(value, where + " (epsilon)");
        } else if (key == "search_lo") {
            cfg.search_lo = parse_number(value, where + " (search_lo)");
        } else if (key == "search_hi") {
            cfg.search_hi = parse_number(value, where + " (search_hi)");
        } else if (key == "shots") {
            cfg.shots = parse_integer(value, where + " (shots)");
        } else if (key == "efficiency") {
            cfg.efficiency = parse_number(value, where + " (efficiency)");
        } else if (key == "dark_rate_hz") {
            cfg.dark_rate_hz = parse_number(value, where + " (dark_rate_hz)");
        } else if (key == "gate_s") {
            cfg.gate_s = parse_number(value, where + " (gate_s)");
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_integer(value, where + " (seed)"));
        } else if (key == "output") {
            cfg.output = value;
        } else {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    return parse_config(in, path);
}

CouplingConfig ExperimentConfig::resolve_coupling() const {
    double ax = 0.0, ay = 0.0, s = 0.0;
    if (preset) {
        const CouplingConfig base =
            *preset == "thin" ? CouplingConfig::preset_thin() : CouplingConfig::preset_thick();
        ax = a_x.value_or(base.a_x);
        ay = a_y.value_or(base.a_y);
        s = sigma.value_or(base.sigma);
    } else {
        if (!a_x || !a_y || !sigma) {
            throw ConfigError(
                "coupling: set 'preset' or all of 'a_x', 'a_y', 'sigma' (missing: " +
                std::string(!a_x ? "a_x " : "") + std::string(!a_y ? "a_y " : "") +
                std::string(!sigma ? "sigma" : "") + ")");
        }
        ax = *a_x;
        ay = *a_y;
        s = *sigma;
    }
    if (!(s > 0.0)) {
        throw ConfigError("sigma: must be > 0, got " + std::to_string(s));
    }
    if (ax < 0.0) {
        throw ConfigError("a_x: must be >= 0, got " + std::to_string(ax));
    }
    if (ay < 0.0) {
        throw ConfigError("a_y: must be >= 0, got " + std::to_string(ay));
    }
    return CouplingConfig::make(ax, ay, s);
}

DetectionConfig ExperimentConfig::resolve_detection() const {
    DetectionConfig det;
    det.shots = shots.value_or(det.shots);
    det.efficiency = efficiency.value_or(det.efficiency);
    det.dark_rate_hz = dark_rate_hz.value_or(det.dark_rate_hz);
    det.gate_s = gate_s.value_or(det.gate_s);
    det.seed = seed.value_or(det.seed);
    if (det.shots < 1) {
        throw ConfigError("shots: must be >= 1, got " + std::to_string(det.shots));
    }
    if (!(det.efficiency >= 0.0 && det.efficiency <= 1.0)) {
        throw ConfigError("efficiency: must lie in [0, 1]");
    }
    if (det.dark_rate_hz < 0.0) {
        throw ConfigError("dark_rate_hz: must be >= 0");
    }
    if (!(det.gate_s > 0.0)) {
        throw ConfigError("gate_s: must be > 0");
    }
    return det;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    if (preset) out.emplace_back("preset", *preset);
    if (a_x) out.emplace_back("a_x", format_double(*a_x));
    if (a_y) out.emplace_back("a_y", format_double(*a_y));
    if (sigma) out.emplace_back("sigma", format_double(*sigma));
    if (theta_i) out.emplace_back("theta_i", format_double(*theta_i));
    if (theta_f) out.emplace_back("theta_f", format_double(*theta_f));
    if (!theta_f_list.empty()) {
        std::string joined;
        for (double t : theta_f_list) {
            if (!joined.empty()) joined += ',';
            joined += format_double(t);
        }
        out.emplace_back("theta_f_list", joined);
    }
    if (aw_range) {
        out.emplace_back("aw_range", format_double(aw_range->lo) + ":" +
                                         format_double(aw_range->hi) + ":" +
                                         std::to_string(aw_range->count));
    }
    if (epsilon) out.emplace_back("epsilon", format_double(*epsilon));
    if (search_lo) out.emplace_back("search_lo", format_double(*search_lo));
    if (search_hi) out.emplace_back("search_hi", format_double(*search_hi));
    if (shots) out.emplace_back("shots", std::to_string(*shots));
    if (efficiency) out.emplace_back("efficiency", format_double(*efficiency));
    if (dark_rate_hz) out.emplace_back("dark_rate_hz", format_double(*dark_rate_hz));
    if (gate_s) out.emplace_back("gate_s", format_double(*gate_s));
    if (seed) out.emplace_back("seed", std::to_string(*seed));
    if (output) out.emplace_back("output", *output);
    return out;
}

std::string config_hash(const std::vector<std::pair<std::string, std::string>>& echo) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    const auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001B3ull;
        }
        h ^= 0x1F;
        h *= 0x100000001B3ull;
    };
    for (const auto& [k, v] : echo) {
        mix(k);
        mix(v);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

}  // namespace weakval
