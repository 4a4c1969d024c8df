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

#include "weakval/detector.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "weakval/config.hpp"
#include "weakval/rng.hpp"

namespace weakval {

namespace {

constexpr double kImagTolerance = 1e-12;
constexpr double kVanishingNorm = 1e-12;
constexpr double kNegativePixelTolerance = -1e-12;

void validate(const DetectionConfig& det) {
    if (det.shots < 1) {
        throw std::invalid_argument("DetectionConfig: shots must be >= 1");
    }
    if (!(det.efficiency >= 0.0 && det.efficiency <= 1.0)) {
        throw std::invalid_argument("DetectionConfig: efficiency must lie in [0, 1]");
    }
    if (!(det.dark_rate_hz >= 0.0)) {
        throw std::invalid_argument("DetectionConfig: dark_rate_hz must be >= 0");
    }
    if (!(det.gate_s > 0.0)) {
        throw std::invalid_argument("DetectionConfig: gate_s must be > 0");
    }
}

}  // namespace

std::int64_t CountMap::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

PixelProbabilityMap pixel_probability_map(const PolarizationState& psi_i,
                                          const PolarizationState& psi_f,
                                          const CouplingConfig& config,
                                          const PixelGrid& grid) {
    const auto [zh_c, zv_c] = branch_amplitudes(psi_i, psi_f);
    const double scale = std::max({1.0, std::abs(zh_c.real()), std::abs(zv_c.real())});
    if (std::abs(zh_c.imag()) > kImagTolerance * scale ||
        std::abs(zv_c.imag()) > kImagTolerance * scale) {
        throw UnsupportedImaginaryError(std::max(std::abs(zh_c.imag()), std::abs(zv_c.imag())));
    }
    const double zh = zh_c.real();
    const double zv = zv_c.real();
    const double kk = overlap_kappa(config.a_x, config.sigma) *
                      overlap_kappa(config.a_y, config.sigma);
    const double d = zh * zh + zv * zv + 2.0 * zh * zv * kk;
    if (d <= kVanishingNorm) {
        throw VanishingPostselectionError(d);
    }

    // One bin_integrals call per pixel per axis covers all three terms.
    std::array<BinIntegrals, kGridPixels> bx;
    std::array<BinIntegrals, kGridPixels> by;
    for (int i = 0; i < kGridPixels; ++i) {
        bx[i] = bin_integrals(config.a_x, config.sigma, i, i + 1.0, grid.beam_center_x);
        by[i] = bin_integrals(config.a_y, config.sigma, i, i + 1.0, grid.beam_center_y);
    }

    PixelProbabilityMap map;
    map.grid = grid;
    map.postselection_probability = d;
    map.context = {std::atan2(psi_i.amp_v.real(), psi_i.amp_h.real()),
                   std::atan2(psi_f.amp_v.real(), psi_f.amp_h.real()),
                   config.a_x, config.a_y, config.sigma};

    double total = 0.0;
    for (int i = 0; i < kGridPixels; ++i) {
        for (int j = 0; j < kGridPixels; ++j) {
            // H branch is displaced along x, V branch along y; the cross term
            // carries both kappa factors through the bin cross integrals.
            double p = (zh * zh * bx[i].i_shift * by[j].i_zero +
                        zv * zv * bx[i].i_zero * by[j].i_shift +
                        2.0 * zh * zv * bx[i].i_cross * by[j].i_cross) /
                       d;
            if (p < kNegativePixelTolerance) {
                throw InternalConsistencyError(
                    "pixel_probability_map: negative pixel probability " + std::to_string(p));
            }
            p = std::max(p, 0.0);
            map.probs[i * kGridPixels + j] = p;
            total += p;
        }
    }
    map.truncation_mass = 1.0 - total;
    for (double& p : map.probs) {
        p /= total;
    }
    return map;
}

CountMap simulate_counts(const PixelProbabilityMap& map, const DetectionConfig& det) {
    validate(det);
    CountMap out;
    out.config = det;
    out.grid = map.grid;
    out.context = map.context;
    out.postselection_probability = map.postselection_probability;
    out.truncation_mass = map.truncation_mass;
    out.total_signal_expected =
        static_cast<double>(det.shots) * det.efficiency * map.postselection_probability;
    out.rng_algorithm = SplitRng::kAlgorithm;

    SplitRng rng(det.seed);

    const double p_detect = map.postselection_probability * det.efficiency;
    const long long n_signal = rng.binomial(det.shots, p_detect);
    if (n_signal > 0) {
        const AliasTable table(std::vector<double>(map.probs.begin(), map.probs.end()));
        for (long long s = 0; s < n_signal; ++s) {
            ++out.counts[table.sample(rng)];
        }
    }
    const double dark_mean = static_cast<double>(det.shots) * det.dark_rate_hz * det.gate_s;
    if (dark_mean > 0.0) {
        for (auto& c : out.counts) {
            c += rng.poisson(dark_mean);
        }
    }
    return out;
}

CentroidEstimate centroid_estimate(const CountMap& counts, double background_per_pixel) {
    if (background_per_pixel < 0.0) {
        throw std::invalid_argument("centroid_estimate: background must be >= 0");
    }
    double n = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    std::array<double, kGridCells> weight;
    for (int i = 0; i < kGridPixels; ++i) {
        for (int j = 0; j < kGridPixels; ++j) {
            const double w =
                std::max(0.0, static_cast<double>(counts.at(i, j)) - background_per_pixel);
            weight[i * kGridPixels + j] = w;
            n += w;
            sx += w * (i + 0.5);
            sy += w * (j + 0.5);
        }
    }
    if (!(n > 0.0)) {
        throw InsufficientCountsError("centroid_estimate: no counts after background subtraction");
    }
    const double mean_x = sx / n;
    const double mean_y = sy / n;
    double vx = 0.0;
    double vy = 0.0;
    for (int i = 0; i < kGridPixels; ++i) {
        for (int j = 0; j < kGridPixels; ++j) {
            const double w = weight[i * kGridPixels + j];
            vx += w * (i + 0.5 - mean_x) * (i + 0.5 - mean_x);
            vy += w * (j + 0.5 - mean_y) * (j + 0.5 - mean_y);
        }
    }
    double stderr_x = 0.0;
    double stderr_y = 0.0;
    if (n > 1.0) {
        stderr_x = std::sqrt(vx / (n - 1.0) / n);
        stderr_y = std::sqrt(vy / (n - 1.0) / n);
    }
    return {mean_x - counts.grid.beam_center_x, mean_y - counts.grid.beam_center_y,
            stderr_x, stderr_y, n};
}

ShiftCalibration calibrate_shifts(const CountMap& counts_h, const CountMap& counts_v) {
    const CentroidEstimate h = centroid_estimate(counts_h);
    const CentroidEstimate v = centroid_estimate(counts_v);
    return {h.x - v.x, v.y - h.y,
            std::hypot(h.stderr_x, v.stderr_x),
            std::hypot(h.stderr_y, v.stderr_y)};
}

namespace {

void write_meta(std::ostream& out, const char* key, const std::string& value) {
    out << "# " << key << " = " << value << "\n";
}

}  // namespace

void write_countmap_csv(std::ostream& out, const CountMap& map) {
    std::vector<std::pair<std::string, std::string>> echo = {
        {"format", "weakval-countmap-v1"},
        {"rng", map.rng_algorithm},
        {"seed", std::to_string(map.config.seed)},
        {"shots", std::to_string(map.config.shots)},
        {"efficiency", format_double(map.config.efficiency)},
        {"dark_rate_hz", format_double(map.config.dark_rate_hz)},
        {"gate_s", format_double(map.config.gate_s)},
        {"theta_i", format_double(map.context.theta_i)},
        {"theta_f", format_double(map.context.theta_f)},
        {"a_x", format_double(map.context.a_x)},
        {"a_y", format_double(map.context.a_y)},
        {"sigma", format_double(map.context.sigma)},
        {"beam_center_x", format_double(map.grid.beam_center_x)},
        {"beam_center_y", format_double(map.grid.beam_center_y)},
        {"p_postselect", format_double(map.postselection_probability)},
        {"truncation_mass", format_double(map.truncation_mass)},
        {"total_signal_expected", format_double(map.total_signal_expected)},
    };
    echo.emplace_back("config_hash", config_hash(echo));
    for (const auto& [k, v] : echo) {
        write_meta(out, k.c_str(), v);
    }
    out << "# rows: x pixel 0..31; columns: y pixel 0..31\n";
    for (int i = 0; i < kGridPixels; ++i) {
        for (int j = 0; j < kGridPixels; ++j) {
            if (j) {
                out << ',';
            }
            out << map.at(i, j);
        }
        out << '\n';
    }
}

CountMap read_countmap_csv(std::istream& in) {
    CountMap map;
    map.rng_algorithm = SplitRng::kAlgorithm;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                continue;  // free-form comment
            }
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t#");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            try {
                if (key == "rng") map.rng_algorithm = value;
                else if (key == "seed") map.config.seed = std::stoull(value);
                else if (key == "shots") map.config.shots = std::stoll(value);
                else if (key == "efficiency") map.config.efficiency = std::stod(value);
                else if (key == "dark_rate_hz") map.config.dark_rate_hz = std::stod(value);
                else if (key == "gate_s") map.config.gate_s = std::stod(value);
                else if (key == "theta_i") map.context.theta_i = std::stod(value);
                else if (key == "theta_f") map.context.theta_f = std::stod(value);
                else if (key == "a_x") map.context.a_x = std::stod(value);
                else if (key == "a_y") map.context.a_y = std::stod(value);
                else if (key == "sigma") map.context.sigma = std::stod(value);
                else if (key == "beam_center_x") map.grid.beam_center_x = std::stod(value);
                else if (key == "beam_center_y") map.grid.beam_center_y = std::stod(value);
                else if (key == "p_postselect") map.postselection_probability = std::stod(value);
                else if (key == "truncation_mass") map.truncation_mass = std::stod(value);
                else if (key == "total_signal_expected") map.total_signal_expected = std::stod(value);
            } catch (const std::exception&) {
                throw ConfigError("countmap: malformed metadata line: " + line);
            }
            continue;
        }
        if (row >= kGridPixels) {
            throw ConfigError("countmap: more than 32 data rows");
        }
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col >= kGridPixels) {
                throw ConfigError("countmap: more than 32 columns in row " + std::to_string(row));
            }
            try {
                const long long v = std::stoll(cell);
                if (v < 0) {
                    throw ConfigError("countmap: negative count in row " + std::to_string(row));
                }
                map.at(row, col) = v;
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception&) {
                throw ConfigError("countmap: malformed count '" + cell + "' in row " +
                                  std::to_string(row));
            }
            ++col;
        }
        if (col != kGridPixels) {
            throw ConfigError("countmap: row " + std::to_string(row) + " has " +
                              std::to_string(col) + " columns, expected 32");
        }
        ++row;
    }
    if (row != kGridPixels) {
        throw ConfigError("countmap: expected 32 data rows, found " + std::to_string(row));
    }
    return map;
}

void save_countmap_csv(const std::string& path, const CountMap& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open output file: " + path);
    }
    write_countmap_csv(out, map);
}

CountMap load_countmap_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open count map: " + path);
    }
    return read_countmap_csv(in);
}

}  // namespace weakval
