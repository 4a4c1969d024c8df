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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "weakval/meter.hpp"

namespace weakval {

inline constexpr int kGridPixels = 32;
inline constexpr int kGridCells = kGridPixels * kGridPixels;

/// 32 x 32 pixel grid with unit pitch. Pixel (i, j) covers
/// [i, i+1) x [j, j+1) in pixel coordinates. The beam center defaults to
/// the center of pixel (15, 15); beam placement on the array is a free
/// parameter of the setup.
struct PixelGrid {
    double beam_center_x = 15.5;
    double beam_center_y = 15.5;
};

/// Acquisition parameters of the gated SPAD array. Every heralding trigger
/// opens a 6 ns window per pixel; dark counts accumulate only inside it.
struct DetectionConfig {
    long long shots = 1000000;
    double efficiency = 1.0;
    double dark_rate_hz = 100.0;
    double gate_s = 6e-9;
    std::uint64_t seed = 0;
};

/// Angles and coupling echoed through probability maps into count maps so
/// every output file can state how it was produced.
struct SimulationContext {
    double theta_i = 0.0;
    double theta_f = 0.0;
    double a_x = 0.0;
    double a_y = 0.0;
    double sigma = 0.0;
};

/// Per-pixel landing probabilities of a post-selected photon, conditioned on
/// post-selection success and renormalized over the grid. Row-major storage:
/// probs[i * 32 + j] with i the x pixel index.
struct PixelProbabilityMap {
    std::array<double, kGridCells> probs;
    double truncation_mass;              ///< probability lost outside the grid
    double postselection_probability;    ///< D of the post-selected state
    PixelGrid grid;
    SimulationContext context;

    double at(int ix, int iy) const { return probs[ix * kGridPixels + iy]; }
};

/// One acquisition's counts plus everything needed to reproduce it.
struct CountMap {
    std::array<std::int64_t, kGridCells> counts{};
    DetectionConfig config;
    PixelGrid grid;
    SimulationContext context;
    double postselection_probability = 0.0;
    double truncation_mass = 0.0;
    double total_signal_expected = 0.0;
    std::string rng_algorithm;

    std::int64_t at(int ix, int iy) const { return counts[ix * kGridPixels + iy]; }
    std::int64_t& at(int ix, int iy) { return counts[ix * kGridPixels + iy]; }
    std::int64_t total() const;
};

/// Exact per-pixel probabilities from the three-term separable intensity
///   z_H^2 G_ax(x) G_0(y) + z_V^2 G_0(x) G_ay(y) + 2 z_H z_V H_x(x) H_y(y)
/// evaluated with closed-form bin integrals, divided by D and renormalized
/// over the grid. The cross term can be negative pointwise in its factors,
/// but every pixel integral of the full intensity is non-negative; a value
/// below -1e-12 trips InternalConsistencyError.
PixelProbabilityMap pixel_probability_map(const PolarizationState& psi_i,
                                          const PolarizationState& psi_f,
                                          const CouplingConfig& config,
                                          const PixelGrid& grid = {});

/// Monte Carlo acquisition: the detected signal total is Binomial(shots,
/// postselection_probability * efficiency), spread over pixels as one
/// multinomial draw from the map; dark counts add an independent
/// Poisson(shots * dark_rate_hz * gate_s) per pixel. Fully deterministic
/// given the seed; a single RNG stream, algorithm recorded in the output.
CountMap simulate_counts(const PixelProbabilityMap& map, const DetectionConfig& det);

struct CentroidEstimate {
    double x;         ///< pixel-weighted mean minus beam_center_x
    double y;
    double stderr_x;
    double stderr_y;
    double n_used;    ///< counts entering the estimate (after subtraction)
};

/// Count-weighted centroid with optional flat per-pixel background
/// subtraction (clamped at zero). The standard error is the sample standard
/// deviation of the marginal over sqrt(N). Throws InsufficientCountsError
/// when nothing survives subtraction.
CentroidEstimate centroid_estimate(const CountMap& counts,
                                   double background_per_pixel = 0.0);

struct ShiftCalibration {
    double a_x;
    double a_y;
    double a_x_err;
    double a_y_err;
};

/// Walk-off calibration from two unbiased runs: counts_h prepared and
/// post-selected in |H> (theta = 0), counts_v in |V> (theta = pi/2).
/// a_x = x(H-run) - x(V-run), a_y = y(V-run) - y(H-run).
ShiftCalibration calibrate_shifts(const CountMap& counts_h, const CountMap& counts_v);

/// CSV serialization: '#'-prefixed "key = value" metadata lines followed by
/// 32 rows (x index) of 32 comma-separated counts (y index). Writing the
/// parse of a written map reproduces it byte for byte.
void write_countmap_csv(std::ostream& out, const CountMap& map);
CountMap read_countmap_csv(std::istream& in);

void save_countmap_csv(const std::string& path, const CountMap& map);
CountMap load_countmap_csv(const std::string& path);

}  // namespace weakval
