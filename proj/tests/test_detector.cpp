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
#include <sstream>

#include "weakval/rng.hpp"

#include <doctest.h>

#include "support/approx.hpp"

#include "support/quadrature.hpp"

using namespace weakval;
namespace wt = weakval::testing;

namespace {

constexpr double kSigma = 4.3;
constexpr double kPi = M_PI;

double marginal_x(const PixelProbabilityMap& map) {
    double m = 0.0;
    for (int i = 0; i < kGridPixels; ++i) {
        for (int j = 0; j < kGridPixels; ++j) {
            m += map.at(i, j) * (i + 0.5);
        }
    }
    return m - map.grid.beam_center_x;
}

PixelProbabilityMap uniform_two_pixel_map(double p_postselect) {
    PixelProbabilityMap map{};
    map.probs.fill(0.0);
    map.probs[0] = 0.5;
    map.probs[1] = 0.5;
    map.truncation_mass = 0.0;
    map.postselection_probability = p_postselect;
    return map;
}

}  // namespace

TEST_CASE("pixel_probability_map: zero coupling is a discretized Gaussian") {
    const PolarizationState psi_i = make_linear_state(kPi / 4);
    const PolarizationState psi_f = make_linear_state(0.0);
    const PixelProbabilityMap map =
        pixel_probability_map(psi_i, psi_f, CouplingConfig{0.0, 0.0, kSigma});

    double sum = 0.0;
    for (double p : map.probs) {
        CHECK(p >= 0.0);
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // the asymmetric grid margins (15.5 vs 16.5 px) pull the truncated,
    // renormalized centroid about +1.5e-3 px off the beam center
    CHECK(marginal_x(map) == near(0.0, 2e-3));

    // x-marginal rows against direct quadrature of the beam intensity
    std::array<double, kGridPixels> quad_mass{};
    double quad_total = 0.0;
    for (int i = 0; i < kGridPixels; ++i) {
        quad_mass[i] = wt::integrate(
            [&](double x) {
                const double amp = wt::gauss_amp(x, kSigma, map.grid.beam_center_x);
                return amp * amp;
            },
            i, i + 1.0);
        quad_total += quad_mass[i];
    }
    for (int i : {4, 15, 16, 27}) {
        double row = 0.0;
        for (int j = 0; j < kGridPixels; ++j) {
            row += map.at(i, j);
        }
        CHECK(row == doctest::Approx(quad_mass[i] / quad_total).epsilon(1e-9));
    }
}

TEST_CASE("pixel_probability_map: deterministic shift (A_H = 1)") {
    const PolarizationState psi_i = make_linear_state(kPi / 4);
    const PolarizationState psi_f = make_linear_state(0.0);
    const PixelProbabilityMap map =
        pixel_probability_map(psi_i, psi_f, CouplingConfig{1.7, 0.0, kSigma});

    CHECK(map.postselection_probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(map.truncation_mass == doctest::Approx(0.000538971732470526).epsilon(1e-9));

    // binned-quadrature oracle: the same truncated, renormalized, midpoint-
    // weighted marginal built from numerical integrals of the shifted beam
    double mass = 0.0;
    double moment = 0.0;
    for (int i = 0; i < kGridPixels; ++i) {
        const double m = wt::integrate(
            [&](double x) {
                const double amp =
                    wt::gauss_amp(x, kSigma, map.grid.beam_center_x + 1.7);
                return amp * amp;
            },
            i, i + 1.0);
        mass += m;
        moment += m * (i + 0.5);
    }
    const double oracle = moment / mass - map.grid.beam_center_x;
    CHECK(marginal_x(map) == near(oracle, 1e-6));
    CHECK(marginal_x(map) == doctest::Approx(1.69596463516728).epsilon(1e-10));
    // truncation pulls the centroid a few 1e-3 px inward of the full-line 1.7
    CHECK(std::abs(marginal_x(map) - 1.7) < 0.005);
}

TEST_CASE("pixel_probability_map: anomalous thin case matches sequential_meter") {
    const PolarizationState psi_i = make_linear_state(kPi / 4);
    const PolarizationState psi_f = make_linear_state(std::atan(-0.6));
    const CouplingConfig thin = CouplingConfig::preset_thin();
    const PixelProbabilityMap map = pixel_probability_map(psi_i, psi_f, thin);

    double sum = 0.0;
    for (double p : map.probs) {
        CHECK(p >= 0.0);
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(map.truncation_mass == doctest::Approx(0.000559396116877919).epsilon(1e-9));
    CHECK(map.truncation_mass < 1e-3);
    CHECK(map.postselection_probability ==
          doctest::Approx(0.0617367520042758).epsilon(1e-12));

    const double marg = marginal_x(map);
    CHECK(marg == doctest::Approx(1.68070008044994).epsilon(1e-10));

    // oracle equivalence within the truncation-induced bound: off-grid mass
    // sits within ~26 px of the mean, so the renormalized centroid can move
    // by at most t * 26 / (1 - t)
    const MeterPrediction seq = sequential_meter(psi_i, psi_f, thin);
    const double bound = map.truncation_mass * 26.0 / (1.0 - map.truncation_mass);
    CHECK(std::abs(marg - seq.x_centroid) < bound);
}

TEST_CASE("pixel_probability_map input validation") {
    const PolarizationState diag = make_linear_state(kPi / 4);
    CHECK_THROWS_AS(pixel_probability_map(diag, make_linear_state(-kPi / 4),
                                          CouplingConfig{0.0, 0.0, kSigma}),
                    VanishingPostselectionError);
}

TEST_CASE("simulate_counts") {
    SUBCASE("zero efficiency, zero dark rate: all-zero map") {
        DetectionConfig det;
        det.shots = 10000;
        det.efficiency = 0.0;
        det.dark_rate_hz = 0.0;
        const CountMap counts = simulate_counts(uniform_two_pixel_map(1.0), det);
        CHECK(counts.total() == 0);
    }
    SUBCASE("two-pixel multinomial lands within 5 sigma") {
        DetectionConfig det;
        det.shots = 1000000;
        det.efficiency = 1.0;
        det.dark_rate_hz = 0.0;
        det.seed = 12345;
        const CountMap counts = simulate_counts(uniform_two_pixel_map(1.0), det);
        CHECK(counts.total() == 1000000);  // p_detect = 1
        const double sig = std::sqrt(1e6 * 0.5 * 0.5);
        CHECK(std::abs(static_cast<double>(counts.counts[0]) - 500000.0) < 5.0 * sig);
        CHECK(std::abs(static_cast<double>(counts.counts[1]) - 500000.0) < 5.0 * sig);
    }
    SUBCASE("dark counts follow the Poisson budget: 1e6 shots -> about 614 total") {
        DetectionConfig det;
        det.shots = 1000000;
        det.efficiency = 1.0;
        det.dark_rate_hz = 100.0;
        det.gate_s = 6e-9;
        det.seed = 7;
        const CountMap counts = simulate_counts(uniform_two_pixel_map(0.0), det);
        const double mean = 1e6 * 1024 * 100.0 * 6e-9;
        CHECK(mean == doctest::Approx(614.4));
        CHECK(std::abs(static_cast<double>(counts.total()) - mean) < 5.0 * std::sqrt(mean));
    }
    SUBCASE("dark-only centroid sits at the grid center") {
        DetectionConfig det;
        det.shots = 4000000;
        det.efficiency = 1.0;
        det.dark_rate_hz = 100.0;
        det.seed = 21;
        const CountMap counts = simulate_counts(uniform_two_pixel_map(0.0), det);
        const CentroidEstimate est = centroid_estimate(counts);
        // uniform illumination centers on 16.0, not on the beam center
        const double n = est.n_used;
        const double sigma_est = std::sqrt((32.0 * 32.0 - 1.0) / 12.0 / n);
        CHECK(std::abs(est.x + counts.grid.beam_center_x - 16.0) < 5.0 * sigma_est);
        CHECK(std::abs(est.y + counts.grid.beam_center_y - 16.0) < 5.0 * sigma_est);
    }
    SUBCASE("identical seed and config give bit-identical counts") {
        const PixelProbabilityMap map = pixel_probability_map(
            make_linear_state(kPi / 4), make_linear_state(std::atan(-0.6)),
            CouplingConfig::preset_thin());
        DetectionConfig det;
        det.shots = 200000;
        det.seed = 99;
        const CountMap a = simulate_counts(map, det);
        const CountMap b = simulate_counts(map, det);
        CHECK(a.counts == b.counts);
        det.seed = 100;
        const CountMap c = simulate_counts(map, det);
        CHECK(a.counts != c.counts);
        CHECK(a.rng_algorithm == SplitRng::kAlgorithm);
    }
    SUBCASE("config validation") {
        DetectionConfig det;
        det.shots = 0;
        CHECK_THROWS_AS(simulate_counts(uniform_two_pixel_map(1.0), det),
                        std::invalid_argument);
        det.shots = 10;
        det.efficiency = 1.5;
        CHECK_THROWS_AS(simulate_counts(uniform_two_pixel_map(1.0), det),
                        std::invalid_argument);
    }
}

TEST_CASE("centroid_estimate") {
    SUBCASE("single pixel") {
        CountMap map;
        map.at(10, 20) = 5;
        const CentroidEstimate est = centroid_estimate(map);
        CHECK(est.x == doctest::Approx(-5.0));
        CHECK(est.y == doctest::Approx(5.0));
        CHECK(est.stderr_x == 0.0);
        CHECK(est.stderr_y == 0.0);
        CHECK(est.n_used == 5.0);
    }
    SUBCASE("symmetric two-pixel map gives the midpoint") {
        CountMap map;
        map.at(10, 16) = 50;
        map.at(20, 16) = 50;
        const CentroidEstimate est = centroid_estimate(map);
        CHECK(est.x == doctest::Approx(15.5 - map.grid.beam_center_x));
        // sample (N-1) standard deviation of the two-point marginal
        CHECK(est.stderr_x ==
              doctest::Approx(std::sqrt(100.0 * 25.0 / 99.0) / std::sqrt(100.0)).epsilon(1e-12));
    }
    SUBCASE("flat background subtraction with clamping") {
        CountMap map;
        for (int i = 0; i < kGridPixels; ++i) {
            for (int j = 0; j < kGridPixels; ++j) {
                map.at(i, j) = 2;
            }
        }
        map.at(8, 8) += 100;
        const CentroidEstimate est = centroid_estimate(map, 2.0);
        CHECK(est.x == doctest::Approx(8.5 - map.grid.beam_center_x));
        CHECK(est.y == doctest::Approx(8.5 - map.grid.beam_center_y));
        CHECK(est.n_used == doctest::Approx(100.0));
    }
    SUBCASE("empty map throws") {
        CountMap map;
        CHECK_THROWS_AS(centroid_estimate(map), InsufficientCountsError);
        map.at(3, 3) = 4;
        CHECK_THROWS_AS(centroid_estimate(map, 10.0), InsufficientCountsError);
    }
}

TEST_CASE("Monte Carlo centroids converge to the closed-form response") {
    const PolarizationState psi_i = make_linear_state(kPi / 4);
    const PolarizationState psi_f = make_linear_state(std::atan(-0.6));
    const CouplingConfig thin = CouplingConfig::preset_thin();
    const PixelProbabilityMap map = pixel_probability_map(psi_i, psi_f, thin);
    const double target = 1.68070008044994;  // grid-truncated mean

    double prev_stderr = 0.0;
    for (long long shots : {10000LL, 100000LL, 1000000LL}) {
        DetectionConfig det;
        det.shots = shots;
        det.dark_rate_hz = 0.0;
        det.seed = 20260809;
        const CountMap counts = simulate_counts(map, det);
        const CentroidEstimate est = centroid_estimate(counts);
        CHECK(std::abs(est.x - target) < 5.0 * est.stderr_x);
        if (prev_stderr > 0.0) {
            CHECK(est.stderr_x == doctest::Approx(prev_stderr / std::sqrt(10.0)).epsilon(0.15));
        }
        prev_stderr = est.stderr_x;
    }
}

TEST_CASE("calibrate_shifts") {
    SUBCASE("noiseless maps recover the shift up to truncation") {
        const auto noiseless = [](double theta, const CouplingConfig& cfg) {
            const PolarizationState psi = make_linear_state(theta);
            const PixelProbabilityMap map = pixel_probability_map(psi, psi, cfg);
            CountMap counts;
            counts.grid = map.grid;
            for (int c = 0; c < kGridCells; ++c) {
                counts.counts[c] = static_cast<std::int64_t>(std::llround(map.probs[c] * 1e12));
            }
            return counts;
        };
        const CouplingConfig thin = CouplingConfig::preset_thin();
        const ShiftCalibration cal =
            calibrate_shifts(noiseless(0.0, thin), noiseless(kPi / 2, thin));
        CHECK(cal.a_x == near(0.7, 5e-3));
        CHECK(cal.a_y == near(0.7, 5e-3));

        const CouplingConfig none{0.0, 0.0, kSigma};
        const ShiftCalibration zero =
            calibrate_shifts(noiseless(0.0, none), noiseless(kPi / 2, none));
        CHECK(zero.a_x == near(0.0, 1e-9));
        CHECK(zero.a_y == near(0.0, 1e-9));
    }
    SUBCASE("statistical run recovers the thick-preset shifts within 3 sigma") {
        const CouplingConfig thick = CouplingConfig::preset_thick();
        DetectionConfig det;
        det.shots = 1000000;
        det.dark_rate_hz = 0.0;
        det.seed = 1;
        const CountMap h = simulate_counts(
            pixel_probability_map(make_linear_state(0.0), make_linear_state(0.0), thick), det);
        det.seed = 2;
        const CountMap v = simulate_counts(
            pixel_probability_map(make_linear_state(kPi / 2), make_linear_state(kPi / 2), thick),
            det);
        const ShiftCalibration cal = calibrate_shifts(h, v);
        CHECK(std::abs(cal.a_x - 1.9) < 3.0 * cal.a_x_err + 0.01);
        CHECK(std::abs(cal.a_y - 1.7) < 3.0 * cal.a_y_err + 0.01);
    }
}

TEST_CASE("count map CSV round trip is byte-exact") {
    const PixelProbabilityMap map = pixel_probability_map(
        make_linear_state(kPi / 4), make_linear_state(0.2), CouplingConfig::preset_thick());
    DetectionConfig det;
    det.shots = 50000;
    det.seed = 31337;
    const CountMap counts = simulate_counts(map, det);

    std::ostringstream first;
    write_countmap_csv(first, counts);
    std::istringstream parse_in(first.str());
    const CountMap parsed = read_countmap_csv(parse_in);
    std::ostringstream second;
    write_countmap_csv(second, parsed);

    CHECK(first.str() == second.str());
    CHECK(parsed.counts == counts.counts);
    CHECK(parsed.config.seed == counts.config.seed);
    CHECK(parsed.config.shots == counts.config.shots);
    CHECK(parsed.rng_algorithm == counts.rng_algorithm);
    CHECK(parsed.postselection_probability == counts.postselection_probability);

    SUBCASE("malformed inputs are rejected") {
        std::istringstream bad_rows("1,2,3\n");
        CHECK_THROWS_AS(read_countmap_csv(bad_rows), ConfigError);
        std::string negative = first.str();
        const auto pos = negative.rfind("\n0,");
        if (pos != std::string::npos) {
            negative.replace(pos, 3, "\n-1,");
            std::istringstream bad(negative);
            CHECK_THROWS_AS(read_countmap_csv(bad), ConfigError);
        }
    }
}
