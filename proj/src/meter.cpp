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

#include "weakval/meter.hpp"

#include <cmath>

namespace weakval {

namespace {
constexpr double kImagTolerance = 1e-12;
constexpr double kVanishingNorm = 1e-12;
}  // namespace

bool CouplingConfig::weak_regime_advisory() const {
    return std::max(g_x(), g_y()) >= 0.25;
}

CouplingConfig CouplingConfig::make(double a_x, double a_y, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("CouplingConfig: sigma must be positive");
    }
    if (!(a_x >= 0.0) || !(a_y >= 0.0) || !std::isfinite(a_x) || !std::isfinite(a_y)) {
        throw std::invalid_argument("CouplingConfig: shifts must be non-negative");
    }
    return {a_x, a_y, sigma};
}

CouplingConfig CouplingConfig::preset_thin() { return {0.7, 0.7, 4.3}; }

CouplingConfig CouplingConfig::preset_thick() { return {1.9, 1.7, 4.3}; }

double exact_meter_single(double a_w, double a, double sigma, bool normalized) {
    if (!std::isfinite(a_w) || !std::isfinite(a)) {
        throw std::invalid_argument("exact_meter_single: non-finite input");
    }
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("exact_meter_single: sigma must be positive");
    }
    // Projector algebra keeps this exact: e^{-i a Pi P} = I + Pi (e^{-i a P} - I),
    // so the post-selected pointer is (1-A) f(q) + A f(q-a) with no series
    // truncation anywhere.
    const double k = overlap_kappa(a, sigma);
    const double numerator = a * (a_w * a_w + a_w * (1.0 - a_w) * k);
    if (!normalized) {
        return numerator;
    }
    // den = 1 - 2 A (1-A)(1-k) >= 1 - (1-k)/2 >= 1/2 for real A.
    const double den = (1.0 - a_w) * (1.0 - a_w) + a_w * a_w + 2.0 * a_w * (1.0 - a_w) * k;
    return numerator / den;
}

double exact_meter_single(Complex a_w, double a, double sigma, bool normalized) {
    const double scale = std::max(1.0, std::abs(a_w.real()));
    if (std::abs(a_w.imag()) > kImagTolerance * scale) {
        throw UnsupportedImaginaryError(a_w.imag());
    }
    return exact_meter_single(a_w.real(), a, sigma, normalized);
}

double perturbative_meter(double a_w, double a, double sigma, int order) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("perturbative_meter: sigma must be positive");
    }
    if (!std::isfinite(a_w) || !std::isfinite(a)) {
        throw std::invalid_argument("perturbative_meter: non-finite input");
    }
    switch (order) {
        case 1:
            return a * a_w;
        case 3:
            // Cubic correction of the normalized response; the a^2 term of the
            // expansion cancels between numerator and norm.
            return a * a_w +
                   (a * a * a) / (8.0 * sigma * sigma) * a_w * (1.0 - a_w) * (2.0 * a_w - 1.0);
        default:
            throw std::invalid_argument("perturbative_meter: order must be 1 or 3");
    }
}

MeterPrediction sequential_meter(const PolarizationState& psi_i,
                                 const PolarizationState& psi_f,
                                 const CouplingConfig& config) {
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
    return {config.a_x * (zh * zh + zh * zv * kk) / d,
            config.a_y * (zv * zv + zh * zv * kk) / d, d, ResponseOrder::exact};
}

double saturation_limit(double a) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument("saturation_limit: shift must be non-negative");
    }
    return 0.5 * a;
}

}  // namespace weakval
