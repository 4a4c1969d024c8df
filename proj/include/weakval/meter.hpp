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

#include "weakval/polarization.hpp"
#include "weakval/pointer.hpp"

namespace weakval {

enum class ResponseOrder { exact, order1, order3 };

/// Walk-off shifts of the two birefringent couplings and the pointer width,
/// all in pixels. The dimensionless strengths are g = a / sigma.
struct CouplingConfig {
    double a_x;
    double a_y;
    double sigma;

    double g_x() const { return a_x / sigma; }
    double g_y() const { return a_y / sigma; }

    /// True when max(g_x, g_y) >= 0.25, i.e. the coupling sits near the
    /// border of the weak-interaction regime and order-1 readout is suspect.
    bool weak_regime_advisory() const;

    /// Validating factory. a_x, a_y >= 0 and sigma > 0.
    static CouplingConfig make(double a_x, double a_y, double sigma);

    /// 1-mm crystal pair calibration: a_x = a_y = 0.7 px, sigma = 4.3 px.
    static CouplingConfig preset_thin();
    /// 2.5-mm crystal pair calibration: a_x = 1.9 px, a_y = 1.7 px, sigma = 4.3 px.
    static CouplingConfig preset_thick();
};

struct MeterPrediction {
    double x_centroid;
    double y_centroid;
    double postselection_probability;
    ResponseOrder order;
};

/// Exact meter centroid after a single projector coupling with displacement
/// a and post-selection yielding real weak value a_w:
///
///   <Q> = a [A^2 + A(1-A) k] / [(1-A)^2 + A^2 + 2A(1-A) k],  k = kappa(a, sigma).
///
/// The denominator is >= 1/2 for every real A, so the normalized response is
/// singularity-free. With normalized = false the numerator alone is returned,
/// i.e. the unnormalized response per unit |<psi_f|psi_i>|^2.
double exact_meter_single(double a_w, double a, double sigma, bool normalized = true);

/// Overload accepting a complex weak value; throws UnsupportedImaginaryError
/// unless the imaginary part is negligible (the symmetric real pointer mode
/// has <QP + PQ> = 0, so an imaginary part would not register here anyway).
double exact_meter_single(Complex a_w, double a, double sigma, bool normalized = true);

/// Weak-coupling expansion of the normalized exact response:
///   order 1: a A
///   order 3: a A + (a^3 / 8 sigma^2) A (1-A) (2A-1)
/// The a^2 term vanishes identically. Orders other than 1 or 3 are rejected.
double perturbative_meter(double a_w, double a, double sigma, int order);

/// Exact meter response of the two-crystal chain: the V coupling displaces
/// the V branch along y, then the H coupling displaces the H branch along x,
/// and the post-selected pointer state is
///   z_H |phi(x - a_x)>|phi(y)> + z_V |phi(x)>|phi(y - a_y)>.
/// Both kappa factors enter each axis's cross term. The post-selection
/// probability is the squared norm D of that state; D <= 1e-12 throws
/// VanishingPostselectionError.
MeterPrediction sequential_meter(const PolarizationState& psi_i,
                                 const PolarizationState& psi_f,
                                 const CouplingConfig& config);

/// Large-|A_w| limit of the exact response: a/2. The exact curve rises above
/// the A_w crossing, peaks, and decays to this value, so the meter reading
/// carries no weak-value information deep in the anomalous regime.
double saturation_limit(double a);

}  // namespace weakval
