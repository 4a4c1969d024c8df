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

#include "weakval/polarization.hpp"

#include <cmath>

namespace weakval {

PolarizationState make_linear_state(double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("make_linear_state: theta must be finite");
    }
    return {Complex(std::cos(theta), 0.0), Complex(std::sin(theta), 0.0)};
}

bool is_normalized(const PolarizationState& psi, double tol) {
    const double n = std::norm(psi.amp_h) + std::norm(psi.amp_v);
    return std::abs(n - 1.0) <= tol;
}

Complex inner_product(const PolarizationState& psi_f, const PolarizationState& psi_i) {
    return std::conj(psi_f.amp_h) * psi_i.amp_h + std::conj(psi_f.amp_v) * psi_i.amp_v;
}

PolarizationState apply(const Projector& proj, const PolarizationState& psi) {
    if (proj.axis == Axis::H) {
        return {psi.amp_h, Complex(0.0, 0.0)};
    }
    return {Complex(0.0, 0.0), psi.amp_v};
}

WeakValueResult weak_value(Projector obs, const PolarizationState& psi_i,
                           const PolarizationState& psi_f, double tolerance) {
    const Complex z = inner_product(psi_f, psi_i);
    if (std::abs(z) <= tolerance) {
        throw DivergentWeakValueError(std::abs(z), tolerance);
    }
    const Complex numerator = (obs.axis == Axis::H)
                                  ? std::conj(psi_f.amp_h) * psi_i.amp_h
                                  : std::conj(psi_f.amp_v) * psi_i.amp_v;
    return {numerator / z, z};
}

std::pair<Complex, Complex> branch_amplitudes(const PolarizationState& psi_i,
                                              const PolarizationState& psi_f) {
    return {std::conj(psi_f.amp_h) * psi_i.amp_h,
            std::conj(psi_f.amp_v) * psi_i.amp_v};
}

double postselection_angle_for_weak_value(double target, double theta_i) {
    if (!std::isfinite(target) || !std::isfinite(theta_i)) {
        throw std::invalid_argument("postselection_angle_for_weak_value: non-finite input");
    }
    if (!(theta_i > 0.0 && theta_i < M_PI / 2)) {
        throw std::invalid_argument(
            "postselection_angle_for_weak_value: theta_i must lie in (0, pi/2)");
    }
    // A_H = 1 / (1 + tan(theta_f) tan(theta_i)); the A = 0 limit closes the
    // principal branch at +pi/2.
    if (target == 0.0) {
        return M_PI / 2;
    }
    return std::atan((1.0 - target) / (target * std::tan(theta_i)));
}

}  // namespace weakval
