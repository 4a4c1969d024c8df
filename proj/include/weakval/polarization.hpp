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

#include <complex>
#include <utility>

#include "weakval/errors.hpp"

namespace weakval {

using Complex = std::complex<double>;

enum class Axis { H, V };

/// Normalized two-component amplitude vector over the {H, V} basis.
/// Linear states built from an angle have real amplitudes (cos t, sin t).
struct PolarizationState {
    Complex amp_h;
    Complex amp_v;
};

/// Rank-one projector |H><H| or |V><V|.
struct Projector {
    Axis axis;
};

struct WeakValueResult {
    Complex value;      ///< <psi_f|Pi|psi_i> / <psi_f|psi_i>
    Complex overlap_z;  ///< <psi_f|psi_i>
};

/// (cos theta, sin theta). Throws std::invalid_argument for non-finite input.
PolarizationState make_linear_state(double theta);

bool is_normalized(const PolarizationState& psi, double tol = 1e-12);

/// <psi_f|psi_i>. For linear states this equals cos(theta_i - theta_f).
Complex inner_product(const PolarizationState& psi_f, const PolarizationState& psi_i);

/// Pi|psi>, not renormalized.
PolarizationState apply(const Projector& proj, const PolarizationState& psi);

/// Weak value of a polarization projector between pre- and post-selection.
/// Throws DivergentWeakValueError when |<psi_f|psi_i>| <= tolerance.
WeakValueResult weak_value(Projector obs, const PolarizationState& psi_i,
                           const PolarizationState& psi_f, double tolerance = 1e-10);

/// Branch decomposition (z_H, z_V) of the overlap:
/// z_H = <psi_f|H><H|psi_i>, z_V = <psi_f|V><V|psi_i>, z_H + z_V = <psi_f|psi_i>.
std::pair<Complex, Complex> branch_amplitudes(const PolarizationState& psi_i,
                                              const PolarizationState& psi_f);

/// Post-selection angle in (-pi/2, pi/2] such that the weak value of Pi_H
/// between make_linear_state(theta_i) and the returned angle equals target.
/// Requires theta_i in (0, pi/2).
double postselection_angle_for_weak_value(double target, double theta_i);

}  // namespace weakval
