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

#include "weakval/errors.hpp"

namespace weakval {

/// Transverse Gaussian amplitude profile
///   f(q) = (2 pi sigma^2)^(-1/4) exp(-(q - center)^2 / (4 sigma^2)),
/// so the intensity |f|^2 is a normal density with standard deviation sigma.
/// All lengths are in detector-pixel units.
struct GaussianPointer {
    double sigma;
    double center = 0.0;
};

/// Normal CDF with the given mean and standard deviation, evaluated through
/// erfc so that tail values down to ~1e-300 keep full relative accuracy.
double normal_cdf(double x, double mean, double sigma);

/// Overlap <phi(q)|phi(q-a)> of two displaced copies of the pointer mode:
/// exp(-a^2 / (8 sigma^2)). Even in a; equals 1 iff a = 0.
double overlap_kappa(double shift_a, double sigma);

/// Matrix element <phi(q)| Q e^{-i a P} |phi(q)> for the real Gaussian
/// pointer: (a/2) * overlap_kappa(a, sigma). Odd in a.
double shifted_first_moment(double shift_a, double sigma);

/// Per-bin integrals of the three separable terms of a displaced-pointer
/// intensity over [bin_lo, bin_hi):
///   i_zero  = integral of |f(q)|^2            (normal mass, mean center)
///   i_shift = integral of |f(q-a)|^2          (normal mass, mean center+a)
///   i_cross = integral of f(q) f(q-a)         (kappa * normal mass, mean center+a/2)
/// Satisfies i_cross^2 <= i_zero * i_shift on every bin.
struct BinIntegrals {
    double i_zero;
    double i_shift;
    double i_cross;
};

/// Infinite bounds are accepted. Throws std::invalid_argument for a
/// degenerate bin (bin_lo >= bin_hi) or sigma <= 0.
BinIntegrals bin_integrals(double shift_a, double sigma, double bin_lo,
                           double bin_hi, double center = 0.0);

}  // namespace weakval
