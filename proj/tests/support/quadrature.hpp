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

#include <functional>

// Test-only numerical oracles. Everything here integrates defining
// integrals directly (no erfc, no closed-form kappa), so a match against the
// library closed forms is an independent check, not a tautology.
namespace weakval::testing {

/// Adaptive Simpson quadrature with Richardson correction.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol = 1e-12);

/// Composite 64-point Gauss-Legendre quadrature.
double integrate_gl(const std::function<double(double)>& f, double lo, double hi,
                    int panels = 8);

/// Gaussian pointer amplitude (2 pi sigma^2)^(-1/4) exp(-(q-c)^2 / 4 sigma^2).
double gauss_amp(double q, double sigma, double center = 0.0);

/// Centroid of the post-selected single-interaction packet
/// (1-A) f(q) + A f(q-a), by brute-force quadrature of moment and norm.
double exact_centroid_quad(double a_w, double a, double sigma);

struct SequentialQuad {
    double x;
    double y;
    double norm;
};

/// Two-axis post-selected packet z_H f(x-ax) f(y) + z_V f(x) f(y-ay):
/// centroids and norm with every 1-D factor integral evaluated numerically
/// (the y-integration is carried out exactly by Fubini on the expanded
/// square, so no 2-D grid is needed).
SequentialQuad sequential_quad(double theta_i, double theta_f, double a_x, double a_y,
                               double sigma);

/// Same quantities from a full 2-D tensor-product quadrature of |Psi|^2.
/// Slow; used as a spot check of the separated oracle.
SequentialQuad sequential_quad_2d(double theta_i, double theta_f, double a_x, double a_y,
                                  double sigma);

}  // namespace weakval::testing
