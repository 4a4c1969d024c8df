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

#include "weakval/pointer.hpp"

#include <cmath>
#include <limits>

namespace weakval {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

void require_sigma(double sigma, const char* where) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument(std::string(where) + ": sigma must be positive");
    }
}

}  // namespace

double normal_cdf(double x, double mean, double sigma) {
    if (std::isinf(x)) {
        return x > 0 ? 1.0 : 0.0;
    }
    return 0.5 * std::erfc(-(x - mean) * kInvSqrt2 / sigma);
}

double overlap_kappa(double shift_a, double sigma) {
    require_sigma(sigma, "overlap_kappa");
    if (!std::isfinite(shift_a)) {
        throw std::invalid_argument("overlap_kappa: shift must be finite");
    }
    return std::exp(-shift_a * shift_a / (8.0 * sigma * sigma));
}

double shifted_first_moment(double shift_a, double sigma) {
    require_sigma(sigma, "shifted_first_moment");
    if (!std::isfinite(shift_a)) {
        throw std::invalid_argument("shifted_first_moment: shift must be finite");
    }
    return 0.5 * shift_a * overlap_kappa(shift_a, sigma);
}

BinIntegrals bin_integrals(double shift_a, double sigma, double bin_lo,
                           double bin_hi, double center) {
    require_sigma(sigma, "bin_integrals");
    if (!(bin_lo < bin_hi)) {
        throw std::invalid_argument("bin_integrals: degenerate bin (lo >= hi)");
    }
    const double kappa = overlap_kappa(shift_a, sigma);
    const auto mass = [&](double mean) {
        return normal_cdf(bin_hi, mean, sigma) - normal_cdf(bin_lo, mean, sigma);
    };
    return {mass(center), mass(center + shift_a), kappa * mass(center + 0.5 * shift_a)};
}

}  // namespace weakval
