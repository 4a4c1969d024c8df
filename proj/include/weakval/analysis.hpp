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

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weakval/detector.hpp"
#include "weakval/meter.hpp"

namespace weakval {

/// One post-selection setting of a sweep. Measured fields are present only
/// when the sweep ran its Monte Carlo stage; divergent rows (orthogonal
/// selection) carry only the angles, the post-selection probability and the
/// flag.
struct SweepRow {
    double theta_i = 0.0;
    double theta_f = 0.0;
    double aw_h_true = 0.0;
    double aw_v_true = 0.0;
    double x_exact = 0.0;
    double x_order1 = 0.0;
    double x_order3 = 0.0;
    double y_exact = 0.0;
    double y_order1 = 0.0;
    double y_order3 = 0.0;
    std::optional<double> x_measured;
    std::optional<double> x_stderr;
    std::optional<double> y_measured;
    std::optional<double> y_stderr;
    double p_postselect = 0.0;
    bool divergent = false;
};

struct Interval {
    double lo;
    double hi;

    bool contains(double x) const { return lo <= x && x <= hi; }
    double width() const { return hi - lo; }
};

/// Three-region decomposition of the weak-value axis at a given coupling:
/// region1 is the maximal interval containing [0, 1] where the order-1
/// readout stays within epsilon; region2 is the flanking pair where order 3
/// still holds; region3 is the rest of the searched interval, where the
/// exact response saturates and no perturbative readout is faithful.
struct ValidityReport {
    double g;
    double epsilon;
    Interval search;
    Interval region1;
    Interval region2_lower;  ///< [region2 lower edge, region1.lo]
    Interval region2_upper;  ///< [region1.hi, region2 upper edge]
    Interval region3_lower;  ///< [search.lo, region2_lower.lo]
    Interval region3_upper;  ///< [region2_upper.hi, search.hi]
};

/// Normalized deviation of the order-k approximation from the exact
/// response at true weak value a_w:
///   dev_k = |exact - order_k| / max(a, |order_k|).
/// For k = 1 the denominator is a * max(1, |a_w|).
double meter_deviation(double a_w, double a, double sigma, int order);

/// Inversion of the meter relation. Order 1 returns centroid / a. Order 3
/// solves the cubic a A + (a^3 / 8 sigma^2) A (1-A)(2A-1) = centroid for the
/// real root nearest to centroid / a (ties break toward smaller |A|),
/// restricted to the monotone central branch of the cubic inside [-50, 50];
/// centroids beyond the branch extrema have no faithful preimage and throw
/// InversionFailureError.
double extract_weak_value(double centroid, double a, double sigma, int order);

struct BiasRow {
    double a_true;
    double exact;
    double order1;
    double order3;
    double bias1;
    double bias3;  ///< NaN where the order-3 inversion fails (saturated)
};

/// Finite-coupling bias of both inversions across a weak-value grid,
/// using the exact response as the measured centroid.
std::vector<BiasRow> bias_curve(double a, double sigma, std::span<const double> a_w_grid);

/// Region boundaries are located by outward march from [0, 1] plus bisection
/// refined well below the 1e-3 contract. Throws DegenerateRegionError when
/// epsilon is too small for region1 to cover [0, 1].
ValidityReport validity_region(double a, double sigma, double epsilon,
                               Interval search = {-6.0, 6.0});

/// Full post-selection sweep at fixed preparation angle. Rows keep input
/// order; each Monte Carlo row derives its seed as mc.seed ^ row_index, so
/// results do not depend on scheduling. Rows whose selection is orthogonal
/// within 1e-6 are flagged divergent instead of failing.
std::vector<SweepRow> sweep_postselection(double theta_i,
                                          std::span<const double> theta_f_list,
                                          const CouplingConfig& config,
                                          const std::optional<DetectionConfig>& mc = {},
                                          const PixelGrid& grid = {});

/// Sweep CSV: '#'-prefixed metadata lines, a fixed header row, then one row
/// per SweepRow with empty fields for absent values. Numbers are written in
/// full-precision scientific notation so reruns are byte-comparable.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows,
                     std::span<const std::pair<std::string, std::string>> metadata = {});

}  // namespace weakval
