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

#include "weakval/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "weakval/config.hpp"
#include "weakval/parallel.hpp"

namespace weakval {

namespace {

constexpr double kSearchBracket = 50.0;
constexpr double kDivergenceCut = 1e-6;
constexpr double kMarchStep = 0.05;
constexpr double kBisectTol = 1e-9;

double cubic_response(double a_w, double a, double beta) {
    return a * a_w + beta * a_w * (1.0 - a_w) * (2.0 * a_w - 1.0);
}

}  // namespace

double meter_deviation(double a_w, double a, double sigma, int order) {
    const double predicted = perturbative_meter(a_w, a, sigma, order);
    const double exact = exact_meter_single(a_w, a, sigma);
    return std::abs(exact - predicted) / std::max(a, std::abs(predicted));
}

double extract_weak_value(double centroid, double a, double sigma, int order) {
    if (!(a > 0.0) || !(sigma > 0.0)) {
        throw std::invalid_argument("extract_weak_value: a and sigma must be positive");
    }
    if (!std::isfinite(centroid)) {
        throw std::invalid_argument("extract_weak_value: non-finite centroid");
    }
    if (order == 1) {
        return centroid / a;
    }
    if (order != 3) {
        throw std::invalid_argument("extract_weak_value: order must be 1 or 3");
    }

    // p(A) = -2b A^3 + 3b A^2 + (a - b) A with b = a^3 / 8 sigma^2. p is
    // increasing exactly between its two critical points; only that branch
    // inverts the meter relation faithfully, so roots on the outer
    // decreasing branches are spurious preimages and count as failure.
    const double beta = a * a * a / (8.0 * sigma * sigma);
    const double disc = std::sqrt(12.0 * beta * (2.0 * a + beta));
    const double crit_lo = 0.5 - disc / (12.0 * beta);
    const double crit_hi = 0.5 + disc / (12.0 * beta);
    double lo = std::max(crit_lo, -kSearchBracket);
    double hi = std::min(crit_hi, kSearchBracket);

    const auto p = [&](double x) { return cubic_response(x, a, beta); };
    if (centroid < p(lo) || centroid > p(hi)) {
        throw InversionFailureError(
            "extract_weak_value: centroid " + std::to_string(centroid) +
            " lies beyond the invertible branch of the order-3 response (range [" +
            std::to_string(p(lo)) + ", " + std::to_string(p(hi)) + "])");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (p(mid) < centroid ? lo : hi) = mid;
    }
    double root = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double deriv = a - beta + 6.0 * beta * root * (1.0 - root);
        if (deriv == 0.0) {
            break;
        }
        root -= (p(root) - centroid) / deriv;
    }
    root = std::clamp(root, crit_lo, crit_hi);
    if (std::abs(p(root) - centroid) > 1e-10 * a) {
        throw InversionFailureError("extract_weak_value: residual exceeds tolerance");
    }
    return root;
}

std::vector<BiasRow> bias_curve(double a, double sigma, std::span<const double> a_w_grid) {
    if (a_w_grid.empty()) {
        throw std::invalid_argument("bias_curve: empty grid");
    }
    std::vector<BiasRow> rows;
    rows.reserve(a_w_grid.size());
    for (double a_true : a_w_grid) {
        BiasRow row;
        row.a_true = a_true;
        row.exact = exact_meter_single(a_true, a, sigma);
        row.order1 = perturbative_meter(a_true, a, sigma, 1);
        row.order3 = perturbative_meter(a_true, a, sigma, 3);
        row.bias1 = extract_weak_value(row.exact, a, sigma, 1) - a_true;
        try {
            row.bias3 = extract_weak_value(row.exact, a, sigma, 3) - a_true;
        } catch (const InversionFailureError&) {
            row.bias3 = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

/// First crossing of dev > epsilon marching outward from `start`; the
/// boundary is then bisected between the last good and first bad point.
/// Returns the search bound when no crossing exists before it.
double march_boundary(const std::function<double(double)>& dev, double start,
                      double bound, double epsilon) {
    const double direction = bound > start ? 1.0 : -1.0;
    double good = start;
    while (true) {
        double next = good + direction * kMarchStep;
        if ((direction > 0 && next >= bound) || (direction < 0 && next <= bound)) {
            if (dev(bound) <= epsilon) {
                return bound;
            }
            next = bound;
        }
        if (dev(next) > epsilon) {
            double lo = good;
            double hi = next;
            while (std::abs(hi - lo) > kBisectTol) {
                const double mid = 0.5 * (lo + hi);
                (dev(mid) > epsilon ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        }
        good = next;
        if (good == bound) {
            return bound;
        }
    }
}

}  // namespace

ValidityReport validity_region(double a, double sigma, double epsilon, Interval search) {
    if (!(a > 0.0) || !(sigma > 0.0)) {
        throw std::invalid_argument("validity_region: a and sigma must be positive");
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("validity_region: epsilon must be positive");
    }
    if (!(search.lo <= 0.0 && search.hi >= 1.0)) {
        throw std::invalid_argument("validity_region: search interval must contain [0, 1]");
    }

    const auto dev1 = [&](double x) { return meter_deviation(x, a, sigma, 1); };
    const auto dev3 = [&](double x) { return meter_deviation(x, a, sigma, 3); };

    for (int i = 0; i <= 200; ++i) {
        const double x = i / 200.0;
        if (dev1(x) > epsilon) {
            throw DegenerateRegionError(
                "validity_region: epsilon " + std::to_string(epsilon) +
                " excludes part of [0, 1] (dev1(" + std::to_string(x) + ") = " +
                std::to_string(dev1(x)) + ")");
        }
    }

    ValidityReport report;
    report.g = a / sigma;
    report.epsilon = epsilon;
    report.search = search;
    report.region1 = {march_boundary(dev1, 0.0, search.lo, epsilon),
                      march_boundary(dev1, 1.0, search.hi, epsilon)};
    const double lo3 = dev3(report.region1.lo) > epsilon
                           ? report.region1.lo
                           : march_boundary(dev3, report.region1.lo, search.lo, epsilon);
    const double hi3 = dev3(report.region1.hi) > epsilon
                           ? report.region1.hi
                           : march_boundary(dev3, report.region1.hi, search.hi, epsilon);
    report.region2_lower = {lo3, report.region1.lo};
    report.region2_upper = {report.region1.hi, hi3};
    report.region3_lower = {search.lo, lo3};
    report.region3_upper = {hi3, search.hi};
    return report;
}

std::vector<SweepRow> sweep_postselection(double theta_i,
                                          std::span<const double> theta_f_list,
                                          const CouplingConfig& config,
                                          const std::optional<DetectionConfig>& mc,
                                          const PixelGrid& grid) {
    const PolarizationState psi_i = make_linear_state(theta_i);
    std::vector<SweepRow> rows(theta_f_list.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();

    parallel_for(theta_f_list.size(), [&](std::size_t idx) {
        const double theta_f = theta_f_list[idx];
        const PolarizationState psi_f = make_linear_state(theta_f);
        SweepRow& row = rows[idx];
        row.theta_i = theta_i;
        row.theta_f = theta_f;

        const Complex z = inner_product(psi_f, psi_i);
        if (std::abs(z) <= kDivergenceCut) {
            const auto [zh, zv] = branch_amplitudes(psi_i, psi_f);
            const double kk = overlap_kappa(config.a_x, config.sigma) *
                              overlap_kappa(config.a_y, config.sigma);
            row.divergent = true;
            row.aw_h_true = row.aw_v_true = nan;
            row.x_exact = row.x_order1 = row.x_order3 = nan;
            row.y_exact = row.y_order1 = row.y_order3 = nan;
            row.p_postselect = zh.real() * zh.real() + zv.real() * zv.real() +
                               2.0 * zh.real() * zv.real() * kk;
            return;
        }

        const WeakValueResult aw_h = weak_value({Axis::H}, psi_i, psi_f);
        const WeakValueResult aw_v = weak_value({Axis::V}, psi_i, psi_f);
        row.aw_h_true = aw_h.value.real();
        row.aw_v_true = aw_v.value.real();

        const MeterPrediction exact = sequential_meter(psi_i, psi_f, config);
        row.x_exact = exact.x_centroid;
        row.y_exact = exact.y_centroid;
        row.p_postselect = exact.postselection_probability;
        row.x_order1 = perturbative_meter(row.aw_h_true, config.a_x, config.sigma, 1);
        row.x_order3 = perturbative_meter(row.aw_h_true, config.a_x, config.sigma, 3);
        row.y_order1 = perturbative_meter(row.aw_v_true, config.a_y, config.sigma, 1);
        row.y_order3 = perturbative_meter(row.aw_v_true, config.a_y, config.sigma, 3);

        if (mc) {
            DetectionConfig det = *mc;
            det.seed = mc->seed ^ static_cast<std::uint64_t>(idx);
            const PixelProbabilityMap map = pixel_probability_map(psi_i, psi_f, config, grid);
            const CountMap counts = simulate_counts(map, det);
            const double background =
                static_cast<double>(det.shots) * det.dark_rate_hz * det.gate_s;
            const CentroidEstimate est = centroid_estimate(counts, background);
            row.x_measured = est.x;
            row.x_stderr = est.stderr_x;
            row.y_measured = est.y;
            row.y_stderr = est.stderr_y;
        }
    });
    return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows,
                     std::span<const std::pair<std::string, std::string>> metadata) {
    for (const auto& [key, value] : metadata) {
        out << "# " << key << " = " << value << "\n";
    }
    out << "theta_i,theta_f,aw_h_true,aw_v_true,x_exact,x_order1,x_order3,"
           "y_exact,y_order1,y_order3,x_measured,x_stderr,y_measured,y_stderr,"
           "p_postselect,divergent_flag\n";
    const auto cell = [](double v) { return std::isfinite(v) ? format_double(v) : std::string(); };
    const auto opt_cell = [&](const std::optional<double>& v) {
        return v ? cell(*v) : std::string();
    };
    for (const SweepRow& row : rows) {
        out << cell(row.theta_i) << ',' << cell(row.theta_f) << ','
            << cell(row.aw_h_true) << ',' << cell(row.aw_v_true) << ','
            << cell(row.x_exact) << ',' << cell(row.x_order1) << ','
            << cell(row.x_order3) << ',' << cell(row.y_exact) << ','
            << cell(row.y_order1) << ',' << cell(row.y_order3) << ','
            << opt_cell(row.x_measured) << ',' << opt_cell(row.x_stderr) << ','
            << opt_cell(row.y_measured) << ',' << opt_cell(row.y_stderr) << ','
            << cell(row.p_postselect) << ',' << (row.divergent ? 1 : 0) << '\n';
    }
}

}  // namespace weakval
