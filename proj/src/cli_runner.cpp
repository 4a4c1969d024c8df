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

#include "weakval/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "weakval/analysis.hpp"
#include "weakval/config.hpp"
#include "weakval/detector.hpp"
#include "weakval/meter.hpp"
#include "weakval/rng.hpp"

namespace weakval {

namespace {

constexpr double kDivergenceCut = 1e-6;

/// Staging area for flag values; angles stay strings until parse_angle so the
/// "deg" suffix works on the command line as well as in config files.
struct FlagValues {
    std::string config_path;
    std::string preset;
    std::optional<double> a_x, a_y, sigma;
    std::string theta_i, theta_f;
    std::vector<std::string> theta_f_list;
    std::string aw_range;
    std::optional<double> epsilon;
    std::string search;
    std::optional<long long> shots;
    std::optional<double> efficiency, dark_rate, gate;
    std::optional<long long> seed;
    std::string out_path;
};

void add_coupling_flags(CLI::App* cmd, FlagValues& flags) {
    cmd->add_option("--config", flags.config_path, "key = value configuration file");
    cmd->add_option("--preset", flags.preset, "coupling preset: thin or thick");
    cmd->add_option("--a-x", flags.a_x, "walk-off shift along x (px)");
    cmd->add_option("--a-y", flags.a_y, "walk-off shift along y (px)");
    cmd->add_option("--sigma", flags.sigma, "pointer width parameter (px)");
}

void add_detection_flags(CLI::App* cmd, FlagValues& flags) {
    cmd->add_option("--shots", flags.shots, "number of heralding triggers");
    cmd->add_option("--efficiency", flags.efficiency, "detection efficiency in [0, 1]");
    cmd->add_option("--dark-rate", flags.dark_rate, "per-pixel dark count rate (Hz)");
    cmd->add_option("--gate", flags.gate, "gate duration (s)");
    cmd->add_option("--seed", flags.seed, "64-bit RNG seed");
}

/// Config file first, then flags on top.
ExperimentConfig merge(const FlagValues& flags) {
    ExperimentConfig cfg;
    if (!flags.config_path.empty()) {
        cfg = parse_config_file(flags.config_path);
    }
    if (!flags.preset.empty()) {
        if (flags.preset != "thin" && flags.preset != "thick") {
            throw ConfigError("preset: must be 'thin' or 'thick', got '" + flags.preset + "'");
        }
        cfg.preset = flags.preset;
    }
    if (flags.a_x) cfg.a_x = *flags.a_x;
    if (flags.a_y) cfg.a_y = *flags.a_y;
    if (flags.sigma) cfg.sigma = *flags.sigma;
    if (!flags.theta_i.empty()) cfg.theta_i = parse_angle(flags.theta_i);
    if (!flags.theta_f.empty()) cfg.theta_f = parse_angle(flags.theta_f);
    if (!flags.theta_f_list.empty()) {
        cfg.theta_f_list.clear();
        for (const std::string& t : flags.theta_f_list) {
            cfg.theta_f_list.push_back(parse_angle(t));
        }
    }
    if (!flags.aw_range.empty()) cfg.aw_range = parse_aw_range(flags.aw_range, "--aw-range");
    if (flags.epsilon) cfg.epsilon = *flags.epsilon;
    if (!flags.search.empty()) {
        std::stringstream ss(flags.search);
        std::string lo, hi;
        if (!std::getline(ss, lo, ':') || !std::getline(ss, hi)) {
            throw ConfigError("search: must be lo:hi, got '" + flags.search + "'");
        }
        cfg.search_lo = parse_angle(lo);  // plain numbers; parse_angle accepts them
        cfg.search_hi = parse_angle(hi);
    }
    if (flags.shots) cfg.shots = *flags.shots;
    if (flags.efficiency) cfg.efficiency = *flags.efficiency;
    if (flags.dark_rate) cfg.dark_rate_hz = *flags.dark_rate;
    if (flags.gate) cfg.gate_s = *flags.gate;
    if (flags.seed) cfg.seed = static_cast<std::uint64_t>(*flags.seed);
    if (!flags.out_path.empty()) cfg.output = flags.out_path;
    return cfg;
}

std::vector<std::pair<std::string, std::string>> output_metadata(
    const std::string& command, const ExperimentConfig& cfg, const CouplingConfig& coupling) {
    std::vector<std::pair<std::string, std::string>> meta;
    meta.emplace_back("command", command);
    for (auto& kv : cfg.echo()) {
        meta.push_back(std::move(kv));
    }
    meta.emplace_back("g_x", format_double(coupling.g_x()));
    meta.emplace_back("g_y", format_double(coupling.g_y()));
    meta.emplace_back("weak_regime_advisory", coupling.weak_regime_advisory() ? "1" : "0");
    meta.emplace_back("config_hash", config_hash(meta));
    return meta;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_text_output(const ExperimentConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output) {
        std::ofstream file(*cfg.output, std::ios::binary);
        if (!file) {
            throw ConfigError("cannot open output file: " + *cfg.output);
        }
        file << text;
    } else {
        out << text;
    }
}

std::vector<double> postselection_angles(const ExperimentConfig& cfg, double theta_i) {
    if (cfg.aw_range) {
        std::vector<double> angles;
        angles.reserve(cfg.aw_range->count);
        for (int i = 0; i < cfg.aw_range->count; ++i) {
            const double t = cfg.aw_range->count == 1
                                 ? 0.0
                                 : static_cast<double>(i) / (cfg.aw_range->count - 1);
            const double target = cfg.aw_range->lo + t * (cfg.aw_range->hi - cfg.aw_range->lo);
            angles.push_back(postselection_angle_for_weak_value(target, theta_i));
        }
        return angles;
    }
    if (!cfg.theta_f_list.empty()) {
        return cfg.theta_f_list;
    }
    if (cfg.theta_f) {
        return {*cfg.theta_f};
    }
    throw ConfigError("postselection: set 'aw_range', 'theta_f_list' or 'theta_f'");
}

int cmd_predict(const ExperimentConfig& cfg, std::ostream& out) {
    const CouplingConfig coupling = cfg.resolve_coupling();
    if (!cfg.theta_f) {
        throw ConfigError("theta_f: required for predict");
    }
    const double theta_i = cfg.theta_i.value_or(M_PI / 4);
    const double theta_f = *cfg.theta_f;
    const PolarizationState psi_i = make_linear_state(theta_i);
    const PolarizationState psi_f = make_linear_state(theta_f);
    if (std::abs(inner_product(psi_f, psi_i)) <= kDivergenceCut) {
        throw DivergentWeakValueError(std::abs(inner_product(psi_f, psi_i)), kDivergenceCut);
    }

    const WeakValueResult aw_h = weak_value({Axis::H}, psi_i, psi_f);
    const WeakValueResult aw_v = weak_value({Axis::V}, psi_i, psi_f);
    const MeterPrediction p = sequential_meter(psi_i, psi_f, coupling);

    std::ostringstream text;
    for (const auto& [k, v] : output_metadata("predict", cfg, coupling)) {
        text << "# " << k << " = " << v << "\n";
    }
    text << "theta_i = " << short_num(theta_i) << "\n"
         << "theta_f = " << short_num(theta_f) << "\n"
         << "aw_h = " << short_num(aw_h.value.real()) << "\n"
         << "aw_v = " << short_num(aw_v.value.real()) << "\n"
         << "x = " << short_num(p.x_centroid) << "\n"
         << "y = " << short_num(p.y_centroid) << "\n"
         << "x_order1 = " << short_num(perturbative_meter(aw_h.value.real(), coupling.a_x, coupling.sigma, 1))
         << "\n"
         << "x_order3 = " << short_num(perturbative_meter(aw_h.value.real(), coupling.a_x, coupling.sigma, 3))
         << "\n"
         << "y_order1 = " << short_num(perturbative_meter(aw_v.value.real(), coupling.a_y, coupling.sigma, 1))
         << "\n"
         << "y_order3 = " << short_num(perturbative_meter(aw_v.value.real(), coupling.a_y, coupling.sigma, 3))
         << "\n"
         << "p = " << short_num(p.postselection_probability) << "\n";
    write_text_output(cfg, text.str(), out);
    return 0;
}

int cmd_regions(const ExperimentConfig& cfg, std::ostream& out) {
    const CouplingConfig coupling = cfg.resolve_coupling();
    const double epsilon = cfg.epsilon.value_or(0.05);
    const Interval search{cfg.search_lo.value_or(-6.0), cfg.search_hi.value_or(6.0)};

    std::ostringstream text;
    for (const auto& [k, v] : output_metadata("regions", cfg, coupling)) {
        text << "# " << k << " = " << v << "\n";
    }
    const auto emit = [&](const char* axis, double a) {
        const ValidityReport r = validity_region(a, coupling.sigma, epsilon, search);
        text << "axis = " << axis << " (a = " << short_num(a)
             << " px, g = " << short_num(r.g) << ")\n"
             << "region1 = [" << short_num(r.region1.lo) << ", " << short_num(r.region1.hi)
             << "]\n"
             << "region2 = [" << short_num(r.region2_lower.lo) << ", "
             << short_num(r.region2_lower.hi) << "] U [" << short_num(r.region2_upper.lo)
             << ", " << short_num(r.region2_upper.hi) << "]\n"
             << "region3 = [" << short_num(r.region3_lower.lo) << ", "
             << short_num(r.region3_lower.hi) << "] U [" << short_num(r.region3_upper.lo)
             << ", " << short_num(r.region3_upper.hi) << "]\n";
    };
    emit("X", coupling.a_x);
    emit("Y", coupling.a_y);
    write_text_output(cfg, text.str(), out);
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out) {
    const CouplingConfig coupling = cfg.resolve_coupling();
    const double theta_i = cfg.theta_i.value_or(M_PI / 4);
    const std::vector<double> angles = postselection_angles(cfg, theta_i);
    std::optional<DetectionConfig> mc;
    if (cfg.has_detection()) {
        mc = cfg.resolve_detection();
    }
    const std::vector<SweepRow> rows = sweep_postselection(theta_i, angles, coupling, mc);

    auto meta = output_metadata("sweep", cfg, coupling);
    if (mc) {
        meta.emplace_back("rng", SplitRng::kAlgorithm);
    }
    std::ostringstream text;
    write_sweep_csv(text, rows, meta);
    write_text_output(cfg, text.str(), out);
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
    const CouplingConfig coupling = cfg.resolve_coupling();
    if (!cfg.theta_f) {
        throw ConfigError("theta_f: required for simulate");
    }
    const double theta_i = cfg.theta_i.value_or(M_PI / 4);
    const PolarizationState psi_i = make_linear_state(theta_i);
    const PolarizationState psi_f = make_linear_state(*cfg.theta_f);
    const PixelProbabilityMap map = pixel_probability_map(psi_i, psi_f, coupling);
    const CountMap counts = simulate_counts(map, cfg.resolve_detection());

    const std::string path = cfg.output.value_or("counts.csv");
    save_countmap_csv(path, counts);
    out << "wrote " << path << " (total counts " << counts.total() << ", p_postselect "
        << short_num(counts.postselection_probability) << ")\n";
    return 0;
}

int cmd_calibrate(const std::string& h_path, const std::string& v_path, std::ostream& out) {
    const CountMap h = load_countmap_csv(h_path);
    const CountMap v = load_countmap_csv(v_path);
    const ShiftCalibration cal = calibrate_shifts(h, v);
    out << "a_x = " << short_num(cal.a_x) << " +/- " << short_num(cal.a_x_err) << "\n"
        << "a_y = " << short_num(cal.a_y) << " +/- " << short_num(cal.a_y_err) << "\n";
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"weak-value polarization measurement simulator"};
    app.require_subcommand(1);

    FlagValues flags;
    std::string calibrate_h, calibrate_v;

    CLI::App* predict = app.add_subcommand("predict", "exact and perturbative meter response");
    add_coupling_flags(predict, flags);
    predict->add_option("--theta-i", flags.theta_i, "preparation angle (rad, or e.g. 45deg)");
    predict->add_option("--theta-f", flags.theta_f, "post-selection angle");
    predict->add_option("--out,-o", flags.out_path, "write report to file");

    CLI::App* regions = app.add_subcommand("regions", "perturbative validity regions");
    add_coupling_flags(regions, flags);
    regions->add_option("--epsilon", flags.epsilon, "deviation tolerance (default 0.05)");
    regions->add_option("--search", flags.search, "weak-value search interval lo:hi");
    regions->add_option("--out,-o", flags.out_path, "write report to file");

    CLI::App* sweep = app.add_subcommand("sweep", "post-selection sweep CSV");
    add_coupling_flags(sweep, flags);
    add_detection_flags(sweep, flags);
    sweep->add_option("--theta-i", flags.theta_i, "preparation angle");
    sweep->add_option("--theta-f", flags.theta_f_list, "explicit post-selection angles");
    sweep->add_option("--aw-range", flags.aw_range, "target weak values lo:hi:count");
    sweep->add_option("--out,-o", flags.out_path, "write CSV to file (default stdout)");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo SPAD acquisition");
    add_coupling_flags(simulate, flags);
    add_detection_flags(simulate, flags);
    simulate->add_option("--theta-i", flags.theta_i, "preparation angle");
    simulate->add_option("--theta-f", flags.theta_f, "post-selection angle");
    simulate->add_option("--out,-o", flags.out_path, "count map path (default counts.csv)");

    CLI::App* calibrate = app.add_subcommand("calibrate", "walk-off shifts from two count maps");
    calibrate->add_option("counts_h", calibrate_h, "count map of the theta = 0 run")->required();
    calibrate->add_option("counts_v", calibrate_v, "count map of the theta = pi/2 run")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*calibrate) {
            return cmd_calibrate(calibrate_h, calibrate_v, out);
        }
        const ExperimentConfig cfg = merge(flags);
        if (*predict) {
            return cmd_predict(cfg, out);
        }
        if (*regions) {
            return cmd_regions(cfg, out);
        }
        if (*sweep) {
            return cmd_sweep(cfg, out);
        }
        if (*simulate) {
            return cmd_simulate(cfg, out);
        }
        err << "error: no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace weakval
