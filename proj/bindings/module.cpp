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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "weakval/analysis.hpp"
#include "weakval/cli.hpp"
#include "weakval/config.hpp"
#include "weakval/detector.hpp"
#include "weakval/meter.hpp"
#include "weakval/polarization.hpp"
#include "weakval/pointer.hpp"

namespace py = pybind11;
using namespace weakval;

namespace {

std::vector<std::vector<double>> grid_probabilities(const PixelProbabilityMap& map) {
    std::vector<std::vector<double>> out(kGridPixels, std::vector<double>(kGridPixels));
    for (int i = 0; i < kGridPixels; ++i) {
        for (int j = 0; j < kGridPixels; ++j) {
            out[i][j] = map.at(i, j);
        }
    }
    return out;
}

std::vector<std::vector<std::int64_t>> grid_counts(const CountMap& map) {
    std::vector<std::vector<std::int64_t>> out(kGridPixels,
                                               std::vector<std::int64_t>(kGridPixels));
    for (int i = 0; i < kGridPixels; ++i) {
        for (int j = 0; j < kGridPixels; ++j) {
            out[i][j] = map.at(i, j);
        }
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weak-value polarization measurement simulator core";

    py::register_exception<DivergentWeakValueError>(m, "DivergentWeakValueError",
                                                    PyExc_ValueError);
    py::register_exception<VanishingPostselectionError>(m, "VanishingPostselectionError",
                                                        PyExc_ValueError);
    py::register_exception<UnsupportedImaginaryError>(m, "UnsupportedImaginaryError",
                                                      PyExc_ValueError);
    py::register_exception<InversionFailureError>(m, "InversionFailureError", PyExc_ValueError);
    py::register_exception<InsufficientCountsError>(m, "InsufficientCountsError",
                                                    PyExc_ValueError);
    py::register_exception<DegenerateRegionError>(m, "DegenerateRegionError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<Axis>(m, "Axis").value("H", Axis::H).value("V", Axis::V);

    py::class_<PolarizationState>(m, "PolarizationState")
        .def(py::init<Complex, Complex>(), py::arg("amp_h"), py::arg("amp_v"))
        .def_readonly("amp_h", &PolarizationState::amp_h)
        .def_readonly("amp_v", &PolarizationState::amp_v);

    py::class_<Projector>(m, "Projector")
        .def(py::init<Axis>(), py::arg("axis"))
        .def_readonly("axis", &Projector::axis);

    py::class_<WeakValueResult>(m, "WeakValueResult")
        .def_readonly("value", &WeakValueResult::value)
        .def_readonly("overlap_z", &WeakValueResult::overlap_z);

    py::class_<CouplingConfig>(m, "CouplingConfig")
        .def(py::init(&CouplingConfig::make), py::arg("a_x"), py::arg("a_y"), py::arg("sigma"))
        .def_readonly("a_x", &CouplingConfig::a_x)
        .def_readonly("a_y", &CouplingConfig::a_y)
        .def_readonly("sigma", &CouplingConfig::sigma)
        .def_property_readonly("g_x", &CouplingConfig::g_x)
        .def_property_readonly("g_y", &CouplingConfig::g_y)
        .def_property_readonly("weak_regime_advisory", &CouplingConfig::weak_regime_advisory)
        .def_static("preset_thin", &CouplingConfig::preset_thin)
        .def_static("preset_thick", &CouplingConfig::preset_thick);

    py::enum_<ResponseOrder>(m, "ResponseOrder")
        .value("exact", ResponseOrder::exact)
        .value("order1", ResponseOrder::order1)
        .value("order3", ResponseOrder::order3);

    py::class_<MeterPrediction>(m, "MeterPrediction")
        .def_readonly("x_centroid", &MeterPrediction::x_centroid)
        .def_readonly("y_centroid", &MeterPrediction::y_centroid)
        .def_readonly("postselection_probability", &MeterPrediction::postselection_probability)
        .def_readonly("order", &MeterPrediction::order);

    py::class_<BinIntegrals>(m, "BinIntegrals")
        .def_readonly("i_zero", &BinIntegrals::i_zero)
        .def_readonly("i_shift", &BinIntegrals::i_shift)
        .def_readonly("i_cross", &BinIntegrals::i_cross);

    py::class_<PixelGrid>(m, "PixelGrid")
        .def(py::init<>())
        .def(py::init([](double bx, double by) {
                 return PixelGrid{bx, by};
             }),
             py::arg("beam_center_x"), py::arg("beam_center_y"))
        .def_readwrite("beam_center_x", &PixelGrid::beam_center_x)
        .def_readwrite("beam_center_y", &PixelGrid::beam_center_y);

    py::class_<DetectionConfig>(m, "DetectionConfig")
        .def(py::init<>())
        .def(py::init([](long long shots, double efficiency, double dark_rate_hz, double gate_s,
                         std::uint64_t seed) {
                 return DetectionConfig{shots, efficiency, dark_rate_hz, gate_s, seed};
             }),
             py::arg("shots"), py::arg("efficiency") = 1.0, py::arg("dark_rate_hz") = 100.0,
             py::arg("gate_s") = 6e-9, py::arg("seed") = 0)
        .def_readwrite("shots", &DetectionConfig::shots)
        .def_readwrite("efficiency", &DetectionConfig::efficiency)
        .def_readwrite("dark_rate_hz", &DetectionConfig::dark_rate_hz)
        .def_readwrite("gate_s", &DetectionConfig::gate_s)
        .def_readwrite("seed", &DetectionConfig::seed);

    py::class_<PixelProbabilityMap>(m, "PixelProbabilityMap")
        .def_property_readonly("probabilities", &grid_probabilities)
        .def_readonly("truncation_mass", &PixelProbabilityMap::truncation_mass)
        .def_readonly("postselection_probability",
                      &PixelProbabilityMap::postselection_probability)
        .def_readonly("grid", &PixelProbabilityMap::grid);

    py::class_<CountMap>(m, "CountMap")
        .def_property_readonly("counts", &grid_counts)
        .def_property_readonly("total", &CountMap::total)
        .def_readonly("postselection_probability", &CountMap::postselection_probability)
        .def_readonly("truncation_mass", &CountMap::truncation_mass)
        .def_readonly("total_signal_expected", &CountMap::total_signal_expected)
        .def_readonly("rng_algorithm", &CountMap::rng_algorithm)
        .def_readonly("grid", &CountMap::grid);

    py::class_<CentroidEstimate>(m, "CentroidEstimate")
        .def_readonly("x", &CentroidEstimate::x)
        .def_readonly("y", &CentroidEstimate::y)
        .def_readonly("stderr_x", &CentroidEstimate::stderr_x)
        .def_readonly("stderr_y", &CentroidEstimate::stderr_y)
        .def_readonly("n_used", &CentroidEstimate::n_used);

    py::class_<ShiftCalibration>(m, "ShiftCalibration")
        .def_readonly("a_x", &ShiftCalibration::a_x)
        .def_readonly("a_y", &ShiftCalibration::a_y)
        .def_readonly("a_x_err", &ShiftCalibration::a_x_err)
        .def_readonly("a_y_err", &ShiftCalibration::a_y_err);

    py::class_<Interval>(m, "Interval")
        .def_readonly("lo", &Interval::lo)
        .def_readonly("hi", &Interval::hi)
        .def("contains", &Interval::contains);

    py::class_<ValidityReport>(m, "ValidityReport")
        .def_readonly("g", &ValidityReport::g)
        .def_readonly("epsilon", &ValidityReport::epsilon)
        .def_readonly("search", &ValidityReport::search)
        .def_readonly("region1", &ValidityReport::region1)
        .def_readonly("region2_lower", &ValidityReport::region2_lower)
        .def_readonly("region2_upper", &ValidityReport::region2_upper)
        .def_readonly("region3_lower", &ValidityReport::region3_lower)
        .def_readonly("region3_upper", &ValidityReport::region3_upper);

    py::class_<BiasRow>(m, "BiasRow")
        .def_readonly("a_true", &BiasRow::a_true)
        .def_readonly("exact", &BiasRow::exact)
        .def_readonly("order1", &BiasRow::order1)
        .def_readonly("order3", &BiasRow::order3)
        .def_readonly("bias1", &BiasRow::bias1)
        .def_readonly("bias3", &BiasRow::bias3);

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("theta_i", &SweepRow::theta_i)
        .def_readonly("theta_f", &SweepRow::theta_f)
        .def_readonly("aw_h_true", &SweepRow::aw_h_true)
        .def_readonly("aw_v_true", &SweepRow::aw_v_true)
        .def_readonly("x_exact", &SweepRow::x_exact)
        .def_readonly("x_order1", &SweepRow::x_order1)
        .def_readonly("x_order3", &SweepRow::x_order3)
        .def_readonly("y_exact", &SweepRow::y_exact)
        .def_readonly("y_order1", &SweepRow::y_order1)
        .def_readonly("y_order3", &SweepRow::y_order3)
        .def_readonly("x_measured", &SweepRow::x_measured)
        .def_readonly("x_stderr", &SweepRow::x_stderr)
        .def_readonly("y_measured", &SweepRow::y_measured)
        .def_readonly("y_stderr", &SweepRow::y_stderr)
        .def_readonly("p_postselect", &SweepRow::p_postselect)
        .def_readonly("divergent", &SweepRow::divergent);

    m.def("make_linear_state", &make_linear_state, py::arg("theta"));
    m.def("inner_product", &inner_product, py::arg("psi_f"), py::arg("psi_i"));
    m.def("weak_value", &weak_value, py::arg("obs"), py::arg("psi_i"), py::arg("psi_f"),
          py::arg("tolerance") = 1e-10);
    m.def("branch_amplitudes", &branch_amplitudes, py::arg("psi_i"), py::arg("psi_f"));
    m.def("postselection_angle_for_weak_value", &postselection_angle_for_weak_value,
          py::arg("target"), py::arg("theta_i"));

    m.def("overlap_kappa", &overlap_kappa, py::arg("shift_a"), py::arg("sigma"));
    m.def("shifted_first_moment", &shifted_first_moment, py::arg("shift_a"), py::arg("sigma"));
    m.def("bin_integrals", &bin_integrals, py::arg("shift_a"), py::arg("sigma"),
          py::arg("bin_lo"), py::arg("bin_hi"), py::arg("center") = 0.0);
    m.def("normal_cdf", &normal_cdf, py::arg("x"), py::arg("mean"), py::arg("sigma"));

    m.def("exact_meter_single",
          py::overload_cast<double, double, double, bool>(&exact_meter_single), py::arg("a_w"),
          py::arg("a"), py::arg("sigma"), py::arg("normalized") = true);
    m.def("perturbative_meter", &perturbative_meter, py::arg("a_w"), py::arg("a"),
          py::arg("sigma"), py::arg("order"));
    m.def("sequential_meter", &sequential_meter, py::arg("psi_i"), py::arg("psi_f"),
          py::arg("config"));
    m.def("saturation_limit", &saturation_limit, py::arg("a"));

    m.def("pixel_probability_map", &pixel_probability_map, py::arg("psi_i"), py::arg("psi_f"),
          py::arg("config"), py::arg("grid") = PixelGrid{});
    m.def("simulate_counts", &simulate_counts, py::arg("map"), py::arg("det"));
    m.def("centroid_estimate", &centroid_estimate, py::arg("counts"),
          py::arg("background_per_pixel") = 0.0);
    m.def("calibrate_shifts", &calibrate_shifts, py::arg("counts_h"), py::arg("counts_v"));
    m.def("countmap_to_csv", [](const CountMap& map) {
        std::ostringstream out;
        write_countmap_csv(out, map);
        return out.str();
    });
    m.def("countmap_from_csv", [](const std::string& text) {
        std::istringstream in(text);
        return read_countmap_csv(in);
    });
    m.def("save_countmap_csv", &save_countmap_csv, py::arg("path"), py::arg("map"));
    m.def("load_countmap_csv", &load_countmap_csv, py::arg("path"));

    m.def("meter_deviation", &meter_deviation, py::arg("a_w"), py::arg("a"), py::arg("sigma"),
          py::arg("order"));
    m.def("extract_weak_value", &extract_weak_value, py::arg("centroid"), py::arg("a"),
          py::arg("sigma"), py::arg("order"));
    m.def(
        "bias_curve",
        [](double a, double sigma, const std::vector<double>& grid) {
            return bias_curve(a, sigma, grid);
        },
        py::arg("a"), py::arg("sigma"), py::arg("a_w_grid"));
    m.def(
        "validity_region",
        [](double a, double sigma, double epsilon, double search_lo, double search_hi) {
            return validity_region(a, sigma, epsilon, {search_lo, search_hi});
        },
        py::arg("a"), py::arg("sigma"), py::arg("epsilon"), py::arg("search_lo") = -6.0,
        py::arg("search_hi") = 6.0);
    m.def(
        "sweep_postselection",
        [](double theta_i, const std::vector<double>& theta_f_list, const CouplingConfig& config,
           const std::optional<DetectionConfig>& mc, const PixelGrid& grid) {
            return sweep_postselection(theta_i, theta_f_list, config, mc, grid);
        },
        py::arg("theta_i"), py::arg("theta_f_list"), py::arg("config"),
        py::arg("mc") = std::nullopt, py::arg("grid") = PixelGrid{});
    m.def("sweep_to_csv", [](const std::vector<SweepRow>& rows) {
        std::ostringstream out;
        write_sweep_csv(out, rows);
        return out.str();
    });

    m.def(
        "run_command",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int status = run_command(args, out, err);
            return py::make_tuple(status, out.str(), err.str());
        },
        py::arg("args"), "Run a CLI subcommand; returns (status, stdout, stderr).");

    m.attr("GRID_PIXELS") = kGridPixels;
    m.attr("__version__") = "0.1.0";
}
