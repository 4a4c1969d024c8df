# Copyright 2026 The weakval authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import weakval as wv


def test_weak_value_anomalous():
    psi_i = wv.make_linear_state(math.pi / 4)
    psi_f = wv.make_linear_state(math.atan(-0.6))
    result = wv.weak_value(wv.Projector(wv.Axis.H), psi_i, psi_f)
    assert result.value.real == pytest.approx(2.5, abs=1e-12)
    assert result.value.imag == pytest.approx(0.0, abs=1e-14)


def test_weak_value_sum_rule():
    psi_i = wv.make_linear_state(0.3)
    psi_f = wv.make_linear_state(1.1)
    h = wv.weak_value(wv.Projector(wv.Axis.H), psi_i, psi_f)
    v = wv.weak_value(wv.Projector(wv.Axis.V), psi_i, psi_f)
    assert h.value.real + v.value.real == pytest.approx(1.0, abs=1e-12)


def test_divergent_weak_value_raises():
    psi_i = wv.make_linear_state(math.pi / 4)
    psi_f = wv.make_linear_state(-math.pi / 4)
    with pytest.raises(ValueError):
        wv.weak_value(wv.Projector(wv.Axis.H), psi_i, psi_f)


def test_pointer_overlap():
    assert wv.overlap_kappa(0.7, 4.3) == pytest.approx(0.996692879204509, abs=1e-12)
    assert wv.shifted_first_moment(1.7, 4.3) == pytest.approx(0.833554228780737, abs=1e-12)


def test_meter_responses():
    assert wv.exact_meter_single(2.5, 0.7, 4.3) == pytest.approx(1.71611567823595, abs=1e-12)
    assert wv.perturbative_meter(2.5, 0.7, 4.3, 1) == pytest.approx(1.75, abs=1e-14)
    thin = wv.CouplingConfig.preset_thin()
    prediction = wv.sequential_meter(
        wv.make_linear_state(math.pi / 4),
        wv.make_linear_state(math.atan(-0.6)),
        thin,
    )
    assert prediction.x_centroid == pytest.approx(1.68393705536642, abs=1e-12)
    assert prediction.postselection_probability == pytest.approx(0.0617367520042758, abs=1e-12)


def test_coupling_presets():
    thick = wv.CouplingConfig.preset_thick()
    assert thick.g_x == pytest.approx(0.4419, abs=5e-5)
    assert thick.weak_regime_advisory
    assert not wv.CouplingConfig.preset_thin().weak_regime_advisory


def test_probability_map_and_simulation():
    thin = wv.CouplingConfig.preset_thin()
    psi_i = wv.make_linear_state(math.pi / 4)
    psi_f = wv.make_linear_state(math.atan(-0.6))
    pmap = wv.pixel_probability_map(psi_i, psi_f, thin)
    total = sum(sum(row) for row in pmap.probabilities)
    assert total == pytest.approx(1.0, abs=1e-12)
    assert 0.0 < pmap.truncation_mass < 1e-3

    det = wv.DetectionConfig(shots=200000, dark_rate_hz=0.0, seed=7)
    first = wv.simulate_counts(pmap, det)
    second = wv.simulate_counts(pmap, det)
    assert first.counts == second.counts
    assert first.rng_algorithm == "splitmix64-mt19937_64"

    est = wv.centroid_estimate(first)
    assert abs(est.x - prediction_x()) < 5 * est.stderr_x


def prediction_x():
    return 1.68393705536642


def test_extract_round_trip():
    centroid = wv.perturbative_meter(2.5, 1.7, 4.3, 3)
    assert wv.extract_weak_value(centroid, 1.7, 4.3, 3) == pytest.approx(2.5, abs=1e-9)
    with pytest.raises(ValueError):
        wv.extract_weak_value(4.3, 1.7, 4.3, 3)  # saturated regime


def test_validity_region():
    report = wv.validity_region(0.7, 4.3, 0.05)
    assert report.region1.contains(0.0)
    assert report.region1.contains(1.0)
    assert report.region1.lo == pytest.approx(-2.0676, abs=5e-3)
    assert report.region1.hi == pytest.approx(3.5940, abs=5e-3)


def test_sweep_and_csv():
    thin = wv.CouplingConfig.preset_thin()
    thetas = [
        wv.postselection_angle_for_weak_value(target, math.pi / 4)
        for target in (-1.0, 0.5, 2.5)
    ]
    rows = wv.sweep_postselection(math.pi / 4, thetas, thin)
    assert len(rows) == 3
    assert rows[2].aw_h_true == pytest.approx(2.5, abs=1e-12)
    assert rows[0].x_measured is None
    csv = wv.sweep_to_csv(rows)
    assert csv.splitlines()[0].startswith("theta_i,theta_f,aw_h_true")
    assert len(csv.splitlines()) == 4


def test_countmap_csv_round_trip():
    pmap = wv.pixel_probability_map(
        wv.make_linear_state(math.pi / 4),
        wv.make_linear_state(0.2),
        wv.CouplingConfig.preset_thick(),
    )
    counts = wv.simulate_counts(pmap, wv.DetectionConfig(shots=50000, seed=3))
    text = wv.countmap_to_csv(counts)
    parsed = wv.countmap_from_csv(text)
    assert parsed.counts == counts.counts
    assert wv.countmap_to_csv(parsed) == text


def test_cli_entry_point():
    status, out, err = wv.run_command(
        ["predict", "--preset", "thin", "--theta-i", "45deg", "--theta-f", "45deg"]
    )
    assert status == 0, err
    assert "x = 0.35" in out
    assert "p = 0.9966983477" in out
