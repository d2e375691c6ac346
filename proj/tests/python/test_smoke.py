# SPDX-License-Identifier: Apache-2.0
#
# selfmix - self-mixing antenna array simulation library
# Copyright (C) 2026 The selfmix authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

import math

import numpy as np
import pytest

import selfmix as sm


def test_two_tone_products():
    p = sm.two_tone_products(900.0, 1.0, 1000.0, 0.5)
    assert p["dc"] == pytest.approx(0.625)
    assert p["if_amplitude"] == pytest.approx(0.5)
    assert p["if_frequency"] == pytest.approx(100.0)


def test_square_law_spectrum_matches_products():
    s = sm.square_law_spectrum([900.0, 1000.0], [1.0, 0.5], 10e3, 0.1, cutoff_hz=500.0)
    f = s["frequency_hz"]
    c = s["coefficients"]
    k = int(np.argmin(np.abs(f - 100.0)))
    km = int(np.argmin(np.abs(f + 100.0)))
    assert abs(c[k] + np.conj(c[km])) == pytest.approx(0.5, rel=1e-12)


def test_diode_optimum():
    d = sm.DiodeModel()
    v, i = sm.optimal_bias_static(d, 0.0, 2.0)
    assert v == pytest.approx(0.73, abs=0.02)
    assert i == pytest.approx(2.5e-3, rel=1e-3)
    ideal = sm.DiodeModel(series_resistance=0.0)
    with pytest.raises(sm.SelfmixError) as err:
        sm.optimal_bias_static(ideal, 0.0, 1.5)
    assert err.value.code == "NoInteriorMaximum"


def test_mixing_square_law_slope():
    d = sm.DiodeModel()
    lo = sm.simulate_mixing(d, 0.7298, [37.5e9, 38.5e9], [-60.0, -65.0], 1e9)["if_power_dbm"]
    hi = sm.simulate_mixing(d, 0.7298, [37.5e9, 38.5e9], [-57.0, -62.0], 1e9)["if_power_dbm"]
    assert hi - lo == pytest.approx(6.0, abs=0.3)


def test_sweep_shape():
    m = sm.bias_power_sweep(sm.DiodeModel(), [0.5, 0.7], [-50.0, -40.0, -30.0])
    assert m.shape == (2, 3)
    assert np.all(np.isfinite(m))


def test_array_factors():
    g = sm.ArrayGeometry.rectangular(4, 2, 0.032, 0.036)
    assert len(g) == 8
    theta = np.arange(-90.0, 90.25, 0.25)
    cut = sm.array_factor_cut(g, 37.5e9, 38.5e9, 38.5e9, 90.0, theta)
    assert cut["af_if"].min() > 0.9
    w_if, crossed_if = sm.beamwidth_3db(np.radians(theta), cut["af_if"])
    w_rf, _ = sm.beamwidth_3db(np.radians(theta), cut["af_rf"])
    assert not crossed_if
    assert w_if / w_rf > 10.0
    single = sm.ArrayGeometry([(0.0, 0.0)])
    assert sm.if_array_factor(single, 37.5e9, 38.5e9, 1.0, 0.3) == 1.0


def test_time_domain_matches_closed_form():
    g = sm.ArrayGeometry([(0.0, 0.0), (0.05, 0.01), (0.02, 0.09)])
    a = sm.array_if_power(g, 37.5e9, 38.5e9, 0.6, 1.1)
    b = sm.array_if_power(g, 37.5e9, 38.5e9, 0.6, 1.1, time_domain=True)
    assert a == pytest.approx(b, abs=1e-9)


def test_effective_spacing_and_combiner():
    if_sp, _ = sm.effective_spacing(0.032, 1e9, 38.5e9)
    assert if_sp == pytest.approx(0.1067, abs=1e-4)
    assert sm.combine_elements([(1.0, 0.2)] * 8) == pytest.approx(10 * math.log10(8))


def test_link_budget():
    assert sm.friis_rx_power(0.0, 25.0, 1.5, 34e9, 0.0, -1.8) == pytest.approx(-43.4, abs=0.1)
    out = sm.chain_output_power(-43.4, -38.5)
    assert out == pytest.approx(-36.9, abs=0.1)


def test_validation_reports_every_check():
    checks = sm.run_validation()
    assert [c["id"] for c in checks] == [f"AC{i}" for i in range(1, 11)]
