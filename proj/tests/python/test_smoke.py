# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import ostrovsky_lab as ol


def bump(centre=2.0, sigma=0.25, step=2.0**-8, half=1.5):
    xi = np.arange(centre - half, centre + half + step / 2, step)
    return ol.SpectralProfile(xi[0], step, np.exp(-((xi - centre) ** 2) / (2 * sigma**2)).astype(complex))


def test_version():
    assert ol.__version__ == "0.1.0"


def test_profile_roundtrip_and_zero_cut():
    p = ol.SpectralProfile(-1.0, 0.5, np.ones(5, dtype=complex), zero_cut=0.25)
    assert len(p) == 5
    assert p.amplitudes[2] == 0
    assert p.truncated_mass == pytest.approx(0.5)
    np.testing.assert_allclose(p.xi, [-1.0, -0.5, 0.0, 0.5, 1.0])


def test_phase_closed_form():
    assert ol.phase(2.0) == pytest.approx(8.5)
    assert ol.phase(2.0, ol.Branch.minus) == pytest.approx(7.5)


def test_evolution_is_unitary_and_t0_is_identity():
    p = bump()
    for sign in (ol.Branch.plus, ol.Branch.minus):
        q = ol.evolve(p, 0.7, sign)
        assert ol.l2_norm(q) == pytest.approx(ol.l2_norm(p), rel=1e-14)
    x, u0 = ol.propagate(p, 0.0, -5.0, 5.0, 65)
    assert len(x) == 65
    assert u0[32] == pytest.approx(ol.propagate_at(p, 0.0, 0.0), abs=1e-12)


def test_parseval():
    p = bump()
    assert ol.space_l2_norm(p) == pytest.approx(ol.l2_norm(p), rel=1e-6)


def test_projections():
    assert ol.dyadic_cutoff(0.5) == 1.0
    assert ol.dyadic_cutoff(2.5) == 0.0
    xi = np.random.default_rng(1).uniform(-10, 10, 1000)
    for v in xi:
        k0 = math.floor(v)
        assert sum(ol.wiener_window(v - k) for k in range(k0 - 1, k0 + 3)) == pytest.approx(1.0, abs=1e-15)
    p = bump()
    low, band, high = ol.project_low(p, 2.0), ol.project_band(p, 2.0), ol.project_high(p, 2.0)
    assert np.abs(low.amplitudes + high.amplitudes - p.amplitudes).max() < 1e-15
    assert np.abs(band.amplitudes).max() > 0


def test_wiener_reconstruction_is_exact():
    p = bump()
    pieces = ol.wiener_decompose(p)
    assert min(pieces) <= 0 and max(pieces) >= 4
    r = ol.reconstruct([pieces[k] for k in sorted(pieces)])
    assert np.array_equal(r.amplitudes, p.amplitudes)


def test_counterexample_slope():
    pts = [(k, ol.counterexample_ratio(k, 0.0, n_t=64)["ratio"]) for k in (3, 4, 5)]
    assert 0.2 <= ol.scaling_slope(pts) <= 0.3


def test_philox_known_answer():
    assert ol.philox4x32([0, 0, 0, 0], [0, 0]) == [0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8]


def test_khinchine():
    r = ol.khinchine([1, 0.5, 0.25j], 2.0, 20000, 3)
    assert abs(r["ratio"] - 1.0) <= 3 * r["std_error"]
    assert ol.khinchine([1, 0.5], 8.0, 20000, 3)["ratio"] <= 2.0


def test_stochastic_continuity():
    c = ol.stochastic_continuity(ol.default_random_profile(), [1e-1, 1e-2, 1e-3, 0.0], n_samples=500)
    assert c["prob"][-1] == 0.0
    assert all(lo <= hi for lo, hi in c["wilson"])


def test_verify_lemmas_subset():
    reports = ol.verify_lemmas(["NORM_EQUIV"])
    assert len(reports) == len(ol.corpus_ids())
    assert all(r["pass"] and 1.0 <= r["fitted_c"] <= 3.0 for r in reports)


def test_cli_usage_error(capsys):
    assert ol.run_cli(["counterexample", "--k-min", "5", "--k-max", "2", "--s", "0"]) == 1
