import numpy as np
import pytest

from projdiff.errors import GapViolationError
from projdiff.linalg import herm_eig
from projdiff.models import build_finite_pair, build_krein, random_gapped_pair, thresholds
from projdiff.projections import (corner_spectrum, dsquared_block_check,
                                  fill_metrics, hausdorff_distance,
                                  interval_hausdorff, projection_difference,
                                  spectral_projection)


def diag_pair(d0, v):
    h0 = np.diag(np.asarray(d0, dtype=complex))
    vm = np.diag(np.asarray(v, dtype=float))
    w, u = np.linalg.eigh(vm)
    g = (u * np.sqrt(np.abs(w))) @ u.conj().T
    v0 = (u * np.sign(w)) @ u.conj().T
    return build_finite_pair(h0, g, v0)


def test_spectral_projection_trivial_cases():
    dec = herm_eig(np.diag([0.0, 1.0]))
    assert np.allclose(spectral_projection(dec, -1.0), 0.0)
    assert np.allclose(spectral_projection(dec, 2.0), np.eye(2))
    assert np.allclose(spectral_projection(dec, 0.5), np.diag([1.0, 0.0]))


def test_spectral_projection_collision():
    dec = herm_eig(np.diag([0.0, 1.0]))
    with pytest.raises(GapViolationError) as err:
        spectral_projection(dec, 1.0 + 1e-12)
    assert err.value.nearest == pytest.approx(1.0)


def test_projection_properties():
    pair = random_gapped_pair(10, 3, seed=42)
    e0, _ = pair.eigensystems()
    p = spectral_projection(e0, 0.0)
    assert np.linalg.norm(p @ p - p, 2) <= 1e-10
    assert np.linalg.norm(p - p.conj().T, 2) <= 1e-10


def test_difference_zero_perturbation():
    pair = diag_pair([-1.0, 1.0, 2.0], [0.0, 0.0, 0.0])
    rep = projection_difference(pair, 0.5)
    assert np.allclose(rep.spectrum, 0.0, atol=1e-12)
    assert rep.dim_plus == rep.dim_minus == 0
    assert rep.pairing_defect == 0.0


def test_difference_swapped_projections():
    # H0 = diag(-1, 1), H = diag(1, -1): V = diag(2, -2)
    pair = diag_pair([-1.0, 1.0], [2.0, -2.0])
    rep = projection_difference(pair, 0.0)
    assert np.allclose(rep.spectrum, [-1.0, 1.0], atol=1e-12)
    assert rep.dim_plus == 1 and rep.dim_minus == 1


def test_difference_rotated_projection_oracle():
    # E0 projects on e1, E on (cos a, sin a): spectrum of E - E0 is +-sin(a)
    angle = 0.3
    h0 = np.diag([-1.0, 1.0]).astype(complex)
    c, s = np.cos(angle), np.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    h = rot @ h0 @ rot.T
    v = h - h0
    w, u = np.linalg.eigh(v)
    pair = build_finite_pair(h0, (u * np.sqrt(np.abs(w))) @ u.T, (u * np.sign(w)) @ u.T)
    rep = projection_difference(pair, 0.0)
    assert np.allclose(rep.spectrum, [-np.sin(angle), np.sin(angle)], atol=1e-12)


def test_difference_spectrum_in_unit_interval_and_symmetric():
    pair = random_gapped_pair(16, 4, seed=2)
    rep = projection_difference(pair, 0.0)
    assert rep.spectrum.min() >= -1.0 - 1e-10
    assert rep.spectrum.max() <= 1.0 + 1e-10
    assert rep.pairing_defect <= 1e-8


def test_dsquared_blocks():
    pair = diag_pair([-1.0, 1.0, 2.0], [0.0, 0.0, 0.0])
    assert dsquared_block_check(pair, 0.5) <= 1e-14
    krein = build_krein(128, 20.0)
    assert dsquared_block_check(krein, 0.5) <= 1e-10 * krein.dim
    rnd = random_gapped_pair(8, 3, seed=17)
    assert dsquared_block_check(rnd, 0.0) <= 1e-10 * rnd.dim


def test_corner_zero_perturbation():
    pair = diag_pair([-1.0, 1.0, 2.0], [0.0, 0.0, 0.0])
    spec = corner_spectrum(pair, 0.5, sign=+1)
    assert np.allclose(spec, 0.0, atol=1e-12)


def test_corner_swapped_example():
    pair = diag_pair([-1.0, 1.0], [2.0, -2.0])
    spec = corner_spectrum(pair, 0.0, sign=+1)
    assert spec.max() == pytest.approx(1.0, abs=1e-12)


def test_corner_values_in_unit_interval():
    pair = random_gapped_pair(14, 3, seed=5)
    for sign in (+1, -1):
        spec = corner_spectrum(pair, 0.0, sign=sign)
        assert spec.min() >= -1e-10 and spec.max() <= 1.0 + 1e-10


def test_corner_matches_squared_difference():
    # nonzero corner eigenvalues are squares of the difference spectrum
    pair = random_gapped_pair(10, 3, seed=23)
    rep = projection_difference(pair, 0.0)
    mid = rep.spectrum[np.abs(rep.spectrum) > 1e-8]
    corner_plus = corner_spectrum(pair, 0.0, +1)
    corner_minus = corner_spectrum(pair, 0.0, -1)
    squares = np.sort(np.concatenate([corner_plus, corner_minus]))
    squares = squares[squares > 1e-8]
    assert np.allclose(np.sort(mid[mid != 0] ** 2), squares, atol=1e-9)


def test_krein_corner_fill():
    cfg = thresholds()
    spec = corner_spectrum(build_krein(400, 40.0), 0.5, sign=+1)
    assert spec.max() >= cfg["krein_corner_top_min"]


def test_gap_violation_raises():
    pair = diag_pair([0.5, 1.0], [0.0, 0.0])
    with pytest.raises(GapViolationError):
        projection_difference(pair, 0.5)


def test_fill_and_hausdorff_helpers():
    vals = np.array([-0.9, -0.3, 0.1, 0.8])
    max_gap, cover = fill_metrics(vals, -1.0, 1.0)
    assert max_gap == pytest.approx(0.7)
    assert cover == pytest.approx(0.35)
    assert hausdorff_distance([0.0, 1.0], [0.0, 1.0]) == 0.0
    assert hausdorff_distance([0.0], [2.0]) == 2.0
    assert interval_hausdorff(np.array([0.0, 1.5]), -1.0, 1.0) == pytest.approx(1.0)
