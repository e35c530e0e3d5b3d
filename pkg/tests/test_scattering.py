import numpy as np
import pytest

from projdiff.models import (build_finite_pair, build_krein, build_schrodinger_1d,
                             random_gapped_pair, sech2_spec, square_well_spec,
                             thresholds)
from projdiff.scattering import (birman_krein_check, birman_krein_extrapolated,
                                 extrapolated_phases, neville,
                                 resolvent_sandwich, scattering_bundle,
                                 scattering_predictions, smoothed_counting_shift,
                                 smoothed_density, transfer_matrix_smatrix)


def scalar_pair(h0_value, coupling):
    return build_finite_pair(np.array([[h0_value]], dtype=complex),
                             np.array([[coupling]]), np.array([[1.0]]))


def zero_v0_pair(seed=0):
    rng = np.random.default_rng(seed)
    h0 = np.diag(rng.uniform(-1, 1, 6)).astype(complex)
    g = rng.standard_normal((2, 6))
    return build_finite_pair(h0, g, np.zeros((2, 2)))


def test_sandwich_zero_perturbation():
    pair = zero_v0_pair()
    sw = resolvent_sandwich(pair, 0.1 + 0.05j)
    assert np.allclose(sw.t0, sw.t)
    assert sw.factor_residual <= 1e-12


def test_sandwich_scalar_resolvent():
    pair = scalar_pair(0.0, 1.0)
    eps = 0.01
    sw = resolvent_sandwich(pair, 1j * eps)
    assert sw.t0[0, 0] == pytest.approx(-1.0 / (1j * eps))
    f0, _ = smoothed_density(pair, 0.0, eps)
    assert f0[0, 0] == pytest.approx(1.0 / (np.pi * eps))


def test_sandwich_requires_upper_half_plane():
    pair = zero_v0_pair()
    with pytest.raises(ValueError):
        resolvent_sandwich(pair, 0.5 - 0.1j)


def test_factor_identity_random():
    pair = random_gapped_pair(6, 2, seed=31)
    sw = resolvent_sandwich(pair, 0.3 + 0.07j)
    assert sw.factor_residual <= 1e-10


def test_density_psd_and_trace_sum_rule():
    pair = random_gapped_pair(8, 3, seed=13)
    f0, f = smoothed_density(pair, 0.1, 0.05)
    for m in (f0, f):
        assert np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))) >= -1e-12
    # Lorentzians integrate to one: the trace of F0' integrated over a wide
    # grid approaches trace(G G*); eigen-expansion is the oracle
    eps = 0.05
    grid = np.linspace(-60.0, 60.0, 12001)
    vals = []
    e0, _ = pair.eigensystems()
    gv = pair.g @ e0.eigenvectors
    weights = np.sum(np.abs(gv) ** 2, axis=0)
    for lam in grid:
        dens = eps / ((e0.eigenvalues - lam) ** 2 + eps ** 2) / np.pi
        vals.append(np.sum(weights * dens))
    integral = np.trapezoid(vals, grid)
    target = np.trace(pair.g @ pair.g.conj().T).real
    assert integral == pytest.approx(target, rel=1e-3)
    # and the sandwich-based trace matches the eigen-expansion pointwise
    f0, _ = smoothed_density(pair, 0.1, eps)
    dens = eps / ((e0.eigenvalues - 0.1) ** 2 + eps ** 2) / np.pi
    assert np.trace(f0).real == pytest.approx(np.sum(weights * dens), rel=1e-10)


def test_bundle_zero_v0():
    pair = zero_v0_pair()
    b = scattering_bundle(pair, 0.0, 0.1)
    assert np.allclose(b.smatrix, np.eye(2))
    assert len(b.phases) == 0
    assert scattering_predictions(b) == (0.0, pytest.approx(np.array([])))


def test_bundle_exact_unitarity_and_identity():
    for seed in (0, 1, 2):
        pair = random_gapped_pair(10, 3, seed=seed)
        for eps in (0.1, 0.01):
            b = scattering_bundle(pair, 0.0, eps)
            assert b.unitarity_defect <= 1e-12
            assert b.identity_residual <= 1e-9 * max(np.linalg.norm(b.defect_operator, 2), 1.0)
            # ||A||^(1/2) equals ||S - I||/2 through the exact identity
            half = 0.5 * np.linalg.norm(b.smatrix - np.eye(pair.kdim), 2)
            assert b.prediction_a == pytest.approx(half, abs=1e-8)


def test_bundle_defect_psd_and_consistency():
    pair = random_gapped_pair(12, 4, seed=6)
    b = scattering_bundle(pair, 0.0, 0.05)
    evs = np.linalg.eigvalsh(b.defect_operator)
    assert evs.min() >= -1e-10
    # the smoothed stationary matrix is unitary, hence normal, so
    # ||A||^(1/2) coincides with the largest retained sin(theta/2)
    assert len(b.phases) > 0
    a, edges = scattering_predictions(b)
    assert a == pytest.approx(b.prediction_a, abs=1e-8)


def test_predictions_arithmetic():
    pair = zero_v0_pair()
    b = scattering_bundle(pair, 0.0, 0.1)
    bundle = b.__class__(**{**b.__dict__, "phases": np.array([np.pi])})
    a, edges = scattering_predictions(bundle)
    assert a == pytest.approx(1.0)
    bundle = b.__class__(**{**b.__dict__, "phases": np.array([np.pi / 2, np.pi / 3])})
    a, edges = scattering_predictions(bundle)
    assert a == pytest.approx(np.sqrt(2) / 2)
    assert np.allclose(edges, [np.sin(np.pi / 4), np.sin(np.pi / 6)])


def test_krein_phase_near_minus_one():
    cfg = thresholds()["krein"]
    pair = build_krein(cfg["n"], cfg["L"])
    phases, bundles = extrapolated_phases(pair, 0.5, cfg["eps_ladder"])
    assert len(phases) == 1
    assert abs(np.exp(1j * phases[0]) + 1.0) <= 0.05
    # diagnostic from the design ledger: unitarity defect stays at roundoff
    # along the ladder (the smoothed matrix is exactly unitary)
    assert all(b.unitarity_defect <= 1e-12 for b in bundles)


def test_neville_extrapolates_polynomials():
    eps = [0.4, 0.2, 0.1]
    vals = [1.0 + 3.0 * e - 2.0 * e ** 2 for e in eps]
    assert neville(eps, vals) == pytest.approx(1.0, abs=1e-12)


def test_krein_defect_top_extrapolates_to_one():
    # the defect operator's top eigenvalue is sin^2(theta/2) in the limit,
    # here sin^2(pi/2) = 1 since the limiting phase is pi
    cfg = thresholds()["krein"]
    pair = build_krein(cfg["n"], cfg["L"])
    ladder = cfg["eps_ladder"]
    tops = [scattering_bundle(pair, 0.5, e).prediction_a ** 2 for e in ladder]
    assert neville(ladder, tops) == pytest.approx(1.0, abs=0.05)


def test_defect_matrix_wrapper_consistency():
    from projdiff.scattering import defect_matrix, stationary_smatrix
    pair = random_gapped_pair(8, 3, seed=29)
    bundle, half_norm = defect_matrix(pair, 0.0, 0.05)
    assert bundle.prediction_a == pytest.approx(half_norm, abs=1e-10)
    alias = stationary_smatrix(pair, 0.0, 0.05)
    assert np.allclose(alias.smatrix, bundle.smatrix)


def test_transfer_matrix_free_and_flux():
    spec = square_well_spec(0.0, 1.0, 20.0, 399)
    res = transfer_matrix_smatrix(spec, 1.0)
    assert abs(res.r) < 1e-10 and abs(res.t - 1.0) < 1e-10
    spec = sech2_spec(1.0, 25.0, 499)
    res = transfer_matrix_smatrix(spec, 1.3)
    assert res.flux_defect <= 1e-8
    assert res.unitarity_defect <= 1e-8


def test_transfer_matrix_square_well_closed_form():
    # inside the well the momentum is q = sqrt(lam + v0); matching plane
    # waves at |x| = b gives the textbook transmission amplitude
    v0, b, lam = 1.0, 1.0, 1.0
    k, q = np.sqrt(lam), np.sqrt(lam + v0)
    denom = np.cos(2 * q * b) - 0.5j * (k / q + q / k) * np.sin(2 * q * b)
    t_exact = np.exp(-2j * k * b) / denom
    res = transfer_matrix_smatrix(square_well_spec(v0, b, 20.0, 399), lam)
    assert abs(res.t - t_exact) <= 1e-6


def test_transfer_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        transfer_matrix_smatrix(sech2_spec(1.0, 25.0, 499), -1.0)
    broad = sech2_spec(1.0, 5.0, 399)  # sech^2(5) is far above the tail tolerance
    with pytest.raises(ValueError):
        transfer_matrix_smatrix(broad, 1.0)


def test_sech2_phases_match_oracle():
    cfg = thresholds()["sech2"]
    pair = build_schrodinger_1d(
        sech2_spec(cfg["depth"], cfg["scatter_half_width"], cfg["scatter_n"]))
    phases, _ = extrapolated_phases(pair, cfg["probe"], cfg["eps_ladder"])
    oracle = transfer_matrix_smatrix(
        sech2_spec(cfg["depth"], cfg["oracle_half_width"], 999), cfg["probe"])
    assert len(phases) == 2
    dist = np.abs(np.exp(1j * phases)[:, None] - np.exp(1j * oracle.phases)[None, :])
    match = max(dist.min(axis=1).max(), dist.min(axis=0).max())
    assert match <= 2e-2


def test_fiber_trace_consistency():
    # trace of the smoothed density extrapolates to the continuum fiber trace
    cfg = thresholds()["sech2"]
    pair = build_schrodinger_1d(
        sech2_spec(cfg["depth"], cfg["scatter_half_width"], cfg["scatter_n"]))
    oracle = transfer_matrix_smatrix(
        sech2_spec(cfg["depth"], cfg["oracle_half_width"], 999), cfg["probe"])
    ladder = cfg["eps_ladder"]
    traces = [np.trace(smoothed_density(pair, cfg["probe"], e)[0]).real
              for e in ladder]
    extrapolated = neville(ladder, traces)
    assert extrapolated == pytest.approx(oracle.fiber_trace, abs=0.02 * oracle.fiber_trace)


def test_counting_shift_smoothing():
    pair = random_gapped_pair(10, 3, seed=44)
    # eps -> 0 recovers the integer counting shift
    from projdiff.scattering import integer_counting_shift
    xi_small = smoothed_counting_shift(pair, 0.0, 1e-9)
    assert xi_small == pytest.approx(integer_counting_shift(pair, 0.0), abs=1e-6)


def test_birman_krein_zero_perturbation():
    pair = zero_v0_pair()
    res = birman_krein_check(pair, 0.0, 0.1)
    assert res.det_s == pytest.approx(1.0)
    assert res.counting_shift == pytest.approx(0.0, abs=1e-12)
    assert res.defect <= 1e-12


def test_birman_krein_weak_square_well():
    pair = build_schrodinger_1d(square_well_spec(0.3, 1.0, 60.0, 1199))
    _, xi, defect = birman_krein_extrapolated(pair, 1.0, [0.3, 0.2, 0.1, 0.05])
    assert defect <= 5e-2
    assert xi < 0  # attractive well pulls levels down through the probe
