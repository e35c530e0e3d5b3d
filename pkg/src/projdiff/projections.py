"""Spectral projections below a probe, the projection difference and its
spectrum, swap-subspace dimensions, block and corner identities.

The difference D = E(probe) - E0(probe) of two orthogonal projections is
self-adjoint with spectrum in [-1, 1].  Its +-1 eigenspaces are the exact
swap subspaces; the rest of the nonzero spectrum pairs exactly as +-x,
which the pairing-defect metric quantifies.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GapViolationError
from .models import shift_pair

__all__ = [
    "DifferenceReport", "spectral_projection", "projection_difference",
    "dsquared_block_check", "corner_spectrum", "fill_metrics",
    "hausdorff_distance", "interval_hausdorff", "pairing_defect",
]

PROBE_GAP_TOL = 1e-8
SWAP_CLUSTER_TOL = 1e-6
PAIRING_BAND = 1e-6


def spectral_projection(decomp, probe, gap_tol=PROBE_GAP_TOL):
    """Orthogonal projection onto eigenvectors with eigenvalue below ``probe``.

    Raises :class:`GapViolationError` carrying the nearest eigenvalue when
    one sits within ``gap_tol`` of the probe.
    """
    w = decomp.eigenvalues
    nearest = w[np.argmin(np.abs(w - probe))] if len(w) else None
    if nearest is not None and abs(nearest - probe) < gap_tol:
        raise GapViolationError(probe, nearest)
    v = decomp.eigenvectors[:, w < probe]
    return v @ v.conj().T


def hausdorff_distance(a, b):
    """Hausdorff distance between two finite point sets on the line."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if len(a) == 0 and len(b) == 0:
        return 0.0
    if len(a) == 0 or len(b) == 0:
        return np.inf
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def fill_metrics(values, lo, hi):
    """(max gap, one-sided Hausdorff) of a value set against [lo, hi].

    Max gap is between consecutive sorted values inside the interval;
    the one-sided Hausdorff distance is sup over the interval of the
    distance to the value set, measuring coverage only.
    """
    inside = np.sort(values[(values >= lo) & (values <= hi)])
    if len(inside) == 0:
        return float(hi - lo), float(hi - lo)
    gaps = np.diff(inside)
    max_gap = float(gaps.max()) if len(gaps) else 0.0
    cover = max(inside[0] - lo, hi - inside[-1])
    if len(gaps):
        cover = max(cover, 0.5 * gaps.max())
    return max_gap, float(cover)


def interval_hausdorff(values, lo, hi):
    """Two-sided Hausdorff distance between a value set and [lo, hi]."""
    v = np.asarray(values, dtype=float)
    if len(v) == 0:
        return float(max(hi - lo, 0.0))
    outlier = float(max(0.0, v.max() - hi, lo - v.min()))
    _, cover = fill_metrics(v, lo, hi)
    return max(outlier, cover)


def pairing_defect(spectrum, band=PAIRING_BAND):
    """Hausdorff distance between the middle spectrum and its negation.

    The middle spectrum is every eigenvalue x with band < |x| < 1 - band;
    for an exact projection difference it is symmetric, so the defect is
    a roundoff diagnostic.
    """
    s = np.asarray(spectrum, dtype=float)
    mid = s[(np.abs(s) > band) & (np.abs(s) < 1.0 - band)]
    if len(mid) == 0:
        return 0.0
    return hausdorff_distance(mid, -mid)


@dataclass(frozen=True)
class DifferenceReport:
    """Spectrum of D(probe) with swap dimensions and fill metrics."""

    probe: float
    spectrum: np.ndarray
    dim_plus: int
    dim_minus: int
    pairing_defect: float
    gap_h0: float
    gap_h: float
    max_gap: float
    coverage_distance: float
    target: tuple

    @property
    def extremes(self):
        return float(self.spectrum.min()), float(self.spectrum.max())


def _gaps_at(pair, probe, gap_tol):
    e0, e1 = pair.eigensystems()
    g0 = float(np.min(np.abs(e0.eigenvalues - probe)))
    g1 = float(np.min(np.abs(e1.eigenvalues - probe)))
    if min(g0, g1) < gap_tol:
        w = e0.eigenvalues if g0 <= g1 else e1.eigenvalues
        raise GapViolationError(probe, w[np.argmin(np.abs(w - probe))])
    return e0, e1, g0, g1


def projection_difference(pair, probe, target=None, gap_tol=PROBE_GAP_TOL,
                          swap_tol=SWAP_CLUSTER_TOL):
    """Full spectrum of D(probe) = E(probe) - E0(probe) with metrics.

    ``target`` is the interval the fill metrics are computed against,
    defaulting to [-1, 1].
    """
    e0, e1, g0, g1 = _gaps_at(pair, probe, gap_tol)
    p0 = spectral_projection(e0, probe, gap_tol)
    p1 = spectral_projection(e1, probe, gap_tol)
    spec = np.sort(np.linalg.eigvalsh(p1 - p0))
    dim_plus = int(np.sum(spec > 1.0 - swap_tol))
    dim_minus = int(np.sum(spec < -1.0 + swap_tol))
    lo, hi = target if target is not None else (-1.0, 1.0)
    max_gap, cover = fill_metrics(spec, lo, hi)
    return DifferenceReport(float(probe), spec, dim_plus, dim_minus,
                            pairing_defect(spec), g0, g1, max_gap, cover,
                            (float(lo), float(hi)))


def dsquared_block_check(pair, probe, gap_tol=PROBE_GAP_TOL):
    """Residual of the block decomposition of D^2.

    D^2 equals the sum of the two compressed corners
    E0(below) E(above) E0(below) + E0(above) E(below) E0(above); this is
    an exact algebraic identity, so the residual is a roundoff check.
    """
    e0, e1, _, _ = _gaps_at(pair, probe, gap_tol)
    p0 = spectral_projection(e0, probe, gap_tol)
    p1 = spectral_projection(e1, probe, gap_tol)
    eye = np.eye(pair.dim)
    d2 = (p1 - p0) @ (p1 - p0)
    rhs = p0 @ (eye - p1) @ p0 + (eye - p0) @ p1 @ (eye - p0)
    return float(np.linalg.norm(d2 - rhs, 2))


def corner_spectrum(pair, probe, sign=+1, gap_tol=PROBE_GAP_TOL):
    """Spectrum of E0(side) E(opposite) E0(side) compressed to Ran E0(side).

    ``sign`` = +1 compresses onto the H0 spectral subspace above the
    probe, -1 onto the one below.  The probe is recentered to 0 first;
    eigenvalues lie in [0, 1], and in the limit they fill [0, ||A(0)||]
    with A the scattering defect operator.
    """
    centered = shift_pair(pair, probe)
    e0, e1, _, _ = _gaps_at(centered, 0.0, gap_tol)
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    u0 = e0.eigenvectors[:, (e0.eigenvalues > 0) if sign > 0 else (e0.eigenvalues < 0)]
    pmid = spectral_projection(e1, 0.0, gap_tol)
    if sign > 0:
        inner = pmid                       # E(below 0)
    else:
        inner = np.eye(pair.dim) - pmid    # E(above 0)
    compressed = u0.conj().T @ inner @ u0
    return np.sort(np.linalg.eigvalsh(0.5 * (compressed + compressed.conj().T)))
