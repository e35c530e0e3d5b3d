"""Resolvent sandwiches, smoothed spectral densities, the stationary
scattering matrix, its defect operator, and an independent transfer-matrix
oracle for 1-d Schrodinger pairs.

Limits onto the real axis are realized as an epsilon ladder: every
quantity is computed at z = probe + i*eps for a decreasing sequence of
eps and scalar outputs are Neville-extrapolated to eps = 0.  A pleasant
exact fact keeps the ladder honest: the smoothed stationary matrix

    S_eps = I - 2*pi*i * sqrt(F0') (V0 - V0 T(probe+i*eps) V0) sqrt(F0')

is exactly unitary at every eps > 0 (same algebra as the defect-operator
identity), so its eigenvalues always live on the unit circle and only
their phases move with eps.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.integrate import solve_ivp

from .errors import GapViolationError, SingularSandwichError

__all__ = [
    "ResolventSandwich", "ScatteringBundle", "TransferMatrixResult",
    "resolvent_sandwich", "smoothed_density", "scattering_bundle",
    "stationary_smatrix", "defect_matrix", "scattering_predictions",
    "neville", "phase_ladder", "extrapolated_phases",
    "transfer_matrix_smatrix", "birman_krein_check", "smoothed_counting_shift",
    "birman_krein_extrapolated",
]

C1_RESIDUAL_TOL = 1e-9
COND_LIMIT = 1e12
DEFAULT_PHASE_FLOOR = 0.1


# ---------------------------------------------------------------------------
# resolvent sandwiches and densities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResolventSandwich:
    """T0(z) = G (H0-z)^-1 G* and T(z) = G (H-z)^-1 G* with Im z > 0."""

    z: complex
    t0: np.ndarray
    t: np.ndarray
    factor_residual: float   # || T - T0 (I + V0 T0)^-1 ||


def _tridiag_bands(m, z):
    n = m.shape[0]
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = np.diagonal(m, 1)
    ab[1, :] = np.diagonal(m) - z
    ab[2, :-1] = np.diagonal(m, -1)
    return ab


def _sandwich_one(mat, g, z, tridiagonal):
    rhs = g.conj().T
    if tridiagonal:
        y = sla.solve_banded((1, 1), _tridiag_bands(mat, z), rhs)
    else:
        y = np.linalg.solve(mat - z * np.eye(mat.shape[0]), rhs)
    return g @ y


def resolvent_sandwich(pair, z, cond_limit=COND_LIMIT):
    """Both sandwiches at a point in the upper half plane.

    The resolvent identity T = T0 (I + V0 T0)^-1 is verified and its
    residual returned; a condition number of I + V0 T0 beyond
    ``cond_limit`` raises :class:`SingularSandwichError`.
    """
    z = complex(z)
    if not z.imag > 0:
        raise ValueError("need Im z > 0")
    tri = bool(pair.meta.get("tridiagonal"))
    t0 = _sandwich_one(pair.h0, pair.g, z, tri)
    t = _sandwich_one(pair.h, pair.g, z, tri)
    m = np.eye(pair.kdim) + pair.v0 @ t0
    cond = np.linalg.cond(m)
    if cond > cond_limit:
        raise SingularSandwichError(cond)
    resid = float(np.linalg.norm(t - np.linalg.solve(m.conj().T, t0.conj().T).conj().T, 2))
    if resid > C1_RESIDUAL_TOL * max(1.0, np.linalg.norm(t, 2)):
        raise ArithmeticError(f"resolvent factor identity residual {resid:.3e}")
    return ResolventSandwich(z, t0, t, resid)


def _imag_part(m):
    return (m - m.conj().T) / 2j


def smoothed_density(pair, probe, eps, sandwich=None):
    """Smoothed densities (F0', F') = Im T0(probe+i*eps)/pi, Im T/pi.

    Both are PSD up to roundoff for eps > 0.
    """
    if eps <= 0:
        raise ValueError("need eps > 0")
    sw = sandwich or resolvent_sandwich(pair, probe + 1j * eps)
    return _imag_part(sw.t0) / np.pi, _imag_part(sw.t) / np.pi


def _psd_sqrt(m, clip=-1e-12):
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    if w.min() < clip * max(abs(w).max(), 1.0):
        raise ArithmeticError(f"matrix not PSD: min eigenvalue {w.min():.3e}")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


# ---------------------------------------------------------------------------
# stationary scattering matrix and defect operator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScatteringBundle:
    """Everything the stationary machinery produces at one (probe, eps)."""

    probe: float
    eps: float
    f0prime: np.ndarray
    fprime: np.ndarray
    smatrix: np.ndarray
    eigenvalues: np.ndarray          # of the smoothed stationary matrix
    phases: np.ndarray               # retained, sorted, in (0, 2*pi)
    retention_threshold: float
    unitarity_defect: float
    defect_operator: np.ndarray      # A = pi^2 sqrt(F0') V0 F' V0 sqrt(F0')
    identity_residual: float         # || (S-I)*(S-I)/4 - A ||
    prediction_a: float              # ||A||^(1/2) = ||S - I|| / 2
    band_edges: np.ndarray           # sin(theta/2) of retained phases, descending
    factor_residual: float


def scattering_bundle(pair, probe, eps, phase_floor=DEFAULT_PHASE_FLOOR):
    """Assemble the smoothed stationary matrix and defect operator.

    Eigenvalues with |ev - 1| above max(phase_floor, 10 * unitarity
    defect) are retained as scattering phases.  The finite-eps identity
    (S-I)*(S-I)/4 = A holds exactly; its residual is reported.
    """
    sw = resolvent_sandwich(pair, probe + 1j * eps)
    f0p, fp = smoothed_density(pair, probe, eps, sandwich=sw)
    root = _psd_sqrt(f0p)
    v0 = pair.v0
    core = v0 - v0 @ sw.t @ v0
    k = pair.kdim
    smat = np.eye(k) - 2j * np.pi * root @ core @ root
    evs = np.linalg.eigvals(smat)
    udef = float(np.linalg.norm(smat.conj().T @ smat - np.eye(k), 2))
    thr = max(float(phase_floor), 10.0 * udef)
    kept = evs[np.abs(evs - 1.0) > thr]
    phases = np.sort(np.mod(np.angle(kept), 2.0 * np.pi))
    amat = np.pi ** 2 * root @ v0 @ fp @ v0 @ root
    amat = 0.5 * (amat + amat.conj().T)
    diff = smat - np.eye(k)
    ident = float(np.linalg.norm(0.25 * diff.conj().T @ diff - amat, 2))
    a_pred = float(np.sqrt(max(np.max(np.linalg.eigvalsh(amat)), 0.0)))
    edges = np.sort(np.sin(phases / 2.0))[::-1]
    return ScatteringBundle(float(probe), float(eps), f0p, fp, smat, evs, phases,
                            thr, udef, amat, ident, a_pred, edges, sw.factor_residual)


def stationary_smatrix(pair, probe, eps, phase_floor=DEFAULT_PHASE_FLOOR):
    """Smoothed stationary matrix with retained phases (full bundle)."""
    return scattering_bundle(pair, probe, eps, phase_floor)


def defect_matrix(pair, probe, eps, phase_floor=DEFAULT_PHASE_FLOOR):
    """Bundle plus the half-norm ||S - I||/2 at one smoothing level.

    The bundle's ``prediction_a`` is ||A||^(1/2); it agrees with the
    returned half-norm to roundoff because the connecting identity is
    exact at every eps.
    """
    b = scattering_bundle(pair, probe, eps, phase_floor)
    half_norm = 0.5 * float(np.linalg.norm(b.smatrix - np.eye(pair.kdim), 2))
    return b, half_norm


def scattering_predictions(bundle):
    """(a, band edges) from a bundle's retained phases.

    a = max_n sin(theta_n / 2) = half the largest |e^{i theta} - 1|;
    empty retention means a = 0.
    """
    if len(bundle.phases) == 0:
        return 0.0, np.array([])
    edges = np.sort(np.sin(bundle.phases / 2.0))[::-1]
    return float(edges[0]), edges


# ---------------------------------------------------------------------------
# epsilon ladder
# ---------------------------------------------------------------------------

def neville(eps_values, samples):
    """Polynomial extrapolation of samples(eps) to eps = 0."""
    e = np.asarray(eps_values, dtype=float)
    v = np.array(samples, dtype=complex)
    if len(e) != len(v) or len(e) < 1:
        raise ValueError("need matching nonempty eps/sample sequences")
    m = len(e)
    for j in range(1, m):
        v[: m - j] = (e[: m - j] * v[1: m - j + 1] - e[j:] * v[: m - j]) \
            / (e[: m - j] - e[j:])
    out = v[0]
    return out.real if np.isrealobj(np.asarray(samples)) else out


def phase_ladder(pair, probe, eps_ladder, phase_floor=DEFAULT_PHASE_FLOOR):
    """Bundles at every rung of a decreasing eps ladder."""
    ladder = list(eps_ladder)
    if any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("eps ladder must be strictly decreasing")
    return [scattering_bundle(pair, probe, e, phase_floor) for e in ladder]


def _match_chains(bundles, radius=0.75):
    """Track retained eigenvalues across rungs by nearest-neighbor matching."""
    chains = [[complex(np.exp(1j * th))] for th in bundles[0].phases]
    for b in bundles[1:]:
        pool = list(np.exp(1j * b.phases))
        for chain in chains:
            if len(chain) == 0 or not pool:
                chain.clear()
                continue
            d = [abs(chain[-1] - c) for c in pool]
            i = int(np.argmin(d))
            if d[i] <= radius:
                chain.append(pool.pop(i))
            else:
                chain.clear()
    return [c for c in chains if len(c) == len(bundles)]


def extrapolated_phases(pair, probe, eps_ladder, phase_floor=DEFAULT_PHASE_FLOOR):
    """Retained phases extrapolated to eps = 0 along matched chains.

    Only chains present at every rung are extrapolated.  Returns
    (phases ascending, bundles).
    """
    bundles = phase_ladder(pair, probe, eps_ladder, phase_floor)
    chains = _match_chains(bundles)
    ladder = [b.eps for b in bundles]
    out = []
    for chain in chains:
        angles = np.unwrap([np.angle(c) for c in chain])
        out.append(float(np.mod(neville(ladder, angles), 2.0 * np.pi)))
    return np.sort(np.asarray(out)), bundles


# ---------------------------------------------------------------------------
# transfer-matrix oracle (1-d Schrodinger)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransferMatrixResult:
    """Plane-wave scattering data at energy probe = k^2.

    ``smatrix`` is [[t, r'], [r, t']] in the (left-in, right-in) channel
    basis; ``fiber_trace`` is the trace of the fiber density F0'(probe)
    = integral of |V| / (2*pi*k).
    """

    k: float
    r: complex
    t: complex
    r_right: complex
    t_right: complex
    smatrix: np.ndarray
    phases: np.ndarray
    flux_defect: float
    unitarity_defect: float
    fiber_trace: float


def _integrate_plane_wave(potential, lam, x_from, x_to, mover, rtol):
    """Integrate -u'' + V u = lam*u starting from the pure exponential
    exp(i*mover*k*x) at ``x_from``."""
    def rhs(x, y):
        u = y[0] + 1j * y[2]
        upp = (potential(x) - lam) * u
        return [y[1], upp.real, y[3], upp.imag]

    k = np.sqrt(lam)
    u0 = np.exp(1j * mover * k * x_from)
    du0 = 1j * mover * k * u0
    sol = solve_ivp(rhs, [x_from, x_to], [u0.real, du0.real, u0.imag, du0.imag],
                    rtol=rtol, atol=rtol * 1e-2, method="RK45")
    if not sol.success:
        raise ArithmeticError(f"plane-wave integration failed: {sol.message}")
    u = sol.y[0, -1] + 1j * sol.y[2, -1]
    du = sol.y[1, -1] + 1j * sol.y[3, -1]
    return u, du


def transfer_matrix_smatrix(spec, probe, rtol=1e-11, tail_tol=1e-8):
    """Stationary 2x2 scattering matrix by integrating -u'' + V u = probe*u.

    Requires probe > 0 and a potential that has decayed at the ends of the
    window (checked against ``tail_tol``).
    """
    if probe <= 0:
        raise ValueError("need probe > 0")
    x_edge = spec.half_width
    tail = max(abs(float(spec.potential(np.asarray(x_edge)))),
               abs(float(spec.potential(np.asarray(-x_edge)))))
    if tail > tail_tol:
        raise ValueError(f"potential tail {tail:.2e} not decayed at |x| = {x_edge}")
    k = float(np.sqrt(probe))
    pot = lambda x: float(spec.potential(np.asarray(x)))

    # left incidence: integrate the pure transmitted right-mover backward from +X
    u, du = _integrate_plane_wave(pot, probe, x_edge, -x_edge, +1, rtol)
    alpha = (1j * k * u + du) / (2j * k) * np.exp(+1j * k * x_edge)
    beta = (1j * k * u - du) / (2j * k) * np.exp(-1j * k * x_edge)
    r, t = beta / alpha, 1.0 / alpha

    # right incidence: integrate the pure transmitted left-mover forward from -X
    u, du = _integrate_plane_wave(pot, probe, -x_edge, x_edge, -1, rtol)
    gamma = (1j * k * u - du) / (2j * k) * np.exp(+1j * k * x_edge)
    delta = (1j * k * u + du) / (2j * k) * np.exp(-1j * k * x_edge)
    r_right, t_right = delta / gamma, 1.0 / gamma

    smat = np.array([[t, r_right], [r, t_right]])
    flux = abs(abs(r) ** 2 + abs(t) ** 2 - 1.0)
    udef = float(np.linalg.norm(smat.conj().T @ smat - np.eye(2), 2))
    phases = np.sort(np.mod(np.angle(np.linalg.eigvals(smat)), 2.0 * np.pi))
    xs = np.linspace(-x_edge, x_edge, 20001)
    vtrace = float(np.trapezoid(np.abs(spec.potential(xs)), xs) / (2.0 * np.pi * k))
    return TransferMatrixResult(k, r, t, r_right, t_right, smat, phases,
                                flux, udef, vtrace)


# ---------------------------------------------------------------------------
# counting shift and the Birman-Krein relation
# ---------------------------------------------------------------------------

def smoothed_counting_shift(pair, probe, eps):
    """Eigenvalue-counting shift trace(E0 - E) smoothed at scale eps.

    Each sharp step 1[eigenvalue < probe] is replaced by the Lorentzian
    step 1/2 + arctan((probe - eigenvalue)/eps)/pi; at eps -> 0 this
    recovers the integer -trace D(probe), while for eps above the local
    level spacing it resolves the weak (distributional) limit of the
    counting shift.
    """
    e0, e1 = pair.eigensystems()
    step = lambda w: 0.5 + np.arctan((probe - w) / eps) / np.pi
    return float(np.sum(step(e0.eigenvalues)) - np.sum(step(e1.eigenvalues)))


def integer_counting_shift(pair, probe):
    e0, e1 = pair.eigensystems()
    return int(np.sum(e0.eigenvalues < probe) - np.sum(e1.eigenvalues < probe))


@dataclass(frozen=True)
class BirmanKreinResult:
    det_s: complex
    counting_shift: float
    defect: float
    integer_shift: int
    eps: float


def birman_krein_check(pair, probe, eps, phase_floor=DEFAULT_PHASE_FLOOR,
                       gap_tol=1e-8):
    """det S versus exp(-2*pi*i*xi) at one smoothing level.

    det S is the product of retained stationary phases; xi is the
    smoothed counting shift at the same eps.  The raw integer shift is
    carried along for reference.
    """
    e0, e1 = pair.eigensystems()
    for w in (e0.eigenvalues, e1.eigenvalues):
        nearest = w[np.argmin(np.abs(w - probe))]
        if abs(nearest - probe) < gap_tol:
            raise GapViolationError(probe, nearest)
    bundle = scattering_bundle(pair, probe, eps, phase_floor)
    det_s = complex(np.exp(1j * np.sum(bundle.phases)))
    xi = smoothed_counting_shift(pair, probe, eps)
    defect = abs(det_s - np.exp(-2j * np.pi * xi))
    return BirmanKreinResult(det_s, xi, float(defect),
                             integer_counting_shift(pair, probe), float(eps))


def birman_krein_extrapolated(pair, probe, eps_ladder, xi_ladder=None,
                              phase_floor=DEFAULT_PHASE_FLOOR):
    """Ladder-extrapolated (det S, xi, defect).

    Phases and the smoothed counting shift are extrapolated separately;
    ``xi_ladder`` defaults to the phase ladder.  The extrapolation for xi
    must stay in the regime eps > local level spacing, where the smoothed
    shift tracks its continuum limit.
    """
    phases, _ = extrapolated_phases(pair, probe, eps_ladder, phase_floor)
    det_s = complex(np.exp(1j * np.sum(phases)))
    ladder = list(xi_ladder) if xi_ladder is not None else list(eps_ladder)
    xi_vals = [smoothed_counting_shift(pair, probe, e) for e in ladder]
    xi = float(neville(ladder, xi_vals))
    defect = abs(det_s - np.exp(-2j * np.pi * xi))
    return det_s, xi, float(defect)
