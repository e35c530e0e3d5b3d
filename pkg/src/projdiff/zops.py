"""Semigroup-smeared operators and the product representation of the
cross projection E(below 0) E0(above 0).

With the pair recentered so the probe is 0 and a spectral gap on both
sides, define on the time half line

    Z0 f = integral exp(-t H0) E0(above) G* f(t) dt,
    Z  f = integral exp(+t H)  E(below)  G* f(t) dt.

Both integrands decay at the spectral gap rate; the discretization keeps
the semigroups restricted to the decaying subspaces so no growing mode
is ever exponentiated.  The product identity

    E(below) E0(above) = -Z (V0 x I) Z0*

follows by integrating d/dt [exp(tH) E V E0 exp(-tH0)]; its time
quadrature is cross-checked against a quadrature-free Sylvester solve on
the compressed subspaces, which is the independent oracle.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GapViolationError
from .linalg import sylvester_solve
from .quadrature import make_quadrature
from .scattering import neville, smoothed_density

__all__ = ["ZOperators", "build_z_ops", "product_representation_check",
           "zop_model_comparison", "default_time_rule"]

GAP_TOL = 1e-8


def _split_systems(pair, gap_tol):
    e0, e1 = pair.eigensystems()
    gap = min(np.min(np.abs(e0.eigenvalues)), np.min(np.abs(e1.eigenvalues)))
    if gap < gap_tol:
        w = np.concatenate([e0.eigenvalues, e1.eigenvalues])
        raise GapViolationError(0.0, w[np.argmin(np.abs(w))])
    up0 = e0.eigenvalues > 0
    dn1 = e1.eigenvalues < 0
    return e0, e1, up0, dn1, float(gap)


def default_time_rule(gap, n_t=120, scale_over_gap=2.0):
    """Exp-mapped rule whose scale tracks the spectral gap.

    With scale = s/gap the integrand components become (1-u)^(s*|lam|/gap)
    after the change of variables, smooth on [0, 1), so Gauss-Legendre
    converges spectrally.
    """
    return make_quadrature("halfline-exp-mapped", n_t, scale=scale_over_gap / gap)


@dataclass(frozen=True)
class ZOperators:
    """Discrete Z and Z0 with their time rule and the spectral gap at 0."""

    z0: np.ndarray          # dim x (n_t * kdim)
    z: np.ndarray
    t_rule: object
    gap: float
    kdim: int

    @property
    def n_t(self):
        return self.t_rule.n


def _stack_columns(basis, lam, coupling, t_rule, sign):
    """Columns sqrt(w_i) * basis exp(sign*t_i*lam) (basis* G*) per time node."""
    decay = np.exp(np.outer(sign * lam, t_rule.nodes))     # (r, n_t)
    r, k = coupling.shape
    cols = decay[:, :, None] * coupling[:, None, :]        # (r, n_t, k)
    cols *= np.sqrt(t_rule.weights)[None, :, None]
    return basis @ cols.reshape(r, t_rule.n * k)


def build_z_ops(pair, t_rule=None, gap_tol=GAP_TOL):
    """Assemble Z and Z0 on a time rule (default tied to the gap).

    The semigroups are evaluated through the spectral decompositions
    restricted to the decaying subspaces, so every stored exponent is
    negative; this is the structural form of the overflow guard.
    """
    e0, e1, up0, dn1, gap = _split_systems(pair, gap_tol)
    t_rule = t_rule or default_time_rule(gap)
    gstar = pair.g.conj().T
    u0 = e0.eigenvectors[:, up0]
    w0 = u0.conj().T @ gstar
    z0 = _stack_columns(u0, e0.eigenvalues[up0], w0, t_rule, -1.0)
    u1 = e1.eigenvectors[:, dn1]
    w1 = u1.conj().T @ gstar
    z = _stack_columns(u1, e1.eigenvalues[dn1], w1, t_rule, +1.0)
    return ZOperators(z0, z, t_rule, gap, pair.kdim)


@dataclass(frozen=True)
class ProductCheck:
    residual_direct: float
    residual_oracle: float
    gap: float
    n_t: int


def product_representation_check(pair, t_rule=None, gap_tol=GAP_TOL):
    """Residuals of E(below) E0(above) = -Z (V0 x I) Z0*.

    ``residual_direct`` uses the time quadrature; ``residual_oracle``
    replaces the integral by the unique solution of the Sylvester
    equation on the compressed gapped subspaces (quadrature-free, so it
    certifies the quadrature route).
    """
    e0, e1, up0, dn1, gap = _split_systems(pair, gap_tol)
    zops = build_z_ops(pair, t_rule, gap_tol)
    u0 = e0.eigenvectors[:, up0]
    u1 = e1.eigenvectors[:, dn1]
    cross = u1 @ (u1.conj().T @ u0) @ u0.conj().T      # E(below) E0(above)
    k, n_t = pair.kdim, zops.n_t
    zv = zops.z.reshape(pair.dim, n_t, k) @ pair.v0
    product = zv.reshape(pair.dim, n_t * k) @ zops.z0.conj().T
    residual_direct = float(np.linalg.norm(cross + product, 2))

    v = pair.h - pair.h0
    rhs = -(u1.conj().T @ v @ u0)
    a = np.diag(e1.eigenvalues[dn1]).astype(complex)
    b = np.diag(e0.eigenvalues[up0]).astype(complex)
    x = sylvester_solve(a, b, rhs)
    residual_oracle = float(np.linalg.norm(x + u1.conj().T @ u0, 2))
    return ProductCheck(residual_direct, residual_oracle, gap, n_t)


def _extrapolated_density(pair, eps_ladder):
    """Entrywise ladder extrapolation of the smoothed densities at probe 0."""
    f0_rungs, f_rungs = [], []
    for eps in eps_ladder:
        f0, f = smoothed_density(pair, 0.0, eps)
        f0_rungs.append(f0)
        f_rungs.append(f)
    lad = list(eps_ladder)
    f0x = np.zeros_like(f0_rungs[0])
    fx = np.zeros_like(f_rungs[0])
    k = f0x.shape[0]
    for i in range(k):
        for j in range(k):
            f0x[i, j] = neville(lad, [m[i, j] for m in f0_rungs])
            fx[i, j] = neville(lad, [m[i, j] for m in f_rungs])
    return _psd_clip(f0x), _psd_clip(fx)


def _psd_clip(m):
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (v * np.clip(w, 0.0, None)) @ v.conj().T


def zop_model_comparison(pair, t_rule=None, eps_ladder=None, gap_tol=GAP_TOL):
    """Singular values of Z0* Z0 and Z* Z against the model Hankel blocks.

    The models are the Hankel matrices with kernel profile
    (1 - exp(-tau))/tau tensored with the extrapolated densities F0'(0)
    and F'(0).  Reported: singular values of the differences, a decay
    exponent fit, partial nuclear sums, and the ladder used.
    """
    from .hankel import gamma_kernel

    zops = build_z_ops(pair, t_rule, gap_tol)
    eps_ladder = list(eps_ladder) if eps_ladder is not None \
        else [16.0 * zops.gap, 8.0 * zops.gap, 4.0 * zops.gap]
    f0x, fx = _extrapolated_density(pair, eps_ladder)
    t, w = zops.t_rule.nodes, zops.t_rule.weights
    sq = np.sqrt(w)
    profile = sq[:, None] * gamma_kernel(t[:, None] + t[None, :]) * sq[None, :]
    model0 = np.kron(profile, f0x)
    model1 = np.kron(profile, fx)
    gram0 = zops.z0.conj().T @ zops.z0
    gram1 = zops.z.conj().T @ zops.z
    out = {"eps_ladder": eps_ladder, "gap": zops.gap, "n_t": zops.n_t,
           "norm_gram0": float(np.linalg.norm(gram0, 2)),
           "norm_gram1": float(np.linalg.norm(gram1, 2))}
    for label, gram, model in (("z0", gram0, model0), ("z", gram1, model1)):
        sv = np.linalg.svd(gram - model, compute_uv=False)
        out[f"sigma_{label}"] = sv
        out[f"nuclear_partial_{label}"] = np.cumsum(sv)[:20]
        lead = sv[:10][sv[:10] > 1e-14]
        if len(lead) >= 3:
            idx = np.arange(1, len(lead) + 1)
            slope = np.polyfit(np.log(idx), np.log(lead), 1)[0]
            out[f"decay_exponent_{label}"] = float(slope)
    return out
