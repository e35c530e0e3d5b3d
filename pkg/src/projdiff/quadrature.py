"""Quadrature rules on bounded intervals and the half line.

Four node/weight families cover everything the lab integrates:

* ``bounded-legendre`` -- Gauss-Legendre mapped to [a, b]; exact for
  polynomials of degree <= 2n - 1.
* ``halfline-exp-mapped`` -- the substitution t = -scale*log(1 - u)
  composed with Gauss-Legendre on (0, 1).  Integrands decaying like
  exp(-t/scale) become polynomials in u, so convergence is spectral.
* ``halfline-laguerre-like`` -- Gauss-Laguerre nodes with the weight
  exp(x) folded back into the quadrature weights.
* ``halfline-log`` -- t = exp(v) with v Gauss-Legendre on
  [center - half_width, center + half_width].  Covers many decades of
  dynamic range; this is the natural grid for Hankel/Carleman kernels
  whose spectral structure lives in log t.  With center = 0 the node
  set is closed under t -> 1/t (Legendre nodes are symmetric), which
  the dilation-involution checks rely on.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["QuadratureRule", "make_quadrature", "reciprocal_indices"]


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights with a record of the supporting interval.

    ``support`` is ``("bounded", a, b)`` or ``("halfline",)``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    support: tuple

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.ndim != 1 or weights.shape != nodes.shape:
            raise ValueError("nodes and weights must be matching 1-d arrays")
        if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
            raise ValueError("non-finite quadrature data")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")

    @property
    def n(self):
        return len(self.nodes)

    def integrate(self, f):
        """Apply the rule to a callable or to an array of node samples."""
        vals = f(self.nodes) if callable(f) else np.asarray(f)
        return float(np.real_if_close(np.sum(self.weights * vals)))


def _legendre(n, a, b):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def make_quadrature(kind, n, **params):
    """Build a :class:`QuadratureRule` of the requested kind.

    Parameters
    ----------
    kind : str
        One of ``bounded-legendre`` (params ``a``, ``b``),
        ``halfline-exp-mapped`` (param ``scale``),
        ``halfline-laguerre-like`` (no params, n <= 120),
        ``halfline-log`` (params ``half_width``, ``center``).
    n : int
        Node count, at least 2.
    """
    if n < 2:
        raise ValueError("need at least 2 nodes")
    if kind == "bounded-legendre":
        a = float(params.pop("a", 0.0))
        b = float(params.pop("b", 1.0))
        _reject_extras(kind, params)
        if not b > a:
            raise ValueError("need b > a")
        nodes, weights = _legendre(n, a, b)
        return QuadratureRule(nodes, weights, ("bounded", a, b))
    if kind == "halfline-exp-mapped":
        scale = float(params.pop("scale", 1.0))
        _reject_extras(kind, params)
        if scale <= 0:
            raise ValueError("scale must be positive")
        u, wu = _legendre(n, 0.0, 1.0)
        nodes = -scale * np.log1p(-u)
        weights = scale * wu / (1.0 - u)
        return QuadratureRule(nodes, weights, ("halfline",))
    if kind == "halfline-laguerre-like":
        _reject_extras(kind, params)
        if n > 120:
            raise ValueError("laguerre-like weights overflow beyond n = 120")
        x, w = np.polynomial.laguerre.laggauss(n)
        weights = w * np.exp(x)
        if not np.all(np.isfinite(weights)):
            raise ValueError("laguerre-like weights overflowed")
        return QuadratureRule(x, weights, ("halfline",))
    if kind == "halfline-log":
        half_width = float(params.pop("half_width", 20.0))
        center = float(params.pop("center", 0.0))
        _reject_extras(kind, params)
        if half_width <= 0:
            raise ValueError("half_width must be positive")
        v, wv = _legendre(n, center - half_width, center + half_width)
        nodes = np.exp(v)
        return QuadratureRule(nodes, wv * nodes, ("halfline",))
    raise ValueError(f"unsupported quadrature kind: {kind!r}")


def _reject_extras(kind, params):
    if params:
        raise ValueError(f"unknown parameters for {kind}: {sorted(params)}")


def reciprocal_indices(rule):
    """Index permutation sigma with nodes[sigma[i]] = 1/nodes[i].

    Only log rules centered at 0 are closed under inversion; anything
    else raises.
    """
    nodes = rule.nodes
    sigma = len(nodes) - 1 - np.arange(len(nodes))
    if not np.allclose(nodes[sigma] * nodes, 1.0, rtol=1e-12, atol=0.0):
        raise ValueError("rule is not reciprocal-symmetric")
    return sigma
