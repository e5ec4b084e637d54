"""Quadrature building blocks.

Three tools the transform routines share:

* ``tanh_sinh`` -- double-exponential rule on a finite panel.  Nodes
  cluster double-exponentially at the endpoints, so integrable power or
  log singularities at a panel edge cost nothing extra.  The error
  estimate comes from the difference between successive refinement
  levels.
* ``gauss_legendre`` / ``panel_integrals`` -- fixed-order Gauss-Legendre
  applied to a batch of panels with a single vectorized call to the
  integrand.
* ``averaged_alternating_sum`` -- iterated averaging (Euler-style) of the
  partial sums of a series whose tail alternates in sign with slowly
  varying magnitude.  This is how half-period panel sums of oscillatory
  integrals are accelerated; for a decreasing envelope consecutive
  partial sums bracket the limit, which grounds the error estimate.

All routines are deterministic, hold no mutable state, and reduce with
numpy's pairwise summation, so results do not depend on evaluation order
or on how callers distribute work across processes.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError

# Distance below which a tanh-sinh node is considered to sit on the panel
# edge; contributions there are double-exponentially negligible for any
# integrable endpoint singularity milder than x**(-0.95).
_EDGE_FLOOR = 1e-280


def _tanh_sinh_nodes(h: float, u_max: float, refine: bool):
    """Abscissa parameters for one tanh-sinh level.

    Level 0 (refine=False) uses all multiples of h in [-u_max, u_max];
    refinements use only the odd multiples of the new, halved h.
    """
    if refine:
        u = np.arange(1.0, math.floor(u_max / h) + 1.0)
        u = h * np.concatenate([-u[::-1], u])
        u = u[np.abs(np.round(u / (2.0 * h)) * 2.0 * h - u) > 0.25 * h]
    else:
        n = math.floor(u_max / h)
        u = h * np.arange(-n, n + 1.0)
    return u


def _tanh_sinh_level(f, a, b, u):
    half = 0.5 * (b - a)
    w = 0.5 * math.pi * np.sinh(u)
    # Distance of each node from the nearer endpoint, computed through the
    # logistic form of 1 -+ tanh(w) so it stays accurate when tanh
    # saturates.
    d = half * 2.0 / (1.0 + np.exp(2.0 * np.abs(w)))
    x = np.where(u < 0.0, a + d, b - d)
    with np.errstate(over="ignore"):
        weight = 0.5 * math.pi * np.cosh(u) / np.cosh(w) ** 2
    keep = (d > _EDGE_FLOOR * max(1.0, abs(half))) & (weight > 0.0) & (x > a) & (x < b)
    if not np.any(keep):
        return 0.0
    vals = np.asarray(f(x[keep]), dtype=float)
    contrib = vals * weight[keep]
    contrib = contrib[np.isfinite(contrib)]
    return half * float(np.sum(contrib))


def tanh_sinh(f, a: float, b: float, rel_tol: float = 1e-12,
              abs_tol: float = 0.0, max_level: int = 9, u_max: float = 6.0):
    """Integrate ``f`` over the finite panel [a, b].

    ``f`` must accept an ndarray of interior points and return an ndarray.
    Returns ``(value, error_estimate)`` where the estimate is the change
    produced by the final mesh refinement.
    """
    if not (b > a):
        raise ValueError("tanh_sinh requires b > a")
    h = 1.0
    total = _tanh_sinh_level(f, a, b, _tanh_sinh_nodes(h, u_max, refine=False)) * h
    err = abs(total) + 1.0
    for _ in range(max_level):
        h *= 0.5
        add = _tanh_sinh_level(f, a, b, _tanh_sinh_nodes(h, u_max, refine=True))
        new_total = 0.5 * total + h * add
        err = abs(new_total - total)
        total = new_total
        if err <= max(abs_tol, rel_tol * abs(total)):
            break
    return total, err


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int):
    """Cached Gauss-Legendre nodes and weights on [-1, 1]."""
    got = _GL_CACHE.get(n)
    if got is None:
        got = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = got
    return got


def panel_nodes(edges: np.ndarray, n: int):
    """Gauss-Legendre nodes and weights for every panel [edges[i], edges[i+1]].

    Returns ``(x, w)`` with shape (n_panels, n); a single integrand call on
    ``x.ravel()`` followed by ``(vals * w).sum(axis=1)`` integrates all
    panels at once.
    """
    nodes, weights = gauss_legendre(n)
    edges = np.asarray(edges, dtype=float)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = mid[:, None] + half[:, None] * nodes[None, :]
    w = half[:, None] * weights[None, :]
    return x, w


def panel_integrals(f, edges: np.ndarray, n: int = 16) -> np.ndarray:
    """Integral of ``f`` over each consecutive panel of ``edges``."""
    x, w = panel_nodes(edges, n)
    vals = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    return np.sum(vals * w, axis=1)


def averaged_alternating_sum(terms, max_depth: int = 24):
    """Accelerated sum of a series whose tail alternates in sign.

    ``terms`` are the raw (signed) terms.  Returns ``(value, estimate)``:
    the deepest iterated average of the partial sums and the magnitude of
    the final averaging correction.  For terms with decreasing magnitude
    the true limit lies between consecutive partial sums, so the first
    averaging level is a rigorous midpoint; deeper levels extrapolate and
    the returned estimate tracks their last change.
    """
    terms = np.asarray(terms, dtype=float)
    if terms.size == 0:
        return 0.0, 0.0
    table = np.cumsum(terms)
    value = float(table[-1])
    estimate = abs(float(terms[-1]))
    depth = min(max_depth, table.size - 1)
    for _ in range(depth):
        table = 0.5 * (table[1:] + table[:-1])
        new = float(table[-1])
        estimate = abs(new - value)
        value = new
    return value, estimate


def geometric_edges(lo: float, hi: float, ratio: float = 2.0) -> np.ndarray:
    """Panel edges from hi down to lo by repeated division, plus [0-like lo]."""
    if not (0.0 < lo < hi):
        raise ValueError("geometric_edges requires 0 < lo < hi")
    edges = [hi]
    x = hi
    cap = 4096
    while x / ratio > lo and len(edges) < cap:
        x /= ratio
        edges.append(x)
    edges.append(lo)
    if len(edges) >= cap:
        raise ConvergenceError("geometric_edges: too many panels")
    return np.array(edges[::-1])
