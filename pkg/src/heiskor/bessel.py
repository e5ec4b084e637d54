"""Modified Bessel functions I_nu and K_nu on the positive real axis.

Three independent evaluation routes for K_nu, dispatched by regime:

* ``series``: the defining combination pi * (I_{-nu} - I_nu) / (2 sin(nu pi))
  with I_nu summed from its power series; used for non-integer orders at
  small argument (x <= 2).
* ``basset_quadrature``: double-exponential quadrature of the exponential
  representation  K_nu(x) = (x/2)^nu sqrt(pi)/Gamma(nu+1/2) *
  int_0^inf exp(-x cosh(phi)) sinh(phi)^(2 nu) dphi,  valid for
  nu > -1/2; used for moderate and large arguments and whenever the order
  sits within 1e-3 of an integer (where the series combination is
  ill-conditioned).
* ``asymptotic``: the leading large-argument form sqrt(pi/(2x)) exp(-x),
  used for x > 30 only when the first neglected correction term
  (4 nu^2 - 1)/(8 x) certifies the accuracy target on its own; otherwise
  the quadrature route is used as fallback.

Orders are reflected through K_nu = K_{-nu} before dispatch.  Public entry
points accept |nu| <= 2; the derivative identities internally evaluate
orders up to |nu| + 1 <= 3.  Everything here is a pure function of its
arguments and safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gammafn
from .errors import ConvergenceError, CrossValidationError, DomainError

NU_MAX = 2.0
_NU_MAX_INTERNAL = 3.0
_NEAR_INTEGER = 1e-3
_SERIES_X_MAX = 2.0
_ASYMPTOTIC_X_MIN = 30.0
_TARGET_REL = 1e-10
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class BesselEval:
    """A K_nu(x) evaluation: value, the method that produced it, and an
    absolute error estimate."""

    value: float
    method: str  # 'series' | 'basset_quadrature' | 'asymptotic'
    abs_error_estimate: float


def _check_arg(nu: float, x: float, nu_cap: float) -> tuple[float, float]:
    nu = float(nu)
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"argument must be a positive real, got {x!r}")
    if not math.isfinite(nu) or abs(nu) > nu_cap:
        raise DomainError(f"order {nu!r} outside supported range |nu| <= {nu_cap}")
    return nu, x


def bessel_i(nu: float, x: float, rel_tol: float = 1e-15,
             max_terms: int = 400) -> float:
    """Modified Bessel function of the first kind by its power series.

    For negative integer orders the series is the shifted one, which makes
    I_{-n} = I_n.  Raises ConvergenceError if the declared relative
    tolerance is not met within ``max_terms`` terms.
    """
    nu, x = _check_arg(nu, x, NU_MAX)
    return _i_series(nu, x, rel_tol, max_terms)


def _i_series(nu: float, x: float, rel_tol: float = 1e-15,
              max_terms: int = 400) -> float:
    if nu < 0.0 and nu == math.floor(nu):
        nu = -nu  # shifted sum collapses to the positive order
    half = 0.5 * x
    term = half ** nu / gammafn.gamma(nu + 1.0)
    total = term
    q = half * half
    hits = 0
    for n in range(1, max_terms):
        term *= q / (n * (n + nu))
        total += term
        if abs(term) <= rel_tol * abs(total):
            hits += 1
            if hits >= 2:
                return total
        else:
            hits = 0
    raise ConvergenceError(
        f"bessel_i series at nu={nu}, x={x} did not reach {rel_tol} "
        f"in {max_terms} terms")


def _kv_series(nu: float, x: float) -> tuple[float, float]:
    """Definition-route K_nu with a cancellation-aware error estimate."""
    ip = _i_series(nu, x)
    im = _i_series(-nu, x)
    diff = im - ip
    value = 0.5 * math.pi * diff / math.sin(math.pi * nu)
    cancel = (abs(im) + abs(ip)) / max(abs(diff), 1e-300)
    err = abs(value) * (4.0 * _EPS * cancel + 1e-15)
    return value, err


def _basset_u_range(nu: float, x_min: float) -> tuple[float, float]:
    """Parameter range for the phi = exp(pi/2 sinh u) substitution."""
    # Right end: exp(-x(cosh phi - 1)) sinh(phi)^(2 nu) below ~1e-20.
    phi = math.acosh(1.0 + 46.0 / x_min)
    for _ in range(2):
        growth = 2.0 * nu * math.log(math.sinh(phi) + 1e-300) if nu > 0 else 0.0
        phi = math.acosh(1.0 + (46.0 + max(growth, 0.0)) / x_min)
    u_hi = math.asinh(max(math.log(phi), 0.25) / (0.5 * math.pi)) + 0.35
    return -4.6, u_hi


def _basset_scaled(nu: float, x: np.ndarray, rel_tol: float = 5e-14,
                   max_level: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """exp(x) * int_0^inf exp(-x cosh phi) sinh(phi)^(2 nu) dphi, vectorized.

    Returns (scaled integral, relative change of the last refinement).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    u_lo, u_hi = _basset_u_range(nu, float(np.min(x)))

    def level_sum(u: np.ndarray) -> np.ndarray:
        phi = np.exp(0.5 * math.pi * np.sinh(u))
        jac = phi * 0.5 * math.pi * np.cosh(u)
        with np.errstate(over="ignore", under="ignore"):
            sh = np.sinh(phi)
            g = np.exp(-x[:, None] * (np.cosh(phi) - 1.0)[None, :])
            if nu != 0.0:
                g = g * sh[None, :] ** (2.0 * nu)
            g = g * jac[None, :]
        g[~np.isfinite(g)] = 0.0
        return np.sum(g, axis=1)

    h = 0.5
    n = math.ceil((u_hi - u_lo) / h)
    u = u_lo + h * np.arange(n + 1.0)
    total = level_sum(u) * h
    rel = np.ones_like(total)
    for _ in range(max_level):
        h *= 0.5
        u = u_lo + h * np.arange(1.0, 2.0 * n + 1.0, 2.0)
        n *= 2
        total_new = 0.5 * total + h * level_sum(u)
        with np.errstate(invalid="ignore", divide="ignore"):
            rel = np.abs(total_new - total) / np.where(total_new != 0.0,
                                                       np.abs(total_new), 1.0)
        total = total_new
        if np.all(rel <= rel_tol):
            break
    return total, rel


def _kv_basset(nu: float, x: float) -> tuple[float, float]:
    scaled, rel = _basset_scaled(nu, np.array([x]))
    s = float(scaled[0])
    log_pref = (nu * math.log(0.5 * x) + 0.5 * math.log(math.pi)
                - math.log(abs(gammafn.gamma(nu + 0.5))) - x)
    if log_pref + math.log(max(s, 1e-300)) < -740.0:
        return 0.0, 5e-324
    value = math.exp(log_pref) * s
    err = abs(value) * (float(rel[0]) + 1e-14)
    return value, err


def _kv_asymptotic(nu: float, x: float) -> tuple[float, float]:
    lead = math.sqrt(0.5 * math.pi / x) * math.exp(-x)
    rel = abs(4.0 * nu * nu - 1.0) / (8.0 * x)
    return lead, lead * (rel + 1e-15)


def _kv_eval(nu: float, x: float, cross_validate: bool = False) -> BesselEval:
    nu = abs(nu)  # K_nu = K_{-nu}
    near_int = abs(nu - round(nu)) < _NEAR_INTEGER
    if x > _ASYMPTOTIC_X_MIN:
        lead, lead_err = _kv_asymptotic(nu, x)
        if lead_err <= _TARGET_REL * lead:
            result = BesselEval(lead, "asymptotic", lead_err)
            if cross_validate:
                other, other_err = _kv_basset(nu, x)
                _agree(result.value, result.abs_error_estimate, other, other_err)
            return result
        value, err = _kv_basset(nu, x)
        result = BesselEval(value, "basset_quadrature", err)
        if cross_validate and value > 0.0:
            # The leading asymptotic should match within its own correction.
            if abs(value - lead) > 3.0 * (lead_err + err):
                raise CrossValidationError(
                    f"K_{nu}({x}): quadrature {value} vs asymptotic {lead}")
        return result
    if x <= _SERIES_X_MAX and not near_int:
        value, err = _kv_series(nu, x)
        if cross_validate:
            other, other_err = _kv_basset(nu, x)
            _agree(value, err, other, other_err)
        return BesselEval(value, "series", err)
    value, err = _kv_basset(nu, x)
    if cross_validate and not near_int and x <= _SERIES_X_MAX:
        other, other_err = _kv_series(nu, x)
        _agree(value, err, other, other_err)
    return BesselEval(value, "basset_quadrature", err)


def _agree(v1: float, e1: float, v2: float, e2: float) -> None:
    if abs(v1 - v2) > 10.0 * (e1 + e2) + 1e-13 * (abs(v1) + abs(v2)):
        raise CrossValidationError(
            f"methods disagree: {v1} +- {e1} vs {v2} +- {e2}")


def bessel_k(nu: float, x: float, *, cross_validate: bool = False) -> BesselEval:
    """Modified Bessel function of the second kind, K_nu(x) for x > 0.

    Returns a BesselEval carrying the value (strictly positive), the
    method tag, and an absolute error estimate.  With ``cross_validate``
    the other applicable route is also evaluated and a
    CrossValidationError is raised if the two disagree beyond their
    combined estimates.
    """
    nu, x = _check_arg(nu, x, NU_MAX)
    return _kv_eval(nu, x, cross_validate)


def kv(nu: float, x: float) -> float:
    """Value-only convenience wrapper around :func:`bessel_k`."""
    return bessel_k(nu, x).value


def bessel_k_values(nu: float, y, rel_tol: float = 5e-13) -> np.ndarray:
    """Vectorized K_nu over an array of positive arguments.

    Same regime dispatch as :func:`bessel_k` but without per-element
    method tags; used by the kernel transform quadratures where K is
    evaluated at thousands of points per call.
    """
    nu = abs(float(nu))
    if nu > _NU_MAX_INTERNAL:
        raise DomainError(f"order {nu} outside supported range")
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    if np.any(~np.isfinite(y)) or np.any(y <= 0.0):
        raise DomainError("arguments must be positive reals")
    out = np.empty_like(y)
    near_int = abs(nu - round(nu)) < _NEAR_INTEGER
    small = y <= _SERIES_X_MAX
    if near_int:
        small[:] = False
    if np.any(small):
        out[small] = _kv_series_array(nu, y[small])
    rest = ~small
    if np.any(rest):
        ys = y[rest]
        scaled, _ = _basset_scaled(nu, ys, rel_tol=rel_tol)
        lg = abs(gammafn.gamma(nu + 0.5))
        with np.errstate(over="ignore", under="ignore"):
            log_pref = (nu * np.log(0.5 * ys) + 0.5 * math.log(math.pi)
                        - math.log(lg) - ys)
            vals = np.exp(log_pref) * scaled
        vals[~np.isfinite(vals)] = 0.0
        out[rest] = vals
    return out[0] if scalar else out


def _kv_series_array(nu: float, y: np.ndarray, terms: int = 34) -> np.ndarray:
    half = 0.5 * y
    q = half * half
    ip = half ** nu / gammafn.gamma(nu + 1.0)
    im = half ** (-nu) / gammafn.gamma(1.0 - nu)
    tp, tm = ip.copy(), im.copy()
    for n in range(1, terms):
        tp *= q / (n * (n + nu))
        tm *= q / (n * (n - nu))
        ip += tp
        im += tm
    return 0.5 * math.pi * (im - ip) / math.sin(math.pi * nu)


def kv_weighted_derivatives(nu: float, x: float) -> tuple[float, float]:
    """Closed-form derivatives of the weighted functions x^nu K_nu(x) and
    x^(-nu) K_nu(x).

    Returns ``(d/dx[x^nu K_nu(x)], d/dx[x^-nu K_nu(x)])`` via the
    identities -x^nu K_{nu-1}(x) and -x^(-nu) K_{nu+1}(x).
    """
    nu, x = _check_arg(nu, x, 1.75)
    k_down = _kv_eval(nu - 1.0, x).value
    k_up = _kv_eval(nu + 1.0, x).value
    return -(x ** nu) * k_down, -(x ** (-nu)) * k_up
