"""Bessel functions of the first kind of real order in (-1, 1), and their zeros.

The evaluator switches between three schemes depending on the argument:

* ascending power series for ``x <= SERIES_MAX``,
* Miller's backward recurrence, normalised with the Neumann sum
  ``(x/2)^nu = sum_k (nu + 2k) Gamma(nu + k) / k! J_{nu+2k}(x)``, up to
  ``HANKEL_MIN``,
* Hankel's asymptotic expansion beyond that.

Crossovers were chosen so that each scheme stays within about 1e-13 of the
local envelope ``sqrt(2 / (pi x))``; the half-integer orders, which have
elementary closed forms, are used to check this in the tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "BesselZeros",
    "bessel_j",
    "bessel_zeros",
    "mcmahon_guess",
    "residual_limit",
]

SERIES_MAX = 8.0
HANKEL_MIN = 25.0
_HANKEL_TERMS = 40


def _check_order(nu: float) -> float:
    nu = float(nu)
    if not (-1.0 < nu < 1.0):
        raise DomainError(f"order must lie in (-1, 1), got {nu}")
    return nu


def _series(nu: float, x: np.ndarray) -> np.ndarray:
    half = 0.5 * x
    q = -half * half
    term = np.full_like(x, 1.0 / math.gamma(nu + 1.0))
    total = term.copy()
    for k in range(1, 80):
        term = term * q / (k * (k + nu))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total * half**nu


def _miller(nu: float, x: np.ndarray) -> np.ndarray:
    # start high enough above x that J_{nu+top} is negligible
    m = int(math.ceil((float(np.max(x)) + 12.0 * float(np.max(x)) ** (1.0 / 3.0) + 30.0) / 2.0))
    top = 2 * m
    f_next = np.zeros_like(x)
    f_cur = np.full_like(x, 1e-30)
    # neumann weights w_j for even offsets 2j: j = 0 -> Gamma(nu+1), else (nu+2j) Gamma(nu+j)/j!
    weights = np.empty(m + 1)
    weights[0] = math.gamma(nu + 1.0)
    c = math.gamma(nu + 1.0)
    for j in range(1, m + 1):
        if j > 1:
            c *= (nu + j - 1.0) / j
        weights[j] = (nu + 2.0 * j) * c
    norm = weights[m] * f_cur
    for k in range(top, 0, -1):
        f_prev = (2.0 * (nu + k) / x) * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        if (k - 1) % 2 == 0:
            norm = norm + weights[(k - 1) // 2] * f_cur
        big = np.abs(f_cur) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            f_cur, f_next, norm = f_cur * scale, f_next * scale, norm * scale
    return f_cur * (0.5 * x) ** nu / norm


def _hankel_coeffs(nu: float) -> np.ndarray:
    mu = 4.0 * nu * nu
    a = np.empty(_HANKEL_TERMS)
    a[0] = 1.0
    for k in range(1, _HANKEL_TERMS):
        a[k] = a[k - 1] * (mu - (2 * k - 1) ** 2) / (k * 8.0)
    return a


def _hankel(nu: float, x: np.ndarray) -> np.ndarray:
    a = _hankel_coeffs(nu)
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    inv = 1.0 / x
    power = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(_HANKEL_TERMS):
        term = a[k] * power
        # stop each lane at its smallest term (asymptotic series)
        active &= np.abs(term) < np.abs(prev)
        contrib = np.where(active, term, 0.0)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * contrib
        else:
            q += sign * contrib
        prev = term
        power = power * inv
        if not active.any() or np.all(np.abs(contrib) < 1e-17):
            break
    chi = x - (0.5 * nu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def bessel_j(nu: float, x):
    """J_nu(x) for -1 < nu < 1 and x > 0 (scalar or array ``x``)."""
    nu = _check_order(nu)
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0.0)) or np.any(~np.isfinite(xa)):
        raise DomainError("bessel_j requires finite x > 0")
    flat = np.atleast_1d(xa).ravel()
    out = np.empty_like(flat)
    lo = flat <= SERIES_MAX
    mid = (~lo) & (flat < HANKEL_MIN)
    hi = flat >= HANKEL_MIN
    if lo.any():
        out[lo] = _series(nu, flat[lo])
    if mid.any():
        out[mid] = _miller(nu, flat[mid])
    if hi.any():
        out[hi] = _hankel(nu, flat[hi])
    if xa.ndim == 0:
        return float(out[0])
    return out.reshape(xa.shape)


def mcmahon_guess(nu: float, n) -> np.ndarray:
    """Leading-order location (n + nu/2 - 1/4) pi of the n-th positive zero."""
    return (np.asarray(n, dtype=float) + 0.5 * nu - 0.25) * math.pi


@dataclass(frozen=True)
class BesselZeros:
    """The first ``len(zeros)`` positive zeros of J_nu, in ascending order."""

    nu: float
    zeros: np.ndarray

    def __len__(self) -> int:
        return len(self.zeros)

    @property
    def residuals(self) -> np.ndarray:
        """x_n - n pi; tends to a constant as n grows."""
        return self.zeros - math.pi * np.arange(1, len(self.zeros) + 1)


def bessel_zeros(nu: float, count: int, *, max_iter: int = 200) -> BesselZeros:
    """Bracket each zero around its McMahon guess and refine by bisection.

    Refinement runs until the bracket shrinks to a few ulps, so the returned
    point is where the evaluator changes sign. Raises ``ConvergenceError``
    when a bracket holds no sign change or the iteration budget runs out.
    """
    nu = _check_order(nu)
    count = int(count)
    if count < 1:
        raise DomainError("count must be >= 1")
    guess = mcmahon_guess(nu, np.arange(1, count + 1))
    lo = np.maximum(guess - 0.5 * math.pi, 1e-6)
    hi = guess + 0.5 * math.pi
    f_lo = bessel_j(nu, lo)
    f_hi = bessel_j(nu, hi)
    if np.any(np.sign(f_lo) == np.sign(f_hi)):
        bad = int(np.flatnonzero(np.sign(f_lo) == np.sign(f_hi))[0]) + 1
        raise ConvergenceError(f"no sign change bracketing zero {bad} of J_{nu}")
    for _ in range(max_iter):
        width = hi - lo
        done = width <= 4.0 * np.spacing(hi)
        if done.all():
            break
        mid = 0.5 * (lo + hi)
        f_mid = bessel_j(nu, mid)
        left = np.sign(f_mid) == np.sign(f_lo)
        lo = np.where(left, mid, lo)
        f_lo = np.where(left, f_mid, f_lo)
        hi = np.where(left, hi, mid)
        f_hi = np.where(left, f_hi, f_mid)
        exact = f_mid == 0.0
        lo = np.where(exact, mid, lo)
        hi = np.where(exact, mid, hi)
    else:
        raise ConvergenceError(f"zero refinement for J_{nu} exceeded {max_iter} iterations")
    # pick whichever end has the smaller residual
    z = np.where(np.abs(f_lo) <= np.abs(f_hi), lo, hi)
    return BesselZeros(nu=nu, zeros=z)


def residual_limit(zeros: BesselZeros, tail: int = 10) -> float:
    """Estimate lim (x_n - n pi) from the last ``tail`` residuals.

    Residuals approach their limit like c / n, so a straight-line fit of r_n
    against 1/n is extrapolated to 1/n = 0.
    """
    r = zeros.residuals
    tail = min(tail, len(r))
    if tail < 2:
        return float(r[-1])
    n = np.arange(len(r) - tail + 1, len(r) + 1, dtype=float)
    slope, intercept = np.polyfit(1.0 / n, r[-tail:], 1)
    return float(intercept)
