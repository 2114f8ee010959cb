"""Projection of the Bessel-zero expansion onto the sine basis.

With psi_k the expansion functions and phi_n = sqrt(2) sin(b_n t),
b_n = (n - 1/2) pi, the K-L coefficient c_n = <B, phi_n> is a linear
combination of the independent z_k, w_k, so

    E[c_n c_m] = sum_k var_z_k mu_hat[n, k] mu_hat[m, k]
               + sum_k var_w_k mu_tilde[n, k] mu_tilde[m, k],

which is also the Galerkin entry <phi_n, T phi_m>.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .errors import DomainError, TruncationWarning
from .expansion import ExpansionSpec
from .galerkin import AsymptoticFit, fit_asymptotics
from .kernel import sine_frequency

__all__ = [
    "ProjectionTable",
    "branch_moments",
    "build_table",
    "moment_matrix",
    "mu_hat",
    "mu_tilde",
    "projected_moment",
    "projected_spectrum_fit",
    "tail_fraction",
]

_SQRT2 = math.sqrt(2.0)
_SINC_SWITCH = 1e-6
TAIL_WARN = 0.01


def _sinc(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < _SINC_SWITCH
    safe = np.where(small, 1.0, t)
    return np.where(small, 1.0 - t * t / 6.0, np.sin(safe) / safe)


def _check_index(n) -> np.ndarray:
    n_arr = np.asarray(n)
    if np.any(n_arr < 1):
        raise DomainError("sine index must be >= 1")
    return n_arr


def mu_hat(n, x_k):
    """int_0^1 sin(x_k t)/x_k * sqrt(2) sin(b_n t) dt in closed form.

    The textbook form (sqrt2 / 2x)[sin(x-b)/(x-b) - sin(x+b)/(x+b)] collapses,
    since sin(x + b) = -sin(x - b) when 2b is an odd multiple of pi, to
    sqrt2 sinc(x - b) / (x + b), which has no cancellation at x = b.
    """
    b = sine_frequency(_check_index(n))
    x = np.asarray(x_k, dtype=float)
    if np.any(~(x > 0.0)):
        raise DomainError("Bessel zero must be positive")
    out = _SQRT2 * _sinc(x - b) / (x + b)
    return float(out) if out.ndim == 0 else out


def mu_tilde(n, y_k):
    """int_0^1 (1 - cos(y_k t))/y_k * sqrt(2) sin(b_n t) dt in closed form.

    Uses int_0^1 sin(b t) dt = 1/b and
    int_0^1 cos(y t) sin(b t) dt = sin^2((b+y)/2)/(b+y) + (b-y)/4 sinc^2((b-y)/2).
    """
    b = sine_frequency(_check_index(n))
    y = np.asarray(y_k, dtype=float)
    if np.any(~(y > 0.0)):
        raise DomainError("Bessel zero must be positive")
    e = b - y
    cross = np.sin(0.5 * (b + y)) ** 2 / (b + y) + 0.25 * e * _sinc(0.5 * e) ** 2
    out = _SQRT2 / y * (1.0 / b - cross)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ProjectionTable:
    """Coefficient tables of shape (sine_count, K).

    ``tail`` estimates the part of the w-branch sum beyond k = K, where
    var_w_k ~ pi c_H^2 y_k^(1-2H) and mu_tilde[n, k] ~ sqrt2 / (b_n y_k), so
    the remainder is 2 c_H^2 pi^(-2H) zeta(1 + 2H, K + 1 + d) / (b_n b_m)
    with d = y_K / pi - K. That branch decays only like k^(-1-2H); the
    z-branch remainder, O(K^(-2-2H)), is left out.
    """

    spec: ExpansionSpec
    mu_hat: np.ndarray
    mu_tilde: np.ndarray
    tail: np.ndarray

    @property
    def sine_count(self) -> int:
        return self.mu_hat.shape[0]

    @property
    def terms(self) -> int:
        return self.mu_hat.shape[1]


def _tail_matrix(spec: ExpansionSpec, sine_count: int) -> np.ndarray:
    h = spec.params.h
    k = spec.terms
    shift = spec.y[-1] / math.pi - k
    s = spec.params.c_h_sq * math.pi ** (-2.0 * h) * float(zeta(1.0 + 2.0 * h, k + 1.0 + shift))
    b = sine_frequency(np.arange(1, sine_count + 1))
    return 2.0 * s / np.outer(b, b)


def build_table(spec: ExpansionSpec, sine_count: int) -> ProjectionTable:
    sine_count = int(sine_count)
    if sine_count < 1:
        raise DomainError("sine_count must be >= 1")
    n = np.arange(1, sine_count + 1)[:, None]
    mh = mu_hat(n, spec.x[None, :])
    mt = mu_tilde(n, spec.y[None, :])
    tail = _tail_matrix(spec, sine_count)
    for arr in (mh, mt, tail):
        arr.setflags(write=False)
    return ProjectionTable(spec=spec, mu_hat=mh, mu_tilde=mt, tail=tail)


def _contributions(n: int, m: int, table: ProjectionTable) -> tuple[np.ndarray, np.ndarray]:
    if not (1 <= n <= table.sine_count and 1 <= m <= table.sine_count):
        raise DomainError(f"indices ({n}, {m}) outside table of {table.sine_count} sine functions")
    z = table.spec.var_z * table.mu_hat[n - 1] * table.mu_hat[m - 1]
    w = table.spec.var_w * table.mu_tilde[n - 1] * table.mu_tilde[m - 1]
    return z, w


def tail_fraction(n: int, m: int, table: ProjectionTable) -> float:
    """Share of the truncated sum carried by its last tenth of terms."""
    z, w = _contributions(n, m, table)
    total = z + w
    start = table.terms - max(1, table.terms // 10)
    denom = abs(float(np.sum(total)))
    if denom == 0.0:
        return 0.0
    return abs(float(np.sum(total[start:]))) / denom


def projected_moment(n: int, m: int, table: ProjectionTable, *, tail_correction: bool = True) -> float:
    """E[c_n c_m] from the projected expansion; on the diagonal, the K-L second moment.

    Without ``tail_correction`` this is the plain K-term sum and a
    ``TruncationWarning`` is issued when its last tenth of terms still
    carries more than 1% of the total.
    """
    z, w = _contributions(n, m, table)
    value = float(np.sum(z) + np.sum(w))
    if tail_correction:
        return value + float(table.tail[n - 1, m - 1])
    frac = tail_fraction(n, m, table)
    if frac > TAIL_WARN:
        warnings.warn(
            f"K={table.terms} leaves tail fraction {frac:.2%} for ({n}, {m})",
            TruncationWarning,
            stacklevel=2,
        )
    return value


def moment_matrix(table: ProjectionTable, *, tail_correction: bool = True) -> np.ndarray:
    """All projected moments at once, shape (sine_count, sine_count)."""
    z = (table.mu_hat * table.spec.var_z) @ table.mu_hat.T
    w = (table.mu_tilde * table.spec.var_w) @ table.mu_tilde.T
    out = z + w
    if tail_correction:
        out = out + table.tail
    return 0.5 * (out + out.T)


def branch_moments(table: ProjectionTable) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal sums of the sin branch and the (1 - cos) branch separately."""
    z = (table.mu_hat**2) @ table.spec.var_z
    w = (table.mu_tilde**2) @ table.spec.var_w
    return z, w


def projected_spectrum_fit(
    table: ProjectionTable,
    fit_range: tuple[int, int],
    *,
    index_offset: float = 0.5,
    tail_correction: bool = True,
) -> AsymptoticFit:
    """Decay fit of the projected diagonal moments."""
    n_hi = int(fit_range[1])
    if n_hi > table.sine_count:
        raise DomainError(f"fit range ends at {n_hi} but table has {table.sine_count} sine functions")
    diag = np.diag(moment_matrix(table, tail_correction=tail_correction))
    return fit_asymptotics(diag, fit_range, index_offset=index_offset)
