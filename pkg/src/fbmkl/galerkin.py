"""Galerkin discretisation of the fBm covariance operator on the sine basis.

Entries are A[n, m] = 2 int int R(x, y) sin(a_n x) sin(a_m y) dx dy with
a_n = (n - 1/2) pi. Splitting R into its separable part (x^2H + y^2H) / 2 and
the stationary part |x - y|^2H / 2 and substituting u = x - y in the latter
turns every entry into a combination of three one-dimensional moments per
frequency,

    S(a)  = int_0^1 u^2H sin(a u) du,
    C0(a) = int_0^1 u^2H cos(a u) du,
    C1(a) = int_0^1 u^(2H+1) cos(a u) du,

because sin(a_n - a_m) and sin(a_n + a_m) vanish on the half-integer grid:

    A[n, m] = S(a_n)/a_m + S(a_m)/a_n - D[n, m],
    D[n, m] = (S(a_m) - S(a_n)) / (a_n - a_m)   n - m even, n != m
            = (S(a_n) + S(a_m)) / (a_n + a_m)   n - m odd
            = C0(a_n) - C1(a_n)                 n == m.

The non-smooth diagonal of |x - y|^2H becomes the endpoint u = 0, which the
Gauss-Jacobi first panel absorbs into its weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma

from .errors import ConvergenceError, DomainError, EstimationError
from .kernel import HurstParams, _as_params, sine_frequency
from .quadrature import QuadSpec, power_moments

__all__ = [
    "AsymptoticFit",
    "GalerkinMatrix",
    "SpectralResult",
    "assemble",
    "bronski_prediction",
    "candidate_prefactors",
    "eigen_spectrum",
    "fit_asymptotics",
]

DEFAULT_SIZE = 256
DEFAULT_FIT_RANGE = (8, 64)


@dataclass(frozen=True)
class GalerkinMatrix:
    params: HurstParams
    entries: np.ndarray
    quad: QuadSpec
    max_change: float

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectralResult:
    """Eigenvalues in descending order, optionally with eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    source: str = "galerkin"

    def __len__(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class AsymptoticFit:
    """Least-squares fit lambda_n ~ c (n - offset)^(-p) over ``fit_range``."""

    exponent_p: float
    prefactor_c: float
    r_squared: float
    fit_range: tuple[int, int]
    index_offset: float = 0.5


def _entries(h: float, size: int, quad: QuadSpec) -> np.ndarray:
    a = sine_frequency(np.arange(1, size + 1))
    s, c0 = power_moments(a, 2.0 * h, quad)
    _, c1 = power_moments(a, 2.0 * h + 1.0, quad)

    an = a[:, None]
    am = a[None, :]
    idx = np.arange(size)
    even = (idx[:, None] - idx[None, :]) % 2 == 0
    diff = an - am
    np.fill_diagonal(diff, 1.0)
    d = np.where(even, (s[None, :] - s[:, None]) / diff, (s[:, None] + s[None, :]) / (an + am))
    np.fill_diagonal(d, c0 - c1)
    full = s[:, None] / am + s[None, :] / an - d
    upper = np.triu(full)
    return upper + np.triu(full, 1).T


def assemble(
    params: HurstParams | float,
    size: int = DEFAULT_SIZE,
    quad: QuadSpec | None = None,
    *,
    tol: float = 1e-9,
    max_panels: int = 1 << 14,
) -> GalerkinMatrix:
    """Assemble the ``size`` x ``size`` Galerkin matrix.

    Panels are doubled from ``quad`` until no entry moves by more than ``tol``;
    the finer of the last two matrices is returned.
    """
    p = _as_params(params)
    size = int(size)
    if size < 1:
        raise DomainError("matrix size must be >= 1")
    quad = quad or QuadSpec()
    current = _entries(p.h, size, quad)
    while True:
        finer_quad = quad.refined()
        if finer_quad.panels > max_panels:
            raise ConvergenceError(
                f"Galerkin quadrature did not reach tol={tol:g} within {max_panels} panels"
            )
        finer = _entries(p.h, size, finer_quad)
        change = float(np.max(np.abs(finer - current)))
        quad, current = finer_quad, finer
        if change < tol:
            break
    current.setflags(write=False)
    return GalerkinMatrix(params=p, entries=current, quad=quad, max_change=change)


def eigen_spectrum(matrix: GalerkinMatrix | np.ndarray, *, vectors: bool = True) -> SpectralResult:
    """Full descending spectrum of a symmetric matrix (LAPACK ``syevd``)."""
    a = matrix.entries if isinstance(matrix, GalerkinMatrix) else np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("eigen_spectrum needs a square matrix")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    try:
        if vectors:
            w, v = np.linalg.eigh(a)
        else:
            w, v = np.linalg.eigvalsh(a), None
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"symmetric eigensolver failed: {exc}") from exc
    order = np.argsort(w)[::-1]
    w = w[order]
    if v is not None:
        v = v[:, order]
        scale = max(np.linalg.norm(a, 2), np.finfo(float).tiny)
        resid = np.linalg.norm(a @ v - v * w, axis=0).max()
        if resid > 1e-8 * scale:
            raise ConvergenceError(f"eigenpair residual {resid:.3e} exceeds 1e-8 |A|")
    return SpectralResult(eigenvalues=w, eigenvectors=v, source="galerkin")


def bronski_prediction(params: HurstParams | float, n):
    """sin(pi H) Gamma(2H + 1) / n^(2H + 1), the prefactor exactly as printed.

    A reference value only; see ``candidate_prefactors`` for the comparison
    with fitted spectra.
    """
    p = _as_params(params)
    n_arr = np.asarray(n, dtype=float)
    if np.any(n_arr < 1):
        raise DomainError("index must be >= 1")
    out = math.sin(math.pi * p.h) * math.gamma(2.0 * p.h + 1.0) / n_arr ** (2.0 * p.h + 1.0)
    return float(out) if out.ndim == 0 else out


def candidate_prefactors(params: HurstParams | float) -> dict[str, float]:
    """The two readings of the asymptotic constant: with and without pi^(2H+1)."""
    h = _as_params(params).h
    base = float(np.sin(np.pi * h) * gamma(2.0 * h + 1.0))
    return {"as_printed": base, "with_pi": base / np.pi ** (2.0 * h + 1.0)}


def fit_asymptotics(
    spectrum: SpectralResult | np.ndarray,
    fit_range: tuple[int, int] = DEFAULT_FIT_RANGE,
    *,
    index_offset: float = 0.5,
) -> AsymptoticFit:
    """Regress log lambda_n on log(n - index_offset) for n in ``fit_range``.

    The default offset 1/2 uses the basis frequency index, under which the
    Brownian spectrum 1/((n - 1/2) pi)^2 is an exact power law. Pass 0 for a
    plain log n abscissa.
    """
    values = spectrum.eigenvalues if isinstance(spectrum, SpectralResult) else np.asarray(spectrum)
    n_lo, n_hi = int(fit_range[0]), int(fit_range[1])
    if n_lo < 1 or n_hi > len(values):
        raise DomainError(f"fit range [{n_lo}, {n_hi}] outside spectrum of length {len(values)}")
    if n_hi - n_lo < 4:
        raise DomainError("fit range must span at least five indices")
    if n_lo - index_offset <= 0:
        raise DomainError("index_offset must be below the first fitted index")
    lam = np.asarray(values[n_lo - 1 : n_hi], dtype=float)
    if np.any(~(lam > 0.0)):
        bad = n_lo + int(np.flatnonzero(~(lam > 0.0))[0])
        raise EstimationError(f"non-positive eigenvalue at n={bad}; logs undefined")
    x = np.log(np.arange(n_lo, n_hi + 1) - index_offset)
    y = np.log(lam)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return AsymptoticFit(
        exponent_p=float(-slope),
        prefactor_c=float(np.exp(intercept)),
        r_squared=min(max(r2, 0.0), 1.0),
        fit_range=(n_lo, n_hi),
        index_offset=float(index_offset),
    )
