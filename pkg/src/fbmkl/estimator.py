"""Hurst exponent from eigenvalue decay, on computed spectra or path ensembles."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, EstimationError
from .expansion import ExpansionSpec, sample_paths
from .galerkin import AsymptoticFit, fit_asymptotics
from .kernel import HurstParams

__all__ = [
    "Disturbance",
    "HurstEstimate",
    "PathEnsemble",
    "add_disturbance",
    "ensemble_from_expansion",
    "hurst_from_spectrum",
    "pca_hurst",
    "uniform_grid",
]

DEFAULT_FIT_RANGE = (4, 20)
KINDS = ("none", "white", "trend")


@dataclass(frozen=True)
class Disturbance:
    kind: str = "none"
    magnitude: float = 0.0

    def __str__(self) -> str:
        return "none" if self.kind == "none" else f"{self.kind}:{self.magnitude:g}"


@dataclass(frozen=True)
class PathEnsemble:
    """M sample paths on the grid t_j = j / P, j = 1..P (one path per row)."""

    paths: np.ndarray
    h_true: HurstParams | None = None
    disturbance: Disturbance = Disturbance()

    def __post_init__(self) -> None:
        paths = np.asarray(self.paths, dtype=float)
        if paths.ndim != 2:
            raise DomainError("paths must be an M x P array")
        m, p = paths.shape
        if m < 2 or p < 8:
            raise DomainError(f"need at least 2 paths and 8 grid points, got {m} x {p}")
        if not np.all(np.isfinite(paths)):
            raise DomainError("paths contain non-finite values")
        paths.setflags(write=False)
        object.__setattr__(self, "paths", paths)

    @property
    def grid(self) -> np.ndarray:
        return uniform_grid(self.paths.shape[1])


def uniform_grid(points: int) -> np.ndarray:
    return np.arange(1, points + 1) / points


@dataclass(frozen=True)
class HurstEstimate:
    h: float
    fit: AsymptoticFit
    out_of_range: bool = False

    def __float__(self) -> float:
        return self.h


def hurst_from_spectrum(fit: AsymptoticFit) -> HurstEstimate:
    """Invert p = 2H + 1; results outside (0, 1) are clamped and flagged."""
    p = fit.exponent_p
    if not p > 1.0:
        raise EstimationError(f"decay exponent {p:.4g} <= 1 is below the Weyl bound")
    h = 0.5 * (p - 1.0)
    eps = 1e-12
    clamped = min(max(h, eps), 1.0 - eps)
    return HurstEstimate(h=clamped, fit=fit, out_of_range=clamped != h)


def ensemble_from_expansion(spec: ExpansionSpec, points: int, seeds) -> PathEnsemble:
    paths = sample_paths(spec, uniform_grid(points), seeds)
    return PathEnsemble(paths=paths, h_true=spec.params)


def add_disturbance(ensemble: PathEnsemble, kind: str, magnitude: float, seed: int = 0) -> PathEnsemble:
    """Copy of ``ensemble`` with white noise (std ``magnitude``) or trend ``magnitude * t``."""
    if kind not in KINDS:
        raise DomainError(f"unknown disturbance {kind!r}; expected one of {KINDS}")
    if magnitude < 0:
        raise DomainError("disturbance magnitude must be >= 0")
    paths = ensemble.paths
    if kind == "white":
        paths = paths + magnitude * np.random.default_rng(seed).standard_normal(paths.shape)
    elif kind == "trend":
        paths = paths + magnitude * ensemble.grid[None, :]
    return replace(ensemble, paths=paths, disturbance=Disturbance(kind, float(magnitude)))


def pca_hurst(
    ensemble: PathEnsemble,
    fit_range: tuple[int, int] = DEFAULT_FIT_RANGE,
    *,
    index_offset: float = 0.5,
) -> HurstEstimate:
    """Estimate H from the eigenvalue decay of the across-path sample covariance.

    Eigenvalues of the P x P covariance are divided by P so that they
    approximate those of the covariance operator on [0, 1].
    """
    m, p = ensemble.paths.shape
    n_hi = int(fit_range[1])
    if m < 4 * n_hi:
        raise EstimationError(f"{m} paths too few for fit range ending at {n_hi}; need {4 * n_hi}")
    if n_hi > p:
        raise EstimationError(f"fit range ends at {n_hi} but grid has {p} points")
    cov = np.cov(ensemble.paths, rowvar=False)
    ev = np.linalg.eigvalsh(cov)[::-1] / p
    fit = fit_asymptotics(ev, fit_range, index_offset=index_offset)
    return hurst_from_spectrum(fit)
