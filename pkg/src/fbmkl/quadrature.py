"""Composite Gauss rules for integrals of u^alpha f(u) over [0, 1]."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import DomainError

__all__ = ["QuadSpec", "weighted_rule", "power_moments"]


@dataclass(frozen=True)
class QuadSpec:
    """Uniform panels on [0, 1] with a fixed number of Gauss points per panel."""

    panels: int = 16
    points: int = 20

    def __post_init__(self) -> None:
        if self.panels < 1:
            raise DomainError("quadrature needs at least one panel")
        if self.points < 2:
            raise DomainError("quadrature needs at least two points per panel")

    def refined(self) -> QuadSpec:
        return QuadSpec(2 * self.panels, self.points)


@lru_cache(maxsize=64)
def weighted_rule(alpha: float, spec: QuadSpec) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for int_0^1 u^alpha f(u) du, alpha > -1.

    The first panel uses Gauss-Jacobi with the weight u^alpha built in, so the
    endpoint singularity of the weight costs no accuracy; the other panels are
    Gauss-Legendre with u^alpha folded into the weights.
    """
    if alpha <= -1.0:
        raise DomainError("power weight needs alpha > -1")
    h = 1.0 / spec.panels
    xj, wj = roots_jacobi(spec.points, 0.0, alpha)
    nodes = [0.5 * h * (xj + 1.0)]
    weights = [wj * (0.5 * h) ** (alpha + 1.0)]
    if spec.panels > 1:
        xl, wl = roots_legendre(spec.points)
        left = h * np.arange(1, spec.panels)[:, None]
        u = left + 0.5 * h * (xl + 1.0)[None, :]
        nodes.append(u.ravel())
        weights.append((0.5 * h * wl[None, :] * u**alpha).ravel())
    u = np.concatenate(nodes)
    w = np.concatenate(weights)
    u.setflags(write=False)
    w.setflags(write=False)
    return u, w


def power_moments(freqs: np.ndarray, alpha: float, spec: QuadSpec) -> tuple[np.ndarray, np.ndarray]:
    """Return (int u^alpha sin(w u) du, int u^alpha cos(w u) du) for each w."""
    u, w = weighted_rule(float(alpha), spec)
    phase = np.outer(np.asarray(freqs, dtype=float), u)
    return np.sin(phase) @ w, np.cos(phase) @ w
