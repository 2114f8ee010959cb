"""Covariance of fractional Brownian motion on [0, 1] and the shifted-sine basis."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = ["HurstParams", "fbm_covariance", "sine_basis", "sine_frequency"]


@dataclass(frozen=True)
class HurstParams:
    """Hurst exponent ``h`` in the open interval (0, 1).

    ``c_h_sq`` is the normalising constant Gamma(1 + 2h) sin(pi h) / pi of the
    spectral density of fBm; it equals 1/pi for Brownian motion.
    """

    h: float
    c_h_sq: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        h = float(self.h)
        if not (0.0 < h < 1.0) or math.isnan(h):
            raise DomainError(f"hurst exponent must lie in (0, 1), got {self.h!r}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "c_h_sq", math.gamma(1.0 + 2.0 * h) * math.sin(math.pi * h) / math.pi)


def _as_params(params: HurstParams | float) -> HurstParams:
    return params if isinstance(params, HurstParams) else HurstParams(params)


def _check_unit_interval(name: str, v: np.ndarray) -> None:
    if np.any(~np.isfinite(v)) or np.any(v < 0.0) or np.any(v > 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")


def fbm_covariance(s, t, params: HurstParams | float):
    """E[B_s B_t] = (s^2H + t^2H - |s - t|^2H) / 2 for s, t in [0, 1].

    Accepts scalars or broadcastable arrays; returns a float for scalar input.
    """
    p = _as_params(params)
    s_arr = np.asarray(s, dtype=float)
    t_arr = np.asarray(t, dtype=float)
    _check_unit_interval("s", s_arr)
    _check_unit_interval("t", t_arr)
    two_h = 2.0 * p.h
    out = 0.5 * (s_arr**two_h + t_arr**two_h - np.abs(s_arr - t_arr) ** two_h)
    return float(out) if out.ndim == 0 else out


def sine_frequency(n):
    """Angular frequency (n - 1/2) pi of the n-th basis function (1-based)."""
    return (np.asarray(n, dtype=float) - 0.5) * np.pi


def sine_basis(n, t):
    """sqrt(2) sin((n - 1/2) pi t), orthonormal on [0, 1] for n = 1, 2, ..."""
    n_arr = np.asarray(n)
    if np.any(n_arr < 1):
        raise DomainError("basis index must be >= 1")
    t_arr = np.asarray(t, dtype=float)
    _check_unit_interval("t", t_arr)
    out = math.sqrt(2.0) * np.sin(sine_frequency(n_arr) * t_arr)
    return float(out) if out.ndim == 0 else out
