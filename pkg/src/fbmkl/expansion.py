"""Series expansion of fBm on sin(x_n t)/x_n and (1 - cos(y_n t))/y_n.

x_n are the positive zeros of J_{-H}, y_n those of J_{1-H}; the coefficients
z_n, w_n are independent centred Gaussians with

    E z_n^2 = 2 c_H^2 / (x_n^2H J_{1-H}(x_n)^2),
    E w_n^2 = 2 c_H^2 / (y_n^2H J_{-H}(y_n)^2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kernel import HurstParams, _as_params, _check_unit_interval
from .specfun import bessel_j, bessel_zeros

__all__ = [
    "ExpansionSpec",
    "build_expansion",
    "design_matrix",
    "reconstruct_covariance",
    "sample_path",
    "sample_paths",
]

COVARIANCE_TERMS = 2000
SAMPLING_TERMS = 500


@dataclass(frozen=True)
class ExpansionSpec:
    params: HurstParams
    x: np.ndarray
    y: np.ndarray
    var_z: np.ndarray
    var_w: np.ndarray

    @property
    def terms(self) -> int:
        return len(self.x)


def build_expansion(params: HurstParams | float, terms: int = COVARIANCE_TERMS) -> ExpansionSpec:
    p = _as_params(params)
    terms = int(terms)
    if terms < 1:
        raise DomainError("terms must be >= 1")
    h = p.h
    x = bessel_zeros(-h, terms).zeros
    y = bessel_zeros(1.0 - h, terms).zeros
    var_z = 2.0 * p.c_h_sq / (x ** (2.0 * h) * bessel_j(1.0 - h, x) ** 2)
    var_w = 2.0 * p.c_h_sq / (y ** (2.0 * h) * bessel_j(-h, y) ** 2)
    for arr in (x, y, var_z, var_w):
        arr.setflags(write=False)
    return ExpansionSpec(params=p, x=x, y=y, var_z=var_z, var_w=var_w)


def design_matrix(spec: ExpansionSpec, grid) -> np.ndarray:
    """Basis values on ``grid``: columns sin(x_k t)/x_k, then (1 - cos(y_k t))/y_k."""
    t = np.asarray(grid, dtype=float).ravel()
    if t.size == 0:
        raise DomainError("grid must be non-empty")
    _check_unit_interval("grid", t)
    sin_part = np.sin(np.outer(t, spec.x)) / spec.x
    # 1 - cos(a) = 2 sin^2(a/2) keeps small-t values accurate
    cos_part = 2.0 * np.sin(0.5 * np.outer(t, spec.y)) ** 2 / spec.y
    return np.hstack([sin_part, cos_part])


def _coefficients(spec: ExpansionSpec, seed: int) -> np.ndarray:
    # one stream per seed: K draws for z_1..z_K, then K for w_1..w_K
    g = np.random.default_rng(seed).standard_normal(2 * spec.terms)
    return g * np.sqrt(np.concatenate([spec.var_z, spec.var_w]))


def sample_path(spec: ExpansionSpec, grid, seed: int) -> np.ndarray:
    """One realisation of the truncated series on ``grid``, reproducible from ``seed``."""
    return design_matrix(spec, grid) @ _coefficients(spec, seed)


def sample_paths(spec: ExpansionSpec, grid, seeds) -> np.ndarray:
    """Stack of ``sample_path`` realisations, one row per seed."""
    coeffs = np.stack([_coefficients(spec, int(s)) for s in seeds])
    return coeffs @ design_matrix(spec, grid).T


def reconstruct_covariance(spec: ExpansionSpec, s, t):
    """Covariance of the truncated series; tends to the fBm covariance as K grows."""
    s_arr = np.asarray(s, dtype=float)
    t_arr = np.asarray(t, dtype=float)
    _check_unit_interval("s", s_arr)
    _check_unit_interval("t", t_arr)
    s_b, t_b = np.broadcast_arrays(s_arr, t_arr)
    flat_s = s_b.ravel()[:, None]
    flat_t = t_b.ravel()[:, None]
    zs = np.sin(flat_s * spec.x) * np.sin(flat_t * spec.x) / spec.x**2
    ws = 4.0 * (np.sin(0.5 * flat_s * spec.y) * np.sin(0.5 * flat_t * spec.y)) ** 2 / spec.y**2
    out = (zs @ spec.var_z + ws @ spec.var_w).reshape(s_b.shape)
    return float(out) if out.ndim == 0 else out
