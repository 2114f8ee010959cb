"""Mapping between the Bessel-zero functions and the orthonormal sine basis.

Riesz elements are interleaved: source index 2j - 1 is sin(x_j t)/x_j and
2j is (1 - cos(y_j t))/y_j. Entry A[k, n] is the coefficient of the k-th
Riesz element on phi_n, and tau_k the variance of its random coefficient, so
lambda_n = sum_k A[k, n]^2 tau_k. Two Riesz systems related through the
orthonormal basis compose as products of such matrices; no separate
operation is provided for that case.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .projection import ProjectionTable

__all__ = [
    "MappingMatrix",
    "ArgmaxFit",
    "argmax_column_row",
    "argmax_linearity",
    "build_mapping",
    "interleaved_variances",
    "transfer_eigenvalues",
    "transfer_tail_fraction",
]

NORMALIZATIONS = ("variance", "unit")


@dataclass(frozen=True)
class MappingMatrix:
    """Matrix ``entries`` of shape (Riesz count, orthonormal count), indexed [k, n]."""

    entries: np.ndarray
    normalization: str = "variance"

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=float)
        if e.ndim != 2:
            raise DomainError("mapping entries must be a 2-D array")
        if not np.all(np.isfinite(e)):
            raise DomainError("mapping entries must be finite")
        object.__setattr__(self, "entries", e)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def column_bound(self) -> float:
        """max_n sum_k A[k, n]^2, the Bessel-sequence constant of the columns."""
        return float(np.max(np.sum(self.entries**2, axis=0)))


def interleaved_variances(table: ProjectionTable) -> np.ndarray:
    """tau in source order: var_z_1, var_w_1, var_z_2, var_w_2, ..."""
    tau = np.empty(2 * table.terms)
    tau[0::2] = table.spec.var_z
    tau[1::2] = table.spec.var_w
    return tau


def build_mapping(table: ProjectionTable, normalization: str = "variance") -> MappingMatrix:
    """Interleave the two coefficient families into one mapping matrix.

    ``"variance"`` keeps raw projection coefficients (pair with
    ``interleaved_variances``); ``"unit"`` rescales each Riesz element by the
    standard deviation of its coefficient, so the matching tau is all ones.
    """
    if normalization not in NORMALIZATIONS:
        raise DomainError(f"unknown normalization {normalization!r}; expected one of {NORMALIZATIONS}")
    k = table.terms
    a = np.empty((2 * k, table.sine_count))
    a[0::2] = table.mu_hat.T
    a[1::2] = table.mu_tilde.T
    if normalization == "unit":
        a *= np.sqrt(interleaved_variances(table))[:, None]
    return MappingMatrix(entries=a, normalization=normalization)


def transfer_eigenvalues(mapping: MappingMatrix, tau) -> np.ndarray:
    """lambda_n = sum_k A[k, n]^2 tau_k for every column n."""
    tau = np.asarray(tau, dtype=float)
    if tau.ndim != 1 or len(tau) != mapping.rows:
        raise DomainError(f"tau has length {tau.size}, mapping has {mapping.rows} rows")
    if np.any(tau < 0.0):
        raise DomainError("tau must be non-negative")
    return (mapping.entries**2 * tau[:, None]).sum(axis=0)


def transfer_tail_fraction(mapping: MappingMatrix, tau) -> np.ndarray:
    """Per column, the share of the transfer sum carried by its last tenth of rows."""
    tau = np.asarray(tau, dtype=float)
    contrib = mapping.entries**2 * tau[:, None]
    start = mapping.rows - max(1, mapping.rows // 10)
    total = contrib.sum(axis=0)
    return contrib[start:].sum(axis=0) / np.where(total > 0, total, 1.0)


def argmax_column_row(mapping: MappingMatrix, n: int) -> int:
    """1-based row k maximising |A[k, n]| (first one on ties)."""
    if not (1 <= n <= mapping.cols):
        raise DomainError(f"column {n} outside 1..{mapping.cols}")
    return int(np.argmax(np.abs(mapping.entries[:, n - 1]))) + 1


@dataclass(frozen=True)
class ArgmaxFit:
    columns: np.ndarray
    rows: np.ndarray
    slope: float
    r_squared: float


def argmax_linearity(mapping: MappingMatrix, columns) -> ArgmaxFit:
    """Through-origin least-squares fit k* = d n over the given columns."""
    n = np.asarray(list(columns), dtype=int)
    k = np.array([argmax_column_row(mapping, int(c)) for c in n], dtype=float)
    nf = n.astype(float)
    slope = float(nf @ k / (nf @ nf))
    ss_res = float(np.sum((k - slope * nf) ** 2))
    ss_tot = float(np.sum((k - k.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return ArgmaxFit(columns=n, rows=k.astype(int), slope=slope, r_squared=r2)
