"""Karhunen-Loeve eigenvalues of fractional Brownian motion by two routes.

The Galerkin route discretises the covariance operator on the sine basis
sqrt(2) sin((n - 1/2) pi t); the projection route expands fBm on Bessel-zero
functions and projects that expansion onto the same basis.
"""
from .errors import ConvergenceError, DomainError, EstimationError, TruncationWarning
from .estimator import PathEnsemble, add_disturbance, hurst_from_spectrum, pca_hurst
from .expansion import ExpansionSpec, build_expansion, reconstruct_covariance, sample_path
from .galerkin import (
    AsymptoticFit,
    GalerkinMatrix,
    SpectralResult,
    assemble,
    bronski_prediction,
    eigen_spectrum,
    fit_asymptotics,
)
from .kernel import HurstParams, fbm_covariance, sine_basis
from .projection import ProjectionTable, build_table, mu_hat, mu_tilde, projected_moment, projected_spectrum_fit
from .quadrature import QuadSpec
from .riesz import MappingMatrix, argmax_column_row, build_mapping, transfer_eigenvalues
from .specfun import BesselZeros, bessel_j, bessel_zeros

__version__ = "0.1.0"
