import numpy as np
import pytest

from fbmkl import (
    DomainError,
    EstimationError,
    PathEnsemble,
    add_disturbance,
    eigen_spectrum,
    fit_asymptotics,
    hurst_from_spectrum,
    pca_hurst,
)
from fbmkl.estimator import ensemble_from_expansion
from fbmkl.galerkin import AsymptoticFit


def fit_with(p):
    return AsymptoticFit(exponent_p=p, prefactor_c=1.0, r_squared=1.0, fit_range=(4, 20))


@pytest.mark.parametrize("p,h", [(2.0, 0.5), (2.4, 0.7)])
def test_inversion(p, h):
    assert hurst_from_spectrum(fit_with(p)).h == pytest.approx(h)


def test_inversion_flags_and_failures():
    est = hurst_from_spectrum(fit_with(3.5))
    assert est.out_of_range and est.h < 1
    with pytest.raises(EstimationError):
        hurst_from_spectrum(fit_with(0.9))


def test_spectrum_route(cached):
    fit = fit_asymptotics(eigen_spectrum(cached.galerkin(0.3, 256), vectors=False), (8, 64))
    assert hurst_from_spectrum(fit).h == pytest.approx(0.3, abs=0.05)


@pytest.fixture(scope="module")
def clean_07(cached):
    return ensemble_from_expansion(cached.expansion(0.7, 500), 256, range(400))


def test_pca_clean(clean_07):
    assert pca_hurst(clean_07, (4, 20)).h == pytest.approx(0.7, abs=0.05)


def test_pca_white_noise(clean_07):
    noisy = add_disturbance(clean_07, "white", 0.01, seed=1)
    assert pca_hurst(noisy, (4, 20)).h == pytest.approx(0.7, abs=0.08)


def test_pca_degenerate():
    with pytest.raises(EstimationError):
        pca_hurst(PathEnsemble(np.zeros((100, 64))), (4, 20))


def test_pca_needs_enough_paths(clean_07):
    small = PathEnsemble(clean_07.paths[:50])
    with pytest.raises(EstimationError):
        pca_hurst(small, (4, 20))


def test_ensemble_validation():
    with pytest.raises(DomainError):
        PathEnsemble(np.zeros((1, 16)))
    with pytest.raises(DomainError):
        PathEnsemble(np.zeros((4, 4)))
    with pytest.raises(DomainError):
        PathEnsemble(np.full((4, 16), np.nan))


def test_zero_disturbance_is_identity(clean_07):
    out = add_disturbance(clean_07, "white", 0.0, seed=3)
    np.testing.assert_array_equal(out.paths, clean_07.paths)


def test_disturbance_validation(clean_07):
    with pytest.raises(DomainError):
        add_disturbance(clean_07, "spike", 1.0)
    with pytest.raises(DomainError):
        add_disturbance(clean_07, "white", -1.0)


def test_white_noise_adds_variance(cached):
    ens = ensemble_from_expansion(cached.expansion(0.7, 200), 16, range(1000))
    noisy = add_disturbance(ens, "white", 0.5, seed=9)
    gained = noisy.paths.var(axis=0) - ens.paths.var(axis=0)
    m = len(ens.paths)
    se = np.sqrt(2 * 0.25**2 / m + 4 * 0.25 * ens.paths.var(axis=0) / m)
    assert np.all(np.abs(gained - 0.25) <= 4 * se)
    assert gained.mean() == pytest.approx(0.25, rel=0.05)
    # original untouched
    assert not np.shares_memory(noisy.paths, ens.paths)


def test_trend_shifts_mean(cached):
    ens = ensemble_from_expansion(cached.expansion(0.7, 200), 16, range(1000))
    shifted = add_disturbance(ens, "trend", 1.0)
    np.testing.assert_allclose(shifted.paths[:, -1] - ens.paths[:, -1], 1.0)
    assert str(shifted.disturbance) == "trend:1"


@pytest.mark.slow
@pytest.mark.parametrize("h", [0.3, 0.7])
def test_estimator_consistency(h, cached):
    spec = cached.expansion(h, 500)

    def median_error(m):
        errs = [
            abs(pca_hurst(ensemble_from_expansion(spec, 256, range(r * m, (r + 1) * m)), (4, 20)).h - h)
            for r in range(10)
        ]
        return float(np.median(errs))

    assert median_error(400) < median_error(100)


@pytest.mark.parametrize("h", [0.3, 0.7])
def test_routes_agree(h, cached):
    fit = fit_asymptotics(eigen_spectrum(cached.galerkin(h, 256), vectors=False), (8, 64))
    h_spec = hurst_from_spectrum(fit).h
    h_pca = pca_hurst(ensemble_from_expansion(cached.expansion(h, 500), 256, range(400)), (4, 20)).h
    assert abs(h_spec - h_pca) <= 0.05
