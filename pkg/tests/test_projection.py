import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from fbmkl import DomainError, TruncationWarning, mu_hat, mu_tilde, projected_moment, projected_spectrum_fit
from fbmkl.expansion import ExpansionSpec
from fbmkl.kernel import HurstParams
from fbmkl.projection import ProjectionTable, branch_moments, moment_matrix, tail_fraction

SQ2 = math.sqrt(2)


def b(n):
    return (n - 0.5) * math.pi


def hat_oracle(n, x):
    f = lambda t: math.sin(x * t) / x * SQ2 * math.sin(b(n) * t)
    return quad(f, 0, 1, limit=400, epsabs=1e-14, epsrel=1e-13)[0]


def tilde_oracle(n, y):
    f = lambda t: 2 * math.sin(0.5 * y * t) ** 2 / y * SQ2 * math.sin(b(n) * t)
    return quad(f, 0, 1, limit=400, epsabs=1e-14, epsrel=1e-13)[0]


def random_pairs(seed):
    rng = np.random.default_rng(seed)
    return list(zip(rng.integers(1, 30, 20).tolist(), rng.uniform(0.2, 120.0, 20).tolist()))


def test_mu_hat_brownian_delta():
    x = (np.arange(1, 41) - 0.5) * math.pi
    n = np.arange(1, 41)[:, None]
    expected = np.diag(1.0 / (SQ2 * x))
    np.testing.assert_allclose(mu_hat(n, x[None, :]), expected, atol=1e-16)


@pytest.mark.parametrize("n,x", random_pairs(1))
def test_mu_hat_quadrature(n, x):
    assert mu_hat(n, x) == pytest.approx(hat_oracle(n, x), abs=1e-12)


@pytest.mark.parametrize("n", [1, 3, 17])
def test_mu_hat_near_degenerate(n):
    bn = b(n)
    limit = SQ2 / (2 * bn) * (1 - math.sin(2 * bn) / (2 * bn))
    assert mu_hat(n, bn + 1e-9) == pytest.approx(limit, abs=1e-7)
    assert mu_hat(n, bn + 1e-3) == pytest.approx(hat_oracle(n, bn + 1e-3), abs=1e-12)


def test_mu_tilde_brownian_closed_form():
    for n in range(1, 12):
        for k in range(1, 12):
            y = k * math.pi
            expected = -SQ2 * y / (b(n) * (b(n) ** 2 - y**2))
            assert mu_tilde(n, y) == pytest.approx(expected, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("n,y", random_pairs(2))
def test_mu_tilde_quadrature(n, y):
    assert mu_tilde(n, y) == pytest.approx(tilde_oracle(n, y), abs=1e-12)


def test_mu_tilde_near_degenerate():
    y = b(5) + 1e-9
    assert mu_tilde(5, y) == pytest.approx(tilde_oracle(5, y), abs=1e-12)


def test_mu_tilde_decays_like_inverse_zero():
    y = np.geomspace(10, 1e6, 30)
    vals = np.abs(mu_tilde(3, y)) * y
    assert np.all(np.abs(mu_tilde(3, y)) <= 2 * SQ2 / y)
    assert vals[-1] == pytest.approx(SQ2 / b(3), rel=1e-3)


def test_index_and_zero_validation():
    with pytest.raises(DomainError):
        mu_hat(0, 1.0)
    with pytest.raises(DomainError):
        mu_tilde(1, -1.0)


@pytest.mark.parametrize("h", [0.3, 0.5, 0.7])
def test_table_invariants(h, cached):
    tab = cached.table(h, 2000, 32)
    spec = tab.spec
    assert np.all(np.abs(tab.mu_hat) <= SQ2 / spec.x)
    assert np.all(np.abs(tab.mu_tilde) <= 2 * SQ2 / spec.y)
    partial = np.cumsum(tab.mu_hat**2, axis=1)
    assert np.max(partial[:, -1] - partial[:, -2]) <= 1e-10


def test_brownian_moments(cached):
    tab = cached.table(0.5, 2000, 32)
    z, _ = branch_moments(tab)
    for n in range(1, 33):
        exact = 1 / (b(n) ** 2)
        assert projected_moment(n, n, tab) == pytest.approx(exact, rel=1e-3)
        assert z[n - 1] == pytest.approx(exact / 2, rel=1e-12)


@pytest.mark.parametrize("n,m", [(1, 1), (5, 5), (32, 32)])
def test_matches_galerkin_diagonal(n, m, cached):
    tab = cached.table(0.7, 2000, 32)
    a = cached.galerkin(0.7, 32).entries
    assert projected_moment(n, m, tab) == pytest.approx(a[n - 1, m - 1], rel=1e-3)


def test_matches_galerkin_off_diagonal(cached):
    tab = cached.table(0.7, 2000, 32)
    a = cached.galerkin(0.7, 32).entries
    assert projected_moment(1, 2, tab) == pytest.approx(a[0, 1], abs=1e-3)


def test_moment_matrix_agrees_with_pointwise(cached):
    tab = cached.table(0.3, 2000, 16)
    mat = moment_matrix(tab)
    assert mat[3, 7] == pytest.approx(projected_moment(4, 8, tab), rel=1e-12)


def test_tail_correction_is_what_closes_the_gap_at_small_h(cached):
    tab = cached.table(0.3, 2000, 16)
    a = cached.galerkin(0.3, 16).entries
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        raw = projected_moment(1, 1, tab, tail_correction=False)
    corrected = projected_moment(1, 1, tab)
    assert abs(corrected / a[0, 0] - 1) < 1e-6 < abs(raw / a[0, 0] - 1)


def test_truncation_warning(cached):
    tab = cached.table(0.3, 4, 2)
    with pytest.warns(TruncationWarning):
        projected_moment(1, 1, tab, tail_correction=False)
    assert tail_fraction(1, 1, tab) > 0.01


def test_index_bounds(cached):
    with pytest.raises(DomainError):
        projected_moment(33, 1, cached.table(0.5, 2000, 32))


def test_fit_brownian(cached):
    fit = projected_spectrum_fit(cached.table(0.5, 2000, 32), (4, 32))
    assert abs(fit.exponent_p - 2.0) <= 0.05


def test_fit_rough(cached):
    fit = projected_spectrum_fit(cached.table(0.3, 4000, 48), (8, 48))
    assert abs(fit.exponent_p - 1.6) <= 0.1


def test_fit_synthetic_power_law():
    k = 30
    spec = ExpansionSpec(
        params=HurstParams(0.5),
        x=np.arange(1.0, k + 1),
        y=np.arange(1.0, k + 1),
        var_z=np.ones(k),
        var_w=np.ones(k),
    )
    n = np.arange(1, k + 1)
    tab = ProjectionTable(spec=spec, mu_hat=np.diag(n**-1.2), mu_tilde=np.zeros((k, k)), tail=np.zeros((k, k)))
    fit = projected_spectrum_fit(tab, (1, 30), index_offset=0.0)
    assert fit.exponent_p == pytest.approx(2.4, rel=1e-13)


@pytest.mark.parametrize("h", [0.3, 0.7])
def test_branch_shadow_and_positivity(h, cached):
    tab = cached.table(h, 2000, 48)
    z, w = branch_moments(tab)
    assert np.all(z > 0) and np.all(w > 0)
    n = np.arange(8, 49)
    scaled = z[7:48] * n ** (2 * h + 1)
    assert scaled.min() > 0 and scaled.max() / scaled.min() < 1.5


@pytest.mark.parametrize("h", [0.3, 0.5, 0.7])
def test_peak_alignment(h, cached):
    tab = cached.table(h, 2000, 48)
    peaks = np.argmax(np.abs(tab.mu_hat), axis=1) + 1
    assert np.all(np.abs(peaks - np.arange(1, 49)) <= 2)
