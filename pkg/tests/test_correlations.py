import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zetacorr import correlations as co, kernels, zerodata
from zetacorr.correlations import WeightKind


def prefix_window(zs, n=2000):
    """A Window over the first ``n`` ordinates (normalizations use T = gamma_n / 2)."""
    g = zs.ordinates[:n]
    T = float(g[-1]) / 2
    return zerodata.Window(T, 0, n, math.log(T), g)


def brute_rows(gamma, weight):
    d = gamma[:, None] - gamma[None, :]
    return weight(d)


def brute_f(w, alpha, W):
    e = np.exp(1j * alpha * w.L * w.gamma)
    return (e @ W @ np.conj(e)) / (w.T * w.L / (2 * math.pi))


def brute_fn(w, alpha, n, W):
    lam = co.prime_power(n).lam
    e = np.exp(1j * alpha * w.L * w.gamma)
    s = (np.exp(1j * math.log(n) * w.gamma) * e) @ W @ np.conj(e)
    return -s / (w.T / (2 * math.pi) * lam / math.sqrt(n))


@pytest.fixture(scope="module")
def prefix(zs):
    return prefix_window(zs)


@pytest.fixture(scope="module")
def cauchy_matrix(prefix):
    return brute_rows(prefix.gamma, kernels.omega_weight)


def test_dense_f_and_twists_match_brute_force(prefix, cauchy_matrix):
    alphas = [0.0, 0.1, 0.37, 0.8, 1.3]
    g = co.correlation_grid(alphas, prefix, twists=(2, 3, 4, 9))
    for i, a in enumerate(alphas):
        ref = brute_f(prefix, a, cauchy_matrix)
        assert abs(ref.imag) < 1e-10
        assert g.f[i] == pytest.approx(ref.real, rel=1e-10)
        for n in (2, 3, 4, 9):
            ref = brute_fn(prefix, a, n, cauchy_matrix)
            assert abs(g.twisted[n][i] - ref) <= 1e-10 * abs(ref)
    assert g.pair_count == prefix.count ** 2
    assert g.truncation_error_bound == 0.0


def test_banded_within_certified_tail(prefix):
    alphas = np.linspace(0, 1, 6)
    dense = co.correlation_grid(alphas, prefix, twists=(2,))
    band = co.correlation_grid(alphas, prefix, twists=(2,), band=200.0)
    assert band.truncation_error_bound > 0
    assert band.pair_count < dense.pair_count
    assert np.max(np.abs(band.f - dense.f)) <= band.truncation_error_bound
    assert np.max(np.abs(band.twisted[2] - dense.twisted[2])) <= band.truncation_error_bound


def test_smoothed_closed_form_matches_quadrature(small_window):
    w = small_window
    U = co.default_U(w.T)
    P, Q, Qp = co.smoothed_factors(w.gamma, w.T, U)
    for j, k in [(0, 0), (0, 1), (3, 40), (17, 16), (len(w.gamma) - 1, 5)]:
        a, b = w.gamma[j], w.gamma[k]
        if j == k:
            closed = (P[j] - Qp[j]) / math.pi
        else:
            d = b - a
            closed = 2 / math.pi * ((P[j] + P[k]) / (d * d + 4) + 2 * (Q[j] - Q[k]) / (d * (d * d + 4)))
        assert closed == pytest.approx(kernels.omega_smoothed(a, b, w.T, U), abs=1e-10)


def test_smoothed_grid_matches_matrix(small_window):
    w = small_window
    U = co.default_U(w.T)
    P, Q, Qp = co.smoothed_factors(w.gamma, w.T, U)
    d = w.gamma[None, :] - w.gamma[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        W = 2 / math.pi * ((P[:, None] + P[None, :]) / (d * d + 4)
                           + 2 * (Q[:, None] - Q[None, :]) / (d * (d * d + 4)))
    np.fill_diagonal(W, (P - Qp) / math.pi)
    alphas = [0.05, 0.4, 0.9]
    g = co.correlation_grid(alphas, w, twists=(2, 5), weight=WeightKind.SMOOTHED)
    for i, a in enumerate(alphas):
        assert g.f[i] == pytest.approx(brute_f(w, a, W).real, rel=1e-12)
        for n in (2, 5):
            ref = brute_fn(w, a, n, W)
            assert abs(g.twisted[n][i] - ref) <= 1e-12 * abs(ref)


def test_f_properties(small_window):
    alphas = np.linspace(-1.5, 1.5, 31)
    g = co.correlation_grid(alphas, small_window)
    assert np.max(np.abs(g.f - g.f[::-1])) < 1e-12 * np.max(g.f)
    assert np.all(g.f >= -1e-6)
    assert g.max_imag_f < 1e-10
    # F(0) is at least its diagonal
    f0 = co.f_montgomery(0.0, small_window).value
    assert f0 > small_window.count / (small_window.T * small_window.L / (2 * math.pi))


@settings(max_examples=20, deadline=None)
@given(st.floats(-1.5, 1.5), st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11]),
       st.sampled_from([WeightKind.CAUCHY, WeightKind.SMOOTHED]))
def test_twisted_symmetry(small_window, alpha, n, weight):
    ell = math.log(n) / small_window.L
    a = co.f_twisted(alpha, n, small_window, weight=weight).value
    b = co.f_twisted(-alpha - ell, n, small_window, weight=weight).value
    assert abs(a - b) < 1e-10


def test_twist_must_be_prime_power(small_window):
    for n in (1, 6, 12, 2.5):
        with pytest.raises(ValueError):
            co.f_twisted(0.1, n, small_window)


def test_pair_sums_match_brute_force(prefix):
    x = prefix.gamma * prefix.L / (2 * math.pi)
    norm = prefix.T * prefix.L / (2 * math.pi)
    d = x[:, None] - x[None, :]
    for k in (kernels.fejer_kernel(1.0), kernels.gaussian_kernel(1.0), kernels.gaussian_kernel(0.3)):
        R = k.r(d)
        est = co.pair_sum(k, prefix)
        assert est.value == pytest.approx(R.sum() / norm, rel=1e-8)
        for n in (2, 4, 7):
            lam = co.prime_power(n).lam
            ref = -(np.exp(1j * math.log(n) * prefix.gamma) @ R.sum(axis=1)) / (prefix.T / (2 * math.pi) * lam / math.sqrt(n))
            got = co.pair_sum(k, prefix, twist=n).value
            assert abs(got - ref) <= 1e-8 * abs(ref)


def test_pair_sum_diagonal_only(small_window):
    k = kernels.gaussian_kernel(1e-3)
    est = co.pair_sum(k, small_window)
    norm = small_window.T * small_window.L / (2 * math.pi)
    assert est.value == pytest.approx(small_window.count / norm, rel=1e-12)


def test_triple_sums_match_brute_force(prefix):
    x = prefix.gamma * prefix.L / (2 * math.pi)
    norm = prefix.T * prefix.L / (2 * math.pi)
    f2 = kernels.fejer_product_kernel(1.0)
    R = kernels.fejer_kernel(1.0).r(x[:, None] - x[None, :]).sum(axis=1)
    assert co.triple_sum(f2, prefix).value == pytest.approx(np.sum(R * R) / norm, rel=1e-8)

    a11, a12, a22 = 2.0, 0.5, 1.5
    g2 = kernels.gaussian2d_kernel(a11, a12, a22)
    total = 0.0
    # every term with |u| or |v| > 6 is below e^{-40}
    for j in range(x.size):
        u = x[j] - x[np.abs(x[j] - x) < 6.0]
        q = a11 * u[:, None] ** 2 + 2 * a12 * u[:, None] * u[None, :] + a22 * u[None, :] ** 2
        total += np.exp(-np.pi * q).sum()
    assert co.triple_sum(g2, prefix).value == pytest.approx(total / norm, rel=1e-8)


def test_triple_diagonal_and_budget(small_window):
    norm = small_window.T * small_window.L / (2 * math.pi)
    tiny = kernels.gaussian2d_kernel(1e6, 0.0, 1e6)
    assert co.triple_sum(tiny, small_window).value == pytest.approx(small_window.count / norm, rel=1e-12)
    wide = kernels.gaussian2d_kernel(1e-6, 0.0, 1e-6)
    with pytest.raises(ValueError, match="shrink"):
        co.triple_sum(wide, small_window, budget=1e6)


def test_landau_gonek(zs):
    w = zerodata.largest_window(zs)
    for (a, b) in [(2, 1), (3, 1), (4, 1), (3, 2), (6, 1), (4, 2)]:
        emp, pred = co.landau_gonek(a, b, w)
        assert abs(emp - pred) < 0.02
    assert co.landau_gonek(2, 1, w)[1] == pytest.approx(-math.log(2) / (2 * math.pi * math.sqrt(2)))
    assert co.landau_gonek(4, 2, w)[1] == co.landau_gonek(2, 1, w)[1]
    assert co.landau_gonek(6, 1, w)[1] == 0.0
    with pytest.raises(ValueError):
        co.landau_gonek(2, 2, w)


def test_empty_window():
    w = zerodata.Window(5.0, 0, 0, math.log(5.0), np.empty(0))
    with pytest.raises(ValueError, match="no zeros"):
        co.f_montgomery(0.1, w)
