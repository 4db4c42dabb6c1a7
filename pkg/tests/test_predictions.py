import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy import special

from zetacorr import arithmetic, kernels, predictions as pr
from zetacorr.predictions import Regime, RhsKind

T4 = 1e4


def test_predict_f():
    assert pr.predict_f(0.5, T4) == pytest.approx(math.log(T4) / T4 + 0.5)
    assert pr.predict_f(-0.5, T4) == pr.predict_f(0.5, T4)
    assert pr.predict_f(2.0, T4) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        pr.predict_f(0.1, 2.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(-1.4, 1.4), st.sampled_from([2, 3, 4, 5, 8, 9, 25]), st.sampled_from([1e4, 1e6, 3.7e4]))
def test_strong_symmetry(alpha, n, T):
    ell = math.log(n) / math.log(T)
    # the pieces jump at 0 and 1 - ell (and their images); alpha and its image
    # must land on the same side in floating point
    assume(min(abs(alpha), abs(alpha + ell), abs(alpha - 1 + ell), abs(alpha + 1)) > 1e-9)
    a = pr.predict_f_twisted(alpha, n, T)
    b = pr.predict_f_twisted(-alpha - ell, n, T)
    assert a == pytest.approx(b, abs=1e-10 * max(1.0, abs(a)))


def test_strong_small_alpha_value():
    # small-alpha piece: T^{-2 alpha}(L + L/n^2) - r1
    T, n, a = 1e4, 2, 0.2
    L = math.log(T)
    r1 = arithmetic.r_spikes(a, n, T)[0]
    assert pr.predict_f_twisted(a, n, T) == pytest.approx(T ** (-2 * a) * (L + L / 4) - r1, rel=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 4, 7, 16]), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_intermediate_monotone_clamped(n, s1, s2):
    T = 1e6
    lo = 1 - math.log(n) / math.log(T)
    a1, a2 = sorted((lo + 1.2 * s1, lo + 1.2 * s2))
    v1 = pr.predict_f_twisted(a1, n, T, Regime.INTERMEDIATE)
    v2 = pr.predict_f_twisted(a2, n, T, Regime.INTERMEDIATE)
    assert 0.0 <= v1 <= v2 <= 1.0


def test_intermediate_range_and_bands():
    with pytest.raises(ValueError, match="intermediate range"):
        pr.predict_f_twisted(0.5, 2, T4, Regime.INTERMEDIATE)
    with pytest.raises(ValueError):
        pr.predict_f_twisted(0.5, 6, T4)
    L = math.log(T4)
    assert pr.twisted_band(0.9, 2, T4, Regime.INTERMEDIATE) == pytest.approx(math.log(L) / math.log(2))
    assert pr.twisted_band(0.3, 2, T4) > 1 / L
    assert pr.pair_band(T4) == pytest.approx(1 / L)
    assert pr.pair_band(T4, 3) == pytest.approx(1 / L)
    assert pr.pair_band(T4, 8) == pytest.approx((2 * math.log(2) + 1) / L)


def test_piecewise_validation():
    with pytest.raises(ValueError):
        pr.PiecewisePrediction((0.0,), (abs,))
    with pytest.raises(ValueError):
        pr.PiecewisePrediction((1.0, 0.0), (abs, abs, abs))
    p = pr.PiecewisePrediction((0.0,), (lambda a: -1.0, lambda a: 1.0))
    assert p(-0.5) == -1.0 and p(0.0) == 1.0
    assert p.jumps() == [2.0]


def test_pair_rhs_closed_forms():
    assert pr.conjecture_rhs(RhsKind.PAIR, kernels.fejer_kernel(1.0)) == pytest.approx(4 / 3, abs=1e-9)
    assert pr.conjecture_rhs(RhsKind.PAIR, kernels.fejer_kernel(2.0)) == pytest.approx(2 + 1 / 6, abs=1e-9)
    gauss = 1 + (1 - math.exp(-math.pi)) / math.pi + special.erfc(math.sqrt(math.pi))
    assert pr.conjecture_rhs(RhsKind.PAIR, kernels.gaussian_kernel(1.0)) == pytest.approx(gauss, abs=1e-9)


def test_rhs_rejects_unbounded_transform():
    k = kernels.TestKernel("cauchyish", 1, lambda x: x, lambda a: np.exp(-np.abs(a)), 1.0, 2.0)
    with pytest.raises(ValueError, match="support"):
        pr.conjecture_rhs(RhsKind.PAIR, k)


def test_twisted_rhs_delta_only():
    # r_hat supported where m_n vanishes: only the delta atom survives
    T, n = 1e6, 5
    ell = math.log(n) / math.log(T)
    v = pr.conjecture_rhs(RhsKind.TWISTED_PAIR, kernels.fejer_kernel(2.0), n=n, T=T)
    assert v == pytest.approx(2 - 2 * ell, abs=1e-10)


@pytest.mark.parametrize("n, T", [(2, 1e4), (3, 3.7e4), (101, 1e6)])
def test_twisted_rhs_two_routes(n, T):
    k = kernels.fejer_kernel(1.0)
    a = pr.conjecture_rhs(RhsKind.TWISTED_PAIR, k, n=n, T=T)
    b = pr.conjecture_rhs(RhsKind.TWISTED_PAIR, k, n=n, T=T, via_hexagon=True)
    assert a == pytest.approx(b, abs=1e-8)


def test_triple_rhs_against_monte_carlo():
    v = pr.conjecture_rhs(RhsKind.TRIPLE, kernels.fejer_product_kernel(1.0))
    atoms = 1 + 2 * (1 / 3) + 1 / 6
    rng = np.random.default_rng(20261016)
    a, b = rng.uniform(-1, 1, (2, 4_000_000))
    smooth = 4 * np.mean((1 - np.abs(a)) * (1 - np.abs(b)) * kernels.hexagon_arrays(a, b)[1])
    assert v == pytest.approx(atoms + smooth, abs=1e-4)


def test_moment_predictions():
    p1, p2 = pr.moment_predictions(1e4), pr.moment_predictions(1e8)
    assert p1.second_re == p1.second_im
    assert p2.second_re - p1.second_re == pytest.approx(0.5 * math.log(math.log(1e8) / math.log(1e4)))
    assert p1.third_im == 0.0
    assert p1.third_re == pytest.approx(arithmetic.c_p_constant().value - math.pi**2 / 4)
    assert p1.third_re == pytest.approx(-2.2337, abs=1e-4)
    with pytest.raises(ValueError):
        pr.moment_predictions(10.0)


def _i_beta_oracle(beta):
    # expanding e^{-y}/cosh y geometrically: g(u) = sum_{m>=1} (-1)^{m-1} 4m / (4m^2 - u^2)
    def g(u):
        return mpmath.nsum(lambda m: (-1) ** (m - 1) * 4 * m / (4 * m * m - u * u), [1, mpmath.inf])

    def lf(b):
        return ((1 + b) * mpmath.log1p(b) + (1 - b) * mpmath.log1p(-b)) / b

    return float(mpmath.quad(lambda b: (g(b / beta) / beta - 1 / b) * lf(b), [0, beta / 2, beta]))


@pytest.mark.parametrize("beta", [0.05, 0.25, 0.5, 0.75])
def test_mixed_integral_oracle(beta):
    assert pr.mixed_moment_integral(beta) == pytest.approx(_i_beta_oracle(beta), abs=1e-9)


@settings(max_examples=15, deadline=None)
@given(st.floats(1e-3, 1.0))
def test_mixed_predictions_combine(beta):
    m = pr.mixed_moment_predictions(beta)
    cp = arithmetic.c_p_constant().value
    assert m.total == pytest.approx(cp - math.pi**2 / 4, abs=1e-12)
    assert m.p2z == 0.0 and m.p3 == cp
    assert math.isfinite(m.integral)


def test_mixed_integral_small_beta():
    # the integrand tends to -1 at b = 0, so I(beta) ~ -beta for tiny beta... up to the g term
    vals = [pr.mixed_moment_integral(b) for b in (1e-2, 1e-3, 1e-4)]
    assert all(math.isfinite(v) for v in vals)
    assert abs(vals[-1]) < abs(vals[0])
    with pytest.raises(ValueError):
        pr.mixed_moment_integral(0.0)


def test_keating_snaith_at_zero_and_domain():
    assert pr.keating_snaith(0.0, 50) == (1.0, 1.0)
    with pytest.raises(ValueError):
        pr.keating_snaith(-0.5, 10)
    with pytest.raises(ValueError):
        pr.keating_snaith(0.1, 0)


def test_third_derivative_known():
    assert pr.third_derivative(math.sin)[0] == pytest.approx(-1.0, abs=1e-9)
    assert pr.third_derivative(lambda s: math.exp(2 * s))[0] == pytest.approx(8.0, abs=1e-8)


def _cz_oracle(N):
    # log M_N has zero first derivative at 0, so M''' = (log M)''' = 6 sum psi''(j)
    return 6 * float(mpmath.fsum(mpmath.psi(2, j) for j in range(1, N + 1))) / 8


def test_keating_snaith_c_z_trend():
    vals = []
    for N in (50, 200, 800):
        cz = pr.third_derivative(lambda s: pr.keating_snaith(s, N, 2)[0])[0] / 8
        assert cz == pytest.approx(_cz_oracle(N), abs=1e-5)
        vals.append(cz)
    assert vals[0] > vals[1] > vals[2] > pr.C_Z


@pytest.mark.slow
def test_keating_snaith_c_p():
    cz, cp = pr.keating_snaith_constants()
    assert cp == pytest.approx(arithmetic.c_p_constant().value, abs=1e-4)
    assert cz == pytest.approx(pr.C_Z, abs=0.02)
