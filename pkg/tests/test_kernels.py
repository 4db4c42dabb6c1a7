import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zetacorr import kernels as K
from zetacorr.kernels import AuxKind


def _b(a):
    # int_0^inf e^{-a y} / cosh y dy via digamma
    return 0.5 * float(mpmath.digamma((a + 3) / 4) - mpmath.digamma((a + 1) / 4))


def g_oracle(u):
    return 0.5 * (_b(1 - u) + _b(1 + u))


def f_oracle(u):
    return 0.5 * u * (_b(u - 1) - _b(1 - u))


def h_oracle(u):
    i = mpmath.quad(lambda y: y / (mpmath.cosh(y) * (y * y + u * u)), [0, u, 1, 10, mpmath.inf])
    return float(mpmath.cos(u) * i)


def frak_h_oracle(u):
    j = mpmath.quad(lambda y: y / (mpmath.sinh(y) * (y * y + u * u)), [0, u, 1, 10, mpmath.inf])
    return float(mpmath.sin(u) * j)


@pytest.mark.parametrize("u", [0.05, 0.3, 0.9, 1.0, 1.5, 1.95])
def test_f_and_g_against_digamma(u):
    assert K.eval_aux(AuxKind.G_RE, u) == pytest.approx(g_oracle(u), abs=1e-11)
    assert K.eval_aux(AuxKind.F_RE, u) == pytest.approx(f_oracle(u), abs=1e-11)


def test_g_equals_one_minus_f_over_u():
    for u in np.linspace(0.05, 1.95, 50):
        lhs = K.eval_aux(AuxKind.G_RE, u)
        rhs = (1 - K.eval_aux(AuxKind.F_RE, u)) / u
        assert abs(lhs - rhs) < 1e-9


def test_f_limits():
    assert K.eval_aux(AuxKind.F_RE, 1e-6) == pytest.approx(1.0, abs=1e-5)
    assert K.eval_aux(AuxKind.F_IM, 1e-6) == pytest.approx(1.0, abs=1e-10)
    assert K.eval_aux(AuxKind.F_IM, 1.0) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("u", [1e-9, 1e-4, 0.01, 0.5, 2.0, 7.0, 40.0])
def test_h_and_frak_h_against_mpmath(u):
    assert K.eval_aux(AuxKind.H_RE, u) == pytest.approx(h_oracle(u), abs=1e-10)
    assert K.eval_aux(AuxKind.H_IM, u) == pytest.approx(frak_h_oracle(u), abs=1e-10)


def test_domains():
    with pytest.raises(K.AuxDomainError):
        K.eval_aux(AuxKind.F_RE, 2.5)
    with pytest.raises(K.AuxDomainError):
        K.eval_aux(AuxKind.G_RE, -2.0)


@pytest.mark.parametrize("kind", [AuxKind.H_RE, AuxKind.H_IM])
def test_tables_match_scalar_evaluation(kind):
    tab = K.aux_table(kind)
    us = np.concatenate([np.geomspace(1e-7, 1.0, 15), np.linspace(1.1, 63.0, 25), [64.5, 90.0, 400.0]])
    got = tab(us)
    ref = np.array([K.eval_aux(kind, u) for u in us])
    assert np.max(np.abs(got - ref)) < 1e-9


def test_h_is_even_and_frak_h_odd():
    for kind, sgn in ((AuxKind.H_RE, 1), (AuxKind.H_IM, -1)):
        tab = K.aux_table(kind)
        u = np.array([0.3, 5.0, 80.0])
        assert np.allclose(tab(-u), sgn * tab(u), atol=1e-15)


def test_table_integral_of_h():
    # int_{-Y}^{Y} h against adaptive quadrature of the scalar function
    from scipy import integrate
    y = 30.0
    ref = 2 * sum(integrate.quad(lambda u: K.eval_aux(AuxKind.H_RE, u), a, b, limit=200)[0]
                  for a, b in [(0, 1e-6), (1e-6, 1), *((k, k + 1) for k in range(1, 30))])
    assert K.aux_table(AuxKind.H_RE).integral(y) == pytest.approx(ref, abs=1e-7)


@pytest.mark.parametrize("a", [0.05, 0.1, 0.3, 0.7, 1.5, 3.0])
def test_h_hat_closed_form_matches_numeric_transform(a):
    num = K.fourier_transform_numeric(AuxKind.H_RE, a)
    assert abs(num - K.h_hat(a)) < 1e-6


def test_frak_h_hat_is_odd_and_imaginary():
    v = K.h_hat(0.4, AuxKind.H_IM)
    assert v.real == 0.0
    assert K.h_hat(-0.4, AuxKind.H_IM) == pytest.approx(-v)


def test_l_func():
    assert K.l_func(0.0) == 0.0
    assert K.l_func(1.0) == pytest.approx(2 * math.log(2))
    b = 1e-4
    assert K.l_func(b) == pytest.approx(b, rel=1e-6)
    with pytest.raises(ValueError):
        K.l_func(1.5)


@settings(max_examples=200, deadline=None)
@given(st.floats(-3, 3), st.sampled_from([2, 3, 5, 7, 101]), st.sampled_from([1e4, 1e6]))
def test_m_weight_equals_hexagon(alpha, n, T):
    lam = math.log(n) / math.log(T)
    h = float(K.hexagon_arrays(alpha, lam)[1])
    assert abs(lam * K.m_weight(alpha, n, T) - h) < 1e-12


def test_m_weight_prime_power_values():
    T = 1e4
    L = math.log(T)
    assert K.m_weight(0.5, 4, T) == 0.0
    assert K.m_weight(5.0, 4, T) == 1.0
    a = 1 - math.log(4) / L + 0.5 * math.log(2) / L
    assert K.m_weight(a, 4, T) == pytest.approx(0.5)


@settings(max_examples=200, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_hexagon_symmetries(a, b):
    g, h = K.hexagon_arrays(a, b)
    for aa, bb in ((b, a), (-a, -b), (a, -a - b)):
        g2, h2 = K.hexagon_arrays(aa, bb)
        assert g2 == pytest.approx(g, abs=1e-12)
        assert h2 == pytest.approx(h, abs=1e-12)
    assert 0.0 <= g <= 1.0


def test_hexagon_values():
    assert K.hexagon(0.0, 0.0) == K.HexagonValue(1.0, 0.0)
    assert K.hexagon(5.0, 5.0).h_star == 1.0


def test_psi_bump():
    U = 10.0
    assert K.psi_bump(1.5, U) == 1.0
    assert K.psi_bump(1.0, U) == 0.0
    assert K.psi_bump(2.0, U) == 0.0
    s = np.linspace(1, 2, 101)
    v = K.psi_bump(s, U)
    assert np.all((v >= 0) & (v <= 1))


def test_omega_smoothed_tends_to_cauchy_weight():
    # with psi ~ indicator and both ordinates deep inside, omega -> 4/(4+d^2)
    T, U = 1e4, 200.0
    g1, g2 = 1.5e4, 1.5e4 + 0.7
    assert K.omega_smoothed(g1, g2, T, U) == pytest.approx(K.omega_weight(0.7), abs=1e-6)


def test_omega_smoothed_is_symmetric():
    assert K.omega_smoothed(310.0, 312.5, 300.0, 20.0) == pytest.approx(
        K.omega_smoothed(312.5, 310.0, 300.0, 20.0), rel=1e-12)


def test_omega_smoothed_against_plain_quadrature():
    from scipy import integrate
    T, U, g1, g2 = 300.0, 20.0, 303.1, 305.9
    f = lambda t: K.psi_bump(t / T, U) / ((1 + (t - g1) ** 2) * (1 + (t - g2) ** 2))  # noqa: E731
    edges = np.linspace(T, 2 * T, 301)
    ref = sum(integrate.quad(f, a, b, epsabs=1e-14)[0] for a, b in zip(edges[:-1], edges[1:]))
    assert K.omega_smoothed(g1, g2, T, U) == pytest.approx(2 / math.pi * ref, rel=1e-9)


@pytest.mark.parametrize("make", [K.fejer_kernel, K.gaussian_kernel])
@pytest.mark.parametrize("width", [0.5, 1.0, 2.0])
def test_kernel_transform_pairs(make, width):
    k = make(width)
    from scipy import integrate
    for a in (0.0, 0.2, 0.45):
        val = integrate.quad(lambda t: float(k.r(t)) * math.cos(2 * math.pi * a * t), -400, 400,
                             limit=4000, points=np.linspace(-20, 20, 41))[0]
        assert val == pytest.approx(float(k.r_hat(a)), abs=3e-3)


def test_fejer_is_in_class_c_and_tail_zero():
    k = K.fejer_kernel(1.0)
    assert k.in_class_c()
    assert k.r_hat(1.2) == 0.0


def test_gaussian2d_transform():
    k = K.gaussian2d_kernel(1.0, 0.3, 2.0)
    from scipy import integrate
    val = integrate.dblquad(lambda v, u: float(k.r(u, v)) * math.cos(2 * math.pi * (0.2 * u - 0.1 * v)),
                            -6, 6, -6, 6, epsabs=1e-10)[0]
    assert val == pytest.approx(float(k.r_hat(0.2, -0.1)), abs=1e-8)
    with pytest.raises(ValueError):
        K.gaussian2d_kernel(1.0, 2.0, 1.0)


def test_delta_atoms_cover_the_four_locations():
    assert {a.location for a in K.H_DELTA_ATOMS} == set(K.DeltaLocation)
