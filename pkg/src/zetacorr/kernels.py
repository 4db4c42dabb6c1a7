"""Auxiliary special functions and correlation kernels.

The real-part family is::

    f(u) = u * int_0^inf sinh(y(1-u)) / cosh y dy           0 < u < 2
    g(u) = int_0^inf e^{-y} cosh(uy) / cosh y dy            -2 < u < 2
    h(u) = cos u * I(u),  I(u) = int_0^inf y / (cosh y (y^2+u^2)) dy

and the imaginary-part family is::

    frak_f(u) = (pi u/2) cot(pi u / 2)                       0 < u < 2
    frak_h(u) = sin u * J(u),  J(u) = int_0^inf y / (sinh y (y^2+u^2)) dy

Scalar evaluation (:func:`eval_aux`) integrates the definitions with QUADPACK.
Bulk evaluation inside zero sums goes through :class:`AuxTable`, a 4-point
interpolation table in ``v = sqrt(u)`` joined to the large-``u`` asymptotic
series, evaluated by the compiled core.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate

from . import _fallback
from ._backend import core
from .arithmetic import prime_power

__all__ = [
    "AuxKind",
    "AuxDomainError",
    "eval_aux",
    "aux_table",
    "AuxTable",
    "fourier_transform_numeric",
    "h_hat",
    "l_func",
    "m_weight",
    "HexagonValue",
    "hexagon",
    "hexagon_arrays",
    "DeltaLocation",
    "DeltaAtom",
    "H_DELTA_ATOMS",
    "omega_weight",
    "omega_smoothed",
    "psi_bump",
    "TestKernel",
    "fejer_kernel",
    "gaussian_kernel",
    "fejer_product_kernel",
    "gaussian2d_kernel",
]

_QUAD = dict(epsabs=1e-13, epsrel=1e-12, limit=400)
_Y_MAX = 60.0  # sech(60), 1/sinh(60) < 1e-25
_SMALL_U = 1e-8


class AuxKind(enum.Enum):
    F_RE = "f"
    G_RE = "g"
    H_RE = "h"
    F_IM = "frak_f"
    H_IM = "frak_h"


class AuxDomainError(ValueError):
    """Argument outside the domain of an auxiliary function."""

    def __init__(self, kind, u):
        super().__init__(f"{kind.name}: u = {u!r} is outside the domain")
        self.kind = kind
        self.value = u


def _check_domain(kind: AuxKind, u: float) -> None:
    if not math.isfinite(u):
        raise AuxDomainError(kind, u)
    if kind in (AuxKind.F_RE, AuxKind.F_IM):
        ok = 0.0 < u < 2.0
    elif kind is AuxKind.G_RE:
        ok = -2.0 < u < 2.0
    else:
        ok = u != 0.0
    if not ok:
        raise AuxDomainError(kind, u)


def _quad(func, a, b, **kw):
    return integrate.quad(func, a, b, **{**_QUAD, **kw})[0]


def _geometric_points(u: float) -> list[float]:
    # breakpoints that resolve the y ~ u peak of y/(y^2+u^2)
    pts, p = [], u
    while p < 1.0 and len(pts) < 40:
        pts.append(p)
        p *= 8.0
    return pts


@lru_cache(maxsize=None)
def _small_u_constants() -> tuple[float, float]:
    """Constants R(0) and D(0) in the small-u expansions of I and J.

    I(u) = log(1/u) + R(0) + o(1) and u J(u) = arctan(1/u) + u D(0) + o(u).
    """
    r0 = _quad(lambda y: (1.0 / np.cosh(y) - 1.0) / y, 0.0, 1.0) + _quad(
        lambda y: 1.0 / (y * np.cosh(y)), 1.0, _Y_MAX)
    d0 = _quad(lambda y: (y / np.sinh(y) - 1.0) / (y * y) if y > 1e-4 else -1.0 / 6 + 7 * y * y / 360,
               0.0, 1.0) + _quad(lambda y: 1.0 / (y * np.sinh(y)), 1.0, _Y_MAX)
    return r0, d0


def _i_integral(u: float) -> float:
    u = abs(u)
    if u < _SMALL_U:
        return 0.5 * math.log1p(1.0 / (u * u)) + _small_u_constants()[0]
    pts = _geometric_points(u)
    return _quad(lambda y: y / (np.cosh(y) * (y * y + u * u)), 0.0, _Y_MAX, points=pts)


def _j_integral(u: float) -> float:
    u = abs(u)
    if u < _SMALL_U:
        return (math.atan(1.0 / u) + u * _small_u_constants()[1]) / u

    def integrand(y):
        ys = y / np.sinh(y) if y > 0 else 1.0
        return ys / (y * y + u * u)

    return _quad(integrand, 0.0, _Y_MAX, points=_geometric_points(u))


def eval_aux(kind: AuxKind, u: float) -> float:
    """Value of an auxiliary function at ``u`` to about 1e-10 absolute.

    Raises :class:`AuxDomainError` outside the kind's domain.
    """
    kind = AuxKind(kind)
    u = float(u)
    _check_domain(kind, u)
    if kind is AuxKind.G_RE:
        # e^{-y} cosh(uy)/cosh y, rewritten to avoid overflow
        return _quad(lambda y: (np.exp((u - 2) * y) + np.exp((-u - 2) * y)) / (1 + np.exp(-2 * y)),
                     0.0, np.inf)
    if kind is AuxKind.F_RE:
        # t = e^{-y}: u int_0^1 (t^{u-1} - t^{1-u}) / (1 + t^2) dt, the t^{u-1} by algebraic weight
        head = integrate.quad(lambda t: 1.0 / (1 + t * t), 0.0, 1.0, weight="alg", wvar=(u - 1.0, 0.0),
                              epsabs=1e-14, epsrel=1e-13)[0]
        return u * (head - _quad(lambda t: t ** (1.0 - u) / (1 + t * t), 0.0, 1.0))
    if kind is AuxKind.F_IM:
        # the factor u makes frak_f(0+) = 1, matching f(0+) = 1
        return 0.5 * math.pi * u / math.tan(0.5 * math.pi * u)
    if kind is AuxKind.H_RE:
        return math.cos(u) * _i_integral(u)
    return math.sin(u) * _j_integral(u)


# ---------------------------------------------------------------------------
# interpolation tables for bulk evaluation of h and frak_h

_TAB_VMAX = 8.0
_TAB_STEP = 1.0 / 1024
_ASYM_TERMS = 8


def _gl_panels(edges, order=24):
    x, w = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


@dataclass(frozen=True)
class AuxTable:
    """Tabulated h or frak_h, ready for the compiled zero-sum kernels.

    For ``h`` the table stores ``R(u) = I(u) - log(1 + 1/u^2)/2``; for
    ``frak_h`` it stores ``K(u) = u J(u)``.  Both are sampled on a uniform
    grid in ``v = sqrt(u)`` for ``0 <= u <= umax``; beyond ``umax`` the
    asymptotic series ``sum_k asym[k] / u^(2k+2)`` is used.
    """

    kind: AuxKind
    tab: np.ndarray
    inv_step: float
    umax: float
    asym: np.ndarray
    code: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "code", 0 if self.kind is AuxKind.H_RE else 1)

    def __call__(self, u) -> np.ndarray:
        u = np.ascontiguousarray(np.atleast_1d(u), dtype=float)
        out = np.empty_like(u)
        core.aux_eval(self.code, u, self.tab, self.inv_step, self.umax, self.asym, out)
        return out

    def envelope(self, u) -> np.ndarray:
        """The non-oscillating factor: I(u) for h, J(u) for frak_h."""
        au = np.abs(np.atleast_1d(np.asarray(u, dtype=float)))
        near = au <= self.umax
        out = np.empty_like(au)
        an = au[near]
        inner = _fallback.lagrange4(self.tab, np.sqrt(an), self.inv_step)
        with np.errstate(divide="ignore"):
            if self.kind is AuxKind.H_RE:
                out[near] = 0.5 * np.log1p(1.0 / (an * an)) + inner
            else:
                out[near] = inner / an
        out[~near] = _fallback.asymptotic(au[~near], self.asym)
        return out

    def integral(self, y: float) -> float:
        """int_{-y}^{y} of the tabulated function (zero for the odd frak_h)."""
        if self.kind is AuxKind.H_IM:
            return 0.0
        edges = np.concatenate([[0.0], np.geomspace(1e-12, 1.0, 25), np.arange(2.0, np.ceil(y) + 1.0)])
        edges = np.unique(np.minimum(edges, y))
        x, w = _gl_panels(edges, order=16)
        return 2.0 * float(w @ self(x))


def _asym_moments(kind: AuxKind) -> np.ndarray:
    if kind is AuxKind.H_RE:
        mom = [_quad(lambda y, k=k: y ** (2 * k + 1) / np.cosh(y), 0.0, 80.0) for k in range(_ASYM_TERMS)]
    else:
        mom = [_quad(lambda y, k=k: y ** (2 * k + 1) / np.sinh(y) if y > 0 else float(k == 0), 0.0, 80.0)
               for k in range(_ASYM_TERMS)]
    return np.array([(-1) ** k * m for k, m in enumerate(mom)])


@lru_cache(maxsize=None)
def aux_table(kind: AuxKind) -> AuxTable:
    """Build (once) the interpolation table for ``H_RE`` or ``H_IM``."""
    kind = AuxKind(kind)
    if kind not in (AuxKind.H_RE, AuxKind.H_IM):
        raise ValueError("tables exist only for H_RE and H_IM")
    v = np.arange(0.0, _TAB_VMAX + 3 * _TAB_STEP, _TAB_STEP)
    u = v * v
    inner = np.concatenate([[0.0], np.geomspace(1e-5, 1.0, 30)])
    y0, w0 = _gl_panels(inner)
    y1, w1 = _gl_panels(np.arange(1.0, _Y_MAX + 1.0))
    tab = np.empty_like(u)
    chunk = 256
    for s in range(0, u.size, chunk):
        uu = u[s:s + chunk, None]
        if kind is AuxKind.H_RE:
            a = (y0 * (1.0 / np.cosh(y0) - 1.0)) / (y0 * y0 + uu * uu)
            b = (y1 / np.cosh(y1)) / (y1 * y1 + uu * uu)
            tab[s:s + chunk] = a @ w0 + b @ w1
        else:
            a = (y0 / np.sinh(y0) - 1.0) / (y0 * y0 + uu * uu)
            b = (y1 / np.sinh(y1)) / (y1 * y1 + uu * uu)
            uc = u[s:s + chunk]
            with np.errstate(divide="ignore"):
                tab[s:s + chunk] = np.where(uc > 0, np.arctan(1.0 / uc), 0.5 * np.pi) + uc * (a @ w0 + b @ w1)
    tab.setflags(write=False)
    asym = _asym_moments(kind)
    asym.setflags(write=False)
    return AuxTable(kind, tab, 1.0 / _TAB_STEP, _TAB_VMAX ** 2, asym)


# ---------------------------------------------------------------------------
# Fourier transforms


def fourier_transform_numeric(kind: AuxKind, a: float) -> complex:
    """Oscillatory-quadrature transform ``int r(t) e^{-2 pi i a t} dt`` of h or frak_h.

    The product-to-sum identity turns ``cos t cos wt`` (or ``sin t sin wt``)
    into two cosines with frequencies ``1 -+ w``; the tail ``[1, inf)`` is
    integrated per frequency with QUADPACK's Fourier-integral routine.
    """
    kind = AuxKind(kind)
    if kind not in (AuxKind.H_RE, AuxKind.H_IM):
        raise ValueError("transform available for H_RE and H_IM")
    w = 2.0 * math.pi * abs(float(a))
    c1, c2 = abs(1.0 - w), 1.0 + w
    tab = aux_table(kind)
    sign = 1.0 if kind is AuxKind.H_RE else -1.0

    def envelope(t):
        return float(tab.envelope(t)[0])

    def head(t):
        return envelope(t) * (math.cos(c1 * t) + sign * math.cos(c2 * t))

    # a log singularity (h) or a removable one (frak_h) at t = 0
    total = _quad(head, 0.0, 1.0)
    for c, s in ((c1, 1.0), (c2, sign)):
        if c == 0.0:
            total += s * _quad(envelope, 1.0, np.inf)
        else:
            total += s * integrate.quad(envelope, 1.0, np.inf, weight="cos", wvar=c,
                                        limlst=200, epsabs=1e-12)[0]
    if kind is AuxKind.H_RE:
        return complex(total, 0.0)
    # frak_h is odd: its transform is -i * sign(a) * (the cosine integral)
    return complex(0.0, -math.copysign(total, a) if a != 0 else 0.0)


def h_hat(a: float, kind: AuxKind = AuxKind.H_RE):
    """Fourier transform of h (closed form, real) or frak_h (numerical, complex)."""
    kind = AuxKind(kind)
    a = float(a)
    if kind is AuxKind.H_RE:
        if abs(a) <= 1.0 / (2.0 * math.pi):
            return math.pi * eval_aux(AuxKind.G_RE, 2.0 * math.pi * a)
        return 1.0 / (2.0 * abs(a))
    if kind is AuxKind.H_IM:
        if a == 0.0:
            return 0j
        return fourier_transform_numeric(kind, a)
    raise ValueError("h_hat is defined for H_RE and H_IM")


# ---------------------------------------------------------------------------
# elementary pieces of the prediction formulas


def l_func(b: float) -> float:
    """((b+1) log(1+b) + (1-b) log(1-b)) / b on [0, 1], continuous at both ends."""
    b = float(b)
    if not 0.0 <= b <= 1.0:
        raise ValueError(f"l_func: b = {b!r} outside [0, 1]")
    if b == 0.0:
        return 0.0
    if b == 1.0:
        return 2.0 * math.log(2.0)
    return ((1 + b) * math.log1p(b) + (1 - b) * math.log1p(-b)) / b


def m_weight(alpha: float, n: int, T: float) -> float:
    """Trapezoidal weight m_n(alpha) of the twisted pair correlation integral."""
    pp = prime_power(n)
    if pp is None:
        raise ValueError(f"m_weight: {n} is not a prime power")
    if not T > math.e:
        raise ValueError("m_weight: T must exceed e")
    L = math.log(T)
    lam = pp.lam
    logn = math.log(n)
    if alpha < -1.0 - lam / L:
        return 1.0
    if alpha < -1.0:
        return (L / lam) * (-alpha - 1.0)
    if alpha < 1.0 - logn / L:
        return 0.0
    if alpha < 1.0 - (logn - lam) / L:
        return (L / lam) * (alpha - 1.0 + logn / L)
    return 1.0


@dataclass(frozen=True)
class HexagonValue:
    g_val: float
    h_star: float


def hexagon_arrays(a, b):
    """Vectorized (G(a, b), H_*(a, b))."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    aa, ab, ac = np.abs(a), np.abs(b), np.abs(a + b)
    g = np.maximum(0.5 * (2.0 - aa - ab - ac), 0.0)
    h = 2.0 * g + np.minimum(aa, 1.0) + np.minimum(ab, 1.0) + np.minimum(ac, 1.0) - 2.0
    return g, h


def hexagon(a: float, b: float) -> HexagonValue:
    g, h = hexagon_arrays(a, b)
    return HexagonValue(float(g), float(h))


class DeltaLocation(enum.Enum):
    ORIGIN = "a=b=0"
    AT_A_ZERO = "a=0"
    AT_B_ZERO = "b=0"
    AT_APLUSB_ZERO = "a+b=0"


@dataclass(frozen=True)
class DeltaAtom:
    """A singular part ``delta(location) * coefficient(free variable)``.

    For line atoms the free variable is ``b`` on ``a = 0`` and ``a`` on the
    other two lines; the origin atom has a constant coefficient.
    """

    location: DeltaLocation
    coefficient: Callable[[np.ndarray], np.ndarray]


def _min1(x):
    return np.minimum(np.abs(x), 1.0)


H_DELTA_ATOMS = (
    DeltaAtom(DeltaLocation.ORIGIN, lambda x: np.ones_like(np.asarray(x, dtype=float))),
    DeltaAtom(DeltaLocation.AT_A_ZERO, _min1),
    DeltaAtom(DeltaLocation.AT_B_ZERO, _min1),
    DeltaAtom(DeltaLocation.AT_APLUSB_ZERO, _min1),
)


def omega_weight(x):
    """Cauchy weight 4 / (4 + x^2)."""
    x = np.asarray(x, dtype=float)
    out = 4.0 / (4.0 + x * x)
    return float(out) if out.ndim == 0 else out


def _smoothstep(x):
    # C-infinity step from 0 (x <= 0) to 1 (x >= 1)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        p = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        q = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return p / (p + q)


def psi_bump(s, U: float):
    """Smooth bump: 0 outside [1, 2], 1 on [1 + 1/U, 2 - 1/U]."""
    if U < 2:
        raise ValueError("psi_bump: U must be at least 2")
    s = np.asarray(s, dtype=float)
    out = _smoothstep((s - 1.0) * U) * _smoothstep((2.0 - s) * U)
    return float(out) if out.ndim == 0 else out


def _cauchy_product_antiderivative(x, d):
    # antiderivative in x of 1 / ((1 + x^2)(1 + (x + d)^2))
    if abs(d) < 1e-12:
        return 0.5 * x / (1 + x * x) + 0.5 * math.atan(x)
    log_ratio = math.log1p((2 * x * d + d * d) / (1 + x * x))
    return (log_ratio + d * (math.atan(x) + math.atan(x + d))) / (d * (d * d + 4))


def omega_smoothed(gamma: float, gamma2: float, T: float, U: float) -> float:
    """(2/pi) int 1/(1+(t-g)^2) 1/(1+(t-g')^2) psi_U(t/T) dt.

    The plateau contributes in closed form; the two transition layers of
    width T/U are integrated adaptively.
    """
    if T <= 0 or U < 2:
        raise ValueError("omega_smoothed: need T > 0 and U >= 2")
    d = gamma - gamma2  # (t - gamma) + d = t - gamma2
    t1, t2 = T * (1 + 1 / U), T * (2 - 1 / U)
    plateau = (_cauchy_product_antiderivative(t2 - gamma, d)
               - _cauchy_product_antiderivative(t1 - gamma, d))

    def integrand(t):
        return psi_bump(t / T, U) / ((1 + (t - gamma) ** 2) * (1 + (t - gamma2) ** 2))

    layers = 0.0
    for lo, hi in ((T, t1), (t2, 2 * T)):
        pts = [p for p in (gamma, gamma2) if lo < p < hi]
        layers += _quad(integrand, lo, hi, points=pts or None, limit=1000)
    return 2.0 / math.pi * (plateau + layers)


# ---------------------------------------------------------------------------
# test kernels (Fourier pairs with r_hat(a) = int r(t) e^{-2 pi i a t} dt)


@dataclass(frozen=True)
class TestKernel:
    """A test function and its Fourier transform.

    ``core_kind`` names the compiled weight (0 Cauchy, 1 Fejer, 2 Gaussian)
    evaluated at ``x / width``; ``hat_support`` bounds the region outside of
    which ``r_hat`` is zero or below 1e-16.  Two-dimensional kernels set
    ``dim = 2`` and either ``factor`` (separable ``r(u) r(v)``) or
    ``matrix`` (Gaussian ``exp(-pi x^T A x)``).
    """

    __test__ = False  # not a pytest class

    name: str
    dim: int
    r: Callable
    r_hat: Callable
    lipschitz_bound: float
    decay_exponent: float
    core_kind: int | None = None
    width: float = 1.0
    hat_support: float = math.inf
    hat_breakpoints: tuple = ()
    factor: "TestKernel | None" = None
    matrix: tuple | None = None

    def in_class_c(self, grid=None) -> bool:
        """Spot-check r_hat'(a) |a|^3 stays bounded on a grid (1D kernels)."""
        if self.dim != 1:
            raise ValueError("class check applies to 1D kernels")
        a = np.linspace(1.0, 50.0, 400) if grid is None else np.asarray(grid)
        h = 1e-5
        deriv = (self.r_hat(a + h) - self.r_hat(a - h)) / (2 * h)
        return bool(np.all(np.isfinite(deriv)) and np.max(np.abs(deriv) * a**3) < 1e3)


def fejer_kernel(width: float = 1.0) -> TestKernel:
    """r(x) = sinc^2(x / width); r_hat(a) = width * max(1 - width |a|, 0)."""
    s = float(width)

    def r(x):
        return np.sinc(np.asarray(x, dtype=float) / s) ** 2

    def r_hat(a):
        return s * np.maximum(1.0 - s * np.abs(np.asarray(a, dtype=float)), 0.0)

    return TestKernel("fejer", 1, r, r_hat, lipschitz_bound=s * s, decay_exponent=2.0,
                      core_kind=1, width=s, hat_support=1.0 / s, hat_breakpoints=(0.0,))


def gaussian_kernel(width: float = 1.0) -> TestKernel:
    """r(x) = exp(-pi (x/width)^2); r_hat(a) = width exp(-pi (width a)^2)."""
    s = float(width)

    def r(x):
        x = np.asarray(x, dtype=float) / s
        return np.exp(-np.pi * x * x)

    def r_hat(a):
        a = np.asarray(a, dtype=float) * s
        return s * np.exp(-np.pi * a * a)

    return TestKernel("gaussian", 1, r, r_hat, lipschitz_bound=s * s * math.sqrt(2 * math.pi / math.e),
                      decay_exponent=math.inf, core_kind=2, width=s, hat_support=6.5 / s)


def fejer_product_kernel(width: float = 1.0) -> TestKernel:
    """Separable r(u, v) = sinc^2(u/width) sinc^2(v/width)."""
    f = fejer_kernel(width)
    return TestKernel("fejer2", 2, lambda u, v: f.r(u) * f.r(v), lambda a, b: f.r_hat(a) * f.r_hat(b),
                      lipschitz_bound=f.lipschitz_bound * width, decay_exponent=2.0, core_kind=1,
                      width=width, hat_support=f.hat_support, hat_breakpoints=(0.0,), factor=f)


def gaussian2d_kernel(a11: float, a12: float, a22: float) -> TestKernel:
    """r(u, v) = exp(-pi (a11 u^2 + 2 a12 uv + a22 v^2)) for positive definite A."""
    A = np.array([[a11, a12], [a12, a22]], dtype=float)
    det = float(np.linalg.det(A))
    if not (a11 > 0 and det > 0):
        raise ValueError("gaussian2d_kernel: matrix must be positive definite")
    Ai = np.linalg.inv(A)

    def r(u, v):
        u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        return np.exp(-np.pi * (a11 * u * u + 2 * a12 * u * v + a22 * v * v))

    def r_hat(a, b):
        a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
        q = Ai[0, 0] * a * a + 2 * Ai[0, 1] * a * b + Ai[1, 1] * b * b
        return np.exp(-np.pi * q) / math.sqrt(det)

    # r_hat < 1e-16 once the quadratic form exceeds 12
    support = math.sqrt(12.0 * float(np.max(np.linalg.eigvalsh(A))))
    return TestKernel("gaussian2d", 2, r, r_hat, lipschitz_bound=float(np.max(np.linalg.eigvalsh(Ai))),
                      decay_exponent=math.inf, core_kind=2, hat_support=support,
                      matrix=(float(a11), float(a12), float(a22)))
