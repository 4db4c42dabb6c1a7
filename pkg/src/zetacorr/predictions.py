"""Right-hand sides of the correlation conjectures and the moment predictions.

Lower-order terms written as ``O(1)`` or ``O(1/log T)`` in the conjectures are
evaluated as zero; :func:`twisted_band` and :func:`pair_band` return the size
of what was dropped, so comparisons can report residual / band.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special

from . import arithmetic, kernels
from .arithmetic import prime_power
from .kernels import AuxKind, TestKernel

__all__ = [
    "Regime",
    "RhsKind",
    "PiecewisePrediction",
    "predict_f",
    "strong_prediction",
    "predict_f_twisted",
    "twisted_band",
    "pair_band",
    "conjecture_rhs",
    "MomentPrediction",
    "moment_predictions",
    "MixedMomentPrediction",
    "mixed_moment_integral",
    "mixed_moment_predictions",
    "keating_snaith",
    "third_derivative",
    "keating_snaith_constants",
    "C_Z",
]

C_Z = -math.pi**2 / 4
_QUAD = dict(epsabs=1e-11, epsrel=1e-10, limit=400)


class Regime(enum.Enum):
    STRONG = "strong"
    INTERMEDIATE = "intermediate"


class RhsKind(enum.Enum):
    PAIR = "pair"
    TWISTED_PAIR = "twisted_pair"
    TRIPLE = "triple"


def _check_T(T: float) -> float:
    T = float(T)
    if not T > math.e:
        raise ValueError(f"T must exceed e, got {T}")
    return T


def predict_f(alpha: float, T: float) -> float:
    """Montgomery's prediction T^{-2|alpha|} log T + min(|alpha|, 1)."""
    T = _check_T(T)
    a = abs(float(alpha))
    return math.exp(-2.0 * a * math.log(T)) * math.log(T) + min(a, 1.0)


@dataclass(frozen=True)
class PiecewisePrediction:
    """Function of alpha given by ``pieces[i]`` on ``[breakpoints[i-1], breakpoints[i])``.

    There are ``len(breakpoints) + 1`` pieces; the first covers everything
    below ``breakpoints[0]`` and the last everything from ``breakpoints[-1]``.
    """

    breakpoints: tuple
    pieces: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.pieces) != len(self.breakpoints) + 1:
            raise ValueError("need one more piece than breakpoints")
        if list(self.breakpoints) != sorted(self.breakpoints):
            raise ValueError("breakpoints must be sorted")

    def __call__(self, alpha: float) -> float:
        i = int(np.searchsorted(self.breakpoints, alpha, side="right"))
        return float(self.pieces[i](float(alpha)))

    def jumps(self) -> list[float]:
        """Left/right mismatch at each interior breakpoint."""
        out = []
        for i, b in enumerate(self.breakpoints):
            out.append(self.pieces[i + 1](b) - self.pieces[i](b))
        return out


def _twist_data(n: int, T: float):
    pp = prime_power(int(n))
    if pp is None:
        raise ValueError(f"{n} is not a prime power")
    L = math.log(T)
    return pp, L, math.log(n) / L


def strong_prediction(n: int, T: float) -> PiecewisePrediction:
    """Main terms of the strong twisted conjecture on all of R.

    Below ``-log n/log T`` the formula is extended by the symmetry
    ``F_n(alpha) = F_n(-alpha - log n/log T)``.
    """
    T = _check_T(T)
    pp, L, ell = _twist_data(n, T)

    def middle(a):  # -ell <= a <= 0
        r2 = arithmetic.r_spikes(a, n, T)[1]
        return math.exp(2 * a * L) * L + L / (n * n * math.exp(2 * a * L)) - r2

    def small(a):  # 0 < a < 1 - ell
        r1 = arithmetic.r_spikes(a, n, T)[0]
        return math.exp(-2 * a * L) * (L + L / (n * n)) - r1

    def large(a):  # a >= 1 - ell
        return min(1.0, max(0.0, L / pp.lam * (a - 1.0 + ell)))

    def mirror(f):
        return lambda a: f(-a - ell)

    if 1.0 - ell <= 0.0:
        raise ValueError("n must be below T for the strong prediction")
    pieces = (mirror(large), mirror(small), middle, small, large)
    # pieces own [bp_i, bp_{i+1}); nudge so that the middle piece owns both of
    # its endpoints and the mirrored large piece owns -1, the image of 1 - ell
    bps = (math.nextafter(-1.0, math.inf), math.nextafter(-ell, -math.inf),
           math.nextafter(0.0, math.inf), 1.0 - ell)
    return PiecewisePrediction(bps, pieces, {"n": int(n), "T": T, "regime": Regime.STRONG})


def predict_f_twisted(alpha: float, n: int, T: float, regime: Regime = Regime.STRONG) -> float:
    """Predicted F_n(alpha): strong-conjecture main terms or the intermediate-range formula."""
    T = _check_T(T)
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise ValueError("alpha must be finite")
    regime = Regime(regime)
    if regime is Regime.STRONG:
        return strong_prediction(n, T)(alpha)
    pp, L, ell = _twist_data(n, T)
    if alpha < 1.0 - ell:
        raise ValueError(f"intermediate range starts at 1 - log n/log T = {1.0 - ell}")
    return min(1.0, max(0.0, L / pp.lam * (alpha - 1.0 + ell)))


def twisted_band(alpha: float, n: int, T: float, regime: Regime = Regime.STRONG) -> float:
    """Size of the dropped terms in :func:`predict_f_twisted` at this T.

    STRONG: the O(1) companions of the two log T peaks plus 1/log T.
    INTERMEDIATE: log log T / Lambda(n).
    """
    T = _check_T(T)
    pp, L, ell = _twist_data(n, T)
    if Regime(regime) is Regime.INTERMEDIATE:
        return math.log(L) / pp.lam
    return math.exp(-2 * abs(alpha) * L) + math.exp(-2 * abs(alpha + ell) * L) + 1.0 / L


def pair_band(T: float, n: int = 1) -> float:
    """1/log T for the untwisted conjectures, E_n = ((a-1) log q + 1)/log T when twisted."""
    L = math.log(_check_T(T))
    if n == 1:
        return 1.0 / L
    pp = prime_power(int(n))
    if pp is None:
        raise ValueError(f"{n} is not a prime power")
    return ((pp.a - 1) * pp.lam + 1.0) / L


# ---------------------------------------------------------------------------
# conjecture right-hand sides


def _quad_pieces(f: Callable[[float], float], points: Sequence[float]) -> float:
    pts = sorted(set(float(p) for p in points))
    return sum(integrate.quad(f, a, b, **_QUAD)[0] for a, b in zip(pts[:-1], pts[1:]) if b > a)


def _support(kernel: TestKernel) -> float:
    if not math.isfinite(kernel.hat_support):
        raise ValueError(f"kernel {kernel.name!r} has no finite transform support; "
                         "tails cannot be bounded")
    return kernel.hat_support


def _rhat1(kernel):
    return lambda a: float(kernel.r_hat(np.array(a)))


def _pair_rhs(kernel: TestKernel) -> float:
    S = _support(kernel)
    rh = _rhat1(kernel)
    pts = [-S, S, 0.0, -1.0, 1.0, *kernel.hat_breakpoints, *(-b for b in kernel.hat_breakpoints)]
    pts = [p for p in pts if -S <= p <= S]
    return rh(0.0) + _quad_pieces(lambda a: rh(a) * min(abs(a), 1.0), pts)


def _twisted_rhs(kernel: TestKernel, n: int, T: float, via_hexagon: bool) -> float:
    S = _support(kernel)
    pp, L, ell = _twist_data(n, T)
    rh = _rhat1(kernel)
    lam = pp.lam
    if via_hexagon:
        if pp.a != 1:
            raise ValueError("the hexagon form of m_n holds for primes only")

        def m(a):
            return float(kernels.hexagon_arrays(a, lam / L)[1]) * L / lam
    else:
        def m(a):
            return kernels.m_weight(a, n, T)

    def sym(a):
        return 0.5 * (rh(a) + rh(-a - ell))

    hb = list(kernel.hat_breakpoints)
    pts = [-S - ell, S, 0.0, -ell, -1.0 - lam / L, -1.0, 1.0 - ell, 1.0 - (math.log(n) - lam) / L,
           *(b for b in hb), *(-b - ell for b in hb), *(-b for b in hb), *(b - ell for b in hb)]
    pts = [p for p in pts if -S - ell <= p <= S]
    return sym(0.0) + _quad_pieces(lambda a: sym(a) * m(a), pts)


def _triple_rhs(kernel: TestKernel) -> float:
    S = _support(kernel)
    rh = kernel.r_hat
    hb = [0.0, *kernel.hat_breakpoints]
    if kernel.factor is not None:
        hb += [kernel.factor.hat_support, -kernel.factor.hat_support]

    def r2(a, b):
        return float(rh(np.array(a), np.array(b)))

    # delta atoms, one per location
    atoms = 0.0
    for atom in kernels.H_DELTA_ATOMS:
        loc = atom.location
        if loc is kernels.DeltaLocation.ORIGIN:
            atoms += r2(0.0, 0.0) * float(atom.coefficient(0.0))
            continue
        if loc is kernels.DeltaLocation.AT_A_ZERO:
            g = lambda v: r2(0.0, v)  # noqa: E731
        elif loc is kernels.DeltaLocation.AT_B_ZERO:
            g = lambda v: r2(v, 0.0)  # noqa: E731
        else:
            g = lambda v: r2(v, -v)  # noqa: E731
        atoms += _quad_pieces(lambda v: g(v) * float(atom.coefficient(v)),
                              [-S, S, 0.0, -1.0, 1.0, *hb, *(-b for b in hb)])

    def inner(a):
        # kinks of H_* and of a piecewise-linear r_hat along b
        cand = [0.0, -a, 1.0, -1.0, -a + 1.0, -a - 1.0, a, -a / 2, -2 * a, *hb, *(-b for b in hb),
                *(-a + b for b in hb), *(-a - b for b in hb)]
        pts = [-S, S] + [c for c in cand if -S < c < S]
        return _quad_pieces(lambda b: r2(a, b) * float(kernels.hexagon_arrays(a, b)[1]), pts)

    outer_pts = [-S, S, 0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, *hb, *(-b for b in hb),
                 *(b / 2 for b in hb), *(-b / 2 for b in hb)]
    outer_pts = [p for p in outer_pts if -S <= p <= S]
    smooth = sum(integrate.quad(inner, a, b, epsabs=1e-9, epsrel=1e-8, limit=200)[0]
                 for a, b in zip(sorted(set(outer_pts))[:-1], sorted(set(outer_pts))[1:]))
    return atoms + smooth


def conjecture_rhs(kind: RhsKind, kernel: TestKernel, n: int = 1, T: float | None = None,
                   via_hexagon: bool = False) -> float:
    """Right-hand side of the pair, twisted pair or triple correlation conjecture.

    Delta atoms are evaluated by substitution; the continuous parts by
    piecewise adaptive quadrature split at every kink.  Kernels whose
    transform is not compactly supported (to 1e-16) are rejected.
    """
    kind = RhsKind(kind)
    if kind is RhsKind.PAIR:
        if kernel.dim != 1:
            raise ValueError("pair RHS needs a 1D kernel")
        return _pair_rhs(kernel)
    if kind is RhsKind.TWISTED_PAIR:
        if kernel.dim != 1 or T is None:
            raise ValueError("twisted RHS needs a 1D kernel and T")
        return _twisted_rhs(kernel, n, _check_T(T), via_hexagon)
    if kernel.dim != 2:
        raise ValueError("triple RHS needs a 2D kernel")
    return _triple_rhs(kernel)


# ---------------------------------------------------------------------------
# moments


@dataclass(frozen=True)
class MomentPrediction:
    T: float
    second_re: float
    second_im: float
    third_re: float
    third_im: float
    c_p: float
    c_z: float


def moment_predictions(T: float) -> MomentPrediction:
    """Second moments (Goldston's formula, both parts) and third moments c_P + c_Z and 0."""
    T = float(T)
    if not T > 10:
        raise ValueError("moment_predictions needs T > 10")
    second = 0.5 * math.log(math.log(T)) + (np.euler_gamma + 1) / 2 + arithmetic.goldston_prime_sum()
    cp = arithmetic.c_p_constant().value
    return MomentPrediction(T, second, second, cp + C_Z, 0.0, cp, C_Z)


@dataclass(frozen=True)
class MixedMomentPrediction:
    beta: float
    integral: float
    p3: float
    p2z: float
    pz2: float
    z3: float

    @property
    def total(self) -> float:
        return self.p3 + 3 * self.p2z + 3 * self.pz2 + self.z3


def mixed_moment_integral(beta: float) -> float:
    """I(beta) = int_0^beta (g(b/beta)/beta - 1/b) L(b) db, L(b) = ((1+b)log(1+b) + (1-b)log(1-b))/b.

    Near b = 0 the integrand tends to -1 (L(b) ~ b), so it is bounded.
    """
    beta = float(beta)
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")

    def integrand(b):
        if b == 0.0:
            return -1.0
        return (kernels.eval_aux(AuxKind.G_RE, b / beta) / beta - 1.0 / b) * kernels.l_func(b)

    return integrate.quad(integrand, 0.0, beta, epsabs=1e-11, epsrel=1e-10, limit=200)[0]


def mixed_moment_predictions(beta: float) -> MixedMomentPrediction:
    """Predicted P^3, P^2 Z, P Z^2, Z^3 means for beta = log x / log T."""
    i_beta = mixed_moment_integral(beta)
    cp = arithmetic.c_p_constant().value
    return MixedMomentPrediction(float(beta), i_beta, cp, 0.0, 0.5 * i_beta, C_Z - 1.5 * i_beta)


# ---------------------------------------------------------------------------
# Keating-Snaith


def _log_a(s: float, p_max: int) -> float:
    p = arithmetic.primes_up_to(p_max).astype(float)
    inv = 1.0 / p
    total = np.ones_like(p)
    coef, pw = 1.0, np.ones_like(p)
    m = 0
    while True:
        coef *= (s + m) / (m + 1)  # (s)_{m+1}/(m+1)!
        m += 1
        pw *= inv
        term = coef * coef * pw
        total += term
        if abs(coef * coef) * 2.0**-m < 1e-18 or m > 200:
            break
    return float(np.sum(s * s * np.log1p(-inv) + np.log(total)))


def keating_snaith(s: float, N: int, p_max: int = 10**6) -> tuple[float, float]:
    """(M_N(s), a(s)): the unitary-group moment and the arithmetic Euler product (to p_max)."""
    s = float(s)
    if not s > -0.5:
        raise ValueError("keating_snaith needs s > -1/2")
    if N < 1:
        raise ValueError("N must be at least 1")
    # r_j = G(j)G(j+2s)/G(j+s)^2 satisfies r_{j+1} = r_j (1 - s^2/(j+s)^2); summing the
    # small logs avoids cancelling log-gamma values of size N log N
    i = np.arange(1, N, dtype=float)
    log_r1 = special.gammaln(1 + 2 * s) - 2 * special.gammaln(1 + s)
    log_m = N * log_r1 + float(np.sum((N - i) * np.log1p(-s * s / (i + s) ** 2)))
    return math.exp(log_m), math.exp(_log_a(s, p_max))


def _third_difference(f, h):
    # fourth-order central stencil for f'''(0)
    return (-f(3 * h) + 8 * f(2 * h) - 13 * f(h) + 13 * f(-h) - 8 * f(-2 * h) + f(-3 * h)) / (8 * h**3)


def third_derivative(f: Callable[[float], float], steps=(1e-1, 3e-2, 1e-2)) -> tuple[float, float]:
    """f'''(0) by Richardson-extrapolated central differences.

    For each step ``h`` the O(h^4) stencil at ``h`` and ``h/2`` is combined
    as ``(16 D(h/2) - D(h)) / 15``; the estimate whose neighbour in the step
    scan agrees best is returned with that disagreement as error.
    """
    ests = []
    for h in steps:
        d1, d2 = _third_difference(f, h), _third_difference(f, h / 2)
        ests.append((16 * d2 - d1) / 15)
    if len(ests) == 1:
        return ests[0], math.inf
    diffs = [abs(a - b) for a, b in zip(ests[:-1], ests[1:])]
    i = int(np.argmin(diffs))
    return ests[i + 1], diffs[i]


def keating_snaith_constants(N: int = 800, p_max: int = 10**6) -> tuple[float, float]:
    """(M_N'''(0)/8, a'''(0)/8), the finite-N analogues of c_Z and c_P."""
    cz = third_derivative(lambda s: keating_snaith(s, N, 2)[0])[0] / 8
    cp = third_derivative(lambda s: math.exp(_log_a(s, p_max)))[0] / 8
    return cz, cp
