"""log zeta on the critical line and its prime/zero decompositions.

Real part: Riemann-Siegel ``Z(t)``.  Imaginary part: ``pi S(t)`` from the
zero count.  ``pz_decompose`` splits both into a prime-power sum up to ``x``
and a smoothed sum over nearby zeros; ``explicit_formula_sides`` evaluates
both sides of the Cauchy-weighted explicit formula.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

from . import arithmetic, kernels, zerodata
from ._backend import core
from ._rs_coeffs import RS_COEFFS

__all__ = [
    "THETA_FLOOR",
    "RS_FLOOR",
    "LOG_CLIP",
    "rs_theta",
    "theta_array",
    "rs_z",
    "rs_z_array",
    "zeta_em",
    "zeta_log_derivative",
    "LogZetaSample",
    "log_zeta",
    "log_zeta_arrays",
    "PZDecomposition",
    "PZArrays",
    "pz_decompose",
    "pz_arrays",
    "ExplicitFormulaSides",
    "explicit_formula_sides",
]

THETA_FLOOR = 10.0
RS_FLOOR = 100.0
LOG_CLIP = -50.0
Y_CUT = 400.0  # zero-band half width in units of u = (gamma - t) log x
EF_BAND = 200.0  # explicit formula: |gamma - t| <= EF_BAND summed literally


def _as_array(t) -> np.ndarray:
    return np.ascontiguousarray(np.atleast_1d(np.asarray(t, dtype=float)))


def theta_array(t) -> np.ndarray:
    """Stirling series for theta(t) with three correction terms (no domain check)."""
    t = _as_array(t)
    out = np.empty_like(t)
    core.theta(t, out)
    return out


def rs_theta(t: float) -> float:
    if not t >= THETA_FLOOR:
        raise ValueError(f"rs_theta needs t >= {THETA_FLOOR}, got {t}")
    return float(theta_array(t)[0])


@lru_cache(maxsize=1)
def _rs_table() -> tuple[np.ndarray, np.ndarray]:
    ncoef = np.array([len(c) for c in RS_COEFFS], dtype=np.intp)
    coeffs = np.zeros((len(RS_COEFFS), int(ncoef.max())))
    for k, c in enumerate(RS_COEFFS):
        coeffs[k, : len(c)] = c
    coeffs.setflags(write=False)
    ncoef.setflags(write=False)
    return coeffs, ncoef


def rs_z_array(t, threads: int = 1) -> np.ndarray:
    """Hardy's Z(t) by the Riemann-Siegel formula with remainder terms C0..C4."""
    t = _as_array(t)
    if t.size and not np.all(t >= RS_FLOOR):
        raise ValueError(f"rs_z needs t >= {RS_FLOOR}, got min {t.min()}")
    coeffs, ncoef = _rs_table()
    out = np.empty_like(t)
    core.rs_z(t, coeffs, ncoef, out, int(threads))
    return out


def rs_z(t: float) -> float:
    return float(rs_z_array(t)[0])


# ---------------------------------------------------------------------------
# Euler-Maclaurin zeta, used for zeta'/zeta off the critical line

_EM_TERMS = 20


@lru_cache(maxsize=1)
def _em_coefficients() -> np.ndarray:
    b = special.bernoulli(2 * _EM_TERMS)
    return np.array([b[2 * k] / math.factorial(2 * k) for k in range(1, _EM_TERMS + 1)])


def _zeta_em_scalar(s: complex) -> tuple[complex, complex]:
    N = int(abs(s.imag) / math.pi) + 2 * _EM_TERMS + 10
    n = np.arange(1, N, dtype=float)
    logn = np.log(n)
    ns = np.exp(-s * logn)
    z = complex(ns.sum())
    dz = complex(-(logn * ns).sum())
    logN = math.log(N)
    Ns = complex(np.exp(-s * logN))
    z += N * Ns / (s - 1) + 0.5 * Ns
    dz += N * Ns * (-logN / (s - 1) - 1.0 / (s - 1) ** 2) - 0.5 * logN * Ns
    # Bernoulli tail: B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    poch, dlog = s, 1.0 / s
    term_pow = Ns / N
    for k, c in enumerate(_em_coefficients(), start=1):
        if k > 1:
            poch *= (s + 2 * k - 3) * (s + 2 * k - 2)
            dlog += 1.0 / (s + 2 * k - 3) + 1.0 / (s + 2 * k - 2)
            term_pow /= N * N
        term = c * poch * term_pow
        z += term
        dz += term * (dlog - logN)
    return z, dz


def zeta_em(s) -> tuple[np.ndarray, np.ndarray]:
    """(zeta(s), zeta'(s)) by Euler-Maclaurin summation; s != 1, Re s > -1."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(s.real <= -1.0) or np.any(s == 1):
        raise ValueError("zeta_em needs Re s > -1 and s != 1")
    vals = [_zeta_em_scalar(complex(v)) for v in s]
    return np.array([v[0] for v in vals]), np.array([v[1] for v in vals])


def zeta_log_derivative(s) -> np.ndarray:
    z, dz = zeta_em(s)
    return dz / z


# ---------------------------------------------------------------------------
# log zeta samples


@dataclass(frozen=True)
class LogZetaSample:
    t: float
    re: float
    im: float
    method: str = "riemann-siegel/zero-count"


def log_zeta_arrays(t, zs: "zerodata.ZeroSet", threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """(log|zeta|, pi S) on a grid; log|zeta| is clipped at LOG_CLIP."""
    t = _as_array(t)
    z = np.abs(rs_z_array(t, threads))
    with np.errstate(divide="ignore"):
        re = np.maximum(np.log(z), LOG_CLIP)
    _, s = zerodata.counting_arrays(zs, t)
    return re, math.pi * s


def log_zeta(t: float, zs: "zerodata.ZeroSet") -> LogZetaSample:
    re, im = log_zeta_arrays(t, zs)
    return LogZetaSample(float(t), float(re[0]), float(im[0]))


# ---------------------------------------------------------------------------
# prime + zero decomposition


@dataclass(frozen=True)
class PZDecomposition:
    x: float
    p_re: float
    z_re: float
    p_im: float
    z_im: float


@dataclass(frozen=True, eq=False)
class PZArrays:
    """Vectorized decomposition; ``band`` is the |u| cutoff actually used."""

    x: float
    t: np.ndarray
    p_re: np.ndarray
    z_re: np.ndarray
    p_im: np.ndarray
    z_im: np.ndarray
    band: float
    tail_bound: float


@lru_cache(maxsize=32)
def _prime_coefficients(x: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """log n and the P, frak-P weights Lambda(n) w(log n/log x)/(sqrt(n) log n), n <= x."""
    lam = arithmetic.mangoldt_array(int(math.floor(x)))
    n = np.nonzero(lam)[0]
    logn = np.log(n.astype(float))
    base = lam[n] / (np.sqrt(n) * logn)
    v = logn / math.log(x)
    f = np.array([kernels.eval_aux(kernels.AuxKind.F_RE, float(u)) for u in v])
    ff = np.array([kernels.eval_aux(kernels.AuxKind.F_IM, float(u)) for u in v])
    out = (np.ascontiguousarray(logn), np.ascontiguousarray(base * f), np.ascontiguousarray(base * ff))
    for a in out:
        a.setflags(write=False)
    return out


def _band_indices(g: np.ndarray, t: np.ndarray, half: float) -> tuple[np.ndarray, np.ndarray]:
    lo = np.searchsorted(g, t - half, side="left").astype(np.intp)
    hi = np.searchsorted(g, t + half, side="right").astype(np.intp)
    return lo, hi


def pz_arrays(t, x: float, zs: "zerodata.ZeroSet", y_cut: float = Y_CUT, threads: int = 1) -> PZArrays:
    """P, Z, frak-P, frak-Z on a grid of heights.

    The zero sums run over ``|gamma - t| log x <= band`` where ``band`` is
    ``y_cut`` reduced, if needed, to what the data covers.  Outside the band
    the zeros are replaced by the mean density ``log(t/2pi)/2pi``; since
    frak_h is odd, that replacement vanishes for the imaginary part.
    """
    t = _as_array(t)
    x = float(x)
    if not x >= 2.0:
        raise ValueError(f"x must be >= 2, got {x}")
    if t.size and t.min() < RS_FLOOR:
        raise ValueError(f"t must be >= {RS_FLOOR}")
    g = zs.ordinates
    logx = math.log(x)
    reach = min(t.min() - g[0], g[-1] - t.max()) if t.size else np.inf
    band = min(float(y_cut), reach * logx)
    if band < 20.0:
        raise zerodata.CoverageError(
            f"zero data covers only |u| <= {band:.1f} around the requested t (need >= 20)")
    if band < y_cut:
        warnings.warn(f"zero band reduced to |u| <= {band:.1f} by data coverage", stacklevel=2)

    logn, cre, cim = _prime_coefficients(x)
    p_re, p_im = np.empty_like(t), np.empty_like(t)
    core.prime_sum(t, logn, cre, 0, p_re, threads)
    core.prime_sum(t, logn, cim, 1, p_im, threads)
    p_im = -p_im

    lo, hi = _band_indices(g, t, band / logx)
    z_re, z_im = np.empty_like(t), np.empty_like(t)
    tab_h = kernels.aux_table(kernels.AuxKind.H_RE)
    tab_fh = kernels.aux_table(kernels.AuxKind.H_IM)
    core.zero_band_sum(tab_h.code, t, g, lo, hi, logx, 1, tab_h.tab, tab_h.inv_step, tab_h.umax,
                       tab_h.asym, z_re, threads)
    core.zero_band_sum(tab_fh.code, t, g, lo, hi, logx, -1, tab_fh.tab, tab_fh.inv_step, tab_fh.umax,
                       tab_fh.asym, z_im, threads)
    rho = np.log(t / (2 * math.pi)) / (2 * math.pi)
    z_re = -z_re + rho / logx * tab_h.integral(band)
    # |h|, |frak_h| <= C/u^2 for large u, C = int y/sinh y dy = pi^2/4
    c = math.pi ** 2 / 4
    tail = float(2.0 * rho.max() / logx * c / band) if t.size else 0.0
    return PZArrays(x, t, p_re, z_re, p_im, z_im, band, tail)


def pz_decompose(t: float, x: float, zs: "zerodata.ZeroSet") -> PZDecomposition:
    a = pz_arrays(t, x, zs)
    return PZDecomposition(a.x, float(a.p_re[0]), float(a.z_re[0]), float(a.p_im[0]), float(a.z_im[0]))


# ---------------------------------------------------------------------------
# explicit formula


class ExplicitFormulaSides(NamedTuple):
    zero_side: complex
    prime_side: complex


def _cauchy_tail(logy: float, band: float) -> float:
    """int_{|u| > band} cos(u log y) / (1 + u^2) du."""
    if logy == 0.0:
        return math.pi - 2.0 * math.atan(band)
    val = integrate.quad(lambda u: 1.0 / (1.0 + u * u), band, np.inf, weight="cos", wvar=logy,
                         limlst=200, epsabs=1e-13)[0]
    return 2.0 * val


def explicit_formula_sides(t: float, y: float, zs: "zerodata.ZeroSet",
                           band: float = EF_BAND) -> ExplicitFormulaSides:
    """Both sides of the Cauchy-weighted explicit formula at height ``t``.

    Zero side: ``2 sum_gamma y^{i gamma} / (1 + (t - gamma)^2)`` over the
    ordinates within ``band`` of ``t`` (both signs of gamma), plus the
    smooth-density integral over the rest.  Prime side::

        -(1/sqrt y) sum_m Lambda(m) a_m(y) (y/m)^{it}
            + y^{-1+it} (log(t/2pi) + zeta'/zeta(3/2 - it))

    with ``a_m = (m/y)^{1/2}`` for ``m <= y`` and ``(y/m)^{3/2}`` beyond.  The
    ``m > y`` part is summed in closed form through ``zeta'/zeta(3/2 + it)``.
    """
    t, y = float(t), float(y)
    if not y >= 1.0:
        raise ValueError(f"y must be >= 1, got {y}")
    g = zs.ordinates
    half = min(band, t - g[0], g[-1] - t)
    if half < 20.0:
        raise zerodata.CoverageError(f"t = {t} is too close to the edge of the zero data")
    logy = math.log(y)
    lo, hi = _band_indices(g, np.array([t]), half)
    near = g[lo[0]:hi[0]]
    zero = 2.0 * np.sum(np.exp(1j * logy * near) / (1.0 + (t - near) ** 2))
    # conjugate ordinates -gamma sit at distance t + gamma
    zero += 2.0 * np.sum(np.exp(-1j * logy * g) / (1.0 + (t + g) ** 2))
    rho = math.log(t / (2 * math.pi)) / (2 * math.pi)
    zero += 2.0 * rho * np.exp(1j * t * logy) * _cauchy_tail(logy, half)

    lam = arithmetic.mangoldt_array(int(math.floor(y)))
    m = np.nonzero(lam)[0].astype(float)
    lm = lam[m.astype(np.intp)]
    phase = np.exp(1j * t * (logy - np.log(m)))
    head = np.sum(lm * np.sqrt(m / y) * phase)
    s_plus = complex(1.5, t)
    dz_plus, dz_minus = zeta_log_derivative([s_plus, s_plus.conjugate()])
    finite = np.sum(lm * np.exp(-s_plus * np.log(m)))
    beyond = y ** 1.5 * np.exp(1j * t * logy) * (-dz_plus - finite)
    prime = -(head + beyond) / math.sqrt(y)
    prime += np.exp((-1.0 + 1j * t) * logy) * (math.log(t / (2 * math.pi)) + dz_minus)
    return ExplicitFormulaSides(complex(zero), complex(prime))
