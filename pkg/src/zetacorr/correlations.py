"""Empirical pair and triple correlation statistics of zeta zeros.

All double sums are organised as row sums ``B_j = sum_k w(gamma_j - gamma_k) c_k``
computed by the compiled core.  Each row is reduced sequentially and the rows
are combined with ``numpy.sum`` (pairwise, fixed order), so a result does not
depend on the thread count.

For the Cauchy weight the row sums ``sum_k omega(gamma_j - gamma_k)
T^{-i alpha gamma_k}`` are shared by F(alpha) and every twisted F_n(alpha);
:func:`correlation_grid` evaluates all of them in one pass.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._backend import core
from .arithmetic import prime_power
from .kernels import TestKernel
from .zerodata import Window

__all__ = [
    "WeightKind",
    "CorrelationEstimate",
    "CorrelationGrid",
    "TestKernel",
    "default_U",
    "smoothed_factors",
    "correlation_grid",
    "f_montgomery",
    "f_twisted",
    "pair_sum",
    "triple_sum",
    "landau_gonek",
]

KIND_CAUCHY, KIND_FEJER, KIND_GAUSS, KIND_CAUCHY_ODD = 0, 1, 2, 3
TAIL_TOL = 1e-8
TRIPLE_BUDGET = 4e9  # summands allowed in a banded triple sum
_GAUSS_CUT = 41.5  # exp(-x) < 1e-18 beyond this exponent


class WeightKind(enum.Enum):
    CAUCHY = "cauchy"
    SMOOTHED = "smoothed"


@dataclass(frozen=True, eq=False)
class CorrelationEstimate:
    value: complex
    n: int
    alpha: float | None
    weight: WeightKind | None
    window: Window
    pair_count: int
    truncation_error_bound: float
    U: float | None = None


@dataclass(frozen=True, eq=False)
class CorrelationGrid:
    """F(alpha) and F_n(alpha) on a shared alpha grid.

    ``f`` is real; ``twisted[n]`` is complex.  ``band`` is None for exact
    dense sums.
    """

    alphas: np.ndarray
    f: np.ndarray
    twisted: dict
    window: Window
    weight: WeightKind
    U: float | None
    band: float | None
    pair_count: int
    truncation_error_bound: float
    max_imag_f: float


def default_U(T: float) -> float:
    return math.log(T) ** 2


def _density(T: float) -> float:
    return math.log(2.0 * T / (2.0 * math.pi)) / (2.0 * math.pi)


def _require_nonempty(w: Window) -> np.ndarray:
    if w.count == 0:
        raise ValueError(f"window (T = {w.T}) contains no zeros")
    return np.ascontiguousarray(w.gamma, dtype=float)


def _twist_lambda(n: int) -> float:
    pp = prime_power(int(n)) if int(n) == n else None
    if pp is None or n < 2:
        raise ValueError(f"twist n = {n} is not a prime power >= 2")
    return pp.lam


def _row_sums(x, kind, scale, cols, band, threads):
    """Complex row sums sum_k w(scale (x_j - x_k)) cols[k, :], dense or banded."""
    cre = np.ascontiguousarray(cols.real)
    cim = np.ascontiguousarray(cols.imag)
    out_re = np.zeros_like(cre)
    out_im = np.zeros_like(cim)
    if band is None:
        core.pair_rows_dense(x, x, kind, scale, cre, cim, out_re, out_im, threads)
        count = x.size * x.size
    else:
        lo = np.searchsorted(x, x - band, side="left").astype(np.intp)
        hi = np.searchsorted(x, x + band, side="right").astype(np.intp)
        core.pair_rows_banded(x, x, lo, hi, kind, scale, cre, cim, out_re, out_im, threads)
        count = int(np.sum(hi - lo))
    return out_re + 1j * out_im, count


# ---------------------------------------------------------------------------
# smoothed weight omega_{psi_U}


_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_LAYER_CELLS = 40
_CHUNK = 2048


def _layer_kernels(t, g, T, U):
    """psi(t/T) times 1/(1+x^2), x/(1+x^2), (x^2-1)/(1+x^2)^2 with x = t - g (broadcast)."""
    x = t - g
    den = 1.0 + x * x
    psi = kernels.psi_bump(t / T, U)
    return psi / den, psi * x / den, psi * (x * x - 1.0) / (den * den)


def _gl_nodes(a, b):
    # Gauss-Legendre nodes and weights on the panels [a, b] (arrays, last axis panels)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[..., None] + half[..., None] * _GL_X
    w = half[..., None] * _GL_W
    return x.reshape(*x.shape[:-2], -1), w.reshape(*w.shape[:-2], -1)


def _layer_integrals(gamma, lo, hi, T, U):
    """int_lo^hi psi(t/T) K(t - gamma) dt for the three kernels, per gamma.

    The layer is cut into equal cells.  A cell at least one cell width away
    from gamma gets one 16-point Gauss-Legendre panel (the kernels' poles at
    gamma +- i are then far outside the panel).  The cells around gamma are
    split at gamma +- 2^k, so every panel stays about its own length away
    from the poles.
    """
    out = np.zeros((3, gamma.size))
    if gamma.size == 0 or hi <= lo:
        return out
    edges = np.linspace(lo, hi, _LAYER_CELLS + 1)
    h = edges[1] - edges[0]
    ca, cb = edges[:-1], edges[1:]
    xs, ws = _gl_nodes(ca[None, :], cb[None, :])
    xs, ws = xs.reshape(_LAYER_CELLS, -1), ws.reshape(_LAYER_CELLS, -1)
    kmax = max(1, int(math.ceil(math.log2(max(h, 1.0)))) + 1)
    offs = np.concatenate([[0.0, 0.5], 2.0 ** np.arange(kmax + 1)])
    offs = np.concatenate([-offs[::-1], offs[1:]])
    for c0 in range(0, gamma.size, _CHUNK):
        g = gamma[c0:c0 + _CHUNK]
        dist = np.maximum(np.maximum(ca[None, :] - g[:, None], g[:, None] - cb[None, :]), 0.0)
        far = dist >= h
        for m in range(_LAYER_CELLS):
            sel = far[:, m]
            if not sel.any():
                continue
            vals = _layer_kernels(xs[m][None, :], g[sel][:, None], T, U)
            for r in range(3):
                out[r, c0 + np.nonzero(sel)[0]] += vals[r] @ ws[m]
        zi, cm = np.nonzero(~far)
        if zi.size:
            br = np.clip(g[zi][:, None] + offs[None, :], ca[cm][:, None], cb[cm][:, None])
            xn, wn = _gl_nodes(br[:, :-1], br[:, 1:])
            vals = _layer_kernels(xn, g[zi][:, None], T, U)
            for r in range(3):
                np.add.at(out[r], c0 + zi, np.sum(vals[r] * wn, axis=1))
    return out


def smoothed_factors(gamma, T: float, U: float) -> np.ndarray:
    """Per-zero integrals of psi_U(t/T) against 1/(1+x^2), x/(1+x^2), (x^2-1)/(1+x^2)^2.

    Here ``x = t - gamma``.  With these ``P, Q, Q'`` the smoothed weight is

        omega_psi(a, b) = (2/pi) [ (P_a + P_b)/(d^2+4) + 2 (Q_a - Q_b)/(d (d^2+4)) ]

    for ``d = b - a != 0``, and ``(P_a - Q'_a)/pi`` on the diagonal.
    """
    g = np.asarray(gamma, dtype=float)
    if U < 2:
        raise ValueError("U must be at least 2")
    t1, t2 = T * (1 + 1 / U), T * (2 - 1 / U)
    x1, x2 = t1 - g, t2 - g
    plateau = np.stack([
        np.arctan(x2) - np.arctan(x1),
        0.5 * (np.log1p(x2 * x2) - np.log1p(x1 * x1)),
        -x2 / (1 + x2 * x2) + x1 / (1 + x1 * x1),
    ])
    return plateau + _layer_integrals(g, T, t1, T, U) + _layer_integrals(g, t2, 2 * T, T, U)


def _smoothed_row_sums(gamma, e, factors, band, threads):
    P, Q, Qp = factors
    cols0 = np.concatenate([e, P[:, None] * e], axis=1)
    cols3 = np.concatenate([e, Q[:, None] * e], axis=1)
    r0, count = _row_sums(gamma, KIND_CAUCHY, 1.0, cols0, band, threads)
    # kind 3 evaluates omega(delta)/delta at delta = gamma_j - gamma_k, i.e. minus omega(d)/d
    r3, _ = _row_sums(gamma, KIND_CAUCHY_ODD, 1.0, cols3, band, threads)
    K = e.shape[1]
    rows = (P[:, None] * r0[:, :K] + r0[:, K:]) / (2 * math.pi)
    rows -= (Q[:, None] * r3[:, :K] - r3[:, K:]) / math.pi
    rows -= Qp[:, None] * e / math.pi
    return rows, count


# ---------------------------------------------------------------------------
# F and F_n


def correlation_grid(alphas, w: Window, twists=(), weight: WeightKind = WeightKind.CAUCHY,
                     U: float | None = None, band: float | None = None,
                     threads: int = 1) -> CorrelationGrid:
    """F(alpha) and F_n(alpha) for every alpha and every twist n in one pass.

    ``band=None`` sums all pairs exactly.  A finite ``band`` keeps only
    ``|gamma - gamma'| <= band`` and records the bound
    ``N * 8 rho / band`` (normalized) on the dropped Cauchy tail.
    With ``weight=SMOOTHED`` the weight is omega_{psi_U}, ``U`` defaulting to
    ``(log T)^2``; F(alpha) is then reported with the same weight.
    """
    gamma = _require_nonempty(w)
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    weight = WeightKind(weight)
    T, L = w.T, w.L
    lams = {int(n): _twist_lambda(n) for n in twists}
    e = np.exp(-1j * L * np.outer(gamma, alphas))
    if weight is WeightKind.CAUCHY:
        U = None
        rows, count = _row_sums(gamma, KIND_CAUCHY, 1.0, e, band, threads)
    else:
        U = default_U(T) if U is None else float(U)
        rows, count = _smoothed_row_sums(gamma, e, smoothed_factors(gamma, T, U), band, threads)
    weighted = np.conj(e) * rows  # T^{i alpha gamma_j} B_j
    total = np.sum(weighted, axis=0)
    norm = T * L / (2 * math.pi)
    f = total / norm
    max_imag = float(np.max(np.abs(f.imag))) if f.size else 0.0
    twisted = {}
    for n, lam in lams.items():
        tw = np.exp(1j * math.log(n) * gamma)
        s = np.sum(tw[:, None] * weighted, axis=0)
        twisted[n] = -s / (T / (2 * math.pi) * lam / math.sqrt(n))
    bound = 0.0
    if band is not None:
        # dropped Cauchy tail of the raw double sum, then the largest normalization
        raw = gamma.size * 8.0 * _density(T) / band
        scales = [L] + [lam / math.sqrt(n) for n, lam in lams.items()]
        bound = raw / (T * min(scales) / (2 * math.pi))
    return CorrelationGrid(alphas, f.real, twisted, w, weight, U, band, count, bound, max_imag)


def f_montgomery(alpha: float, w: Window, band: float | None = None, threads: int = 1) -> CorrelationEstimate:
    """Montgomery's F(alpha) with the Cauchy weight 4/(4 + d^2)."""
    g = correlation_grid([alpha], w, band=band, threads=threads)
    if g.max_imag_f > 1e-10 * max(1.0, abs(g.f[0])):
        raise ArithmeticError(f"F({alpha}) has imaginary part {g.max_imag_f}")
    return CorrelationEstimate(float(g.f[0]), 1, float(alpha), WeightKind.CAUCHY, w, g.pair_count,
                               g.truncation_error_bound)


def f_twisted(alpha: float, n: int, w: Window, weight: WeightKind = WeightKind.CAUCHY,
              U: float | None = None, band: float | None = None, threads: int = 1) -> CorrelationEstimate:
    """Twisted F_n(alpha) (complex), sharp or smoothed by psi_U."""
    g = correlation_grid([alpha], w, twists=(n,), weight=weight, U=U, band=band, threads=threads)
    return CorrelationEstimate(complex(g.twisted[int(n)][0]), int(n), float(alpha), g.weight, w,
                               g.pair_count, g.truncation_error_bound, g.U)


# ---------------------------------------------------------------------------
# kernel sums


def _pair_band(kernel: TestKernel, scale_density: float, n: int) -> float | None:
    """Band (in gamma-tilde units) certifying a tail below TAIL_TOL, or None for dense."""
    if kernel.core_kind == KIND_GAUSS:
        return kernel.width * math.sqrt(_GAUSS_CUT / math.pi)
    if kernel.decay_exponent < 2:
        warnings.warn(f"kernel {kernel.name!r} decays too slowly for banding; summing all pairs",
                      stacklevel=3)
        return None
    # |r(x)| <= C |x|^-p: per-row tail 2 C D^{1-p}/(p-1) at unit density
    p = kernel.decay_exponent
    c = kernel.width ** p / math.pi ** 2 if kernel.core_kind == KIND_FEJER else 1.0
    D = (2 * c * scale_density / ((p - 1) * TAIL_TOL)) ** (1 / (p - 1))
    return D if D < n / 2 else None


def pair_sum(kernel: TestKernel, w: Window, twist: int = 1, threads: int = 1) -> CorrelationEstimate:
    """Normalized sum of r(gamma~ - gamma~') over the window, optionally twisted by n^{i gamma}.

    ``gamma~ = gamma log T / 2 pi``.  Untwisted sums are divided by
    ``T log T / 2 pi``; twisted ones are multiplied by ``-(T/2pi Lambda(n)/sqrt n)^{-1}``.
    """
    if kernel.dim != 1 or kernel.core_kind not in (KIND_FEJER, KIND_GAUSS):
        raise ValueError("pair_sum needs a 1D Fejer or Gaussian kernel")
    gamma = _require_nonempty(w)
    T, L = w.T, w.L
    x = np.ascontiguousarray(gamma * L / (2 * math.pi))
    band = _pair_band(kernel, 1.0, x.size)
    cols = np.ones((x.size, 1), dtype=complex)
    rows, count = _row_sums(x, kernel.core_kind, 1.0 / kernel.width, cols, band, threads)
    rows = rows[:, 0].real
    bound = 0.0 if band is None else TAIL_TOL
    if twist == 1:
        value = np.sum(rows) / (T * L / (2 * math.pi))
        return CorrelationEstimate(float(value), 1, None, None, w, count, bound)
    lam = _twist_lambda(twist)
    s = np.sum(np.exp(1j * math.log(twist) * gamma) * rows)
    value = -s / (T / (2 * math.pi) * lam / math.sqrt(twist))
    return CorrelationEstimate(complex(value), int(twist), None, None, w, count,
                               bound * L * math.sqrt(twist) / lam)


def triple_sum(kernel2d: TestKernel, w: Window, threads: int = 1,
               budget: float = TRIPLE_BUDGET) -> CorrelationEstimate:
    """(T log T / 2pi)^{-1} sum r(gamma~ - gamma~', gamma~ - gamma~'') over the window."""
    if kernel2d.dim != 2:
        raise ValueError("triple_sum needs a 2D kernel")
    gamma = _require_nonempty(w)
    T, L = w.T, w.L
    norm = T * L / (2 * math.pi)
    x = np.ascontiguousarray(gamma * L / (2 * math.pi))
    if kernel2d.factor is not None:
        # separable: sum_j (sum_k r1(x_j - x_k))^2
        f = kernel2d.factor
        cols = np.ones((x.size, 1), dtype=complex)
        band = _pair_band(f, 1.0, x.size)
        rows, count = _row_sums(x, f.core_kind, 1.0 / f.width, cols, band, threads)
        r = rows[:, 0].real
        bound = 0.0 if band is None else 2 * TAIL_TOL * float(np.max(r))
        return CorrelationEstimate(float(np.sum(r * r) / norm), 1, None, None, w, count, bound)
    if kernel2d.matrix is None:
        raise ValueError("triple_sum supports separable or Gaussian 2D kernels")
    a11, a12, a22 = kernel2d.matrix
    lam_min = float(np.min(np.linalg.eigvalsh(np.array([[a11, a12], [a12, a22]]))))
    half = math.sqrt(_GAUSS_CUT / (math.pi * lam_min))
    lo = np.searchsorted(x, x - half, side="left").astype(np.intp)
    hi = np.searchsorted(x, x + half, side="right").astype(np.intp)
    k = hi - lo
    count = int(np.sum(k.astype(float) ** 2))
    if count > budget:
        raise ValueError(f"banded triple sum needs {count:.3g} terms (> {budget:.3g}); "
                         f"shrink the kernel support (smallest eigenvalue {lam_min:.3g})")
    out = np.empty_like(x)
    core.triple_rows_gauss(x, lo, hi, a11, a12, a22, out, threads)
    # each dropped term is below e^{-41.5}; at most N * (N * kmax) of them
    bound = x.size * x.size * float(k.max()) * math.exp(-_GAUSS_CUT) / norm
    return CorrelationEstimate(float(np.sum(out) / norm), 1, None, None, w, count, bound)


def landau_gonek(a: int, b: int, w: Window) -> tuple[complex, float]:
    """Empirical (1/T) sum (a/b)^{i gamma} and the Landau-Gonek prediction."""
    a, b = int(a), int(b)
    if not 1 <= b < a:
        raise ValueError(f"need 1 <= b < a, got a = {a}, b = {b}")
    gamma = np.asarray(w.gamma, dtype=float)
    empirical = complex(np.sum(np.exp(1j * math.log(a / b) * gamma)) / w.T)
    g = math.gcd(a, b)
    predicted = 0.0
    if b // g == 1:
        pp = prime_power(a // g)
        if pp is not None:
            predicted = -pp.lam * math.sqrt(b / a) / (2 * math.pi)
    return empirical, predicted
