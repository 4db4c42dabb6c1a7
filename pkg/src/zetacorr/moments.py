"""Moments of Re and Im log zeta(1/2 + it) over [T, 2T].

The integration cells are delimited by consecutive zero ordinates, where
log|zeta| has logarithmic singularities and S(t) jumps.  Each cell is cut
into panels shrinking geometrically (ratio 1/4) towards both ends until the
end panels are narrower than 1e-8, and every panel gets the 7-point
Gauss-Kronrod rule.  The error estimate is |K7 - G3| summed over panels
plus a rounding floor; it bounds the 3-point rule's error and so overstates
that of the 7-point value by orders of magnitude.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import zerodata, zetaeval
from .zerodata import ZeroSet

__all__ = [
    "Part",
    "Method",
    "MomentResult",
    "MixedMoments",
    "cell_rule",
    "moment",
    "mixed_moments",
    "default_x",
]

MIN_PANEL = 1e-8
RATIO = 0.25
CELL_ERROR_CAP = 0.05  # cell error relative to the cell's integral of |f|
_ROUNDING = 1e-13
_CHUNK_CELLS = 2000

# 7-point Kronrod extension of the 3-point Gauss rule on [-1, 1]
_K7_X = np.array([-0.9604912687080202834235071, -0.7745966692414833770358531,
                  -0.4342437493468025580020715, 0.0, 0.4342437493468025580020715,
                  0.7745966692414833770358531, 0.9604912687080202834235071])
_K7_W = np.array([0.1046562260264672651938239, 0.2684880898683334407285692,
                  0.4013974147759622229050518, 0.4509165386584741423451091,
                  0.4013974147759622229050518, 0.2684880898683334407285692,
                  0.1046562260264672651938239])
_G3_W = np.array([0.0, 5 / 9, 0.0, 8 / 9, 0.0, 5 / 9, 0.0])


class Part(enum.Enum):
    RE = "re"
    IM = "im"


class Method(enum.Enum):
    DIRECT = "direct"
    PZ = "pz"


@dataclass(frozen=True)
class MomentResult:
    T: float
    k: int
    part: Part
    method: Method
    value: float
    quadrature_error_estimate: float
    samples: int


@dataclass(frozen=True)
class MixedMoments:
    """Empirical (1/T) int of P^3, P^2 Z, P Z^2, Z^3 and the frak-P/frak-Z analogues."""

    T: float
    x: float
    beta: float
    re: dict
    im: dict
    re_total: float  # (P + Z)^3 moment on the same samples
    im_total: float
    errors: dict
    samples: int


def cell_rule(max_width: float, min_panel: float = MIN_PANEL, split: int = 1
              ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes and (Kronrod, Gauss) weights on [0, 1] for cells up to ``max_width`` long.

    All three arrays have shape (panels, 7).  ``split > 1`` cuts every panel
    into that many equal parts (used to check convergence).

    Panel edges are ``0, r^J, ..., r, 1/2`` on the left half (in units of
    half a cell) mirrored on the right, with ``J`` the smallest count making
    ``max_width/2 * r^J <= min_panel``.
    """
    half = 0.5 * max(max_width, min_panel)
    J = max(1, int(math.ceil(math.log(half / min_panel) / -math.log(RATIO))))
    left = 0.5 * np.concatenate([[0.0], RATIO ** np.arange(J, -1, -1)])
    edges = np.concatenate([left, 1.0 - left[-2::-1]])
    if split > 1:
        f = np.arange(split) / split
        edges = np.append(edges[:-1, None] + np.diff(edges)[:, None] * f[None, :], 1.0)
    a, b = edges[:-1], edges[1:]
    c, r = 0.5 * (a + b), 0.5 * (b - a)
    s = c[:, None] + r[:, None] * _K7_X[None, :]
    return s, r[:, None] * _K7_W[None, :], r[:, None] * _G3_W[None, :]


def _cell_edges(zs: ZeroSet, T: float) -> np.ndarray:
    w = zerodata.window(zs, T)
    g = w.gamma[w.gamma < 2 * T]
    return np.concatenate([[T], g, [2 * T]])


def _integrate(edges, evaluate, nvals, split=1):
    """Sum of cell integrals of each of the ``nvals`` evaluated functions.

    Returns (integrals, error estimates, worst relative cell error, its
    location, sample count).  Chunks are reduced in a fixed order.
    """
    widths = np.diff(edges)
    s, wk, wg = cell_rule(float(widths.max()), split=split)
    tot = np.zeros(nvals)
    err = np.zeros(nvals)
    worst, where = 0.0, float(edges[0])
    for c0 in range(0, widths.size, _CHUNK_CELLS):
        w = widths[c0:c0 + _CHUNK_CELLS]
        a = edges[c0:c0 + w.size]
        t = a[:, None, None] + w[:, None, None] * s[None]
        # innermost nodes of narrow cells can round onto the ordinate itself
        gap = (8 * np.spacing(a + w))[:, None, None]
        t = np.clip(t, (a[:, None, None] + gap), (a + w)[:, None, None] - gap)
        vals = evaluate(t.ravel())
        for i, v in enumerate(vals):
            v = v.reshape(t.shape)
            pk = np.sum(v * wk, axis=2)
            pg = np.sum(v * wg, axis=2)
            absint = np.sum(np.abs(v) * wk, axis=(1, 2)) * w
            ik = pk.sum(axis=1) * w
            ce = np.abs(pk - pg).sum(axis=1) * w + _ROUNDING * absint
            tot[i] += np.sum(ik)
            err[i] += np.sum(ce)
            rel = ce / (absint + 1e-6)
            j = int(np.argmax(rel))
            if rel[j] > worst:
                worst, where = float(rel[j]), float(a[j])
    return tot, err, worst, where, widths.size * s.size


def _check_cells(worst, where):
    if worst > CELL_ERROR_CAP:
        raise ArithmeticError(f"quadrature did not converge in the cell starting at t = {where} "
                              f"(relative error estimate {worst:.3g})")


def default_x(T: float) -> float:
    """Half of T^{1/4}: the largest x allowed by every mixed-moment statement, halved."""
    return 0.5 * T ** 0.25


def _check_x(T, x, strict_quarter):
    x = float(x)
    if not 2.0 <= x <= T:
        raise ValueError(f"x must lie in [2, T], got {x}")
    if strict_quarter and x > T ** 0.25:
        warnings.warn(f"x = {x} exceeds T^(1/4) = {T ** 0.25:.3g}; "
                      "the mixed-moment predictions are only proved below that", stacklevel=3)
    return x


def moment(T: float, k: int, part: Part, method: Method, zs: ZeroSet, x: float | None = None,
           threads: int = 1, clip: float = zetaeval.LOG_CLIP, split: int = 1) -> MomentResult:
    """(1/T) int_T^{2T} f(t)^k dt for f = Re or Im log zeta, directly or as P + Z.

    DIRECT uses the Riemann-Siegel Z for Re (log|Z| clipped below at
    ``clip``) and pi S(t) from the zero counts for Im.  PZ uses the P + Z
    decomposition with parameter ``x``.  ``split`` refines every panel.
    """
    if k not in (1, 2, 3):
        raise ValueError(f"k must be 1, 2 or 3, got {k}")
    part, method = Part(part), Method(method)
    T = float(T)
    if T < zetaeval.RS_FLOOR:
        raise ValueError(f"T must be at least {zetaeval.RS_FLOOR}")
    edges = _cell_edges(zs, T)

    if method is Method.DIRECT:
        if part is Part.RE:
            def f(t):
                with np.errstate(divide="ignore"):
                    return np.maximum(np.log(np.abs(zetaeval.rs_z_array(t, threads))), clip)
        else:
            def f(t):
                return math.pi * zerodata.counting_arrays(zs, t)[1]
    else:
        if x is None:
            raise ValueError("method PZ needs x")
        x = _check_x(T, x, False)

        def f(t):
            r = zetaeval.pz_arrays(t, x, zs, threads=threads)
            return r.p_re + r.z_re if part is Part.RE else r.p_im + r.z_im

    tot, err, worst, where, n = _integrate(edges, lambda t: (f(t) ** k,), 1, split)
    _check_cells(worst, where)
    return MomentResult(T, k, part, method, float(tot[0] / T), float(err[0] / T), n)


_MIXED = ("p3", "p2z", "pz2", "z3")


def mixed_moments(T: float, zs: ZeroSet, x: float | None = None, threads: int = 1) -> MixedMoments:
    """The four third-order mixed moments of (P, Z) and of (frak-P, frak-Z).

    ``x`` defaults to :func:`default_x`; values above T^{1/4} are accepted
    with a warning.
    """
    T = float(T)
    if T < zetaeval.RS_FLOOR:
        raise ValueError(f"T must be at least {zetaeval.RS_FLOOR}")
    x = _check_x(T, default_x(T) if x is None else x, True)
    edges = _cell_edges(zs, T)

    def f(t):
        r = zetaeval.pz_arrays(t, x, zs, threads=threads)
        out = []
        for p, z in ((r.p_re, r.z_re), (r.p_im, r.z_im)):
            out += [p ** 3, p * p * z, p * z * z, z ** 3, (p + z) ** 3]
        return out

    tot, err, worst, where, n = _integrate(edges, f, 10)
    _check_cells(worst, where)
    tot, err = tot / T, err / T
    re = dict(zip(_MIXED, map(float, tot[:4])))
    im = dict(zip(_MIXED, map(float, tot[5:9])))
    errors = {f"re_{k}": float(e) for k, e in zip(_MIXED + ("total",), err[:5])}
    errors.update({f"im_{k}": float(e) for k, e in zip(_MIXED + ("total",), err[5:])})
    return MixedMoments(T, x, math.log(x) / math.log(T), re, im, float(tot[4]), float(tot[9]),
                        errors, n)
