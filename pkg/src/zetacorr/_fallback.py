"""Pure numpy versions of the routines in ``_core``.

Signatures mirror the compiled module so the two are interchangeable.  The
``nthreads`` argument is accepted and ignored.
"""
import numpy as np

KIND_CAUCHY, KIND_FEJER, KIND_GAUSS, KIND_CAUCHY_ODD = 0, 1, 2, 3
_ROWS = 64


def _theta(t):
    ti = 1.0 / t
    return (0.5 * t * np.log(t / (2 * np.pi)) - 0.5 * t - np.pi / 8
            + ti / 48 + 7 * ti**3 / 5760 + 31 * ti**5 / 80640)


def theta(t, out):
    out[:] = _theta(np.asarray(t))


def rs_z(t, coeffs, ncoef, out, nthreads=1):
    t = np.asarray(t, dtype=float)
    a = np.sqrt(t / (2 * np.pi))
    N = np.floor(a).astype(np.int64)
    z = a - N - 0.5
    th = _theta(t)
    for i in range(t.shape[0]):
        n = np.arange(1, N[i] + 1, dtype=float)
        s = 2.0 * np.sum(np.cos(th[i] - t[i] * np.log(n)) / np.sqrt(n))
        r, apow = 0.0, 1.0
        for k in range(coeffs.shape[0]):
            r += np.polyval(coeffs[k, : ncoef[k]][::-1], z[i]) * apow
            apow /= a[i]
        sign = 1.0 if (N[i] - 1) % 2 == 0 else -1.0
        out[i] = s + sign * r / np.sqrt(a[i])


def weight(kind, d):
    d = np.asarray(d, dtype=float)
    if kind == KIND_CAUCHY:
        return 4.0 / (4.0 + d * d)
    if kind == KIND_FEJER:
        return np.sinc(d) ** 2
    if kind == KIND_GAUSS:
        return np.exp(-np.pi * d * d)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(d == 0.0, 0.0, 4.0 / (d * (4.0 + d * d)))


def pair_rows_dense(xr, xc, kind, scale, cre, cim, out_re, out_im, nthreads=1):
    xr, xc = np.asarray(xr), np.asarray(xc)
    for j0 in range(0, xr.shape[0], _ROWS):
        w = weight(kind, scale * (xr[j0:j0 + _ROWS, None] - xc[None, :]))
        out_re[j0:j0 + _ROWS] += w @ cre
        out_im[j0:j0 + _ROWS] += w @ cim


def pair_rows_banded(xr, xc, lo, hi, kind, scale, cre, cim, out_re, out_im, nthreads=1):
    for j in range(xr.shape[0]):
        w = weight(kind, scale * (xr[j] - xc[lo[j]:hi[j]]))
        out_re[j] += w @ cre[lo[j]:hi[j]]
        out_im[j] += w @ cim[lo[j]:hi[j]]


def triple_rows_gauss(x, lo, hi, a11, a12, a22, out, nthreads=1):
    for j in range(x.shape[0]):
        d = x[j] - x[lo[j]:hi[j]]
        u, v = d[:, None], d[None, :]
        out[j] = np.exp(-np.pi * (a11 * u * u + 2 * a12 * u * v + a22 * v * v)).sum()


def lagrange4(tab, v, inv_step):
    s = v * inv_step
    i = np.clip(np.floor(s).astype(np.int64), 1, tab.shape[0] - 3)
    f = s - i
    return (-f * (f - 1) * (f - 2) / 6 * tab[i - 1]
            + (f + 1) * (f - 1) * (f - 2) / 2 * tab[i]
            - (f + 1) * f * (f - 2) / 2 * tab[i + 1]
            + (f + 1) * f * (f - 1) / 6 * tab[i + 2])


def asymptotic(au, asym):
    iu2 = 1.0 / (au * au)
    val = np.zeros_like(au)
    p = iu2.copy()
    for c in asym:
        val += c * p
        p *= iu2
    return val


def _aux(kind, u, tab, inv_step, umax, asym):
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    near = au <= umax
    val = np.empty_like(au)
    if kind == 0:
        au = np.maximum(au, 1e-300)
        an = au[near]
        val[near] = 0.5 * np.log1p(1.0 / (an * an)) + lagrange4(tab, np.sqrt(an), inv_step)
        val[~near] = asymptotic(au[~near], asym)
        return np.cos(au) * val
    with np.errstate(divide="ignore", invalid="ignore"):
        an = au[near]
        val[near] = lagrange4(tab, np.sqrt(an), inv_step) / an
        val[~near] = asymptotic(au[~near], asym)
        res = np.sign(u) * np.sin(au) * val
    return np.where(au == 0.0, 0.0, res)


def aux_eval(kind, u, tab, inv_step, umax, asym, out):
    out[:] = _aux(kind, u, tab, inv_step, umax, asym)


def zero_band_sum(kind, t, gam, lo, hi, logx, sign, tab, inv_step, umax, asym, out, nthreads=1):
    for i in range(t.shape[0]):
        u = sign * (gam[lo[i]:hi[i]] - t[i]) * logx
        out[i] = _aux(kind, u, tab, inv_step, umax, asym).sum()


def prime_sum(t, logn, coef, use_sin, out, nthreads=1):
    f = np.sin if use_sin else np.cos
    for i0 in range(0, t.shape[0], _ROWS):
        out[i0:i0 + _ROWS] = f(np.outer(t[i0:i0 + _ROWS], logn)) @ coef
