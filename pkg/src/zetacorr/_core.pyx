# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.

Every routine writes per-row (or per-sample) results into caller-owned arrays;
rows are distributed over threads but each row is reduced sequentially in index
order, so results do not depend on the thread count.
"""
from cython.parallel cimport prange
from libc.math cimport cos, sin, exp, log, sqrt, floor, fabs, M_PI

import numpy as np

cdef enum:
    KIND_CAUCHY = 0
    KIND_FEJER = 1
    KIND_GAUSS = 2
    KIND_CAUCHY_ODD = 3
    ROW_BLOCK = 16
    COL_BLOCK = 512


cdef inline double _theta(double t) noexcept nogil:
    cdef double ti = 1.0 / t
    return (0.5 * t * log(t / (2.0 * M_PI)) - 0.5 * t - M_PI / 8.0
            + ti / 48.0 + 7.0 * ti * ti * ti / 5760.0
            + 31.0 * ti * ti * ti * ti * ti / 80640.0)


def theta(const double[::1] t, double[::1] out):
    cdef Py_ssize_t i
    for i in range(t.shape[0]):
        out[i] = _theta(t[i])


def rs_z(const double[::1] t, const double[:, ::1] coeffs, const Py_ssize_t[::1] ncoef,
         double[::1] out, int nthreads=1):
    """Riemann-Siegel Z(t) with remainder terms C_0..C_{K-1}."""
    cdef Py_ssize_t i, n, k, j, N
    cdef Py_ssize_t nt = t.shape[0]
    cdef Py_ssize_t K = coeffs.shape[0]
    cdef double tt, a, p, z, th, s, r, ck, ainv, apow
    for i in prange(nt, nogil=True, num_threads=nthreads, schedule='static'):
        tt = t[i]
        a = sqrt(tt / (2.0 * M_PI))
        N = <Py_ssize_t>floor(a)
        p = a - N
        z = p - 0.5
        th = _theta(tt)
        s = 0.0
        for n in range(1, N + 1):
            s = s + cos(th - tt * log(<double>n)) / sqrt(<double>n)
        s = 2.0 * s
        r = 0.0
        ainv = 1.0 / a
        apow = 1.0
        for k in range(K):
            ck = 0.0
            for j in range(ncoef[k] - 1, -1, -1):
                ck = ck * z + coeffs[k, j]
            r = r + ck * apow
            apow = apow * ainv
        if (N - 1) % 2 == 0:
            out[i] = s + r / sqrt(a)
        else:
            out[i] = s - r / sqrt(a)


cdef inline double _weight(int kind, double d) noexcept nogil:
    cdef double x
    if kind == KIND_CAUCHY:
        return 4.0 / (4.0 + d * d)
    elif kind == KIND_FEJER:
        if fabs(d) < 1e-8:
            return 1.0 - (M_PI * d) * (M_PI * d) / 3.0
        x = sin(M_PI * d) / (M_PI * d)
        return x * x
    elif kind == KIND_GAUSS:
        return exp(-M_PI * d * d)
    else:
        # omega(d) / d, zero on the diagonal
        if d == 0.0:
            return 0.0
        return 4.0 / (d * (4.0 + d * d))


def pair_rows_dense(const double[::1] xr, const double[::1] xc, int kind, double scale,
                    const double[:, ::1] cre, const double[:, ::1] cim,
                    double[:, ::1] out_re, double[:, ::1] out_im, int nthreads=1):
    """out[j, m] = sum_k w(scale * (xr[j] - xc[k])) * c[k, m] over all k."""
    cdef Py_ssize_t nr = xr.shape[0], nc = xc.shape[0], K = cre.shape[1]
    cdef Py_ssize_t jb, kb, j, k, m, jend, kstart, kend, nblocks, ncblocks
    cdef double w
    nblocks = (nr + ROW_BLOCK - 1) // ROW_BLOCK
    ncblocks = (nc + COL_BLOCK - 1) // COL_BLOCK
    for jb in prange(nblocks, nogil=True, num_threads=nthreads, schedule='static'):
        jend = (jb + 1) * ROW_BLOCK
        if jend > nr:
            jend = nr
        for kb in range(ncblocks):
            kstart = kb * COL_BLOCK
            kend = kstart + COL_BLOCK
            if kend > nc:
                kend = nc
            for j in range(jb * ROW_BLOCK, jend):
                for k in range(kstart, kend):
                    w = _weight(kind, scale * (xr[j] - xc[k]))
                    for m in range(K):
                        out_re[j, m] += w * cre[k, m]
                        out_im[j, m] += w * cim[k, m]


def pair_rows_banded(const double[::1] xr, const double[::1] xc,
                     const Py_ssize_t[::1] lo, const Py_ssize_t[::1] hi, int kind, double scale,
                     const double[:, ::1] cre, const double[:, ::1] cim,
                     double[:, ::1] out_re, double[:, ::1] out_im, int nthreads=1):
    """As pair_rows_dense but row j only sums k in [lo[j], hi[j])."""
    cdef Py_ssize_t nr = xr.shape[0], K = cre.shape[1]
    cdef Py_ssize_t j, k, m
    cdef double w
    for j in prange(nr, nogil=True, num_threads=nthreads, schedule='static'):
        for k in range(lo[j], hi[j]):
            w = _weight(kind, scale * (xr[j] - xc[k]))
            for m in range(K):
                out_re[j, m] += w * cre[k, m]
                out_im[j, m] += w * cim[k, m]


def triple_rows_gauss(const double[::1] x, const Py_ssize_t[::1] lo, const Py_ssize_t[::1] hi,
                      double a11, double a12, double a22, double[::1] out,
                      int nthreads=1):
    """out[j] = sum_{k,l in band(j)} exp(-pi Q(x_j - x_k, x_j - x_l)), x pre-scaled."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t j, k, l
    cdef double u, v, s
    for j in prange(n, nogil=True, num_threads=nthreads, schedule='static'):
        s = 0.0
        for k in range(lo[j], hi[j]):
            u = x[j] - x[k]
            for l in range(lo[j], hi[j]):
                v = x[j] - x[l]
                s = s + exp(-M_PI * (a11 * u * u + 2.0 * a12 * u * v + a22 * v * v))
        out[j] = s


cdef inline double _interp(const double[::1] tab, double v, double inv_step) noexcept nogil:
    # 4-point Lagrange on a uniform grid starting at 0
    cdef double s = v * inv_step
    cdef Py_ssize_t i = <Py_ssize_t>floor(s)
    cdef Py_ssize_t n = tab.shape[0]
    cdef double f, f0, f1, f2, f3
    if i < 1:
        i = 1
    if i > n - 3:
        i = n - 3
    f = s - i
    f0 = tab[i - 1]
    f1 = tab[i]
    f2 = tab[i + 1]
    f3 = tab[i + 2]
    return (-f * (f - 1.0) * (f - 2.0) / 6.0 * f0
            + (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0 * f1
            - (f + 1.0) * f * (f - 2.0) / 2.0 * f2
            + (f + 1.0) * f * (f - 1.0) / 6.0 * f3)


cdef inline double _aux_eval(int kind, double u, const double[::1] tab, double inv_step,
                             double umax, const double[::1] asym) noexcept nogil:
    """kind 0: h(u) = cos u * I(u); kind 1: frak-h(u) = sin u * J(u)."""
    cdef double au = fabs(u), val, iu2, p
    cdef Py_ssize_t k
    if kind == 0:
        if au < 1e-300:
            au = 1e-300
        if au <= umax:
            val = 0.5 * log(1.0 + 1.0 / (au * au)) + _interp(tab, sqrt(au), inv_step)
        else:
            iu2 = 1.0 / (au * au)
            val = 0.0
            p = iu2
            for k in range(asym.shape[0]):
                val = val + asym[k] * p
                p = p * iu2
        return cos(au) * val
    else:
        if au == 0.0:
            return 0.0
        if au <= umax:
            val = _interp(tab, sqrt(au), inv_step) / au
        else:
            iu2 = 1.0 / (au * au)
            val = 0.0
            p = iu2
            for k in range(asym.shape[0]):
                val = val + asym[k] * p
                p = p * iu2
        if u < 0:
            return -sin(au) * val
        return sin(au) * val


def aux_eval(int kind, const double[::1] u, const double[::1] tab, double inv_step,
             double umax, const double[::1] asym, double[::1] out):
    cdef Py_ssize_t i
    for i in range(u.shape[0]):
        out[i] = _aux_eval(kind, u[i], tab, inv_step, umax, asym)


def zero_band_sum(int kind, const double[::1] t, const double[::1] gam,
                  const Py_ssize_t[::1] lo, const Py_ssize_t[::1] hi, double logx, int sign,
                  const double[::1] tab, double inv_step, double umax,
                  const double[::1] asym, double[::1] out, int nthreads=1):
    """out[i] = sum_{k in [lo[i], hi[i])} aux(sign * (gam[k] - t[i]) * logx)."""
    cdef Py_ssize_t i, k
    cdef double s
    for i in prange(t.shape[0], nogil=True, num_threads=nthreads, schedule='static'):
        s = 0.0
        for k in range(lo[i], hi[i]):
            s = s + _aux_eval(kind, sign * (gam[k] - t[i]) * logx, tab, inv_step, umax, asym)
        out[i] = s


def prime_sum(const double[::1] t, const double[::1] logn, const double[::1] coef,
              int use_sin, double[::1] out, int nthreads=1):
    """out[i] = sum_n coef[n] * cos(t_i log n)  (or sin)."""
    cdef Py_ssize_t i, n
    cdef double s
    for i in prange(t.shape[0], nogil=True, num_threads=nthreads, schedule='static'):
        s = 0.0
        if use_sin:
            for n in range(logn.shape[0]):
                s = s + coef[n] * sin(t[i] * logn[n])
        else:
            for n in range(logn.shape[0]):
                s = s + coef[n] * cos(t[i] * logn[n])
        out[i] = s
