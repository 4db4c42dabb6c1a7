"""Time the compiled core against the numpy fallback on identical inputs.

    python benchmarks/bench_core.py [--repeat 3] [--threads 1]

Each line reports the best-of-``repeat`` wall time for both backends, their
ratio, and the largest relative difference between the two outputs.
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from zetacorr import _fallback, kernels, zerodata, zetaeval
from zetacorr.kernels import AuxKind

try:
    from zetacorr import _core
except ImportError:  # pragma: no cover
    _core = None


def _best(fn, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _cases(threads):
    zs = zerodata.bundled_zeros("1e4")
    w = zerodata.window(zs, 2000.0)
    g = np.ascontiguousarray(w.gamma)
    n = g.size
    e = np.exp(-1j * w.L * np.outer(g, np.linspace(0.05, 0.8, 4)))
    cre, cim = np.ascontiguousarray(e.real), np.ascontiguousarray(e.imag)
    x = np.ascontiguousarray(g * w.L / (2 * math.pi))
    lo3 = np.searchsorted(x, x - 3.0).astype(np.intp)
    hi3 = np.searchsorted(x, x + 3.0, side="right").astype(np.intp)
    t = np.linspace(5000.0, 5100.0, 20001)
    tab = kernels.aux_table(AuxKind.H_RE)
    logx = math.log(100.0)
    lo = np.searchsorted(zs.ordinates, t - 400 / logx).astype(np.intp)
    hi = np.searchsorted(zs.ordinates, t + 400 / logx, side="right").astype(np.intp)
    logn, coef, _ = zetaeval._prime_coefficients(1e4)
    rs_c, rs_n = zetaeval._rs_table()

    def pair(core):
        a, b = np.zeros_like(cre), np.zeros_like(cim)
        core.pair_rows_dense(g, g, 0, 1.0, cre, cim, a, b, threads)
        return a

    def triple(core):
        out = np.empty_like(x)
        core.triple_rows_gauss(x, lo3, hi3, 2.0, 0.5, 1.5, out, threads)
        return out

    def rs(core):
        out = np.empty_like(t)
        core.rs_z(t, rs_c, rs_n, out, threads)
        return out

    def zero_band(core):
        out = np.empty_like(t)
        core.zero_band_sum(tab.code, t, zs.ordinates, lo, hi, logx, 1, tab.tab, tab.inv_step,
                           tab.umax, tab.asym, out, threads)
        return out

    def primes(core):
        out = np.empty_like(t[:2001])
        core.prime_sum(t[:2001], logn, coef, 0, out, threads)
        return out

    return [
        (f"pair_rows_dense N={n}, 4 cols", pair),
        (f"triple_rows_gauss N={n}", triple),
        (f"rs_z {t.size} points", rs),
        (f"zero_band_sum {t.size} points", zero_band),
        (f"prime_sum 2001 points x {logn.size} terms", primes),
    ]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--threads", type=int, default=1)
    args = p.parse_args(argv)
    if _core is None:
        raise SystemExit("compiled core not built; run `python setup.py build_ext --inplace`")
    print(f"{'case':44s} {'cython s':>10s} {'numpy s':>10s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, fn in _cases(args.threads):
        tc, oc = _best(lambda: fn(_core), args.repeat)
        tf, of = _best(lambda: fn(_fallback), args.repeat)
        diff = float(np.max(np.abs(oc - of)) / max(1.0, float(np.max(np.abs(of)))))
        print(f"{name:44s} {tc:10.4f} {tf:10.4f} {tf / tc:8.1f} {diff:13.2e}")


if __name__ == "__main__":
    main()
