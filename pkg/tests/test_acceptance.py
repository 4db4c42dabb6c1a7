"""Acceptance criteria 1-13, each at its stated tolerance.

Every test prints one ``ACCEPTANCE <n>: PASS|FAIL`` line with the measured
figures, then asserts.  Run alone with::

    pytest tests/test_acceptance.py -v -s
"""
import math
import time

import numpy as np
import pytest

from zetacorr import (arithmetic, cli, correlations as co, kernels, moments as mo, predictions as pr,
                      zerodata, zetaeval)
from zetacorr.arithmetic import SeriesKind
from zetacorr.kernels import AuxKind
from zetacorr.moments import Method, Part


def verdict(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def frak_free_g_identity(u):
    return abs(kernels.eval_aux(AuxKind.G_RE, u) - (1 - kernels.eval_aux(AuxKind.F_RE, u)) / u)


def test_01_kernel_identities(capsys):
    t0 = time.perf_counter()
    g_err = max(frak_free_g_identity(u) for u in np.linspace(0.05, 1.95, 52)[1:-1])
    points = (0.03, 0.1, 0.2, 0.35, 0.7, 1.5)
    ft_err = max(abs(kernels.fourier_transform_numeric(AuxKind.H_RE, a) - kernels.h_hat(a)) for a in points)
    dt = time.perf_counter() - t0
    verdict(capsys, 1, g_err < 1e-9 and ft_err < 1e-6 and dt < 10,
            f"max|g-(1-f)/u|={g_err:.2e} (<1e-9), max|FT h - h_hat|={ft_err:.2e} (<1e-6), {dt:.1f}s (<10s)")


def test_02_m_n_equals_hexagon(capsys):
    t0 = time.perf_counter()
    alphas = np.linspace(-1.6, 1.2, 200)
    worst = 0.0
    for n in (2, 3, 5, 7, 101):
        lam = math.log(n)
        for T in (1e4, 1e6):
            b = lam / math.log(T)
            lhs = b * np.array([kernels.m_weight(a, n, T) for a in alphas])
            rhs = kernels.hexagon_arrays(alphas, np.full_like(alphas, b))[1]
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    dt = time.perf_counter() - t0
    verdict(capsys, 2, worst < 1e-12 and dt < 1, f"max residual {worst:.2e} (<1e-12), {dt:.2f}s (<1s)")


def _prefix(zs, n=2000):
    g = zs.ordinates[:n]
    T = float(g[-1]) / 2
    return zerodata.Window(T, 0, n, math.log(T), g)


def test_03_oracle_equivalence(capsys, zs):
    t0 = time.perf_counter()
    w = _prefix(zs)
    x = w.gamma * w.L / (2 * math.pi)
    norm = w.T * w.L / (2 * math.pi)
    d = x[:, None] - x[None, :]
    rel = {}

    def record(name, got, ref):
        rel[name] = abs(got - ref) / abs(ref)

    for name, k in (("fejer", kernels.fejer_kernel(1.0)), ("gauss", kernels.gaussian_kernel(1.0))):
        rows = k.r(d).sum(axis=1)
        record(f"pair_{name}", co.pair_sum(k, w).value, rows.sum() / norm)
        lam = math.log(2)
        ref = -(np.exp(1j * math.log(2) * w.gamma) @ rows) / (w.T / (2 * math.pi) * lam / math.sqrt(2))
        record(f"twisted_{name}", co.pair_sum(k, w, twist=2).value, ref)
        if name == "fejer":
            record("triple_fejer2", co.triple_sum(kernels.fejer_product_kernel(1.0), w).value,
                   np.sum(rows * rows) / norm)
    a11, a12, a22 = 2.0, 0.5, 1.5
    total = 0.0
    for j in range(x.size):
        u = x[j] - x[np.abs(x[j] - x) < 6.0]
        total += np.exp(-np.pi * (a11 * u[:, None] ** 2 + 2 * a12 * u[:, None] * u[None, :]
                                  + a22 * u[None, :] ** 2)).sum()
    record("triple_gauss2d", co.triple_sum(kernels.gaussian2d_kernel(a11, a12, a22), w).value, total / norm)
    W = kernels.omega_weight(w.gamma[:, None] - w.gamma[None, :])
    e = np.exp(1j * 0.4 * w.L * w.gamma)
    record("F", co.f_montgomery(0.4, w).value, (e @ W @ np.conj(e)).real / norm)
    dt = time.perf_counter() - t0
    worst = max(rel.values())
    detail = ", ".join(f"{k}={v:.1e}" for k, v in rel.items())
    verdict(capsys, 3, worst < 1e-8 and dt < 60, f"max rel diff {worst:.1e} (<1e-8), {dt:.1f}s (<60s); {detail}")


def test_04_landau_gonek(capsys, zs):
    t0 = time.perf_counter()
    w = zerodata.largest_window(zs)
    res = {}
    for a, b in [(2, 1), (3, 1), (4, 1), (3, 2), (6, 1)]:
        emp, pred = co.landau_gonek(a, b, w)
        res[f"{a}/{b}"] = abs(emp - pred)
    dt = time.perf_counter() - t0
    worst = max(res.values())
    detail = ", ".join(f"{k}:{v:.1e}" for k, v in res.items())
    verdict(capsys, 4, worst < 0.02 and dt < 30, f"max residual {worst:.2e} (<0.02) at T={w.T:.1f}, {dt:.1f}s; {detail}")


BASE_ALPHAS = np.round(np.arange(0.05, 0.8001, 0.05), 10)
SYM_ALPHAS = (0.05, 0.2, 0.5)


@pytest.fixture(scope="module")
def big_grid(zs_large):
    """F and F_n (n = 2, 3, 4) on the largest window of the 10^5 set, plus mirrored points."""
    w = zerodata.largest_window(zs_large)
    mirrored = [-a - math.log(n) / w.L for n in (2, 3, 4) for a in SYM_ALPHAS]
    alphas = np.concatenate([BASE_ALPHAS, mirrored])
    return w, co.correlation_grid(alphas, w, twists=(2, 3, 4))


def test_05_montgomery_regime(capsys, big_grid):
    w, g = big_grid
    sel = BASE_ALPHAS >= 0.1 - 1e-12
    alphas = BASE_ALPHAS[sel]
    f = g.f[:BASE_ALPHAS.size][sel]
    pred = np.array([pr.predict_f(a, w.T) for a in alphas])
    dev = np.abs(f - pred)
    i = int(np.argmax(dev))
    verdict(capsys, 5, w.count >= 50_000 and dev.max() < 0.15,
            f"{w.count} zeros, T={w.T:.1f}: max|F - (T^-2a log T + a)| = {dev.max():.3f} at alpha={alphas[i]:.2f} "
            f"(<0.15); F={f[i]:.4f}, predicted {pred[i]:.4f}")


def test_06_twisted_small_alpha(capsys, big_grid):
    w, g = big_grid
    sel = BASE_ALPHAS <= 0.5 + 1e-12
    worst, where, sym = 0.0, None, 0.0
    for n in (2, 3, 4):
        vals = g.twisted[n][:BASE_ALPHAS.size][sel]
        for a, v in zip(BASE_ALPHAS[sel], vals):
            d = abs(v.real - pr.predict_f_twisted(a, n, w.T))
            if d > worst:
                worst, where = d, (n, a)
        k0 = BASE_ALPHAS.size + 3 * (n - 2)
        for j, a in enumerate(SYM_ALPHAS):
            i = int(np.argmin(np.abs(BASE_ALPHAS - a)))
            sym = max(sym, abs(g.twisted[n][i] - g.twisted[n][k0 + j]))
    verdict(capsys, 6, worst < 0.15 and sym < 1e-10,
            f"max|Re F_n - prediction| = {worst:.3f} (<0.15) at n={where[0]}, alpha={where[1]:.2f}; "
            f"symmetry residual {sym:.1e} (<1e-10)")


def test_07_explicit_formula(capsys, zs):
    t0 = time.perf_counter()
    w = zerodata.largest_window(zs)
    rng = np.random.default_rng(7)
    # the zero side needs 20 units of data beyond t
    ts = rng.uniform(w.T, 2 * w.T - 20.0, 20)
    worst = 0.0
    for t in ts:
        for y in (10.0, 50.0, 200.0):
            s = zetaeval.explicit_formula_sides(t, y, zs)
            worst = max(worst, abs(s.zero_side - s.prime_side))
    dt = time.perf_counter() - t0
    verdict(capsys, 7, worst < 0.05 and dt < 30, f"max|zero side - prime side| = {worst:.2e} (<0.05), {dt:.1f}s (<30s)")


def test_08_singular_series(capsys):
    ys = (1e3, 1e4, 1e5)
    ratios = {}
    for n in (3, 9, 25):
        pp = arithmetic.prime_power(n)
        ratios[n] = [abs(arithmetic.series_sums(n, y) - (y * y / 2 - pp.lam * y / 2)) / (y ** 0.75 * pp.q ** 0.25)
                     for y in ys]
    bounded = all(max(r) <= 10 for r in ratios.values())
    monotone = all(r[0] >= r[1] >= r[2] for r in ratios.values())
    s0 = max(abs(arithmetic.series_sums(n, y, 0.0, SeriesKind.S_ALPHA) + min(arithmetic.prime_power(n).lam,
                                                                            math.log(y)) / 2)
             / math.log(y) ** (2 / 3) for n in (2, 3, 9, 25) for y in (1e3, 1e4, 1e5, 1e6))
    detail = "; ".join(f"n={n}: " + ", ".join(f"{v:.2e}" for v in r) for n, r in ratios.items())
    verdict(capsys, 8, bounded and monotone and s0 <= 5,
            f"bounded<=10: {bounded}, nonincreasing in y: {monotone}, S_0 ratio {s0:.3f} (<=5); {detail}")


def test_09_keating_snaith(capsys):
    t0 = time.perf_counter()
    cz, cp = pr.keating_snaith_constants(N=800)
    ref = arithmetic.c_p_constant().value
    dt = time.perf_counter() - t0
    verdict(capsys, 9, abs(cz - pr.C_Z) < 0.02 and abs(cp - ref) < 1e-3 and dt < 60,
            f"c_Z(800)={cz:.5f} vs -pi^2/4={pr.C_Z:.5f} (|d|={abs(cz - pr.C_Z):.1e}<0.02); "
            f"a'''(0)/8={cp:.8f} vs c_P={ref:.8f} (|d|={abs(cp - ref):.1e}<1e-3), {dt:.1f}s (<60s)")


@pytest.fixture(scope="module")
def big_moments(zs_large):
    T = zerodata.largest_window(zs_large).T
    out = {(k, p): mo.moment(T, k, p, Method.DIRECT, zs_large) for k in (2, 3) for p in (Part.RE, Part.IM)}
    return T, out


def test_10_second_moment(capsys, big_moments):
    T, m = big_moments
    pred = pr.moment_predictions(T).second_im
    d_im = abs(m[2, Part.IM].value - pred)
    d_re = abs(m[2, Part.RE].value - pred)
    verdict(capsys, 10, d_im < 0.1 and d_re < 0.1,
            f"T={T:.1f}: M2_im={m[2, Part.IM].value:.4f}, M2_re={m[2, Part.RE].value:.4f}, "
            f"predicted {pred:.4f}; deviations {d_im:.3f}, {d_re:.3f} (<0.1)")


def test_11_third_moment(capsys, big_moments):
    T, m = big_moments
    pred = pr.moment_predictions(T).third_re
    d_re = abs(m[3, Part.RE].value - pred)
    im = abs(m[3, Part.IM].value)
    verdict(capsys, 11, d_re < 0.5 and im < 0.3,
            f"T={T:.1f}: M3_re={m[3, Part.RE].value:.4f} vs c_P - pi^2/4 = {pred:.4f} (|d|={d_re:.3f}<0.5); "
            f"|M3_im|={im:.4f} (<0.3)")


def test_12_mixed_moments(capsys, zs_large):
    T, x = 1e4, 1e3
    with pytest.warns(UserWarning, match="exceeds"):
        mm = mo.mixed_moments(T, zs_large, x=x)
    cp = arithmetic.c_p_constant().value
    re = mm.re
    identity = abs(re["p3"] + 3 * re["p2z"] + 3 * re["pz2"] + re["z3"] - mm.re_total)
    d_p3 = abs(re["p3"] - cp)
    d_p2z = abs(re["p2z"])
    verdict(capsys, 12, d_p3 < 0.1 and d_p2z < 0.1 and identity < 1e-12,
            f"T={T:.0f}, x={x:.0f}: P^3={re['p3']:.4f} vs c_P={cp:.4f} (|d|={d_p3:.3f}<0.1); "
            f"P^2Z={re['p2z']:.4f} (<0.1); identity residual {identity:.1e} (<1e-12)")


DETERMINISM_RUNS = [
    ["ingest"],
    ["pcf", "--T", "500"],
    ["pcf", "--T", "500", "--weight", "smoothed"],
    ["tpcf", "--T", "500", "--n", "2,3,4", "--alpha", "0:0.8:0.05"],
    ["tpcf", "--T", "500", "--n", "2", "--weight", "smoothed"],
    ["tcf", "--T", "500", "--kernel", "fejer2"],
    ["tcf", "--T", "500", "--kernel", "gauss2d:2"],
    ["landau", "--T", "500"],
    ["moments", "--T", "300", "--x", "10"],
    ["predict", "--T", "1e4"],
    ["compare", "pcf", "--T", "500"],
    ["compare", "tpcf", "--T", "500", "--n", "2"],
    ["compare", "tcf", "--T", "500", "--kernel", "fejer2"],
    ["compare", "landau", "--T", "500"],
    ["compare", "moments", "--T", "300"],
    ["compare", "mixed", "--T", "300", "--x", "4"],
    ["selfcheck"],
]


def test_13_determinism(capsys, tmp_path):
    differing = []
    for i, argv in enumerate(DETERMINISM_RUNS):
        for fmt in ("csv", "json"):
            blobs = []
            for threads in (1, 8):
                out = tmp_path / f"{i}_{fmt}_{threads}"
                code = cli.main([*argv, "--out", fmt, "--threads", str(threads), "--outdir", str(out)])
                assert code == 0, (argv, code)
                blobs.append((out / f"report.{fmt}").read_bytes())
            if blobs[0] != blobs[1]:
                differing.append(" ".join(argv) + f" ({fmt})")
    verdict(capsys, 13, not differing,
            f"{2 * len(DETERMINISM_RUNS)} reports compared across --threads 1/8; differing: {differing or 'none'}")
