"""Command-line front end.

Every command writes ``report.csv`` or ``report.json`` into ``--outdir``.
The CSV starts with ``# schema=1`` and one ``# key=value`` line per setting,
followed by a header row; the JSON file carries the same three parts.
Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
failure (including a failed selfcheck).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import arithmetic, correlations, kernels, moments, predictions, zerodata, zetaeval

SCHEMA = 1
EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4
DEFAULT_ALPHA = "0.05:0.8:0.05"
DEFAULT_PAIRS = "2/1,3/1,4/1,3/2,6/1"
COMPARE_TARGETS = ("pcf", "tpcf", "tcf", "landau", "moments", "mixed")


class ConfigError(ValueError):
    pass


@dataclass
class Report:
    command: str
    meta: dict
    columns: list
    rows: list = field(default_factory=list)
    failed: bool = False

    def add(self, *values):
        if len(values) != len(self.columns):
            raise AssertionError("row length does not match columns")
        self.rows.append([_cell(v) for v in values])


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(f"{v:.15g}") if math.isfinite(v) else repr(v)
    return str(v)


# ---------------------------------------------------------------------------
# config parsing


def parse_alpha(spec: str) -> np.ndarray:
    """``LO:HI:STEP`` with HI included when it lies on the grid."""
    try:
        lo, hi, step = (float(p) for p in spec.split(":"))
    except ValueError:
        raise ConfigError(f"--alpha expects LO:HI:STEP, got {spec!r}") from None
    if not step > 0 or hi < lo:
        raise ConfigError(f"--alpha {spec!r}: need STEP > 0 and HI >= LO")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 12)


def parse_n(spec: str) -> list[int]:
    try:
        ns = [int(p) for p in spec.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"--n expects comma-separated integers, got {spec!r}") from None
    if not ns:
        raise ConfigError("--n is empty")
    for n in ns:
        if arithmetic.prime_power(n) is None:
            raise ConfigError(f"--n: {n} is not a prime power")
    return ns


def parse_pairs(spec: str) -> list[tuple[int, int]]:
    out = []
    for p in spec.split(","):
        try:
            a, b = (int(v) for v in p.split("/"))
        except ValueError:
            raise ConfigError(f"--pairs expects A/B items, got {p!r}") from None
        if not 1 <= b < a:
            raise ConfigError(f"--pairs: need 1 <= B < A, got {p}")
        out.append((a, b))
    return out


def build_kernel(spec: str, dim: int) -> kernels.TestKernel:
    """``NAME[:WIDTH]`` with NAME in fejer, gauss (1D) or fejer2, gauss2d (2D)."""
    name, _, w = spec.partition(":")
    try:
        width = float(w) if w else 1.0
    except ValueError:
        raise ConfigError(f"--kernel width must be a number, got {w!r}") from None
    if not width > 0:
        raise ConfigError("--kernel width must be positive")
    makers = {
        "fejer": (1, lambda: kernels.fejer_kernel(width)),
        "gauss": (1, lambda: kernels.gaussian_kernel(width)),
        "fejer2": (2, lambda: kernels.fejer_product_kernel(width)),
        "gauss2d": (2, lambda: kernels.gaussian2d_kernel(width**-2, 0.0, width**-2)),
    }
    if name not in makers:
        raise ConfigError(f"unknown kernel {name!r}; choose from {sorted(makers)}")
    kdim, make = makers[name]
    if kdim != dim:
        raise ConfigError(f"kernel {name!r} is {kdim}D, this command needs {dim}D")
    return make()


def load_zero_set(spec: str | None) -> zerodata.ZeroSet:
    """A path, or ``bundled:1e4`` / ``bundled:1e5``; default is the bundled 10^4 set."""
    if spec is None:
        return zerodata.bundled_zeros("1e4")
    if spec.startswith("bundled:"):
        try:
            return zerodata.bundled_zeros(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return zerodata.load_zeros(spec)


def _window(zs, T):
    return zerodata.largest_window(zs) if T is None else zerodata.window(zs, T)


def _meta(args, **extra):
    meta = {"command": args.command, "zeros": args.zeros or "bundled:1e4"}
    meta.update(extra)
    return {k: _cell(v) if not isinstance(v, str) else v for k, v in meta.items()}


# ---------------------------------------------------------------------------
# commands


def cmd_ingest(args) -> Report:
    zs = load_zero_set(args.zeros)
    rep = Report("ingest", _meta(args), ["quantity", "value"])
    rep.add("count", len(zs))
    rep.add("first", float(zs.ordinates[0]))
    rep.add("last", zs.max_ordinate)
    rep.add("precision_digits", zs.precision)
    rep.add("largest_T", zs.max_ordinate / 2)
    n, s = zerodata.zero_counting(zs, zs.max_ordinate)
    rep.add("S_at_last", s)
    return rep


def _f_band(alpha, T):
    L = math.log(T)
    return math.exp(-2 * abs(alpha) * L) + 1.0 / L


def cmd_pcf(args) -> Report:
    zs = load_zero_set(args.zeros)
    w = _window(zs, args.T)
    al = parse_alpha(args.alpha)
    g = correlations.correlation_grid(al, w, threads=args.threads)
    rep = Report("pcf", _meta(args, T=w.T, zeros_in_window=w.count, alpha=args.alpha,
                              band="dense", weight="cauchy"),
                 ["alpha", "F", "predicted", "residual", "tolerance_band", "ratio"])
    for a, f in zip(al, g.f):
        p = predictions.predict_f(a, w.T)
        band = _f_band(a, w.T)
        rep.add(a, f, p, f - p, band, abs(f - p) / band)
    return rep


def _tpcf_rows(args, rep, w, al, ns):
    weight = correlations.WeightKind(args.weight)
    g = correlations.correlation_grid(al, w, twists=ns, weight=weight, U=args.U, threads=args.threads)
    for n in ns:
        for a, v in zip(al, g.twisted[n]):
            p = predictions.predict_f_twisted(a, n, w.T, predictions.Regime.STRONG)
            band = predictions.twisted_band(a, n, w.T)
            rep.add(a, n, v.real, v.imag, p, v.real - p, band, abs(v.real - p) / band)
    return g


def cmd_tpcf(args) -> Report:
    zs = load_zero_set(args.zeros)
    w = _window(zs, args.T)
    al = parse_alpha(args.alpha)
    ns = parse_n(args.n)
    U = args.U if args.weight == "smoothed" else None
    if args.weight == "smoothed" and U is None:
        U = correlations.default_U(w.T)
    args.U = U
    rep = Report("tpcf", _meta(args, T=w.T, zeros_in_window=w.count, alpha=args.alpha,
                               n=",".join(map(str, ns)), band="dense", weight=args.weight,
                               U="none" if U is None else U),
                 ["alpha", "n", "re_F_n", "im_F_n", "predicted", "residual", "tolerance_band", "ratio"])
    _tpcf_rows(args, rep, w, al, ns)
    return rep


def cmd_tcf(args) -> Report:
    zs = load_zero_set(args.zeros)
    w = _window(zs, args.T)
    k = build_kernel(args.kernel or "fejer2:1", 2)
    est = correlations.triple_sum(k, w, threads=args.threads)
    rhs = predictions.conjecture_rhs(predictions.RhsKind.TRIPLE, k)
    band = predictions.pair_band(w.T)
    rep = Report("tcf", _meta(args, T=w.T, zeros_in_window=w.count, kernel=k.name,
                              kernel_arg=args.kernel or "fejer2:1"),
                 ["kernel", "empirical", "predicted", "residual", "tolerance_band", "ratio",
                  "truncation_bound"])
    rep.add(k.name, est.value, rhs, est.value - rhs, band, abs(est.value - rhs) / band,
            est.truncation_error_bound)
    return rep


def _lg_band(a, b, T):
    return math.log(2 * a * T) * math.log(math.log(3 * a)) * a / T


def cmd_landau(args) -> Report:
    zs = load_zero_set(args.zeros)
    w = _window(zs, args.T)
    pairs = parse_pairs(args.pairs)
    rep = Report("landau", _meta(args, T=w.T, zeros_in_window=w.count, pairs=args.pairs),
                 ["a", "b", "re_empirical", "im_empirical", "predicted", "residual", "tolerance_band",
                  "ratio"])
    for a, b in pairs:
        e, p = correlations.landau_gonek(a, b, w)
        band = _lg_band(a, b, w.T)
        rep.add(a, b, e.real, e.imag, p, e.real - p, band, abs(e.real - p) / band)
    return rep


def _moment_T(args, zs, x):
    if args.T is not None:
        return args.T
    margin = 0.0 if x is None else zetaeval.Y_CUT / math.log(x) + 1.0
    return (zs.max_ordinate - margin) / 2


def _moment_rows(rep, zs, T, x, threads):
    pred = predictions.moment_predictions(T)
    band = 1.0 / math.log(T)
    expected = {(1, "re"): 0.0, (1, "im"): 0.0, (2, "re"): pred.second_re, (2, "im"): pred.second_im,
                (3, "re"): pred.third_re, (3, "im"): pred.third_im}
    methods = [moments.Method.DIRECT] + ([moments.Method.PZ] if x is not None else [])
    for method in methods:
        for k in (1, 2, 3):
            for part in ("re", "im"):
                r = moments.moment(T, k, part, method, zs, x=x, threads=threads)
                p = expected[(k, part)]
                rep.add(f"M{k}_{part}", method.value, r.value, p, r.value - p, band,
                        abs(r.value - p) / band, r.quadrature_error_estimate)


def _mixed_rows(rep, zs, T, x, threads):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        mm = moments.mixed_moments(T, zs, x=x, threads=threads)
    pr = predictions.mixed_moment_predictions(mm.beta)
    band = 1.0 / math.log(x)
    for key in ("p3", "p2z", "pz2", "z3"):
        p = getattr(pr, key)
        v = mm.re[key]
        rep.add(f"{key}_re", "pz", v, p, v - p, band, abs(v - p) / band, mm.errors[f"re_{key}"])
    for key in ("p3", "p2z", "pz2", "z3"):
        v = mm.im[key]
        rep.add(f"{key}_im", "pz", v, 0.0, v, band, abs(v) / band, mm.errors[f"im_{key}"])
    return mm


_MOMENT_COLUMNS = ["quantity", "method", "empirical", "predicted", "residual", "tolerance_band", "ratio",
                   "quadrature_error"]


def cmd_moments(args) -> Report:
    zs = load_zero_set(args.zeros)
    x = args.x
    T = _moment_T(args, zs, x)
    rep = Report("moments", _meta(args, T=T, x="none" if x is None else x), list(_MOMENT_COLUMNS))
    _moment_rows(rep, zs, T, x, args.threads)
    if x is not None:
        _mixed_rows(rep, zs, T, x, args.threads)
    return rep


def cmd_predict(args) -> Report:
    T = args.T if args.T is not None else 1e4
    al = parse_alpha(args.alpha)
    ns = parse_n(args.n)
    rep = Report("predict", _meta(args, T=T, alpha=args.alpha, n=",".join(map(str, ns))),
                 ["quantity", "parameter", "n", "value", "tolerance_band"])
    for a in al:
        rep.add("F", a, 1, predictions.predict_f(a, T), _f_band(a, T))
    for n in ns:
        for a in al:
            rep.add("F_n_strong", a, n, predictions.predict_f_twisted(a, n, T),
                    predictions.twisted_band(a, n, T))
    mp = predictions.moment_predictions(T)
    for name in ("second_re", "second_im", "third_re", "third_im", "c_p", "c_z"):
        rep.add(name, T, 1, getattr(mp, name), 1.0 / math.log(T))
    x = args.x if args.x is not None else moments.default_x(T)
    beta = math.log(x) / math.log(T)
    mx = predictions.mixed_moment_predictions(beta)
    for name in ("p3", "p2z", "pz2", "z3"):
        rep.add(f"mixed_{name}", beta, 1, getattr(mx, name), 1.0 / math.log(x))
    return rep


def cmd_compare(args) -> Report:
    target = args.target
    zs = load_zero_set(args.zeros)
    cols = ["quantity", "parameter", "empirical", "predicted", "residual", "tolerance_band", "ratio"]
    if target in ("pcf", "tpcf", "tcf", "landau"):
        sub = {"pcf": cmd_pcf, "tpcf": cmd_tpcf, "tcf": cmd_tcf, "landau": cmd_landau}[target](args)
        rep = Report("compare", dict(sub.meta, target=target), cols)
        ix = {c: i for i, c in enumerate(sub.columns)}
        for r in sub.rows:
            if target == "pcf":
                rep.add("F", r[ix["alpha"]], r[ix["F"]], *r[ix["predicted"]:])
            elif target == "tpcf":
                rep.add(f"re_F_{r[ix['n']]}", r[ix["alpha"]], r[ix["re_F_n"]], *r[ix["predicted"]:])
            elif target == "tcf":
                rep.add("triple", r[ix["kernel"]], *r[ix["empirical"]:ix["truncation_bound"]])
            else:
                rep.add("landau_gonek", f"{r[ix['a']]}/{r[ix['b']]}", r[ix["re_empirical"]],
                        *r[ix["predicted"]:])
        return rep
    if target == "moments":
        T = _moment_T(args, zs, None)
        rep = Report("compare", _meta(args, target=target, T=T), list(_MOMENT_COLUMNS))
        _moment_rows(rep, zs, T, None, args.threads)
        return rep
    x = args.x if args.x is not None else 1e3
    T = _moment_T(args, zs, x)
    rep = Report("compare", _meta(args, target=target, T=T, x=x), list(_MOMENT_COLUMNS))
    _mixed_rows(rep, zs, T, x, args.threads)
    return rep


def _selfcheck_rows(rep, zs, seed):
    checks = []
    # g(u) = (1 - f(u))/u
    us = np.linspace(0.05, 1.95, 50)
    err = max(abs(kernels.eval_aux(kernels.AuxKind.G_RE, u)
                  - (1 - kernels.eval_aux(kernels.AuxKind.F_RE, u)) / u) for u in us)
    checks.append(("g_vs_f", err, 1e-9))
    # numerical transform of h vs closed form
    err = max(abs(kernels.fourier_transform_numeric(kernels.AuxKind.H_RE, a) - kernels.h_hat(a))
              for a in (0.05, 0.1, 0.3, 0.7, 1.5, 3.0))
    checks.append(("h_hat", err, 1e-6))
    # m_n against H_*
    err = 0.0
    for n in (2, 3, 5, 7, 101):
        for T in (1e4, 1e6):
            lam = math.log(n) / math.log(T)
            for a in np.linspace(-2.5, 2.5, 200):
                h = float(kernels.hexagon_arrays(a, lam)[1])
                err = max(err, abs(lam * kernels.m_weight(a, n, T) - h))
    checks.append(("m_n_vs_hexagon", err, 1e-12))
    # dense vs brute force F and F_2 on a small window
    w = zerodata.window(zs, 300.0)
    g = correlations.correlation_grid([0.4], w, twists=(2,))
    d = w.gamma[:, None] - w.gamma[None, :]
    wt = 4 / (4 + d * d) * np.exp(1j * 0.4 * w.L * d)
    f_bf = np.sum(wt).real / (w.T * w.L / (2 * math.pi))
    f2_bf = -np.sum(np.exp(1j * math.log(2) * w.gamma)[:, None] * wt) / (
        w.T / (2 * math.pi) * math.log(2) / math.sqrt(2))
    checks.append(("F_vs_brute", abs(g.f[0] - f_bf) / abs(f_bf), 1e-8))
    checks.append(("F2_vs_brute", abs(g.twisted[2][0] - f2_bf) / abs(f2_bf), 1e-8))
    # explicit formula at random heights
    rng = np.random.default_rng(seed)
    err = 0.0
    for t in rng.uniform(w.T, 2 * w.T, 3):
        for y in (10.0, 50.0):
            s = zetaeval.explicit_formula_sides(float(t), y, zs)
            err = max(err, abs(s.zero_side - s.prime_side))
    checks.append(("explicit_formula", err, 0.05))
    for name, value, tol in checks:
        ok = bool(value < tol)
        rep.failed |= not ok
        rep.add(name, value, tol, ok)


def cmd_selfcheck(args) -> Report:
    zs = load_zero_set(args.zeros)
    rep = Report("selfcheck", _meta(args, seed=args.seed), ["check", "value", "tolerance", "pass"])
    _selfcheck_rows(rep, zs, args.seed)
    return rep


COMMANDS = {
    "ingest": cmd_ingest,
    "pcf": cmd_pcf,
    "tpcf": cmd_tpcf,
    "tcf": cmd_tcf,
    "landau": cmd_landau,
    "moments": cmd_moments,
    "predict": cmd_predict,
    "compare": cmd_compare,
    "selfcheck": cmd_selfcheck,
}


# ---------------------------------------------------------------------------
# output


def render_csv(rep: Report) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA}\n")
    for k, v in rep.meta.items():
        buf.write(f"# {k}={v}\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(rep.columns)
    wr.writerows(rep.rows)
    return buf.getvalue()


def render_json(rep: Report) -> str:
    doc = {"schema": SCHEMA, "meta": rep.meta, "columns": rep.columns, "rows": rep.rows}
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def write_report(rep: Report, outdir: Path, fmt: str) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"report.{fmt}"
    path.write_text(render_csv(rep) if fmt == "csv" else render_json(rep), encoding="utf-8")
    return path


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zetacorr", description="Zeta-zero correlation statistics.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("target", nargs="?", choices=COMPARE_TARGETS, help="what `compare` compares")
    p.add_argument("--zeros", metavar="PATH", help="zero file, or bundled:1e4 / bundled:1e5")
    p.add_argument("--T", type=float, help="window (T, 2T]; default the largest the data allows")
    p.add_argument("--n", default="2,3,4", help="twists, comma-separated prime powers")
    p.add_argument("--alpha", default=DEFAULT_ALPHA, help="grid LO:HI:STEP")
    p.add_argument("--kernel", help="NAME[:WIDTH], NAME in fejer, gauss, fejer2, gauss2d")
    p.add_argument("--weight", choices=("cauchy", "smoothed"), default="cauchy")
    p.add_argument("--U", type=float, help="bump sharpness for the smoothed weight")
    p.add_argument("--x", type=float, help="prime/zero cut-off for P and Z")
    p.add_argument("--pairs", default=DEFAULT_PAIRS, help="Landau-Gonek pairs A/B,...")
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--outdir", default=".", type=Path)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    return p


def _fail(code: int, exc: BaseException) -> int:
    record = {"error": type(exc).__name__, "message": str(exc), "exit": code}
    print(json.dumps(record), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        if args.command == "compare" and args.target is None:
            raise ConfigError(f"compare needs a target: {', '.join(COMPARE_TARGETS)}")
        if args.command != "compare" and args.target is not None:
            raise ConfigError(f"{args.command} takes no positional target")
        if args.T is not None and not args.T > 0:
            raise ConfigError("--T must be positive")
        rep = COMMANDS[args.command](args)
    except (zerodata.ZeroDataError, zerodata.CoverageError) as exc:
        return _fail(EXIT_DATA, exc)
    except (ConfigError, ValueError) as exc:
        return _fail(EXIT_CONFIG, exc)
    except (ArithmeticError, FloatingPointError) as exc:
        return _fail(EXIT_NUMERIC, exc)
    path = write_report(rep, args.outdir, args.out)
    print(path)
    if rep.failed:
        print(json.dumps({"error": "SelfcheckFailed", "message": "one or more checks failed",
                          "exit": EXIT_NUMERIC}), file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
