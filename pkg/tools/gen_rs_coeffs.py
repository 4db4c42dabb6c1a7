"""Generate power-series coefficients of the Riemann-Siegel remainder terms.

Writes ``src/zetacorr/_rs_coeffs.py``.  The remainder functions C_0..C_4 are
expanded in ``z = p - 1/2`` where ``p`` is the fractional part of
``sqrt(t / 2 pi)``.  Run from the repository root::

    python tools/gen_rs_coeffs.py
"""
from pathlib import Path

import mpmath as mp

mp.mp.dps = 80
DEG = 72  # even; coefficients beyond this are below 1e-30 on |z| <= 1/2


def cos_series(scale, deg):
    # cos(scale * z) as a list of coefficients in z
    out = [mp.mpf(0)] * (deg + 1)
    for k in range(0, deg // 2 + 1):
        out[2 * k] = (-1) ** k * scale ** (2 * k) / mp.factorial(2 * k)
    return out


def psi_series(deg):
    """Taylor coefficients of Psi(1/2 + z) = -cos(2 pi z^2 - 5 pi/8) / cos(2 pi z)."""
    two_pi = 2 * mp.pi
    a, b = mp.cos(5 * mp.pi / 8), mp.sin(5 * mp.pi / 8)
    num = [mp.mpf(0)] * (deg + 1)
    # cos(w - c) = cos w cos c + sin w sin c with w = 2 pi z^2
    for k in range(0, deg // 4 + 1):
        if 4 * k <= deg:
            num[4 * k] += a * (-1) ** k * two_pi ** (2 * k) / mp.factorial(2 * k)
        if 4 * k + 2 <= deg:
            num[4 * k + 2] += b * (-1) ** k * two_pi ** (2 * k + 1) / mp.factorial(2 * k + 1)
    den = cos_series(two_pi, deg)
    q = [mp.mpf(0)] * (deg + 1)
    for n in range(deg + 1):
        s = num[n] - sum(q[j] * den[n - j] for j in range(n))
        q[n] = s / den[0]
    return [-c for c in q]


def derivative(coeffs, k):
    out = []
    for j in range(k, len(coeffs)):
        out.append(coeffs[j] * mp.factorial(j) / mp.factorial(j - k))
    return out + [mp.mpf(0)] * k


def combine(terms):
    n = len(terms[0][1])
    out = [mp.mpf(0)] * n
    for w, c in terms:
        for j in range(n):
            out[j] += w * c[j]
    return out


def main():
    psi = psi_series(DEG + 14)
    d = {k: derivative(psi, k) for k in range(13)}
    pi = mp.pi
    c = [
        d[0],
        combine([(-1 / (96 * pi**2), d[3])]),
        combine([(1 / (64 * pi**2), d[2]), (1 / (18432 * pi**4), d[6])]),
        combine([(-1 / (64 * pi**2), d[1]), (-1 / (3840 * pi**4), d[5]),
                 (-1 / (5308416 * pi**6), d[9])]),
        combine([(1 / (128 * pi**2), d[0]), (19 / (24576 * pi**4), d[4]),
                 (11 / (5898240 * pi**6), d[8]), (1 / (2038431744 * pi**8), d[12])]),
    ]
    lines = [
        '"""Riemann-Siegel remainder coefficients (generated by tools/gen_rs_coeffs.py).',
        "",
        "RS_COEFFS[k][j] is the coefficient of z**j in C_k, z = frac(sqrt(t/2pi)) - 1/2.",
        '"""',
        "",
        "RS_COEFFS = (",
    ]
    for ck in c:
        vals = [ck[j] for j in range(DEG + 1)]
        # trim trailing negligible terms
        while len(vals) > 1 and abs(vals[-1]) * mp.mpf(0.5) ** (len(vals) - 1) < mp.mpf(1e-32):
            vals.pop()
        lines.append("    (")
        for v in vals:
            lines.append(f"        {mp.nstr(v, 20, min_fixed=-1, max_fixed=-1)},")
        lines.append("    ),")
    lines.append(")")
    out = Path(__file__).resolve().parents[1] / "src" / "zetacorr" / "_rs_coeffs.py"
    out.write_text("\n".join(lines) + "\n")
    print("wrote", out)


if __name__ == "__main__":
    main()
