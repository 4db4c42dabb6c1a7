"""Primes, the von Mangoldt function and Hardy-Littlewood singular series.

Conventions: ``frak_S`` is the twin-prime constant ``2 prod_{p>2}(1 - 1/(p-1)^2)``;
``frak_S(h)`` vanishes for odd ``h`` and equals ``frak_S prod_{p|h, p>2} (p-1)/(p-2)``
for even ``h``; the twisted series is ``frak_S_n(h) = [gcd(n, h) = 1] frak_S(n h)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

__all__ = [
    "PrimePower",
    "prime_power",
    "von_mangoldt",
    "primes_up_to",
    "mangoldt_array",
    "SieveBudgetError",
    "SIEVE_BUDGET",
    "twin_prime_constant",
    "singular_series",
    "SingularSeriesTable",
    "singular_series_table",
    "SeriesKind",
    "series_sums",
    "dirichlet_series_closed_form",
    "CPConstant",
    "c_p_constant",
    "goldston_prime_sum",
    "hl_sum",
    "r_spikes",
]

SIEVE_BUDGET = 10**8
_SEGMENT = 1 << 20


@dataclass(frozen=True)
class PrimePower:
    n: int
    q: int
    a: int
    lam: float  # log q = Lambda(n)


def _smallest_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return d
        d += 2
    return n


def prime_power(n: int) -> PrimePower | None:
    """Decompose ``n = q^a``; None when n is not a prime power."""
    n = int(n)
    if n < 2:
        return None
    q = _smallest_factor(n)
    a, m = 0, n
    while m % q == 0:
        m //= q
        a += 1
    if m != 1:
        return None
    return PrimePower(n, q, a, math.log(q))


def von_mangoldt(m: int) -> float:
    if m <= 0:
        raise ValueError(f"von_mangoldt: m = {m} must be positive")
    pp = prime_power(m)
    return pp.lam if pp else 0.0


@lru_cache(maxsize=8)
def primes_up_to(limit: int) -> np.ndarray:
    """All primes <= limit (sieve of Eratosthenes on odd numbers)."""
    limit = int(limit)
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones((limit - 1) // 2 + 1, dtype=bool)  # index i <-> 2i+1
    sieve[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if sieve[i]:
            p = 2 * i + 1
            sieve[p * p // 2::p] = False
    out = np.concatenate([[2], 2 * np.nonzero(sieve)[0] + 1])
    out.setflags(write=False)
    return out


class SieveBudgetError(MemoryError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"sieve up to {required} exceeds the budget of {budget}")
        self.required = required
        self.budget = budget


def _mangoldt_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Lambda(m) for lo <= m < hi, given all primes up to sqrt(hi)."""
    size = hi - lo
    composite = np.zeros(size, dtype=bool)
    for p in base:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        composite[start - lo::p] = True
    out = np.zeros(size)
    m = np.arange(lo, hi)
    prime = ~composite & (m >= 2)
    out[prime] = np.log(m[prime])
    # higher prime powers p^k (k >= 2) have p <= sqrt(hi)
    for p in base:
        p = int(p)
        if p * p >= hi:
            break
        pk = p * p
        while pk < hi:
            if pk >= lo:
                out[pk - lo] = math.log(p)
            pk *= p
    return out


def mangoldt_array(limit: int, budget: int = SIEVE_BUDGET) -> np.ndarray:
    """Array ``L`` with ``L[m] = Lambda(m)`` for 0 <= m <= limit (segmented sieve)."""
    limit = int(limit)
    if limit > budget:
        raise SieveBudgetError(limit, budget)
    base = primes_up_to(math.isqrt(limit) + 1)
    parts = [_mangoldt_segment(lo, min(lo + _SEGMENT, limit + 1), base)
             for lo in range(0, limit + 1, _SEGMENT)]
    return np.concatenate(parts)


@lru_cache(maxsize=None)
def twin_prime_constant(p_max: int = 10**7) -> float:
    """frak_S from the Euler product over p <= p_max plus an estimate of the rest.

    The neglected factor is exp(-sum_{p > P} 1/(p-1)^2) and the sum is
    replaced by ``E1(log P) = int_P^inf dt / (t^2 log t)``.
    """
    if p_max < 10**5:
        raise ValueError("twin_prime_constant: p_max must be at least 1e5")
    p = primes_up_to(p_max)[1:].astype(float)
    log_prod = np.sum(np.log1p(-1.0 / (p - 1.0) ** 2))
    tail = special.exp1(math.log(p_max))
    return 2.0 * math.exp(log_prod - tail)


def _odd_prime_factors(h: int) -> list[int]:
    out, m, d = [], h, 3
    while m % 2 == 0:
        m //= 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 2
    if m > 1:
        out.append(m)
    return out


def singular_series(n: int, h: int, p_max: int = 10**7) -> float:
    """frak_S_n(h); for n = 1 this is frak_S(h)."""
    if n < 1 or h < 1:
        raise ValueError("singular_series: need n >= 1 and h >= 1")
    if math.gcd(n, h) != 1:
        return 0.0
    m = n * h
    if m % 2:
        return 0.0
    value = twin_prime_constant(p_max)
    for p in _odd_prime_factors(m):
        value *= (p - 1) / (p - 2)
    return value


@dataclass(frozen=True)
class SingularSeriesTable:
    n: int
    values: np.ndarray  # values[h] = frak_S_n(h), values[0] = 0
    frak_S: float

    @property
    def h_max(self) -> int:
        return self.values.size - 1


@lru_cache(maxsize=4)
def _odd_part_products(h_max: int) -> np.ndarray:
    # prod_{p | h, p > 2} (p-1)/(p-2) for 0 <= h <= h_max
    prod = np.ones(h_max + 1)
    for p in primes_up_to(h_max)[1:]:
        p = int(p)
        prod[p::p] *= (p - 1) / (p - 2)
    prod.setflags(write=False)
    return prod


@lru_cache(maxsize=8)
def singular_series_table(n: int, h_max: int, p_max: int = 10**7) -> SingularSeriesTable:
    """frak_S_n(h) for all 0 <= h <= h_max."""
    pp = prime_power(n) if n > 1 else None
    if n > 1 and pp is None:
        raise ValueError(f"singular_series_table: {n} is not a prime power")
    frak_s = twin_prime_constant(p_max)
    base = _odd_part_products(h_max)
    h = np.arange(h_max + 1)
    if pp is None:
        vals = np.where(h % 2 == 0, frak_s * base, 0.0)
    elif pp.q == 2:
        # gcd(2^a, h) = 1 forces h odd, and then 2h is even
        vals = np.where(h % 2 == 1, frak_s * base, 0.0)
    else:
        q = pp.q
        vals = np.where((h % 2 == 0) & (h % q != 0), frak_s * base * (q - 1) / (q - 2), 0.0)
    vals[0] = 0.0
    vals.setflags(write=False)
    return SingularSeriesTable(n, vals, frak_s)


class SeriesKind(enum.Enum):
    CESARO = "cesaro"
    S_ALPHA = "s_alpha"
    T_ALPHA = "t_alpha"
    F_N = "f_n"


def _t_alpha(table_for, n, y, alpha):
    h_max = int(max(1e3 * y, 1e6))
    vals = table_for(n, h_max).values
    h = np.arange(math.floor(y) + 1, h_max + 1, dtype=float)
    head = float(np.sum(vals[math.floor(y) + 1:] * h ** (-alpha)))
    # beyond h_max the series is replaced by its mean value 1
    tail = h_max ** (1 - alpha) / (alpha - 1)
    return head + tail - y ** (1 - alpha) / (alpha - 1)


def series_sums(n: int, y: float, alpha: float = 0.0, kind: SeriesKind = SeriesKind.CESARO) -> float:
    """Averages of frak_S_n(h).

    CESARO   sum_{h<=y} (y-h) frak_S_n(h)
    S_ALPHA  sum_{h<=y} frak_S_n(h) h^alpha - y^(alpha+1)/(alpha+1)
    T_ALPHA  sum_{h>y} frak_S_n(h) h^-alpha - y^(1-alpha)/(alpha-1), alpha > 1
    F_N      y T_2(y) + S_2(y) / y^3
    """
    kind = SeriesKind(kind)
    if y < 1:
        raise ValueError("series_sums: y must be at least 1")
    if kind is SeriesKind.T_ALPHA and not alpha > 1:
        raise ValueError("series_sums: T_ALPHA needs alpha > 1")
    if kind is SeriesKind.S_ALPHA and alpha < 0:
        raise ValueError("series_sums: S_ALPHA needs alpha >= 0")
    if kind is SeriesKind.CESARO and alpha != 0.0:
        raise ValueError("series_sums: CESARO takes no alpha")
    if kind is SeriesKind.F_N and alpha not in (0.0, 2.0):
        raise ValueError("series_sums: F_N uses alpha = 2 internally")
    hy = math.floor(y)
    if kind is SeriesKind.T_ALPHA:
        return _t_alpha(singular_series_table, n, y, alpha)
    if kind is SeriesKind.F_N:
        return y * _t_alpha(singular_series_table, n, y, 2.0) + series_sums(n, y, 2.0, SeriesKind.S_ALPHA) / y**3
    vals = singular_series_table(n, max(hy, 1)).values[: hy + 1]
    h = np.arange(hy + 1, dtype=float)
    if kind is SeriesKind.CESARO:
        return float(np.sum((y - h) * vals))
    return float(np.sum(vals * h**alpha)) - y ** (alpha + 1) / (alpha + 1)


def dirichlet_series_closed_form(n: int, s: float, p_max: int = 10**7) -> float:
    """(1 - 2^{-s-1}) frak_S A_q(s) zeta(s) zeta(s+1) G(s) for prime n = q > 2."""
    pp = prime_power(n)
    if pp is None or pp.q == 2:
        raise ValueError("dirichlet_series_closed_form: n must be a power of an odd prime")
    q = pp.q
    p = primes_up_to(p_max)[1:].astype(float)
    log_g = np.sum(np.log1p(2.0 / ((p - 2) * p ** (s + 1)) - 1.0 / ((p - 2) * p ** (2 * s + 1))))
    a_q = 1.0 / (1.0 - 1.0 / (q - 1) + 1.0 / (q**s - 1))
    return ((1 - 2.0 ** (-s - 1)) * twin_prime_constant(p_max) * a_q
            * special.zeta(s) * special.zeta(s + 1) * math.exp(log_g))


@dataclass(frozen=True)
class CPConstant:
    partial: float  # truncated double sum, nondecreasing in p_max and m_max
    tail_estimate: float  # estimate of the primes above p_max
    value: float  # partial + tail_estimate
    tail_bound: float  # bound on |value - c_P| (prime tail under RH, plus m tail)


def _prime_power_sums(p_max: int, m_max: int) -> np.ndarray:
    # sums[m] = sum_{p <= p_max} p^-m for 2 <= m <= m_max
    p = primes_up_to(p_max).astype(float)
    inv = 1.0 / p
    out = np.zeros(m_max + 1)
    pw = inv * inv
    for m in range(2, m_max + 1):
        out[m] = pw.sum()
        pw *= inv
    return out


def c_p_constant(p_max: int = 10**7, m_max: int = 64) -> CPConstant:
    """c_P = (3/4) sum_{p, m>=2} 1/(m p^m) sum_{k+l=m} 1/(k l).

    The inner sum is 2 H_{m-1} / m.  Primes above ``p_max`` are estimated by
    ``sum_{p>P} p^-m ~ E1((m-1) log P)``; under RH the error of that estimate
    is below ``log P / (6 pi P^1.5)`` for the dominant m = 2 term.
    """
    if p_max < 10**4 or m_max < 2:
        raise ValueError("c_p_constant: need p_max >= 1e4 and m_max >= 2")
    sums = _prime_power_sums(p_max, m_max)
    m = np.arange(2, m_max + 1)
    harmonic = np.cumsum(1.0 / np.arange(1, m_max + 1))  # harmonic[k-1] = H_k
    coef = 0.75 * 2.0 * harmonic[m - 2] / (m * m)
    partial = float(np.sum(coef * sums[2:]))
    lp = math.log(p_max)
    tail = float(np.sum(coef * special.exp1((m - 1) * lp)))
    rh_err = coef[0] * lp / (6 * math.pi * p_max**1.5) * 4
    # m > m_max: coefficients <= 1/2, prime sum <= 2^-m_max (geometric)
    m_tail = 0.75 * 2.0 ** (-m_max) * 2.0
    return CPConstant(partial, tail, partial + tail, rh_err + m_tail)


def goldston_prime_sum(p_max: int = 10**7, m_max: int = 64) -> float:
    """(1/2) sum_p sum_{m>=2} (1-m)/(m^2 p^m), with the same prime-tail estimate."""
    sums = _prime_power_sums(p_max, m_max)
    m = np.arange(2, m_max + 1)
    coef = 0.5 * (1.0 - m) / (m * m)
    tail = np.sum(coef * special.exp1((m - 1) * math.log(p_max)))
    return float(np.sum(coef * sums[2:]) + tail)


def hl_sum(x: int, n: int, h: int, sign: int = 1, budget: int = SIEVE_BUDGET) -> tuple[float, float]:
    """Empirical sum_{m<=x} Lambda(m/n) Lambda(m + sign*h) and the prediction frak_S_n(h) x / n."""
    if sign not in (1, -1):
        raise ValueError("hl_sum: sign must be +1 or -1")
    if not (1 <= h <= x and 1 <= n <= x):
        raise ValueError("hl_sum: need 1 <= h, n <= x")
    lam = mangoldt_array(x + h, budget)
    k = np.arange(1, x // n + 1)
    shifted = n * k + sign * h
    ok = shifted >= 1
    empirical = float(np.sum(lam[k[ok]] * lam[shifted[ok]]))
    predicted = singular_series(n, h) * x / n
    return empirical, predicted


def r_spikes(alpha: float, n: int, T: float) -> tuple[float, float]:
    """Spike terms r_1(alpha, n) and r_2(alpha, n).

    Only m = q^b survive in both sums, so with x = T^alpha::

        r_1 = log q * sum_{b>=1} q^-b min(q^b/x, x/q^b)^2
        r_2 = log q * sum_{b=1}^{a-1} min(n x/q^b, q^b/(n x))^2
    """
    pp = prime_power(n)
    if pp is None:
        raise ValueError(f"r_spikes: {n} is not a prime power")
    if not T > math.e:
        raise ValueError("r_spikes: T must exceed e")
    lq = pp.lam
    log_x = alpha * math.log(T)
    r1 = 0.0
    b = 1
    while True:
        d = b * lq - log_x  # log(q^b / x)
        term = math.exp(-b * lq - 2.0 * abs(d))
        r1 += term
        if d > 0 and term < 1e-18 * max(r1, 1e-300):
            break
        b += 1
    r2 = sum(math.exp(-2.0 * abs(math.log(n) + log_x - b * lq)) for b in range(1, pp.a))
    return lq * r1, lq * r2
