"""Loading and indexing zeta-zero ordinates.

File format: UTF-8 text, one decimal ordinate per line in ascending order,
optional leading ``#`` comment lines, optionally gzip-compressed.
"""
from __future__ import annotations

import gzip
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import zetaeval

__all__ = [
    "ZeroDataError",
    "CoverageError",
    "ZeroSet",
    "Window",
    "load_zeros",
    "bundled_zeros",
    "bundled_path",
    "window",
    "largest_window",
    "zero_counting",
    "counting_arrays",
]

BUNDLED = {"1e4": "zeros_1e4.txt", "1e5": "zeros_1e5.txt.gz"}


class ZeroDataError(ValueError):
    """Malformed zero file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class CoverageError(ValueError):
    def __init__(self, message: str, max_T: float | None = None):
        super().__init__(message)
        self.max_T = max_T


@dataclass(frozen=True, eq=False)
class ZeroSet:
    ordinates: np.ndarray
    source: str
    precision: int

    def __len__(self) -> int:
        return self.ordinates.size

    @property
    def max_ordinate(self) -> float:
        return float(self.ordinates[-1])


@dataclass(frozen=True, eq=False)
class Window:
    """Zeros with T < gamma <= 2T; ``gamma`` is a read-only view."""

    T: float
    lo_index: int
    hi_index: int
    L: float
    gamma: np.ndarray

    @property
    def count(self) -> int:
        return self.hi_index - self.lo_index


def _open_text(path: Path) -> str:
    raw = path.read_bytes()
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ZeroDataError(f"not UTF-8 text ({exc})") from None


def load_zeros(path) -> ZeroSet:
    """Parse and validate a zero file."""
    path = Path(path)
    if not path.exists():
        raise ZeroDataError(f"{path}: no such file")
    values: list[float] = []
    precision = 0
    header = True
    for lineno, line in enumerate(_open_text(path).splitlines(), start=1):
        s = line.strip()
        if header and s.startswith("#"):
            continue
        header = False
        if not s:
            continue
        try:
            v = float(s)
        except ValueError:
            raise ZeroDataError(f"cannot parse {s!r} as a number", lineno) from None
        if not math.isfinite(v) or v <= 0:
            raise ZeroDataError(f"ordinate {s!r} must be positive and finite", lineno)
        if values and v <= values[-1]:
            raise ZeroDataError(f"ordinates not strictly increasing ({values[-1]} then {v})", lineno)
        if "." in s:
            precision = max(precision, len(s.split(".", 1)[1]))
        values.append(v)
    if not values:
        raise ZeroDataError(f"{path}: file contains no ordinates")
    g = np.array(values)
    if g[0] <= 14.0:
        raise ZeroDataError(f"first ordinate {g[0]} is below the first zeta zero 14.13...", 1)
    # Riemann-von Mangoldt sanity band: |k - theta(g_k)/pi - 1| <= 2 + log(g_k)/2
    k = np.arange(1, g.size + 1)
    drift = np.abs(k - zetaeval.theta_array(g) / np.pi - 1.0)
    bad = np.nonzero(drift > 2.0 + 0.5 * np.log(g))[0]
    if bad.size:
        i = int(bad[0])
        raise ZeroDataError(f"zero count at {g[i]} disagrees with N(t) by {drift[i]:.2f}; "
                            "missing or extra ordinates")
    g.setflags(write=False)
    return ZeroSet(g, str(path), precision)


def bundled_path(name: str = "1e4") -> Path:
    try:
        fname = BUNDLED[name]
    except KeyError:
        raise ValueError(f"unknown bundled zero set {name!r}; choose from {sorted(BUNDLED)}") from None
    return Path(str(resources.files("zetacorr") / "data" / fname))


_BUNDLED_CACHE: dict[str, ZeroSet] = {}


def bundled_zeros(name: str = "1e4") -> ZeroSet:
    """The first 10^4 ("1e4") or 10^5 ("1e5") ordinates shipped with the package."""
    if name not in _BUNDLED_CACHE:
        _BUNDLED_CACHE[name] = load_zeros(bundled_path(name))
    return _BUNDLED_CACHE[name]


def window(zs: ZeroSet, T: float) -> Window:
    """Index range of the ordinates in (T, 2T]."""
    T = float(T)
    if not T > 1.0:
        raise CoverageError(f"T = {T} must exceed 1")
    if 2.0 * T > zs.max_ordinate:
        raise CoverageError(f"zero data ends at {zs.max_ordinate}; largest usable T is {zs.max_ordinate / 2}",
                            zs.max_ordinate / 2)
    g = zs.ordinates
    lo = int(np.searchsorted(g, T, side="right"))
    hi = int(np.searchsorted(g, 2.0 * T, side="right"))
    return Window(T, lo, hi, math.log(T), g[lo:hi])


def largest_window(zs: ZeroSet, margin: float = 0.0) -> Window:
    """Window with the largest T leaving ``margin`` of data above 2T."""
    return window(zs, (zs.max_ordinate - margin) / 2.0)


def counting_arrays(zs: ZeroSet, t) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (N(t), S(t)); points on an ordinate are nudged up by 1e-9."""
    t = np.asarray(t, dtype=float)
    if np.any(t > zs.max_ordinate) or np.any(t < 0):
        raise CoverageError(f"t outside [0, {zs.max_ordinate}]")
    g = zs.ordinates
    n = np.searchsorted(g, t, side="right")
    idx = np.clip(n - 1, 0, g.size - 1)
    t = np.where((n > 0) & (g[idx] == t), t + 1e-9, t)
    n = np.searchsorted(g, t, side="right")
    th = zetaeval.theta_array(np.maximum(t, 1.0))
    return n, n - th / np.pi - 1.0


def zero_counting(zs: ZeroSet, t: float) -> tuple[int, float]:
    """N(t) = #{gamma <= t} and S(t) = N(t) - theta(t)/pi - 1."""
    n, s = counting_arrays(zs, np.array([t]))
    return int(n[0]), float(s[0])
