"""Exact tables of arithmetic functions on integer windows.

Every table covers a closed window ``[lo, hi]``.  Integer-valued functions are
stored as ``int64`` so identities can be checked exactly; the von Mangoldt
function is the only float-valued built-in kind.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .constants import EULER_GAMMA, GAMMA1
from .errors import DomainError, RangeError, UnsupportedParameterError

MAX_HI = 2 ** 40
MAX_DIVISOR_K = 6

_ALIASES = {
    "one": "one", "1": "one",
    "d": "d2", "divisor": "d2",
    "lambda": "vonMangoldt", "vonmangoldt": "vonMangoldt", "von_mangoldt": "vonMangoldt",
    "omega": "omega",
    "prime": "primeIndicator", "primeindicator": "primeIndicator", "1p": "primeIndicator",
    "mu": "moebius", "moebius": "moebius", "mobius": "moebius",
}


def normalize_kind(kind: str) -> tuple[str, int | None]:
    """Map a tag such as ``"d3"``, ``"divisor(3)"`` or ``"mu"`` to ``(name, k)``."""
    tag = kind.strip()
    m = re.fullmatch(r"(?:d|divisor\()\s*(-?\d+)\s*\)?", tag, flags=re.IGNORECASE)
    if m:
        k = int(m.group(1))
        if not 1 <= k <= MAX_DIVISOR_K:
            raise UnsupportedParameterError(f"divisor(k) needs 1 <= k <= {MAX_DIVISOR_K}, got {k}")
        return "divisor", k
    name = _ALIASES.get(tag.lower())
    if name is None:
        raise UnsupportedParameterError(f"unknown function tag {kind!r}")
    if name == "d2":
        return "divisor", 2
    return name, None


@dataclass(frozen=True)
class ArithTable:
    """Values of an arithmetic function at ``n = lo, ..., hi``."""

    kind: str
    lo: int
    hi: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.lo <= self.hi:
            raise RangeError(f"invalid window [{self.lo}, {self.hi}]")
        if len(self.values) != self.hi - self.lo + 1:
            raise RangeError("values do not match the window length")
        self.values.setflags(write=False)

    @classmethod
    def from_values(cls, values: Sequence, lo: int = 1, kind: str = "custom") -> "ArithTable":
        arr = np.asarray(values)
        if arr.dtype.kind in "iub":
            arr = arr.astype(np.int64)
        else:
            arr = arr.astype(np.float64)
        return cls(kind, lo, lo + len(arr) - 1, arr)

    @property
    def is_integer(self) -> bool:
        return self.values.dtype.kind == "i"

    def __getitem__(self, n: int):
        if not self.lo <= n <= self.hi:
            raise RangeError(f"n={n} outside [{self.lo}, {self.hi}]")
        v = self.values[n - self.lo]
        return int(v) if self.is_integer else float(v)

    def covers(self, a: int, b: int) -> bool:
        return self.lo <= a and b <= self.hi

    def segment(self, a: int, b: int) -> np.ndarray:
        """Read-only view of the values on ``[a, b]``."""
        if not self.covers(a, b):
            raise RangeError(f"table [{self.lo}, {self.hi}] does not cover [{a}, {b}]")
        return self.values[a - self.lo:b - self.lo + 1]

    def sup_norm(self, a: int, b: int) -> float:
        seg = self.segment(a, b)
        return float(np.max(np.abs(seg))) if len(seg) else 0.0


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _check_window(lo: int, hi: int):
    if not (isinstance(lo, (int, np.integer)) and isinstance(hi, (int, np.integer))):
        raise RangeError("window bounds must be integers")
    if not 1 <= lo <= hi:
        raise RangeError(f"invalid window [{lo}, {hi}]")
    if hi >= MAX_HI:
        raise RangeError(f"hi={hi} exceeds the 2^40 bound")


def _factor_passes(lo: int, hi: int):
    """Yield ``(idx, p, e)`` for every prime power exactly dividing ``n`` in the window.

    ``idx`` indexes the window, ``p`` is a scalar or an array of primes and ``e``
    the matching exponents.  Primes above sqrt(hi) are reported last, in one batch.
    """
    n = np.arange(lo, hi + 1, dtype=np.int64)
    rem = n.copy()
    size = hi - lo + 1
    for p in primes_up_to(math.isqrt(hi)).tolist():
        first = (-lo) % p
        if first >= size:
            continue
        idx = np.arange(first, size, p)
        e = np.ones(len(idx), dtype=np.int64)
        pk = p * p
        while pk <= hi:
            e += (n[idx] % pk == 0)
            pk *= p
        rem[idx] //= np.power(np.int64(p), e)
        yield idx, p, e
    big = np.flatnonzero(rem > 1)
    yield big, rem[big], np.ones(len(big), dtype=np.int64)


def _divisor_table(k: int, lo: int, hi: int) -> np.ndarray:
    lut = np.array([math.comb(e + k - 1, k - 1) for e in range(64)], dtype=np.int64)
    out = np.ones(hi - lo + 1, dtype=np.int64)
    for idx, _, e in _factor_passes(lo, hi):
        out[idx] *= lut[e]
    return out


def build_table(kind: str, lo: int, hi: int) -> ArithTable:
    """Tabulate a built-in arithmetic function on ``[lo, hi]``.

    Supported tags: ``one``, ``d1``..``d6`` (or ``divisor(k)``), ``vonMangoldt``,
    ``omega``, ``primeIndicator`` and ``moebius``.  Values come from a
    segmented factorisation sieve, so ``lo`` need not be 1.
    """
    name, k = normalize_kind(kind)
    _check_window(lo, hi)
    size = hi - lo + 1
    if name == "one":
        values = np.ones(size, dtype=np.int64)
        label = "one"
    elif name == "divisor":
        values = _divisor_table(k, lo, hi)
        label = f"d{k}"
    elif name == "omega":
        values = np.zeros(size, dtype=np.int64)
        for idx, _, _ in _factor_passes(lo, hi):
            values[idx] += 1
        label = "omega"
    elif name == "moebius":
        values = np.ones(size, dtype=np.int64)
        for idx, _, e in _factor_passes(lo, hi):
            values[idx] *= np.where(e == 1, -1, 0)
        label = "moebius"
    elif name == "primeIndicator":
        bigomega = np.zeros(size, dtype=np.int64)
        for idx, _, e in _factor_passes(lo, hi):
            bigomega[idx] += e
        values = (bigomega == 1).astype(np.int64)
        label = "primeIndicator"
    else:  # vonMangoldt
        omega = np.zeros(size, dtype=np.int64)
        base = np.ones(size, dtype=np.int64)
        for idx, p, _ in _factor_passes(lo, hi):
            omega[idx] += 1
            base[idx] = p
        values = np.where(omega == 1, np.log(base.astype(np.float64)), 0.0)
        label = "vonMangoldt"
    return ArithTable(label, lo, hi, values)


def _is_integral(v) -> bool:
    if isinstance(v, (bool, np.bool_)):
        return True
    if isinstance(v, (int, np.integer)):
        return True
    if isinstance(v, Fraction):
        return v.denominator == 1
    return False


@dataclass(frozen=True)
class SieveSpec:
    """Truncated Eratosthenes transform ``g`` with support in ``[1, Q]``."""

    g: Mapping[int, object]
    Q: int

    def __post_init__(self):
        if self.Q < 1:
            raise DomainError("Q must be >= 1")
        clean = {}
        for q, v in dict(self.g).items():
            q = int(q)
            if not 1 <= q <= self.Q:
                raise DomainError(f"support of g contains {q}, outside [1, {self.Q}]")
            if v != 0:
                clean[q] = v
        object.__setattr__(self, "g", dict(sorted(clean.items())))

    @property
    def is_integer(self) -> bool:
        return all(_is_integral(v) for v in self.g.values())

    def value(self, q: int):
        return self.g.get(q, 0)

    def harmonic_mass(self):
        """``sum_{q<=Q} g(q)/q``; exact when ``g`` is rational."""
        if all(isinstance(v, (int, np.integer, Fraction)) for v in self.g.values()):
            return sum((Fraction(v) / q for q, v in self.g.items()), Fraction(0))
        return math.fsum(float(v) / q for q, v in self.g.items())

    def table(self, lo: int, hi: int) -> ArithTable:
        return sieve_function_table(self.g, self.Q, lo, hi)


def sieve_function_table(g: Mapping[int, object], Q: int, lo: int, hi: int) -> ArithTable:
    """Tabulate ``f(n) = sum_{q | n, q <= Q} g(q)`` on ``[lo, hi]``.

    One strided pass per ``q`` in the support.  Integer ``g`` gives an exact
    ``int64`` table.
    """
    _check_window(lo, hi)
    items = []
    for q, v in dict(g).items():
        q = int(q)
        if not 1 <= q <= Q:
            raise DomainError(f"support of g contains {q}, outside [1, {Q}]")
        items.append((q, v))
    integral = all(_is_integral(v) for _, v in items)
    out = np.zeros(hi - lo + 1, dtype=np.int64 if integral else np.float64)
    for q, v in sorted(items):
        first = (-lo) % q
        if first <= hi - lo:
            out[first::q] += int(v) if integral else float(v)
    return ArithTable(f"sieve(Q={Q})", lo, hi, out)


def eratosthenes_transform(f) -> np.ndarray:
    """Return ``g`` with ``f = g * 1`` (Dirichlet convolution) on ``[1, M]``.

    ``f`` is a sequence indexed from ``n = 1`` or an :class:`ArithTable` with
    ``lo == 1``.  Computed as ``g = f * mu``.
    """
    if isinstance(f, ArithTable):
        if f.lo != 1:
            raise RangeError("the Eratosthenes transform needs a table starting at n = 1")
        vals = np.asarray(f.values)
    else:
        vals = np.asarray(f)
    M = len(vals)
    if M < 1:
        raise RangeError("empty input")
    vals = vals.astype(np.int64) if vals.dtype.kind in "iub" else vals.astype(np.float64)
    mu = build_table("moebius", 1, M).values
    g = np.zeros(M, dtype=vals.dtype)
    for d in np.flatnonzero(mu).tolist():
        d1 = d + 1
        g[d1 - 1::d1] += mu[d] * vals[:M // d1]
    return g


@dataclass(frozen=True)
class LogPolynomial:
    """``p(L) = sum_j coeffs[j] * L^j`` evaluated at ``L = log x``."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs) or (0.0,)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def at_log(self, L):
        acc = 0.0 * L
        for c in reversed(self.coeffs):
            acc = acc * L + c
        return acc

    def __call__(self, x):
        return self.at_log(np.log(x) if isinstance(x, np.ndarray) else math.log(x))


def log_polynomial(kind) -> LogPolynomial:
    """Logarithmic polynomial of ``vonMangoldt``, ``d2``, ``d3`` or a :class:`SieveSpec`."""
    if isinstance(kind, SieveSpec):
        return LogPolynomial((float(kind.harmonic_mass()),))
    name, k = normalize_kind(kind)
    if name == "vonMangoldt":
        return LogPolynomial((1.0,))
    if name == "divisor" and k == 2:
        return LogPolynomial((2 * EULER_GAMMA, 1.0))
    if name == "divisor" and k == 3:
        g = EULER_GAMMA
        return LogPolynomial((3 * g * g + 3 * GAMMA1, 3 * g, 0.5))
    raise UnsupportedParameterError(f"no logarithmic polynomial for {kind!r}")
