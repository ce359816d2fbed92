"""Short-interval mean-squares: symmetry, Selberg, modified and weighted integrals.

All sums run over integers ``N < x <= 2N``.  When ``f`` is integer-valued,
the weight is rational and the mean value does not depend on ``x``, every
integral is computed in exact integer arithmetic and returned together with
its :class:`~fractions.Fraction` value.  Otherwise the squared deviations are
accumulated with :func:`math.fsum` in ascending ``x``, so identical inputs give
bit-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith_tables import ArithTable, LogPolynomial, SieveSpec
from .errors import DomainError, RangeError
from .weights import TruncatedWeight, WeightSpec, mass


@dataclass(frozen=True)
class MeanMode:
    """How the mean value ``M_f(x, w_H)`` is formed.

    * ``zero``: ``M = 0``
    * ``analytic``: ``M = mass * p(log x)``
    * ``arithmetic``: ``M = mass * sum_{q<=Q} g(q)/q``
    * ``constant``: ``M = c`` (not scaled by the mass)
    """

    kind: str = "zero"
    poly: LogPolynomial | None = None
    sieve: SieveSpec | None = None
    c: object = None

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def analytic(cls, poly: LogPolynomial):
        return cls("analytic", poly=poly)

    @classmethod
    def arithmetic(cls, sieve: SieveSpec):
        return cls("arithmetic", sieve=sieve)

    @classmethod
    def constant(cls, c):
        return cls("constant", c=c)

    @property
    def label(self) -> str:
        if self.kind == "constant":
            return f"constant({self.c})"
        return self.kind

    def exact_value(self, wmass):
        """The mean as a Fraction when it is rational and independent of ``x``, else None."""
        if not isinstance(wmass, Fraction):
            return None
        if self.kind == "zero":
            return Fraction(0)
        if self.kind == "constant" and isinstance(self.c, (int, Fraction)):
            return Fraction(self.c)
        if self.kind == "arithmetic":
            h = self.sieve.harmonic_mass()
            if isinstance(h, Fraction):
                return wmass * h
        return None

    def values(self, xs: np.ndarray, wmass) -> np.ndarray:
        if self.kind == "zero":
            return np.zeros(len(xs))
        if self.kind == "constant":
            return np.full(len(xs), complex(self.c) if isinstance(self.c, complex) else float(self.c))
        m = complex(wmass) if isinstance(wmass, complex) else float(wmass)
        if self.kind == "arithmetic":
            return np.full(len(xs), m * float(self.sieve.harmonic_mass()))
        if self.kind == "analytic":
            return m * self.poly(xs.astype(np.float64))
        raise DomainError(f"unknown mean mode {self.kind!r}")


@dataclass(frozen=True)
class IntegralResult:
    value: float
    N: int
    H: int
    mean_mode: str
    f: str
    weight: str
    exact: Fraction | None = None
    sup_norm: float | None = None

    def as_dict(self) -> dict:
        return {"N": self.N, "H": self.H, "f": self.f, "weight": self.weight,
                "mean": self.mean_mode, "value": self.value}


def required_window(N: int, H: int) -> tuple[int, int]:
    """The window ``[N - H, 2N + H]`` every caller should tabulate."""
    return N - H, 2 * N + H


def _check_sizes(N: int, H: int):
    if H < 1:
        raise RangeError("H must be >= 1")
    if H >= N:
        raise RangeError(f"need H < N, got H={H}, N={N}")


def _sum_squares_exact(diff: np.ndarray) -> int:
    return int(np.dot(diff.astype(object), diff.astype(object)))


def _finish(f: ArithTable, N: int, H: int, wlabel: str, mode: MeanMode,
            num: np.ndarray, den: int, wmass) -> IntegralResult:
    """Square and sum ``num/den - M(x)`` over ``x = N+1..2N``."""
    sup = f.sup_norm(max(f.lo, N - H), min(f.hi, 2 * N + H))
    mexact = mode.exact_value(wmass) if num.dtype.kind == "i" else None
    if mexact is not None:
        # (num/den - a/b)^2 = (num*b - a*den)^2 / (den*b)^2
        a, b = mexact.numerator, mexact.denominator
        big = max(int(np.max(np.abs(num))) * b + abs(a) * den, 1)
        if big < 2 ** 62:
            diff = num * b - a * den
        else:
            diff = num.astype(object) * b - a * den
        total = Fraction(_sum_squares_exact(diff), (den * b) ** 2)
        return IntegralResult(float(total), N, H, mode.label, f.kind, wlabel, total, sup)
    xs = np.arange(N + 1, 2 * N + 1, dtype=np.int64)
    dev = num / den - mode.values(xs, wmass)
    value = math.fsum(np.abs(dev) ** 2)
    return IntegralResult(value, N, H, mode.label, f.kind, wlabel, None, sup)


def weighted_inner_sums(f: ArithTable, tw: TruncatedWeight, N: int):
    """``sum_n w_H(n - x) f(n)`` for ``x = N+1..2N`` as ``(numerators, denominator)``."""
    H = tw.H
    seg = f.segment(N + 1 - H, 2 * N + H)
    if tw.is_rational:
        wnum, den = tw.scaled
        if f.is_integer:
            return np.correlate(seg, wnum, "valid"), den
        return np.correlate(seg, wnum.astype(np.float64), "valid"), den
    # np.correlate conjugates its second argument
    return np.correlate(seg.astype(np.complex128), np.conj(tw.array), "valid"), 1


def weighted_selberg(f: ArithTable, tw: TruncatedWeight, N: int,
                     mode: MeanMode | None = None) -> IntegralResult:
    """``J_{w,f}(N,H) = sum_{x~N} |sum_n w_H(n-x) f(n) - M_f(x, w_H)|^2``."""
    mode = mode or MeanMode.zero()
    _check_sizes(N, tw.H)
    num, den = weighted_inner_sums(f, tw, N)
    return _finish(f, N, tw.H, tw.label, mode, num, den, mass(tw))


def _prefix(f: ArithTable, lo: int, hi: int) -> np.ndarray:
    """``P[k] = sum_{lo <= n < lo + k} f(n)``, so ``sum_{a<=n<=b} f(n) = P[b-lo+1] - P[a-lo]``."""
    seg = f.segment(lo, hi)
    out = np.zeros(len(seg) + 1, dtype=seg.dtype)
    np.cumsum(seg, out=out[1:])
    return out


def symmetry(f: ArithTable, H: int, N: int) -> IntegralResult:
    """``J_{sgn,f}(N,H)``, from prefix sums in ``O(N)``."""
    _check_sizes(N, H)
    lo = N + 1 - H
    P = _prefix(f, lo, 2 * N + H)
    x = np.arange(N + 1, 2 * N + 1, dtype=np.int64) - lo
    right = P[x + H + 1] - P[x + 1]     # x < n <= x+H
    left = P[x] - P[x - H]              # x-H <= n < x
    return _finish(f, N, H, "sgn", MeanMode.zero(), right - left, 1, Fraction(0))


def selberg(f: ArithTable, H: int, N: int, mode: MeanMode | None = None) -> IntegralResult:
    """``J_f(N,H) = sum_{x~N} |sum_{x<n<=x+H} f(n) - M_f(x,H)|^2``."""
    mode = mode or MeanMode.zero()
    _check_sizes(N, H)
    lo = N + 1
    P = _prefix(f, lo, 2 * N + H)
    x = np.arange(N + 1, 2 * N + 1, dtype=np.int64) - lo
    return _finish(f, N, H, "u", mode, P[x + H + 1] - P[x + 1], 1, Fraction(H))


def modified_selberg(f: ArithTable, H: int, N: int, mode: MeanMode | None = None) -> IntegralResult:
    """``sum_{x~N} |(1/H) sum_{h<=H} sum_{x-h<n<x+h} f(n) - M_f(x,H)|^2``.

    The double sum is accumulated over ``h`` from prefix sums, with the
    ``1/H`` kept as a denominator.
    """
    mode = mode or MeanMode.zero()
    _check_sizes(N, H)
    lo = N + 1 - H
    P = _prefix(f, lo, 2 * N + H)
    x = np.arange(N + 1, 2 * N + 1, dtype=np.int64) - lo
    acc = np.zeros(N, dtype=P.dtype)
    for h in range(1, H + 1):
        acc += P[x + h] - P[x - h + 1]   # x-h < n < x+h
    return _finish(f, N, H, "C", mode, acc, H, Fraction(H))


def cesaro_gap_identity(f: ArithTable, H: int, N: int, poly: LogPolynomial) -> tuple[float, float]:
    """Both sides of ``J~ - J = sum_x (w'-sum)(w''-sum - 2M)`` with ``w' = C-u``, ``w'' = C+u``."""
    mode = MeanMode.analytic(poly)
    lhs = modified_selberg(f, H, N, mode).value - selberg(f, H, N, mode).value
    minus, d1 = weighted_inner_sums(f, TruncatedWeight(WeightSpec("cesaroMinusStep"), H), N)
    plus, d2 = weighted_inner_sums(f, TruncatedWeight(WeightSpec("cesaroPlusStep"), H), N)
    xs = np.arange(N + 1, 2 * N + 1, dtype=np.int64)
    M = H * poly(xs.astype(np.float64))
    rhs = math.fsum((minus / d1) * (plus / d2 - 2 * M))
    return lhs, rhs


@dataclass(frozen=True)
class Theorem4Report:
    lhs: float
    term_scaled: float
    term_remainder: float
    term_cube: float
    ratio: float
    h: int
    H: int
    N: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def theorem4_report(f: ArithTable, p: LogPolynomial, h: int, H: int, N: int) -> Theorem4Report:
    """Compare ``J_f(N,H)`` with the three terms of the length-inertia bound."""
    if not 1 <= h < H:
        raise DomainError(f"need 1 <= h < H, got h={h}, H={H}")
    mode = MeanMode.analytic(p)
    lhs = selberg(f, H, N, mode).value
    scaled = (H / h) ** 2 * selberg(f, h, N, mode).value
    r = H - h * (H // h)
    rem = selberg(f, r, N, mode).value if r > 0 else 0.0
    sup = f.sup_norm(N - H, 2 * N + H)
    cube = float(H) ** 3 * (sup ** 2 + math.log(N) ** (2 * p.degree))
    return Theorem4Report(lhs, scaled, rem, cube, lhs / (scaled + rem + cube), h, H, N)
