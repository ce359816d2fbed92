"""Truncated weights, their discrete Fourier transforms and correlations.

Rational weights are carried as integer numerators over one common
denominator, so masses, correlations and the arithmetic-weight residuals
come out as exact fractions.  The modulated weight ``e(a*alpha) u_H(a)`` is
the only complex-valued family; its phases are read off a table of roots of
unity so that ``alpha = m/l`` is periodic exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import DomainError

RATIONAL_VARIANTS = ("unitStep", "sign", "cesaro", "cesaroMinusStep", "cesaroPlusStep")

_ALIASES = {
    "u": "unitStep", "unitstep": "unitStep", "step": "unitStep",
    "sgn": "sign", "sign": "sign",
    "c": "cesaro", "cesaro": "cesaro",
    "c-u": "cesaroMinusStep", "cesarominusstep": "cesaroMinusStep",
    "c+u": "cesaroPlusStep", "cesaroplusstep": "cesaroPlusStep",
}

_SHORT = {"unitStep": "u", "sign": "sgn", "cesaro": "C",
          "cesaroMinusStep": "C-u", "cesaroPlusStep": "C+u"}


@dataclass(frozen=True)
class WeightSpec:
    """A weight family before truncation.

    ``variant`` is one of :data:`RATIONAL_VARIANTS`, ``"modulated"`` (with
    ``alpha``) or ``"piecewiseConstant"`` (with ``pieces``, a tuple of
    ``((lo, hi), value)`` on disjoint integer intervals).
    """

    variant: str
    alpha: Fraction | None = None
    pieces: tuple = ()

    def __post_init__(self):
        if self.variant == "modulated":
            alpha = Fraction(self.alpha)
            if not 0 <= alpha < 1:
                raise DomainError(f"modulation alpha must lie in [0, 1), got {alpha}")
            object.__setattr__(self, "alpha", alpha)
        elif self.variant == "piecewiseConstant":
            pieces = tuple(sorted(((int(lo), int(hi)), Fraction(v)) for (lo, hi), v in self.pieces))
            for (lo, hi), _ in pieces:
                if lo > hi:
                    raise DomainError(f"empty interval [{lo}, {hi}]")
            for ((_, hi1), _), ((lo2, _), _) in zip(pieces, pieces[1:]):
                if lo2 <= hi1:
                    raise DomainError("piecewise intervals overlap")
            object.__setattr__(self, "pieces", pieces)
        elif self.variant not in RATIONAL_VARIANTS:
            raise DomainError(f"unknown weight variant {self.variant!r}")

    @classmethod
    def parse(cls, tag: str) -> "WeightSpec":
        """Parse ``u``, ``sgn``, ``C``, ``C-u``, ``C+u`` or ``mod(m/l)``."""
        t = tag.strip()
        m = re.fullmatch(r"(?:mod|modulated)\(\s*([0-9/ ]+)\s*\)", t, flags=re.IGNORECASE)
        if m:
            return cls("modulated", alpha=Fraction(m.group(1).replace(" ", "")))
        name = _ALIASES.get(t.lower(), t)
        return cls(name)

    @classmethod
    def from_values(cls, values: dict) -> "WeightSpec":
        """Piecewise-constant spec taking ``values[a]`` at each integer ``a``; runs are merged."""
        pieces = []
        for a in sorted(values):
            v = Fraction(values[a])
            if v == 0:
                continue
            if pieces and pieces[-1][1] == v and pieces[-1][0][1] == a - 1:
                pieces[-1] = ((pieces[-1][0][0], a), v)
            else:
                pieces.append(((a, a), v))
        return cls("piecewiseConstant", pieces=tuple(pieces))

    @property
    def is_rational(self) -> bool:
        return self.variant != "modulated"

    @property
    def label(self) -> str:
        if self.variant == "modulated":
            return f"mod({self.alpha})"
        if self.variant == "piecewiseConstant":
            return f"piecewise[{len(self.pieces)}]"
        return _SHORT[self.variant]


@dataclass(frozen=True)
class TruncatedWeight:
    """``w_H = w * 1_[-H, H]``, stored on the offsets ``a = -H, ..., H``."""

    spec: WeightSpec
    H: int

    def __post_init__(self):
        if isinstance(self.spec, str):
            object.__setattr__(self, "spec", WeightSpec.parse(self.spec))
        if self.H < 1:
            raise DomainError("H must be >= 1")

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.H, self.H + 1, dtype=np.int64)

    @property
    def is_rational(self) -> bool:
        return self.spec.is_rational

    @property
    def label(self) -> str:
        return self.spec.label

    @cached_property
    def scaled(self) -> tuple[np.ndarray, int]:
        """Integer numerators on ``[-H, H]`` and their common denominator."""
        if not self.is_rational:
            raise DomainError("modulated weights have no rational representation")
        H = self.H
        a = self.offsets
        step = (a > 0).astype(np.int64)
        v = self.spec.variant
        if v == "unitStep":
            return step, 1
        if v == "sign":
            return np.sign(a).astype(np.int64), 1
        ces = H - np.abs(a)
        if v == "cesaro":
            return ces, H
        if v == "cesaroMinusStep":
            return ces - H * step, H
        if v == "cesaroPlusStep":
            return ces + H * step, H
        den = math.lcm(1, *(val.denominator for _, val in self.spec.pieces))
        out = np.zeros(2 * H + 1, dtype=np.int64)
        for (lo, hi), val in self.spec.pieces:
            lo, hi = max(lo, -H), min(hi, H)
            if lo <= hi:
                out[lo + H:hi + H + 1] = int(val * den)
        return out, den

    @cached_property
    def array(self) -> np.ndarray:
        """Values as ``float64`` (rational specs) or ``complex128`` (modulated)."""
        if self.is_rational:
            num, den = self.scaled
            out = num / den
        else:
            alpha = self.spec.alpha
            m, ell = alpha.numerator, alpha.denominator
            roots = np.exp(2j * np.pi * np.arange(ell) / ell)
            a = self.offsets
            out = np.where(a > 0, roots[(a * m) % ell], 0.0 + 0.0j)
        out.setflags(write=False)
        return out

    def value(self, a: int):
        """Exact ``w_H(a)``: a :class:`Fraction`, or a complex number for modulated specs."""
        if abs(a) > self.H:
            return Fraction(0) if self.is_rational else 0j
        if self.is_rational:
            num, den = self.scaled
            return Fraction(int(num[a + self.H]), den)
        return complex(self.array[a + self.H])


def value(tw: TruncatedWeight, a: int):
    return tw.value(a)


def mass(tw: TruncatedWeight):
    """``sum_a w_H(a)``, the DFT at zero."""
    if tw.is_rational:
        num, den = tw.scaled
        return Fraction(int(num.sum()), den)
    return complex(math.fsum(tw.array.real), math.fsum(tw.array.imag))


def _csum(terms: np.ndarray) -> complex:
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def dft(tw: TruncatedWeight, alpha: float) -> complex:
    """``sum_a w_H(a) e(a alpha)`` in double precision."""
    a = tw.offsets
    phase = np.mod(a * float(alpha), 1.0)
    return _csum(tw.array * np.exp(2j * np.pi * phase))


def dft_rational(tw: TruncatedWeight, j: int, q: int) -> complex:
    """DFT at ``j/q`` with phases taken from the table of ``q``-th roots of unity."""
    if q < 1:
        raise DomainError("q must be >= 1")
    if not 0 <= j < q:
        raise DomainError("need 0 <= j < q")
    if j == 0:
        m = mass(tw)
        return complex(m)
    roots = np.exp(2j * np.pi * np.arange(q) / q)
    return _csum(tw.array * roots[(tw.offsets * j) % q])


def fold(tw: TruncatedWeight, q: int):
    """Residue-class sums ``W_r = sum_{a = r (mod q)} w_H(a)`` for ``r = 0..q-1``.

    Rational specs return ``(int64 numerators, denominator)``; modulated specs
    return ``(complex array, 1)``.
    """
    if q < 1:
        raise DomainError("q must be >= 1")
    if tw.is_rational:
        num, den = tw.scaled
        out = np.zeros(q, dtype=np.int64)
    else:
        num, den = tw.array, 1
        out = np.zeros(q, dtype=np.complex128)
    np.add.at(out, tw.offsets % q, num)
    return out, den


def dft_all(tw: TruncatedWeight, q: int) -> np.ndarray:
    """``[dft(tw, j/q) for j in range(q)]`` via residue folding and one FFT."""
    W, den = fold(tw, q)
    # sum_r W_r e(r j / q) is q times the inverse DFT of W
    return np.fft.ifft(W / den) * q


def l2_statistic(tw: TruncatedWeight, q: int) -> float:
    """``(1/q^2) sum_{0<j<q} |dft(j/q)|^2``."""
    if q < 1:
        raise DomainError("q must be >= 1")
    if q == 1:
        return 0.0
    vals = dft_all(tw, q)[1:]
    return math.fsum(np.abs(vals) ** 2) / (q * q)


def b_statistic(tw: TruncatedWeight, q: int) -> float:
    """DFT power quotient ``(1/(qH)) sum_{0<j<q} |dft(j/q)|^2``."""
    return l2_statistic(tw, q) * q / tw.H


@dataclass(frozen=True)
class CorrelationTable:
    """``C_{w_H}(a)`` for ``a = -2H, ..., 2H``.

    For rational weights ``values`` holds integer numerators over
    ``denominator``; for modulated weights complex values with denominator 1.
    """

    H: int
    values: np.ndarray = field(repr=False)
    denominator: int = 1

    @property
    def is_exact(self) -> bool:
        return self.values.dtype.kind == "i"

    @property
    def shifts(self) -> np.ndarray:
        return np.arange(-2 * self.H, 2 * self.H + 1, dtype=np.int64)

    def entry(self, a: int):
        if abs(a) > 2 * self.H:
            return Fraction(0) if self.is_exact else 0j
        v = self.values[a + 2 * self.H]
        if self.is_exact:
            return Fraction(int(v), self.denominator)
        return complex(v)

    def as_float(self) -> np.ndarray:
        return self.values / self.denominator

    def total(self):
        if self.is_exact:
            return Fraction(int(self.values.sum()), self.denominator)
        return _csum(self.values)

    def residue_sum(self, ell: int):
        """``sum_{a = 0 (mod ell)} C(a)``."""
        start = (2 * self.H) % ell
        sel = self.values[start::ell]
        if self.is_exact:
            return Fraction(int(sel.sum()), self.denominator)
        return _csum(sel)


def correlation_table(tw: TruncatedWeight) -> CorrelationTable:
    """Full correlation ``C(a) = sum_m w_H(m) conj(w_H(m - a))``."""
    if tw.is_rational:
        num, den = tw.scaled
        return CorrelationTable(tw.H, np.convolve(num, num[::-1]), den * den)
    w = tw.array
    return CorrelationTable(tw.H, np.convolve(w, np.conj(w[::-1])), 1)


def correlation(tw: TruncatedWeight, a: int):
    """Single correlation value; exact for rational specs."""
    H = tw.H
    if abs(a) > 2 * H:
        return Fraction(0) if tw.is_rational else 0j
    lo, hi = max(-H, a - H), min(H, a + H)
    if tw.is_rational:
        num, den = tw.scaled
        s = int(np.dot(num[lo + H:hi + H + 1], num[lo - a + H:hi - a + H + 1]))
        return Fraction(s, den * den)
    w = tw.array
    return _csum(w[lo + H:hi + H + 1] * np.conj(w[lo - a + H:hi - a + H + 1]))


def arithmetic_residual(tw: TruncatedWeight, ell: int, table: CorrelationTable | None = None):
    """``sum_{a = 0 (ell)} C(a) - (1/ell) sum_a C(a)``; the reported statistic is ``|.|/H``."""
    if ell < 1:
        raise DomainError("ell must be >= 1")
    table = table or correlation_table(tw)
    return table.residue_sum(ell) - table.total() / ell


def normalized_correlation_weight(tw: TruncatedWeight) -> TruncatedWeight:
    """The piecewise-constant weight ``C_{w_H}/H``, truncated at ``2H``."""
    if not tw.is_rational:
        raise DomainError("needs a rational weight")
    table = correlation_table(tw)
    vals = {int(a): Fraction(int(v), table.denominator * tw.H)
            for a, v in zip(table.shifts, table.values) if v}
    return TruncatedWeight(WeightSpec.from_values(vals), 2 * tw.H)
