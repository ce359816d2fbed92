"""Sporadic sums and functions of a truncated weight.

The sporadic sum counts, with weight, the multiples of ``q`` near ``x``:
``W_H(x; q) = sum_{a = -x (mod q)} w_H(a)``, and the sporadic function
subtracts its local mean ``mass/q``.  Scalar entry points are exact for
rational weights; the ``*_values`` variants evaluate many ``x`` at once in
floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import DomainError
from .weights import TruncatedWeight, dft_rational, fold, mass


def _check_q(q: int):
    if q < 1:
        raise DomainError("q must be >= 1")


def sporadic_sum(tw: TruncatedWeight, x: int, q: int):
    """``sum_{|a| <= H, a = -x (mod q)} w_H(a)``."""
    _check_q(q)
    H = tw.H
    start = (-x + H) % q  # array index of the first a >= -H with a = -x (mod q)
    if tw.is_rational:
        num, den = tw.scaled
        return Fraction(int(num[start::q].sum()), den)
    sel = tw.array[start::q]
    return complex(math.fsum(sel.real), math.fsum(sel.imag))


def sporadic_value(tw: TruncatedWeight, x: int, q: int):
    """``chi_q(x, w_H) = W_H(x; q) - mass/q``."""
    return sporadic_sum(tw, x, q) - mass(tw) / q


def sporadic_values(tw: TruncatedWeight, xs, q: int) -> np.ndarray:
    """Vectorised :func:`sporadic_value` over an array of ``x``."""
    _check_q(q)
    W, den = fold(tw, q)
    xs = np.asarray(xs, dtype=np.int64)
    m = mass(tw)
    local_mean = complex(m) / q if not tw.is_rational else float(m) / q
    return W[(-xs) % q] / den - local_mean


def _divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def expansion_terms(tw: TruncatedWeight, q: int):
    """Reduced fractions ``j/d`` (``d | q``, ``d > 1``) with their DFT values.

    Returned as ``(j, d, dft)`` arrays; the expansion at ``x`` is
    ``(1/q) sum dft * e_d(j x)``.
    """
    _check_q(q)
    js, ds, vals = [], [], []
    for d in _divisors(q):
        if d == 1:
            continue
        for j in range(1, d):
            if math.gcd(j, d) == 1:
                js.append(j)
                ds.append(d)
                vals.append(dft_rational(tw, j, d))
    return (np.array(js, dtype=np.int64), np.array(ds, dtype=np.int64),
            np.array(vals, dtype=np.complex128))


def sporadic_expansion_values(tw: TruncatedWeight, xs, q: int, terms=None) -> np.ndarray:
    """Fourier-Ramanujan side, ``(1/q) sum_{d|q, d>1} sum*_j dft(j/d) e_d(j x)``, for many ``x``."""
    js, ds, vals = terms if terms is not None else expansion_terms(tw, q)
    xs = np.asarray(xs, dtype=np.int64)
    if len(js) == 0:
        return np.zeros(len(xs), dtype=np.complex128)
    # phases via integer residues so that e_d(j x) is exact in x
    res = (np.outer(xs, js) % ds) / ds
    return (np.exp(2j * np.pi * res) @ vals) / q


def sporadic_expansion(tw: TruncatedWeight, x: int, q: int) -> complex:
    return complex(sporadic_expansion_values(tw, [x], q)[0])


def dispersion(g: Mapping[int, float], tw: TruncatedWeight, N: int) -> float:
    """``sum_{N < x <= 2N} |sum_q g(q) chi_q(x, w_H)|^2``."""
    items = [(int(q), v) for q, v in dict(g).items() if v != 0]
    if not items:
        return 0.0
    if min(q for q, _ in items) < 1:
        raise DomainError("support of g must lie in the positive integers")
    if max(q for q, _ in items) > N:
        raise DomainError("support of g exceeds N")
    xs = np.arange(N + 1, 2 * N + 1, dtype=np.int64)
    acc = np.zeros(N, dtype=np.float64 if tw.is_rational else np.complex128)
    for q, v in sorted(items):
        acc += float(v) * sporadic_values(tw, xs, q)
    return math.fsum(np.abs(acc) ** 2)


def dyadic_ones(Q: int) -> dict[int, int]:
    """``g = 1`` on ``(Q, 2Q]``."""
    return {q: 1 for q in range(Q + 1, 2 * Q + 1)}
