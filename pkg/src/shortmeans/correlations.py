"""Autocorrelations of sieve functions and the exact shifted-convolution identity.

For ``f = g * 1`` with ``supp g`` in ``[1, Q]`` the autocorrelation
``C_f(a) = sum_{N < n <= 2N} f(n) f(n - a)`` splits exactly into a main
term, built from the counts ``[2N/(l d)] - [N/(l d)]``, and a remainder made
of exponential sums over the nonzero residues modulo ``q``.  The shift enters
as ``f(n - a)`` so that the phase ``e_q(-j a/l)`` of the remainder matches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith_tables import ArithTable, SieveSpec, sieve_function_table
from .errors import DomainError, RangeError
from .integrals import MeanMode, weighted_selberg
from .weights import CorrelationTable, TruncatedWeight, correlation_table, mass


def autocorrelation(f: ArithTable, N: int, a: int):
    """``sum_{N < n <= 2N} f(n) f(n - a)``; exact for integer tables.

    The table must cover ``[N + 1 - max(a, 0), 2N + max(-a, 0)]``.
    """
    lo, hi = N + 1, 2 * N
    if not f.covers(min(lo, lo - a), max(hi, hi - a)):
        raise RangeError(f"table [{f.lo}, {f.hi}] too small for N={N}, a={a}")
    x = f.segment(lo, hi)
    y = f.segment(lo - a, hi - a)
    if f.is_integer:
        return int(np.dot(x.astype(object), y.astype(object)))
    return math.fsum(x * y)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def _nonzero_a(a: int):
    if a == 0:
        raise DomainError("a must be nonzero")


def _g_array(s: SieveSpec) -> np.ndarray:
    """``g`` as a dense float array indexed ``0..Q`` (index 0 unused)."""
    out = np.zeros(s.Q + 1)
    for q, v in s.g.items():
        out[q] = float(v)
    return out


def lemma4_main(s: SieveSpec, N: int, a: int) -> Fraction:
    """Main term ``sum_{l|a} sum_{(d,q)=1} g(ld) g(lq)/q ([2N/(ld)] - [N/(ld)])``, exact."""
    _nonzero_a(a)
    total = Fraction(0)
    for ell in _divisors(a):
        ds = [(d, s.g[ell * d]) for d in range(1, s.Q // ell + 1) if ell * d in s.g]
        qs = [(q, s.g[ell * q]) for q in range(1, s.Q // ell + 1) if ell * q in s.g]
        for d, gd in ds:
            count = 2 * N // (ell * d) - N // (ell * d)
            if count == 0:
                continue
            inner = sum((Fraction(gq) / q for q, gq in qs if math.gcd(d, q) == 1), Fraction(0))
            total += Fraction(gd) * count * inner
    return total


def geometric_sums(j: np.ndarray, q: int, step, lo, hi) -> np.ndarray:
    """``sum_{lo < m <= hi} e(j * step * m / q)`` in closed form, elementwise.

    ``step``, ``lo`` and ``hi`` broadcast against ``j``.  Terms whose ratio is
    1 (``q | j * step``) return the count ``hi - lo``.
    """
    j, step, lo, hi = np.broadcast_arrays(np.asarray(j, dtype=np.int64), np.asarray(step, dtype=np.int64),
                                          np.asarray(lo, dtype=np.int64), np.asarray(hi, dtype=np.int64))
    r = (j * step) % q
    count = (hi - lo).astype(np.float64)
    out = count.astype(np.complex128)
    mask = r != 0
    if np.any(mask):
        th = 2 * np.pi * r[mask] / q
        first = ((r[mask] * (lo[mask] + 1)) % q) * (2 * np.pi / q)
        n = count[mask]
        out[mask] = np.exp(1j * first) * (1 - np.exp(1j * th * n)) / (1 - np.exp(1j * th))
    return out


@dataclass
class RemainderTerms:
    """Shift-free parts of the remainder, ``A_{l,q}(j) = g(lq)/q * sum_d g(ld) S_{l,d,q}(j)``.

    ``S`` is the exponential sum over ``m`` in ``(N/(ld), 2N/(ld)]``.  With these
    cached, ``R_f(a) = sum_{l|a} sum_q sum_j A_{l,q}(j) e_q(-j a/l)``.
    """

    s: SieveSpec
    N: int

    def __post_init__(self):
        self._g = _g_array(self.s)
        self._cache: dict[int, list] = {}

    def terms(self, ell: int) -> list[tuple[int, np.ndarray, np.ndarray]]:
        """``[(q, j, A_{l,q}(j))]`` over the ``q >= 2`` with ``g(lq) != 0``."""
        if ell in self._cache:
            return self._cache[ell]
        g, N = self._g, self.N
        top = self.s.Q // ell
        out = []
        if top >= 2:
            dvals = np.arange(1, top + 1, dtype=np.int64)
            gd = g[ell * dvals]
            live = gd != 0
            dvals, gd = dvals[live], gd[live]
            lo, hi = N // (ell * dvals), 2 * N // (ell * dvals)
            for q in range(2, top + 1):
                gq = g[ell * q]
                if gq == 0:
                    continue
                cop = np.gcd(dvals, q) == 1
                if not np.any(cop):
                    continue
                j = np.arange(1, q, dtype=np.int64)
                S = geometric_sums(j[None, :], q, dvals[cop][:, None], lo[cop][:, None], hi[cop][:, None])
                A = (gq / q) * (gd[cop] @ S)
                out.append((q, j, A))
        self._cache[ell] = out
        return out

    def remainder(self, a: int) -> complex:
        _nonzero_a(a)
        acc = 0j
        for ell in _divisors(a):
            b = a // ell
            for q, j, A in self.terms(ell):
                ph = ((-j * b) % q) * (2 * np.pi / q)
                acc += complex(A @ np.exp(1j * ph))
        return acc


def lemma4_remainder(s: SieveSpec, N: int, a: int) -> complex:
    """``R_f(a)``; its imaginary part vanishes up to rounding for real ``g``."""
    return RemainderTerms(s, N).remainder(a)


def _check_even(tw: TruncatedWeight):
    if not tw.is_rational:
        raise DomainError("the weighted remainder sum needs an even correlation kernel; "
                          "modulated weights are not supported")


@dataclass(frozen=True)
class WeightedRemainder:
    path_a: float
    path_b: float

    @property
    def difference(self) -> float:
        return abs(self.path_a - self.path_b)


def _kernel(table: CorrelationTable) -> np.ndarray:
    return table.as_float()


def weighted_remainder_path_a(s: SieveSpec, tw: TruncatedWeight, N: int,
                              terms: RemainderTerms | None = None) -> float:
    """``sum_{0 < |a| <= 2H} K(a) R_f(a)`` with ``K = C_{w_H}``, term by term."""
    _check_even(tw)
    terms = terms or RemainderTerms(s, N)
    K = _kernel(correlation_table(tw))
    H2 = 2 * tw.H
    parts = [K[a + H2] * terms.remainder(a).real for a in range(-H2, H2 + 1) if a != 0]
    return math.fsum(parts)


def _cos_sum(theta: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """``sum_{lo < m <= hi} cos(m theta)`` by the Dirichlet-kernel formula."""
    n = (hi - lo).astype(np.float64)
    mid = (lo + 1 + hi) / 2.0
    half = theta / 2.0
    den = np.sin(half)
    safe = np.abs(den) > 1e-12
    out = np.where(safe, np.sin(n * half) * np.cos(mid * theta) / np.where(safe, den, 1.0),
                   n * np.cos(mid * theta))
    return out


def weighted_remainder_path_b(s: SieveSpec, tw: TruncatedWeight, N: int) -> float:
    """The rearranged form: cosine sums over ``m`` against ``T_l(j) = sum_{b != 0} K(lb) e_q(jb)``."""
    _check_even(tw)
    K = _kernel(correlation_table(tw))
    H2 = 2 * tw.H
    g = _g_array(s)
    parts = []
    for ell in range(1, min(H2, s.Q) + 1):
        top = s.Q // ell
        if top < 2:
            continue
        bmax = H2 // ell
        b = np.arange(1, bmax + 1, dtype=np.int64)
        Kb = K[ell * b + H2]
        dvals = np.arange(1, top + 1, dtype=np.int64)
        gd = g[ell * dvals]
        live = gd != 0
        dvals, gd = dvals[live], gd[live]
        lo, hi = N // (ell * dvals), 2 * N // (ell * dvals)
        for q in range(2, top + 1):
            gq = g[ell * q]
            if gq == 0:
                continue
            cop = np.gcd(dvals, q) == 1
            if not np.any(cop):
                continue
            j = np.arange(1, q, dtype=np.int64)
            # K even, so the sum over b != 0 folds into twice a cosine sum
            T = 2.0 * (np.cos(2 * np.pi * ((np.outer(j, b) % q) / q)) @ Kb)
            theta = 2 * np.pi * ((j[None, :] * dvals[cop][:, None]) % q) / q
            C = _cos_sum(theta, lo[cop][:, None], hi[cop][:, None])
            parts.append((gq / q) * float(gd[cop] @ (C @ T)))
    return math.fsum(parts)


def weighted_remainder_sum(s: SieveSpec, tw: TruncatedWeight, N: int) -> WeightedRemainder:
    """Both evaluations of ``sum_{a != 0} C_{w_H}(a) R_f(a)``."""
    return WeightedRemainder(weighted_remainder_path_a(s, tw, N), weighted_remainder_path_b(s, tw, N))


def remainder_statistic(value: float, N: int, H: int, Q: int) -> float:
    return abs(value) / (N * H + Q * Q * H + Q * H * H)


@dataclass(frozen=True)
class Decomposition:
    residual: float
    integral: float
    correlation_sum: float
    mean_term: float
    statistic: float


def decomposition_residual(s: SieveSpec, tw: TruncatedWeight, N: int) -> Decomposition:
    """``J_{w,f} - sum_{|a|<=2H} C_w(a) C_f(a) + N mass^2 (sum g(q)/q)^2`` in the arithmetic mode.

    The three pieces come from separate code paths: the weighted integral,
    direct autocorrelations of ``f`` and the weight's correlation table.  The
    statistic divides by ``H^3 + Q H^2``.
    """
    H = tw.H
    if s.Q > N:
        raise DomainError("need Q <= N")
    if N - 2 * H < 1:
        raise RangeError("need N > 2H so that all shifts stay in the positive integers")
    if not tw.is_rational:
        raise DomainError("needs a real rational weight")
    f = sieve_function_table(s.g, s.Q, N + 1 - 2 * H, 2 * N + 2 * H)
    J = weighted_selberg(f, tw, N, MeanMode.arithmetic(s))
    table = correlation_table(tw)
    exact = J.exact is not None
    hm = s.harmonic_mass()
    if exact:
        corr = sum((table.entry(a) * autocorrelation(f, N, a) for a in range(-2 * H, 2 * H + 1)),
                   Fraction(0))
        meanterm = N * mass(tw) ** 2 * Fraction(hm) ** 2
        res = J.exact - corr + meanterm
        corr_f, mean_f, res_f = float(corr), float(meanterm), float(res)
    else:
        K = table.as_float()
        corr_f = math.fsum(K[a + 2 * H] * autocorrelation(f, N, a) for a in range(-2 * H, 2 * H + 1))
        mean_f = N * float(mass(tw)) ** 2 * float(hm) ** 2
        res_f = J.value - corr_f + mean_f
    return Decomposition(res_f, J.value, corr_f, mean_f, abs(res_f) / (H ** 3 + s.Q * H * H))
