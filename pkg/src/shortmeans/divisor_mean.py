"""Arithmetic and analytic mean values of ``d_k`` in short intervals.

The k-folding threshold is ``T = floor((N - H)^(1/k))`` and ``Q_k = x/T``.
``Q_k`` is kept as a rational: ``q <= Q_k`` is decided by ``q * T <= x``.
The short Eratosthenes transform ``g_k`` is tabulated by Dirichlet
convolution, with a direct enumerator of ordered factorisations for single
values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith_tables import build_table
from .constants import EULER_GAMMA, GAMMA1
from .errors import DomainError, RangeError, UnsupportedParameterError


def iroot(n: int, k: int) -> int:
    """Largest ``t >= 0`` with ``t**k <= n``."""
    if n < 0 or k < 1:
        raise DomainError("iroot needs n >= 0 and k >= 1")
    if n < 2:
        return n
    t = int(round(n ** (1.0 / k)))
    while t ** k > n:
        t -= 1
    while (t + 1) ** k <= n:
        t += 1
    return t


@dataclass(frozen=True)
class FoldingContext:
    k: int
    N: int
    H: int
    x: int
    T: int

    @property
    def Qk(self) -> Fraction:
        return Fraction(self.x, self.T)

    def admits(self, q: int) -> bool:
        """``q <= Q_k``, decided in integers."""
        return q * self.T <= self.x


def q_threshold(k: int, x: int, N: int, H: int) -> FoldingContext:
    """Folding context for ``d_k`` at ``x``.

    Only ``N - H >= 1`` is enforced; ``x`` is not required to lie in ``(N, 2N]``.
    """
    if k < 3:
        raise DomainError(f"the k-folding threshold needs k >= 3, got {k}")
    if H < 0 or N - H < 1:
        raise RangeError(f"need 0 <= H < N, got N={N}, H={H}")
    if x < 1:
        raise RangeError("x must be positive")
    return FoldingContext(k, N, H, x, iroot(N - H, k))


def _ordered_factorisations(q: int, parts: int, bounded: int, T: int) -> int:
    """Ordered ``(n_1, ..., n_parts)`` with product ``q`` and ``n_i < T`` for ``i <= bounded``."""
    if parts == 0:
        return 1 if q == 1 else 0
    if parts == 1:
        return 1 if (bounded == 0 or q < T) else 0
    total = 0
    for n1 in range(1, q + 1):
        if bounded > 0 and n1 >= T:
            break
        if q % n1 == 0:
            total += _ordered_factorisations(q // n1, parts - 1, max(bounded - 1, 0), T)
    return total


def gk(k: int, q: int, T: int) -> int:
    """``g_k(q) = d_{k-1}(q) + sum_{j=1}^{k-1} #{n_1...n_{k-1} = q : n_1, ..., n_j < T}``."""
    if k < 3:
        raise DomainError("k must be >= 3")
    if q < 1 or T < 1:
        raise RangeError("need q >= 1 and T >= 1")
    return sum(_ordered_factorisations(q, k - 1, j, T) for j in range(0, k))


def _dirichlet(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dirichlet convolution of two arrays indexed from ``n = 1``."""
    M = len(a)
    out = np.zeros(M, dtype=np.int64)
    for i in np.flatnonzero(a).tolist():
        n = i + 1
        out[n - 1::n] += a[i] * b[:M // n]
    return out


@lru_cache(maxsize=32)
def _gk_table_cached(k: int, M: int, T: int) -> np.ndarray:
    small = np.zeros(M, dtype=np.int64)
    small[:min(T - 1, M)] = 1                       # 1_{n < T}
    delta = np.zeros(M, dtype=np.int64)
    delta[0] = 1
    dk = [delta] + [build_table(f"d{m}", 1, M).values for m in range(1, k - 1)]
    total = build_table(f"d{k - 1}", 1, M).values.copy()
    power = delta
    for j in range(1, k):
        power = _dirichlet(small, power)           # 1_{<T}^{*j}
        total += _dirichlet(power, dk[k - 1 - j])
    total.setflags(write=False)
    return total


def gk_table(k: int, M: int, T: int) -> np.ndarray:
    """``g_k(1), ..., g_k(M)`` as an int64 array."""
    if k < 3:
        raise DomainError("k must be >= 3")
    if k - 1 > 6:
        raise UnsupportedParameterError("k - 1 must not exceed 6")
    if M < 1 or T < 1:
        raise RangeError("need M >= 1 and T >= 1")
    return _gk_table_cached(k, M, T)


def _harmonic_prefix(k: int, M: int, T: int) -> np.ndarray:
    """``P[m] = sum_{q <= m} g_k(q)/q``."""
    g = gk_table(k, M, T)
    out = np.zeros(M + 1)
    np.cumsum(g / np.arange(1, M + 1), out=out[1:])
    return out


def _threshold_x(ctx: FoldingContext, normalization: str) -> int:
    if normalization == "x":
        return ctx.x
    if normalization == "2N":
        return 2 * ctx.N
    raise DomainError(f"normalization must be 'x' or '2N', got {normalization!r}")


def arithmetic_mean(k: int, x: int, N: int, H: int, normalization: str = "x") -> float:
    """``sum_{q <= Q_k} g_k(q)/q`` in ascending ``q``."""
    ctx = q_threshold(k, x, N, H)
    top = _threshold_x(ctx, normalization) // ctx.T
    if top < 1:
        return 0.0
    return float(_harmonic_prefix(k, top, ctx.T)[top])


def analytic_p(k: int, x: float) -> float:
    """Logarithmic polynomial of ``d_k``: ``L + 2 gamma`` for ``k = 2`` and
    ``L^2/2 + 3 gamma L + 3 gamma^2 + 3 gamma_1`` for ``k = 3``."""
    if x < 1:
        raise DomainError("x must be >= 1")
    L = math.log(x)
    g = EULER_GAMMA
    if k == 2:
        return L + 2 * g
    if k == 3:
        return L * L / 2 + 3 * g * L + 3 * g * g + 3 * GAMMA1
    raise UnsupportedParameterError(f"analytic_p supports k in {{2, 3}}, got {k}")


def _harmonic(n: int) -> float:
    return math.fsum(1.0 / d for d in range(1, n + 1))


def tilde_m3(x: int, N: int, H: int) -> float:
    """Per-``H`` bracket of the truncated mean value, with ``Q = x/T``:

    ``sum_{q <= Q} d(q)/q + sum_{d1 < x/Q} (1/d1) sum_{d2 <= Q/d1} 1/d2 + (sum_{d < x/Q} 1/d)^2``.
    """
    ctx = q_threshold(3, x, N, H)
    T = ctx.T
    qmax = x // T                                   # q <= Q  <=>  qT <= x
    first = 0.0
    if qmax >= 1:
        d2 = build_table("d2", 1, qmax).values
        first = math.fsum(d2 / np.arange(1, qmax + 1))
    # x/Q = T, so d1 < x/Q reads d1 < T; d2 <= Q/d1 reads d1 d2 T <= x
    second = math.fsum(_harmonic(x // (d1 * T)) / d1 for d1 in range(1, T))
    third = _harmonic(T - 1) ** 2
    return first + second + third


def default_stride(N: int) -> int:
    return max(1, N // 2 ** 12)


@dataclass(frozen=True)
class ProximityResult:
    k: int
    N: int
    H: int
    stat: float
    stride: int
    samples: int
    normalization: str

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def proximity(k: int, N: int, H: int, stride: int | None = None,
              normalization: str = "x") -> ProximityResult:
    """Mean of ``(arithmetic_mean - analytic_p)^2`` over ``x = N+1, N+1+s, ... <= 2N``."""
    if k != 3:
        raise UnsupportedParameterError("the proximity statistic is available for k = 3 only")
    stride = default_stride(N) if stride is None else int(stride)
    if stride < 1:
        raise DomainError("stride must be >= 1")
    ctx = q_threshold(k, 2 * N, N, H)
    T = ctx.T
    xs = np.arange(N + 1, 2 * N + 1, stride, dtype=np.int64)
    P = _harmonic_prefix(k, max(2 * N // T, 1), T)
    if normalization == "x":
        arith = P[xs // T]
    elif normalization == "2N":
        arith = np.full(len(xs), P[2 * N // T])
    else:
        raise DomainError(f"normalization must be 'x' or '2N', got {normalization!r}")
    L = np.log(xs.astype(np.float64))
    g = EULER_GAMMA
    analytic = L * L / 2 + 3 * g * L + 3 * g * g + 3 * GAMMA1
    stat = math.fsum((arith - analytic) ** 2) / len(xs)
    return ProximityResult(k, N, H, stat, stride, len(xs), normalization)


def proximity_stat(k: int, N: int, H: int, stride: int | None = None,
                   normalization: str = "x") -> float:
    return proximity(k, N, H, stride, normalization).stat
