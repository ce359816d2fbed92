import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shortmeans.constants import EULER_GAMMA, GAMMA1
from shortmeans.divisor_mean import (analytic_p, arithmetic_mean, default_stride, gk, gk_table, iroot,
                                     proximity, proximity_stat, q_threshold, tilde_m3)
from shortmeans.errors import DomainError, RangeError, UnsupportedParameterError

# first verified run, cross-checked against the enumerator
ARITHMETIC_MEAN_GOLDEN = 49.90484224885522


def nested_loop_gk(k, q, T):
    """Enumerate all (k-1)-tuples with product q and count the bounded prefixes."""
    divs = [d for d in range(1, q + 1) if q % d == 0]

    def tuples(n, parts):
        if parts == 1:
            yield (n,)
            return
        for d in divs:
            if n % d == 0:
                for rest in tuples(n // d, parts - 1):
                    yield (d,) + rest

    total = 0
    for t in tuples(q, k - 1):
        total += 1
        for j in range(1, k):
            if all(n < T for n in t[:j]):
                total += 1
    return total


class TestThreshold:
    def test_examples(self):
        c = q_threshold(3, 1000, 1000, 10)
        assert c.T == 9 and c.Qk == Fraction(1000, 9)
        assert q_threshold(3, 1500, 1010, 10).T == 10
        assert q_threshold(4, 2 ** 13, 2 ** 12, 0).T == 8

    def test_invariants(self):
        c = q_threshold(3, 1500, 1000, 30)
        assert c.x / c.Qk == c.T
        assert c.Qk >= Fraction(c.x) / 1000 ** (1 / 3) - 1e-9
        assert c.admits(c.x // c.T) and not c.admits(c.x // c.T + 1)

    def test_errors(self):
        with pytest.raises(DomainError):
            q_threshold(2, 10, 10, 1)
        with pytest.raises(RangeError):
            q_threshold(3, 10, 10, 10)

    @given(st.integers(0, 10 ** 12), st.integers(1, 7))
    def test_iroot(self, n, k):
        t = iroot(n, k)
        assert t ** k <= n < (t + 1) ** k


class TestGk:
    def test_examples(self):
        assert gk(3, 1, 10) == 3
        assert gk(3, 6, 10) == 12
        assert gk(3, 13, 10) == 3

    @pytest.mark.parametrize("k", [3, 4])
    @pytest.mark.parametrize("T", [1, 2, 3, 7, 10, 23])
    def test_table_against_nested_loops(self, k, T):
        tab = gk_table(k, 500, T)
        assert [int(v) for v in tab] == [nested_loop_gk(k, q, T) for q in range(1, 501)]

    @given(st.integers(3, 5), st.integers(1, 200), st.integers(1, 30))
    def test_scalar_matches_table(self, k, q, T):
        assert gk(k, q, T) == gk_table(k, 200, T)[q - 1]

    def test_large_threshold_gives_k_times_dk1(self):
        # with T > q every prefix condition holds
        from shortmeans.arith_tables import build_table
        d2 = build_table("d2", 1, 100).values
        assert np.array_equal(gk_table(3, 100, 1000), 3 * d2)


class TestMeans:
    def test_small_example(self):
        # N - H = 8 gives T = 2; x = 9 admits q = 1..4
        want = math.fsum(gk(3, q, 2) / q for q in range(1, 5))
        assert arithmetic_mean(3, 9, 9, 1) == pytest.approx(want, rel=1e-15)
        assert gk(3, 1, 2) == 3

    def test_golden(self):
        N, H = 2 ** 12, 2 ** 8
        got = arithmetic_mean(3, N + 1, N, H)
        assert got > 0
        assert got == pytest.approx(ARITHMETIC_MEAN_GOLDEN, rel=1e-13)

    @given(st.integers(1000, 6000))
    def test_monotone_in_x(self, x):
        assert arithmetic_mean(3, x + 1, 3000, 50) >= arithmetic_mean(3, x, 3000, 50)

    def test_normalization_flag(self):
        N, H = 4000, 100
        assert arithmetic_mean(3, N + 1, N, H, "2N") == arithmetic_mean(3, 2 * N, N, H)
        with pytest.raises(DomainError):
            arithmetic_mean(3, N + 1, N, H, "other")

    def test_analytic_p(self):
        g = EULER_GAMMA
        assert analytic_p(3, 1) == pytest.approx(1.2179813, abs=1e-7)
        assert analytic_p(2, 1) == pytest.approx(2 * g)
        assert analytic_p(3, math.e) == pytest.approx(0.5 + 3 * g + 3 * g * g + 3 * GAMMA1)
        with pytest.raises(UnsupportedParameterError):
            analytic_p(4, 10)
        with pytest.raises(DomainError):
            analytic_p(3, 0.5)


class TestTildeM3:
    def test_small_example(self):
        assert tilde_m3(3, 9, 1) == pytest.approx(3.0)

    def test_naive(self):
        N, H, x = 2000, 40, 2900
        T = iroot(N - H, 3)
        Q = Fraction(x, T)
        d = lambda n: sum(1 for m in range(1, n + 1) if n % m == 0)
        first = sum(d(q) / q for q in range(1, x + 1) if q <= Q)
        second = sum(1 / d1 * sum(1 / d2 for d2 in range(1, x + 1) if d2 <= Q / d1)
                     for d1 in range(1, x + 1) if d1 < Fraction(x) / Q)
        third = sum(1 / dd for dd in range(1, x + 1) if dd < Fraction(x) / Q) ** 2
        assert tilde_m3(x, N, H) == pytest.approx(first + second + third, rel=1e-12)

    def test_close_to_analytic(self):
        N = 2 ** 16
        H = 2 ** 10
        assert abs(tilde_m3(2 * N, N, H) - analytic_p(3, 2 * N)) <= 10 * N ** (-1 / 3)


class TestProximity:
    def test_nonnegative_and_recorded(self):
        r = proximity(3, 2 ** 12, round(2 ** (12 * 0.7)))
        assert r.stat >= 0 and r.stride == default_stride(2 ** 12) == 1 and r.samples == 2 ** 12

    def test_full_sum_matches_definition(self):
        N, H = 600, 88
        want = math.fsum((arithmetic_mean(3, x, N, H) - analytic_p(3, x)) ** 2 for x in range(N + 1, 2 * N + 1))
        assert proximity_stat(3, N, H, 1) == pytest.approx(want / N, rel=1e-12)
        want2 = math.fsum((arithmetic_mean(3, x, N, H, "2N") - analytic_p(3, x)) ** 2
                          for x in range(N + 1, 2 * N + 1))
        assert proximity_stat(3, N, H, 1, "2N") == pytest.approx(want2 / N, rel=1e-12)

    def test_stride_stability(self):
        N = 2 ** 12
        H = round(N ** 0.7)
        a, b = proximity_stat(3, N, H, 1), proximity_stat(3, N, H, 16)
        assert abs(a - b) <= 0.2 * a

    def test_decay(self):
        vals = [proximity_stat(3, 2 ** e, round(2 ** (0.7 * e))) for e in (12, 14, 16)]
        assert vals[2] < vals[0]
        assert vals[0] > vals[1] > vals[2]

    def test_errors(self):
        with pytest.raises(UnsupportedParameterError):
            proximity_stat(4, 1000, 100)
        with pytest.raises(DomainError):
            proximity_stat(3, 1000, 100, 0)
