import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shortmeans.arith_tables import SieveSpec, build_table
from shortmeans.correlations import (RemainderTerms, autocorrelation, decomposition_residual, geometric_sums,
                                     lemma4_main, lemma4_remainder, remainder_statistic,
                                     weighted_remainder_path_a, weighted_remainder_path_b,
                                     weighted_remainder_sum)
from shortmeans.errors import DomainError, RangeError
from shortmeans.weights import TruncatedWeight

TWO = SieveSpec({1: 1, 2: 1}, 2)


@st.composite
def sieve_specs(draw, qmax=20):
    Q = draw(st.integers(1, qmax))
    vals = draw(st.lists(st.integers(-3, 3), min_size=Q, max_size=Q))
    return SieveSpec(dict(zip(range(1, Q + 1), vals)), Q)


def naive_remainder(s, N, a):
    """Term-by-term version of the remainder, without closed forms."""
    total = 0j
    for ell in range(1, abs(a) + 1):
        if a % ell:
            continue
        for d in range(1, s.Q // ell + 1):
            for q in range(1, s.Q // ell + 1):
                if math.gcd(d, q) != 1:
                    continue
                c = s.value(ell * d) * s.value(ell * q) / q
                if c == 0:
                    continue
                for j in range(1, q):
                    inner = sum(cmath.exp(2j * math.pi * j * d * m / q)
                                for m in range(N // (ell * d) + 1, 2 * N // (ell * d) + 1))
                    total += c * cmath.exp(-2j * math.pi * j * (a // ell) / q) * inner
    return total


class TestAutocorrelation:
    def test_examples(self):
        one = build_table("one", 1, 100)
        assert all(autocorrelation(one, 10, a) == 10 for a in range(0, 9))
        f = TWO.table(1, 40)
        assert autocorrelation(f, 10, 2) == 25
        assert autocorrelation(f, 10, 1) == 20

    def test_negative_shift_uses_its_own_window(self):
        f = build_table("d2", 1, 100)
        assert autocorrelation(f, 20, -3) == sum(f[n] * f[n + 3] for n in range(21, 41))
        assert autocorrelation(f, 20, 3) == sum(f[n] * f[n - 3] for n in range(21, 41))
        assert autocorrelation(f, 20, 3) != autocorrelation(f, 20, -3)

    def test_window_check(self):
        f = build_table("d2", 15, 40)
        with pytest.raises(RangeError):
            autocorrelation(f, 10, 6)
        with pytest.raises(RangeError):
            autocorrelation(f, 20, -1)


class TestLemma4Identity:
    def test_main_examples(self):
        assert lemma4_main(SieveSpec({1: 1}, 1), 10, 5) == 10
        assert lemma4_main(TWO, 10, 2) == 25
        assert lemma4_main(TWO, 10, 1) == 20
        with pytest.raises(DomainError):
            lemma4_main(TWO, 10, 0)

    def test_remainder_examples(self):
        for a in (1, 2, 3, 7):
            assert lemma4_remainder(SieveSpec({1: 1}, 1), 50, a) == 0
        assert abs(lemma4_remainder(TWO, 10, 2)) < 1e-12
        assert abs(lemma4_remainder(TWO, 10, 1)) < 1e-12
        with pytest.raises(DomainError):
            lemma4_remainder(TWO, 10, 0)

    @given(sieve_specs(qmax=8), st.integers(20, 120), st.integers(1, 12))
    def test_remainder_against_naive(self, s, N, a):
        assert lemma4_remainder(s, N, a) == pytest.approx(naive_remainder(s, N, a), abs=1e-8)

    @given(sieve_specs(), st.sampled_from([500, 2000, 5000]), st.integers(1, 40))
    def test_exact_identity(self, s, N, a):
        f = s.table(1, 2 * N)
        cf = autocorrelation(f, N, a)
        r = lemma4_remainder(s, N, a)
        assert abs(cf - float(lemma4_main(s, N, a)) - r.real) <= 1e-6 * (1 + abs(cf))
        assert abs(r.imag) <= 1e-6 * (1 + abs(cf))

    @given(st.integers(1, 40), st.integers(1, 30), st.integers(0, 60), st.integers(0, 90))
    def test_geometric_closed_form(self, q, step, lo, width):
        hi = lo + width
        js = np.arange(q)
        got = geometric_sums(js, q, step, lo, hi)
        for j in range(q):
            want = sum(cmath.exp(2j * math.pi * j * step * m / q) for m in range(lo + 1, hi + 1))
            assert abs(got[j] - want) < 1e-8

    def test_cached_terms_agree(self):
        s = SieveSpec({1: 2, 3: -1, 4: 1, 6: 3}, 6)
        terms = RemainderTerms(s, 300)
        for a in range(1, 20):
            assert terms.remainder(a) == pytest.approx(lemma4_remainder(s, 300, a), abs=1e-10)


class TestWeightedRemainder:
    def test_trivial_spec(self):
        w = weighted_remainder_sum(SieveSpec({1: 1}, 1), TruncatedWeight("u", 5), 100)
        assert w.path_a == 0 and w.path_b == 0

    def test_small_example(self):
        w = weighted_remainder_sum(TWO, TruncatedWeight("u", 3), 10)
        assert w.difference <= 1e-8

    def test_modulated_rejected(self):
        with pytest.raises(DomainError):
            weighted_remainder_sum(TWO, TruncatedWeight("mod(1/4)", 3), 10)

    @given(sieve_specs(), st.sampled_from([500, 2000, 5000]), st.integers(1, 16),
           st.sampled_from(["u", "sgn", "C"]))
    def test_paths_agree(self, s, N, H, spec):
        tw = TruncatedWeight(spec, H)
        a = weighted_remainder_path_a(s, tw, N)
        b = weighted_remainder_path_b(s, tw, N)
        assert abs(a - b) <= 1e-6 * max(1.0, abs(a))

    def test_statistic(self):
        assert remainder_statistic(-30.0, 10, 2, 3) == pytest.approx(30 / (20 + 18 + 12))


class TestDecomposition:
    def test_trivial(self):
        d = decomposition_residual(SieveSpec({1: 1}, 1), TruncatedWeight("C", 6), 100)
        assert d.residual == 0 and d.statistic == 0
        d = decomposition_residual(SieveSpec({}, 3), TruncatedWeight("u", 6), 100)
        assert d.residual == 0

    def test_example_gate(self):
        d = decomposition_residual(TWO, TruncatedWeight("u", 4), 200)
        assert d.statistic <= 10

    def test_pieces_are_consistent(self):
        s = SieveSpec({1: 1, 2: -1, 3: 2}, 3)
        d = decomposition_residual(s, TruncatedWeight("sgn", 5), 150)
        assert d.residual == pytest.approx(d.integral - d.correlation_sum + d.mean_term)

    def test_preconditions(self):
        with pytest.raises(DomainError):
            decomposition_residual(SieveSpec({1: 1}, 50), TruncatedWeight("u", 2), 20)
        with pytest.raises(RangeError):
            decomposition_residual(TWO, TruncatedWeight("u", 10), 20)
        with pytest.raises(DomainError):
            decomposition_residual(TWO, TruncatedWeight("mod(1/3)", 3), 50)

    @given(sieve_specs(qmax=12), st.integers(100, 800), st.integers(1, 12))
    def test_fractional_g_float_path(self, s, N, H):
        g = {q: v / 2 for q, v in s.g.items()}
        half = SieveSpec(g, s.Q)
        d = decomposition_residual(half, TruncatedWeight("u", H), N)
        d2 = decomposition_residual(SieveSpec({q: Fraction(v, 2) for q, v in s.g.items()}, s.Q),
                                    TruncatedWeight("u", H), N)
        assert d.residual == pytest.approx(d2.residual, abs=1e-6 * (1 + abs(d2.integral)))
