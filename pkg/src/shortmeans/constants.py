"""Numerical constants used by the logarithmic polynomials.

``GAMMA1`` follows the sign convention

    gamma_1 = lim_m ( (log m)^2 / 2 - sum_{j<=m} log(j) / j ),

which is the negative of the usual first Stieltjes constant.  The frozen
value below was produced by :func:`gamma1_from_limit` and cross-checked
against ``-mpmath.stieltjes(1)`` in the test-suite.
"""

import math
from fractions import Fraction

EULER_GAMMA = 0.5772156649015329
GAMMA1 = 0.07281584548367672

# B_2, B_4, ..., B_14
_BERNOULLI = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
              Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6)]


def _log_over_x_derivative(n, x):
    # d^n/dx^n (log x / x) = (-1)^n n! (log x - H_n) / x^(n+1)
    harmonic = math.fsum(1.0 / i for i in range(1, n + 1))
    return (-1) ** n * math.factorial(n) * (math.log(x) - harmonic) / x ** (n + 1)


def gamma1_from_limit(m=2000):
    """Evaluate the limit defining ``GAMMA1`` with an Euler-Maclaurin tail.

    The partial sum up to ``m`` is corrected by the boundary terms of the
    Euler-Maclaurin formula at ``m``; with the default ``m`` the truncation
    error is far below double precision.
    """
    partial = math.fsum(math.log(j) / j for j in range(2, m + 1))
    tail = 0.5 * math.log(m) / m
    for k, b in enumerate(_BERNOULLI, start=1):
        tail += float(b) / math.factorial(2 * k) * _log_over_x_derivative(2 * k - 1, m)
    # partial = C + log(m)^2/2 + tail, and gamma_1 = -C
    return 0.5 * math.log(m) ** 2 - partial + tail
