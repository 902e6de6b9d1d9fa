"""Bernoulli numbers and polynomials, exact, with the B1(x) = x - 1/2
convention."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2 (so B_n(0) = B_n)."""
    if n == 0:
        return Fraction(1)
    # sum_{k=0}^{n} C(n+1,k) B_k = 0  for n >= 1
    s = Fraction(0)
    for k in range(n):
        s += comb(n + 1, k) * bernoulli_number(k)
    return -s / (n + 1)


def bernoulli_poly(n: int, x) -> Fraction:
    """Value of B_n(x) at a rational point."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = Fraction(x)
    return sum((comb(n, k) * bernoulli_number(k) * x ** (n - k)
                for k in range(n + 1)), Fraction(0))
