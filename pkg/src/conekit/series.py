"""Truncated series in the degree-tracking variable Q with exponents in
(1/d)Z, generic over the payload type.

A window [lo, hi] bounds the exponents about which the series carries
information; coefficients absent from the map are zero *within* the window
and unknown outside it.  Products use the safe window rule: the result is
only known where every contributing split was in-window.
"""

from __future__ import annotations

from fractions import Fraction


class WindowError(ValueError):
    """Raised when an operation needs coefficients outside the window."""


class QSeries:
    __slots__ = ("lo", "hi", "data")

    def __init__(self, lo, hi, data=None):
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self.data = {}
        for q, v in (data or {}).items():
            q = Fraction(q)
            if q < self.lo or q > self.hi:
                raise WindowError(f"exponent {q} outside window "
                                  f"[{self.lo}, {self.hi}]")
            self.data[q] = v

    def exponents(self):
        return sorted(self.data)

    def get(self, q, zero=None):
        q = Fraction(q)
        if q < self.lo or q > self.hi:
            raise WindowError(f"coefficient at Q^{q} not in window "
                              f"[{self.lo}, {self.hi}]")
        return self.data.get(q, zero)

    def in_window(self, q) -> bool:
        return self.lo <= Fraction(q) <= self.hi

    def set(self, q, v):
        q = Fraction(q)
        if not self.in_window(q):
            raise WindowError(f"exponent {q} outside window")
        self.data[q] = v

    def map(self, fn) -> "QSeries":
        return QSeries(self.lo, self.hi,
                       {q: fn(v) for q, v in self.data.items()})

    def __add__(self, other: "QSeries") -> "QSeries":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        out: dict = {}
        for src in (self.data, other.data):
            for q, v in src.items():
                if lo <= q <= hi:
                    out[q] = out[q] + v if q in out else v
        return QSeries(lo, hi, out)

    def mul(self, other: "QSeries", mul_fn=None, add_fn=None) -> "QSeries":
        """Product with the intersection window rule: result known on
        [lo1+lo2, min(lo1+hi2, lo2+hi1)]."""
        mul_fn = mul_fn or (lambda a, b: a * b)
        add_fn = add_fn or (lambda a, b: a + b)
        lo = self.lo + other.lo
        hi = min(self.lo + other.hi, other.lo + self.hi)
        out: dict = {}
        for q1, v1 in self.data.items():
            for q2, v2 in other.data.items():
                q = q1 + q2
                if lo <= q <= hi:
                    p = mul_fn(v1, v2)
                    out[q] = add_fn(out[q], p) if q in out else p
        return QSeries(lo, hi, out)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        if (self.lo, self.hi) != (other.lo, other.hi):
            return False
        keys = set(self.data) | set(other.data)
        for q in keys:
            a, b = self.data.get(q), other.data.get(q)
            if a is None:
                a, b = b, a
            if b is None:
                if not _is_zero(a):
                    return False
            elif not (a == b):
                return False
        return True

    __hash__ = None

    def __repr__(self):
        terms = ", ".join(f"Q^{q}: {v!r}" for q, v in
                          sorted(self.data.items()))
        return f"QSeries[{self.lo},{self.hi}]({terms})"


def _is_zero(v) -> bool:
    z = getattr(v, "is_zero", None)
    if z is not None:
        return z()
    return v == 0
