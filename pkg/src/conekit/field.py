"""Exact arithmetic in the cyclotomic field Q(zeta_n).

Elements are represented in the power basis 1, x, ..., x^(phi(n)-1) of
Q[x]/Phi_n(x), with x mapped to e^(2*pi*i/n).  The field order n is fixed
per value; mixed-order arithmetic coerces through a common order only when
one order divides the other.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [_ZERO] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [_ZERO] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b):
        coef = a[-1] * inv_lead
        deg = len(a) - len(b)
        q[deg] = coef
        for i, bi in enumerate(b):
            a[deg + i] -= coef * bi
        _poly_trim(a)
        if not a:
            break
    return _poly_trim(q), a


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[Fraction, ...]:
    """Coefficients of Phi_n(x), low degree first."""
    if n == 1:
        return (Fraction(-1), Fraction(1))
    # x^n - 1 divided by the product of Phi_d for proper divisors d of n
    num = [_ZERO] * (n + 1)
    num[0], num[n] = Fraction(-1), _ONE
    for d in range(1, n):
        if n % d == 0:
            q, r = _poly_divmod(num, list(cyclotomic_poly(d)))
            assert not r
            num = q
    return tuple(num)


class _FieldData:
    __slots__ = ("n", "deg", "reduction")

    def __init__(self, n: int):
        self.n = n
        phi = list(cyclotomic_poly(n))
        self.deg = len(phi) - 1
        # reduction table: x^(deg+k) as a vector in the power basis, covering
        # both products of reduced elements and bare powers x^t for t < n
        red = []
        cur = [-c for c in phi[:-1]]  # x^deg
        for _ in range(max(self.deg, n - self.deg)):
            red.append(tuple(cur))
            cur = [_ZERO] + cur
            if len(cur) > self.deg:
                top = cur.pop()
                if top:
                    for i, r in enumerate(red[0]):
                        cur[i] += top * r
        self.reduction = red


@lru_cache(maxsize=None)
def _field(n: int) -> _FieldData:
    return _FieldData(n)


class CycNum:
    """An element of Q(zeta_n) in the power basis of Q[x]/Phi_n."""

    __slots__ = ("n", "coeffs", "_hash")

    def __init__(self, n: int, coeffs):
        deg = _field(n).deg
        c = list(coeffs)
        if len(c) < deg:
            c += [_ZERO] * (deg - len(c))
        assert len(c) == deg, "coefficient vector must be reduced"
        self.n = n
        self.coeffs = tuple(c)
        self._hash = None

    # -- constructors -------------------------------------------------
    @staticmethod
    def from_rational(q, n: int = 1) -> "CycNum":
        q = Fraction(q)
        deg = _field(n).deg
        return CycNum(n, (q,) + (_ZERO,) * (deg - 1))

    @staticmethod
    def root_of_unity(n: int, t: int) -> "CycNum":
        """zeta_n^t as an element of Q(zeta_n)."""
        fd = _field(n)
        t %= n
        vec = [_ZERO] * n
        vec[t] = _ONE
        return CycNum(n, _reduce_vec(vec, fd))

    @staticmethod
    def exp_two_pi_i(q, n: int) -> "CycNum":
        """e^(2*pi*i*q) for rational q with n*q integral."""
        q = Fraction(q)
        t = q * n
        if t.denominator != 1:
            raise ValueError(f"e^(2 pi i {q}) does not lie in Q(zeta_{n})")
        return CycNum.root_of_unity(n, int(t))

    # -- queries -------------------------------------------------------
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> tuple["CycNum", "CycNum"]:
        if isinstance(other, (int, Fraction)):
            other = CycNum.from_rational(other, self.n)
        if self.n == other.n:
            return self, other
        if other.n % self.n == 0:
            return self._embed(other.n), other
        if self.n % other.n == 0:
            return self, other._embed(self.n)
        raise ValueError(f"incompatible cyclotomic orders {self.n}, {other.n}")

    def _embed(self, m: int) -> "CycNum":
        # zeta_n = zeta_m^(m/n)
        step = m // self.n
        fd = _field(m)
        vec = [_ZERO] * (fd.deg + (len(self.coeffs) - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            if c:
                vec[i * step] += c
        return CycNum(m, _reduce_vec(vec, fd))

    def __add__(self, other):
        if isinstance(other, CycNum) and other.n == self.n:
            return CycNum(self.n, tuple(
                x + y for x, y in zip(self.coeffs, other.coeffs)))
        a, b = self._coerce(other)
        return CycNum(a.n, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.n, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        a, b = self._coerce(other)
        return CycNum(a.n, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycNum(self.n, tuple(c * q for c in self.coeffs))
        if isinstance(other, CycNum) and other.n == self.n:
            a, b = self, other
            if a.is_rational():
                return CycNum(b.n, tuple(c * a.coeffs[0] for c in b.coeffs))
            if b.is_rational():
                return CycNum(a.n, tuple(c * b.coeffs[0] for c in a.coeffs))
            vec = _poly_mul(list(a.coeffs), list(b.coeffs))
            return CycNum(a.n, _reduce_vec(vec, _field(a.n)))
        a, b = self._coerce(other)
        if a.is_rational():
            return b * a.coeffs[0]
        if b.is_rational():
            return a * b.coeffs[0]
        vec = _poly_mul(list(a.coeffs), list(b.coeffs))
        return CycNum(a.n, _reduce_vec(vec, _field(a.n)))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(zeta)")
        if self.is_rational():
            return CycNum.from_rational(1 / self.coeffs[0], self.n)
        # extended Euclid against Phi_n
        phi = list(cyclotomic_poly(self.n))
        a = _poly_trim(list(self.coeffs))
        r0, r1 = phi, a
        s0, s1 = [], [_ONE]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        assert len(r0) == 1, "Phi_n must be irreducible over Q"
        inv_lead = 1 / r0[0]
        s0 = [c * inv_lead for c in s0]
        return CycNum(self.n, _reduce_vec(s0, _field(self.n)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycNum(self.n, tuple(c / q for c in self.coeffs))
        a, b = self._coerce(other)
        return a * b.inverse()

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self._coerce(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.n, self.coeffs))
        return self._hash

    def __repr__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*z{self.n}^{i}" if i > 1 else f"{c}*z{self.n}")
        return "(" + " + ".join(parts) + ")" if parts else "0"


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = list(a) + [_ZERO] * max(0, len(b) - len(a))
    for i, bi in enumerate(b):
        out[i] -= bi
    return _poly_trim(out)


def _reduce_vec(vec: list[Fraction], fd: _FieldData) -> tuple[Fraction, ...]:
    vec = list(vec)
    for j in range(len(vec) - 1, fd.deg - 1, -1):
        c = vec[j]
        if c:
            vec[j] = _ZERO
            for i, r in enumerate(fd.reduction[j - fd.deg]):
                vec[i] += c * r
    vec = vec[: fd.deg] + [_ZERO] * max(0, fd.deg - len(vec))
    return tuple(vec[: fd.deg])
