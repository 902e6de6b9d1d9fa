"""Multivariate polynomials over Q(zeta_n) in a fixed, ordered parameter list.

Terms are stored sparsely as a map from exponent tuples to nonzero CycNum
coefficients.  Monomial comparisons use lex order on the declared parameter
list, which also canonicalizes denominators downstream.
"""

from __future__ import annotations

from fractions import Fraction

from .field import CycNum


class ParamRing:
    """A declared list of commuting parameters over Q(zeta_n)."""

    __slots__ = ("params", "cyc_order", "index", "reduce_threshold")

    def __init__(self, params, cyc_order: int = 1, reduce_threshold: int = 40):
        self.params = tuple(params)
        self.cyc_order = cyc_order
        self.index = {p: i for i, p in enumerate(self.params)}
        self.reduce_threshold = reduce_threshold

    def nvars(self) -> int:
        return len(self.params)

    def zero_cyc(self) -> CycNum:
        return CycNum.from_rational(0, self.cyc_order)

    def one_cyc(self) -> CycNum:
        return CycNum.from_rational(1, self.cyc_order)

    def cyc(self, q) -> CycNum:
        if isinstance(q, CycNum):
            return q
        return CycNum.from_rational(Fraction(q), self.cyc_order)

    def zero(self) -> "MPoly":
        return MPoly(self, {})

    def one(self) -> "MPoly":
        return self.const(1)

    def const(self, c) -> "MPoly":
        c = self.cyc(c)
        if c.is_zero():
            return MPoly(self, {})
        return MPoly(self, {(0,) * self.nvars(): c})

    def var(self, name: str, exp: int = 1) -> "MPoly":
        e = [0] * self.nvars()
        e[self.index[name]] = exp
        return MPoly(self, {tuple(e): self.one_cyc()})

    def linear(self, const=0, **coeffs) -> "MPoly":
        """Convenience: const + sum coeff * param."""
        p = self.const(const)
        for name, c in coeffs.items():
            p = p + self.var(name) * self.const(c)
        return p

    def __repr__(self):
        return f"ParamRing({','.join(self.params)}; zeta_{self.cyc_order})"


class MPoly:
    __slots__ = ("ring", "terms", "_key")

    def __init__(self, ring: ParamRing, terms: dict):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}
        self._key = None

    # -- basic queries ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def const_value(self) -> CycNum:
        if self.is_zero():
            return self.ring.zero_cyc()
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def degree_in(self, name: str) -> int:
        i = self.ring.index[name]
        return max((e[i] for e in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def uses(self, name: str) -> bool:
        i = self.ring.index[name]
        return any(e[i] for e in self.terms)

    def key(self):
        """Canonical hashable form (terms sorted by exponent)."""
        if self._key is None:
            self._key = tuple(sorted(self.terms.items(), key=lambda t: t[0]))
        return self._key

    def leading(self):
        """(exponent, coefficient) of the lex-largest monomial."""
        if self.is_zero():
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = self.ring.const(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        return MPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            c = self.ring.cyc(other)
            if c.is_zero():
                return self.ring.zero()
            return MPoly(self.ring, {e: v * c for e, v in self.terms.items()})
        if len(self.terms) == 1:
            (e1, c1), = self.terms.items()
            return MPoly(self.ring, {
                tuple(a + b for a, b in zip(e1, e2)): c1 * c2
                for e2, c2 in other.terms.items()})
        if len(other.terms) == 1:
            (e2, c2), = other.terms.items()
            return MPoly(self.ring, {
                tuple(a + b for a, b in zip(e1, e2)): c1 * c2
                for e1, c1 in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = out.get(e)
                out[e] = c if s is None else s + c
        return MPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- structural operations ---------------------------------------------
    def exact_div(self, divisor: "MPoly"):
        """Quotient self/divisor if divisible, else None (lex long division)."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self.ring.zero()
        de, dc = divisor.leading()
        dc_inv = dc.inverse()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e = max(rem)
            c = rem[e]
            qe = tuple(a - b for a, b in zip(e, de))
            if any(x < 0 for x in qe):
                return None
            qc = c * dc_inv
            quot[qe] = qc
            for e2, c2 in divisor.terms.items():
                ee = tuple(a + b for a, b in zip(qe, e2))
                s = rem.get(ee)
                v = (s - qc * c2) if s is not None else (-(qc * c2))
                if v.is_zero():
                    rem.pop(ee, None)
                else:
                    rem[ee] = v
        return MPoly(self.ring, quot)

    def derivative(self, name: str) -> "MPoly":
        i = self.ring.index[name]
        out: dict = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return MPoly(self.ring, out)

    def coeffs_in(self, name: str) -> dict:
        """Split into {power: MPoly without `name`}  (coefficients keep ring)."""
        i = self.ring.index[name]
        out: dict = {}
        for e, c in self.terms.items():
            p = e[i]
            e2 = list(e)
            e2[i] = 0
            out.setdefault(p, {})[tuple(e2)] = c
        return {p: MPoly(self.ring, t) for p, t in out.items()}

    def subst_const(self, name: str, value) -> "MPoly":
        """Substitute a CycNum/rational constant for a parameter."""
        value = self.ring.cyc(value)
        i = self.ring.index[name]
        out: dict = {}
        needed = sorted({e[i] for e in self.terms})
        powers = {0: self.ring.one_cyc()}
        v, last = powers[0], 0
        for p in needed:
            for _ in range(last, p):
                v = v * value
            powers[p] = v
            last = p
        for e, c in self.terms.items():
            p = e[i]
            e2 = list(e)
            e2[i] = 0
            e2 = tuple(e2)
            c2 = c * powers[p]
            s = out.get(e2)
            out[e2] = c2 if s is None else s + c2
        return MPoly(self.ring, out)

    def zero_at_origin(self, names) -> bool:
        """True if the polynomial vanishes when all `names` are set to 0."""
        idxs = [self.ring.index[n] for n in names]
        return all(any(e[i] for i in idxs) for e in self.terms)

    # -- comparison / hash ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = self.ring.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{p}^{k}" if k > 1 else p
                for p, k in zip(self.ring.params, e)
                if k
            )
            if mono:
                parts.append(f"{c}*{mono}" if not (c == 1) else mono)
            else:
                parts.append(f"{c}")
        return " + ".join(parts)
