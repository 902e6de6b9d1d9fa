"""Fractional powers of declared atoms over the rational-function field.

An atom is an opaque symbol together with its closed-form value (a
RatFunc); elements are finite sums of atom-monomials with RatFunc
coefficients.  Exponents are normalized into [0, 1): integer powers
evaluate into the coefficient, so only the genuinely fractional part stays
formal and the exponent lattice is finite.

Since each atom value is multiplicatively independent of the others, the
span is a tower of radical field extensions of the rational-function
field; inverses are computed by the norm trick (multiplying the Galois
conjugates obtained from root-of-unity twists).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .field import CycNum
from .poly import ParamRing
from .ratfunc import RatFunc


class PuiseuxRing:
    __slots__ = ("base", "atoms", "values", "index", "_one")

    def __init__(self, base: ParamRing, atoms, values: dict):
        """atoms: ordered names; values: name -> RatFunc (the closed form
        each atom stands for, used when integer powers appear)."""
        self.base = base
        self.atoms = tuple(atoms)
        self.values = {a: values[a] for a in self.atoms}
        self.index = {a: i for i, a in enumerate(self.atoms)}
        self._one = None

    def zero(self) -> "PuiseuxElem":
        return PuiseuxElem(self, {})

    def one(self) -> "PuiseuxElem":
        if self._one is None:
            self._one = self.scalar(RatFunc.const(self.base, 1))
        return self._one

    def scalar(self, rf: RatFunc) -> "PuiseuxElem":
        if rf.is_zero():
            return PuiseuxElem(self, {})
        return PuiseuxElem(self, {(Fraction(0),) * len(self.atoms): rf},
                           _normalized=True)

    def monomial(self, exps: dict, coeff=None) -> "PuiseuxElem":
        e = [Fraction(0)] * len(self.atoms)
        for a, x in exps.items():
            e[self.index[a]] = Fraction(x)
        c = coeff if coeff is not None else RatFunc.const(self.base, 1)
        return PuiseuxElem(self, {tuple(e): c})


class PuiseuxElem:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PuiseuxRing, terms: dict, _normalized=False):
        self.ring = ring
        if _normalized:
            self.terms = {e: c for e, c in terms.items() if not c.is_zero()}
            return
        out: dict = {}
        for e, c in terms.items():
            if c.is_zero():
                continue
            e2 = []
            for i, x in enumerate(e):
                x = Fraction(x)
                fl = x.numerator // x.denominator
                if fl:
                    c = c * ring.values[ring.atoms[i]] ** fl
                e2.append(x - fl)
            e2 = tuple(e2)
            if e2 in out:
                s = out[e2] + c
                if s.is_zero():
                    del out[e2]
                else:
                    out[e2] = s
            elif not c.is_zero():
                out[e2] = c
        self.terms = out

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_scalar(self) -> bool:
        return not self.terms or all(not any(e) for e in self.terms)

    def as_ratfunc(self) -> RatFunc:
        if self.is_zero():
            return RatFunc(self.ring.base, self.ring.base.zero())
        if not self.is_scalar():
            raise ValueError(f"{self!r} carries fractional atom powers")
        return next(iter(self.terms.values()))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, RatFunc):
            other = self.ring.scalar(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return PuiseuxElem(self.ring, out, _normalized=True)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxElem(self.ring,
                           {e: -c for e, c in self.terms.items()},
                           _normalized=True)

    def __sub__(self, other):
        if isinstance(other, RatFunc):
            other = self.ring.scalar(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(self.ring.base, other)
        if isinstance(other, RatFunc):
            if other.is_zero():
                return self.ring.zero()
            return PuiseuxElem(self.ring,
                               {e: c * other for e, c in self.terms.items()},
                               _normalized=True)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                if e in out:
                    out[e] = out[e] + c
                else:
                    out[e] = c
        return PuiseuxElem(self.ring, out)

    __rmul__ = __mul__

    def conjugate(self, atom_index: int, j: int, order: int) -> "PuiseuxElem":
        """Twist atom^e -> e^(2 pi i j e) atom^e (the radical-extension
        Galois action for the given atom)."""
        ring = self.ring
        out = {}
        for e, c in self.terms.items():
            x = e[atom_index]
            if x:
                phase = CycNum.exp_two_pi_i(Fraction(j) * x,
                                            ring.base.cyc_order)
                c = c * phase
            out[e] = c
        return PuiseuxElem(ring, out, _normalized=True)

    def inverse(self) -> "PuiseuxElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_scalar():
            return self.ring.scalar(self.as_ratfunc().inverse())
        if self.is_monomial():
            (e, c), = self.terms.items()
            return PuiseuxElem(self.ring,
                               {tuple(-x for x in e): c.inverse()})
        # find an atom with fractional support and rationalize it away
        idx = next(i for i in range(len(self.ring.atoms))
                   if any(e[i] for e in self.terms))
        n = lcm(*(e[idx].denominator for e in self.terms))
        if n == 1:
            # integer exponents cannot appear after normalization
            raise AssertionError("unnormalized element")
        partial = self.ring.one()
        for j in range(1, n):
            partial = partial * self.conjugate(idx, j, n)
        norm = partial * self
        assert not any(e[idx] for e in norm.terms), "norm must drop the atom"
        return partial * norm.inverse()

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            if isinstance(other, (int, Fraction)):
                other = RatFunc.const(self.ring.base, other)
            return self * other.inverse()
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.is_zero()
            other = self.ring.scalar(RatFunc.const(self.ring.base, other))
        elif isinstance(other, RatFunc):
            other = self.ring.scalar(other)
        if not isinstance(other, PuiseuxElem):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"{a}^{x}" for a, x in zip(self.ring.atoms, e)
                            if x)
            parts.append(f"({c!r})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)
