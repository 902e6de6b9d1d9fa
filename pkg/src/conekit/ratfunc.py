"""Rational functions with factored denominators.

A RatFunc is numerator / product of stored factors.  Factors are kept in the
factored form they were built with (the closed-form linear factors arising in
localization formulas), normalized to lex-monic so that equal factors from
different constructions collide.  Equality is decided by cross-multiplication
after cancelling common denominator factors; gcd reduction happens lazily by
trial exact division when numerators grow past the ring threshold.
"""

from __future__ import annotations

from fractions import Fraction

from .field import CycNum
from .poly import MPoly, ParamRing


def _normalize_factor(f: MPoly) -> tuple[MPoly, CycNum]:
    """Scale f to have lex-leading coefficient 1; return (monic, scale)."""
    _, lead = f.leading()
    if lead == 1:
        return f, f.ring.one_cyc()
    inv = lead.inverse()
    return f * inv, lead


class RatFunc:
    __slots__ = ("ring", "num", "den", "_keyc")

    def __init__(self, ring: ParamRing, num: MPoly, den: dict | None = None,
                 _skip_reduce: bool = False):
        self.ring = ring
        self.num = num
        self.den = {}
        self._keyc = None
        scale = ring.one_cyc()
        if den:
            for f, e in den.items():
                if e == 0:
                    continue
                if f.is_zero():
                    raise ZeroDivisionError("zero denominator factor")
                if f.is_const():
                    c = f.const_value()
                    for _ in range(e):
                        scale = scale * c
                    continue
                if len(f.terms) == 1:
                    # monomial factor: split into per-variable powers
                    (expv, coef), = f.terms.items()
                    for _ in range(e):
                        scale = scale * coef
                    for i, p in enumerate(expv):
                        if p:
                            v = MPoly(ring, {_unit_exp(ring, i): ring.one_cyc()})
                            self.den[v] = self.den.get(v, 0) + p * e
                    continue
                monic, s = _normalize_factor(f)
                if not (s == 1):
                    for _ in range(e):
                        scale = scale * s
                self.den[monic] = self.den.get(monic, 0) + e
        if not (scale == 1):
            self.num = self.num * scale.inverse()
        if self.num.is_zero():
            self.den = {}
        else:
            self._cancel_monomial_content()
            if not _skip_reduce and \
                    len(self.num.terms) > ring.reduce_threshold:
                self._reduce_inplace()

    # -- constructors -----------------------------------------------------
    @staticmethod
    def _raw(ring: ParamRing, num: MPoly, den: dict) -> "RatFunc":
        """Fast path: den must already be normalized (monic, split)."""
        r = RatFunc.__new__(RatFunc)
        r.ring = ring
        r._keyc = None
        if num.is_zero():
            r.num, r.den = num, {}
            return r
        r.num, r.den = num, den
        r._cancel_monomial_content()
        if len(r.num.terms) > ring.reduce_threshold:
            r._reduce_inplace()
        return r

    @staticmethod
    def from_poly(p: MPoly) -> "RatFunc":
        return RatFunc(p.ring, p)

    @staticmethod
    def const(ring: ParamRing, c) -> "RatFunc":
        return RatFunc(ring, ring.const(c))

    @staticmethod
    def var(ring: ParamRing, name: str) -> "RatFunc":
        return RatFunc(ring, ring.var(name))

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and not self.den

    def const_value(self) -> CycNum:
        self_red = self.reduced() if self.den else self
        if self_red.den:
            raise ValueError("not a constant")
        return self_red.num.const_value()

    def as_fraction(self) -> Fraction:
        return self.const_value().as_rational()

    def den_poly(self) -> MPoly:
        out = self.ring.one()
        for f, e in self.den.items():
            out = out * f**e
        return out

    def uses(self, name: str) -> bool:
        return self.num.uses(name) or any(f.uses(name) for f in self.den)

    # -- reduction -----------------------------------------------------------
    def _cancel_monomial_content(self):
        """Cancel single-variable denominator factors against the monomial
        content of the numerator (cheap, no polynomial division)."""
        if not self.den or self.num.is_zero():
            return
        content = None
        for e in self.num.terms:
            content = e if content is None else \
                tuple(min(a, b) for a, b in zip(content, e))
            if not any(content):
                return
        for f in list(self.den):
            if len(f.terms) != 1:
                continue
            (expv, _), = f.terms.items()
            nz = [i for i, p in enumerate(expv) if p]
            if len(nz) != 1 or expv[nz[0]] != 1:
                continue
            i = nz[0]
            cancel = min(content[i], self.den[f])
            if cancel:
                content = tuple(c - cancel if idx == i else c
                                for idx, c in enumerate(content))
                if self.den[f] == cancel:
                    del self.den[f]
                else:
                    self.den[f] -= cancel
                self.num = MPoly(self.num.ring, {
                    tuple(x - cancel if idx == i else x
                          for idx, x in enumerate(e)): c
                    for e, c in self.num.terms.items()})
        self._keyc = None

    def _reduce_inplace(self):
        for f in list(self.den):
            e = self.den[f]
            while e > 0:
                q = self.num.exact_div(f)
                if q is None:
                    break
                self.num = q
                e -= 1
            if e == 0:
                del self.den[f]
            else:
                self.den[f] = e
        self._keyc = None

    def reduced(self) -> "RatFunc":
        r = RatFunc(self.ring, self.num, dict(self.den), _skip_reduce=True)
        r._reduce_inplace()
        return r

    # -- arithmetic ------------------------------------------------------------
    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MPoly):
            return RatFunc(self.ring, other)
        return RatFunc.const(self.ring, other)

    def __add__(self, other):
        other = self._coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        common = {f: min(e, other.den.get(f, 0)) for f, e in self.den.items()
                  if f in other.den}
        a_extra = _bag_sub(other.den, common)
        b_extra = _bag_sub(self.den, common)
        num = self.num * _bag_expand(self.ring, a_extra) + \
            other.num * _bag_expand(self.ring, b_extra)
        den = _bag_add(self.den, a_extra)
        return RatFunc(self.ring, num, den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(self.ring, -self.num, dict(self.den))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return RatFunc._raw(self.ring, self.num * other, dict(self.den))
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return RatFunc(self.ring, self.ring.zero())
        if not other.den:
            return RatFunc._raw(self.ring, self.num * other.num,
                                dict(self.den))
        # merge bags; both sides are already normalized
        return RatFunc._raw(self.ring, self.num * other.num,
                            _bag_add(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        num = _bag_expand(self.ring, self.den)
        return RatFunc(self.ring, num, {self.num: 1})

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        if self.is_zero():
            return self
        return RatFunc(self.ring, self.num * _bag_expand(self.ring, other.den),
                       _bag_add(self.den, {other.num: 1}))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n == 0:
            return RatFunc.const(self.ring, 1)
        if n < 0:
            return self.inverse() ** (-n)
        num = self.num**n
        den = {f: e * n for f, e in self.den.items()}
        return RatFunc._raw(self.ring, num, den)

    # -- substitution -------------------------------------------------------
    def subst(self, name: str, value: "RatFunc") -> "RatFunc":
        """Exact substitution of a RatFunc value for a parameter."""
        num = _poly_subst(self.num, name, value)
        out = num
        for f, e in self.den.items():
            fv = _poly_subst(f, name, value) if f.uses(name) else RatFunc(
                self.ring, f)
            if fv.is_zero():
                raise ZeroDivisionError(
                    f"substitution {name} -> value hits a pole")
            out = out / fv**e
        return out

    def subst_zero(self, names) -> "RatFunc":
        """Set all `names` to 0; raises if a denominator factor vanishes."""
        num = self.num
        for n in names:
            num = num.subst_const(n, 0)
        den = {}
        for f, e in self.den.items():
            f0 = f
            for n in names:
                f0 = f0.subst_const(n, 0)
            if f0.is_zero():
                raise ZeroDivisionError(
                    "denominator factor vanishes at the origin: " + repr(f))
            den[f0] = den.get(f0, 0) + e
        return RatFunc(self.ring, num, den)

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CycNum, MPoly)):
            other = self._coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.is_zero():
            return other.is_zero()
        if other.is_zero():
            return False
        common = {f: min(e, other.den.get(f, 0)) for f, e in self.den.items()
                  if f in other.den}
        a_extra = _bag_sub(other.den, common)
        b_extra = _bag_sub(self.den, common)
        return self.num * _bag_expand(self.ring, a_extra) == \
            other.num * _bag_expand(self.ring, b_extra)

    __hash__ = None  # equality is semantic; do not use as dict keys

    def sort_key(self):
        """Deterministic ordering key (for stable reports), not a hash."""
        if self._keyc is None:
            r = self.reduced()
            den_key = tuple(sorted((f.key(), e) for f, e in r.den.items()))
            self._keyc = (r.num.key(), den_key)
        return self._keyc

    def __repr__(self):
        if not self.den:
            return repr(self.num)
        den = " * ".join(f"({f!r})^{e}" if e > 1 else f"({f!r})"
                         for f, e in self.den.items())
        return f"({self.num!r}) / [{den}]"


def _unit_exp(ring: ParamRing, i: int) -> tuple:
    e = [0] * ring.nvars()
    e[i] = 1
    return tuple(e)


def _bag_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for f, e in b.items():
        out[f] = out.get(f, 0) + e
    return out


def _bag_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for f, e in b.items():
        r = out.get(f, 0) - e
        if r < 0:
            raise ValueError("bag underflow")
        if r == 0:
            out.pop(f, None)
        else:
            out[f] = r
    return out


def _bag_expand(ring: ParamRing, bag: dict) -> MPoly:
    out = ring.one()
    for f, e in bag.items():
        out = out * f**e
    return out


def _poly_subst(p: MPoly, name: str, value: RatFunc) -> RatFunc:
    """Substitute RatFunc value into an MPoly parameter (Horner by power)."""
    ring = p.ring
    if not p.uses(name):
        return RatFunc(ring, p)
    split = p.coeffs_in(name)
    out = RatFunc(ring, ring.zero())
    vpow = RatFunc.const(ring, 1)
    last = 0
    for power in sorted(split):
        for _ in range(last, power):
            vpow = vpow * value
        last = power
        out = out + vpow * RatFunc(ring, split[power])
    return out
