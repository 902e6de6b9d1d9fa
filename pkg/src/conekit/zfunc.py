"""Rational-in-z objects in canonical partial-fraction form.

A ZRat is a rational function of the distinguished parameter z whose
denominator is a product of z-linear factors: it is stored as a z-polynomial
part plus principal parts at finitely many distinct pole locations (z-free
rational functions, 0 included).  All pole locations arising in the theory
are known in closed form, so construction never needs root finding.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import MPoly, ParamRing
from .ratfunc import RatFunc


class ZRat:
    """poly[j] = coefficient of z^j; poles = [(a, [c1..ce])] with
    ck = coefficient of (z-a)^(-k)."""

    __slots__ = ("ring", "poly", "poles")

    def __init__(self, ring: ParamRing, poly=None, poles=None):
        self.ring = ring
        self.poly = list(poly or [])
        while self.poly and self.poly[-1].is_zero():
            self.poly.pop()
        self.poles = []
        for a, coeffs in (poles or []):
            coeffs = list(coeffs)
            while coeffs and coeffs[-1].is_zero():
                coeffs.pop()
            if coeffs:
                self.poles.append((a, coeffs))

    # ------------------------------------------------------------------
    @staticmethod
    def zero(ring: ParamRing) -> "ZRat":
        return ZRat(ring)

    @staticmethod
    def from_ratfunc(rf: RatFunc, zname: str = "z") -> "ZRat":
        """Partial-fraction decomposition; denominator factors must be
        z-free or z-linear."""
        ring = rf.ring
        zfree_den: dict = {}
        pole_list: list[tuple[RatFunc, int]] = []  # (location, order)
        for f, e in rf.den.items():
            dz = f.degree_in(zname)
            if dz == 0:
                zfree_den[f] = e
            elif dz == 1:
                split = f.coeffs_in(zname)
                c = split.get(1, ring.zero())
                g = split.get(0, ring.zero())
                if c.uses(zname) or g.uses(zname):
                    raise ValueError(f"factor not z-linear: {f!r}")
                # f = c*z + g, monic in storage means c's leading coeff feeds
                # normalization; pole at -g/c
                loc = RatFunc(ring, -g, {c: 1}) if not g.is_zero() else \
                    RatFunc(ring, ring.zero())
                scale = RatFunc(ring, c)
                _pole_merge(pole_list, loc, e)
                zfree_den[c] = zfree_den.get(c, 0) + e
            else:
                raise ValueError(f"denominator factor of z-degree {dz} "
                                 f"unsupported: {f!r}")
        # numerator as z-polynomial with z-free RatFunc coefficients
        scale_rf = RatFunc(ring, ring.one(), zfree_den)
        num_split = rf.num.coeffs_in(zname)
        w = {p: RatFunc(ring, q) * scale_rf for p, q in num_split.items()}
        w_list = [w.get(p, RatFunc(ring, ring.zero()))
                  for p in range(max(w, default=0) + 1)]
        if not pole_list:
            return ZRat(ring, w_list)
        # long division by prod (z - a_i)^e_i
        den_coeffs = [RatFunc.const(ring, 1)]
        for a, e in pole_list:
            for _ in range(e):
                den_coeffs = _zpoly_mul(den_coeffs,
                                        [-a, RatFunc.const(ring, 1)])
        quot, rem = _zpoly_divmod(w_list, den_coeffs)
        poles = []
        for i, (a, e) in enumerate(pole_list):
            others = [(b, eb) for j, (b, eb) in enumerate(pole_list) if j != i]
            coeffs = _principal_part(rem, a, e, others)
            poles.append((a, coeffs))
        return ZRat(ring, quot, poles)

    # ------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.poly and not self.poles

    def to_ratfunc(self, zname: str = "z") -> RatFunc:
        ring = self.ring
        z = RatFunc.var(ring, zname)
        out = RatFunc(ring, ring.zero())
        zp = RatFunc.const(ring, 1)
        for c in self.poly:
            out = out + c * zp
            zp = zp * z
        for a, coeffs in self.poles:
            base = z - a
            for k, c in enumerate(coeffs, start=1):
                term = c
                for _ in range(k):
                    term = term / base  # keep the denominator factored
                out = out + term
        return out

    def pole_locations(self) -> list[RatFunc]:
        return [a for a, _ in self.poles]

    def residue_at(self, a: RatFunc) -> RatFunc:
        """Coefficient of (z-a)^(-1); 0 if a is not a pole."""
        for b, coeffs in self.poles:
            if b == a:
                return coeffs[0]
        return RatFunc(self.ring, self.ring.zero())

    def principal_at_zero(self) -> list[RatFunc]:
        """[c1, c2, ...] with ck the coefficient of z^(-k)."""
        zero = RatFunc(self.ring, self.ring.zero())
        for b, coeffs in self.poles:
            if b.is_zero():
                return list(coeffs)
        return []

    def laurent_at_zero(self, order: int) -> tuple[int, list[RatFunc]]:
        """Laurent expansion around z=0 up to z^order.

        Returns (low, coeffs) with coeffs[i] the coefficient of z^(low+i).
        Exact: nonzero-pole principal parts expand by geometric series.
        """
        ring = self.ring
        zero = RatFunc(ring, ring.zero())
        principal = self.principal_at_zero()
        low = -len(principal)
        n = order - low + 1
        if n <= 0:
            return low, []
        out = [zero] * n
        # principal part: coefficient of z^(-k) sits at index (-k - low)
        for k, c in enumerate(principal, start=1):
            out[-k - low] = c
        for j, c in enumerate(self.poly):
            if j <= order:
                out[j - low] = out[j - low] + c
        for a, coeffs in self.poles:
            if a.is_zero():
                continue
            inv_a = a.inverse()
            for k, c in enumerate(coeffs, start=1):
                # (z-a)^(-k) = (-1)^k a^(-k) sum_t C(k-1+t, t) (z/a)^t
                pref = c * (-1) ** k * inv_a**k
                binom = Fraction(1)
                apow = RatFunc.const(ring, 1)
                for t in range(0, order + 1):
                    if t > 0:
                        binom = binom * Fraction(k - 1 + t, t)
                        apow = apow * inv_a
                    out[t - low] = out[t - low] + pref * apow * binom
        return low, out

    def eval_at(self, a: RatFunc) -> RatFunc:
        """Evaluate at z=a (a must not be a pole location)."""
        ring = self.ring
        out = RatFunc(ring, ring.zero())
        apow = RatFunc.const(ring, 1)
        for c in self.poly:
            out = out + c * apow
            apow = apow * a
        for b, coeffs in self.poles:
            base = a - b
            if base.is_zero():
                raise ZeroDivisionError("evaluation at a pole")
            for k, c in enumerate(coeffs, start=1):
                out = out + c / base**k
        return out

    def negate_z(self) -> "ZRat":
        """The object f(-z)."""
        poly = [c * ((-1) ** j) for j, c in enumerate(self.poly)]
        poles = []
        for a, coeffs in self.poles:
            poles.append((-a, [c * ((-1) ** k)
                               for k, c in enumerate(coeffs, start=1)]))
        return ZRat(self.ring, poly, poles)

    # -- ring operations ------------------------------------------------
    def __add__(self, other: "ZRat") -> "ZRat":
        poly = _list_add(self.ring, self.poly, other.poly)
        poles = [(a, list(c)) for a, c in self.poles]
        for b, coeffs in other.poles:
            _add_pole(poles, b, coeffs)
        return ZRat(self.ring, poly, poles)

    def __neg__(self):
        return self * Fraction(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ZRat):
            return ZRat.from_ratfunc(self.to_ratfunc() * other.to_ratfunc())
        poly = [c * other for c in self.poly]
        poles = [(a, [c * other for c in coeffs]) for a, coeffs in self.poles]
        return ZRat(self.ring, poly, poles)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, ZRat):
            return (self - other).is_zero()
        if other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        parts = []
        for j, c in enumerate(self.poly):
            if not c.is_zero():
                parts.append(f"({c!r})*z^{j}" if j else repr(c))
        for a, coeffs in self.poles:
            for k, c in enumerate(coeffs, start=1):
                parts.append(f"({c!r})/(z - {a!r})^{k}")
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------


def _pole_merge(pole_list, loc, e):
    for i, (a, ea) in enumerate(pole_list):
        if a == loc:
            pole_list[i] = (a, ea + e)
            return
    pole_list.append((loc, e))


def _add_pole(poles, b, coeffs):
    for i, (a, ca) in enumerate(poles):
        if a == b:
            out = list(ca) + [RatFunc(a.ring, a.ring.zero())] * \
                max(0, len(coeffs) - len(ca))
            for k, c in enumerate(coeffs):
                out[k] = out[k] + c
            poles[i] = (a, out)
            return
    poles.append((b, list(coeffs)))


def _list_add(ring, a, b):
    n = max(len(a), len(b))
    zero = RatFunc(ring, ring.zero())
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else zero
        y = b[i] if i < len(b) else zero
        out.append(x + y)
    return out


def _zpoly_mul(a, b):
    ring = a[0].ring
    zero = RatFunc(ring, ring.zero())
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _zpoly_trim(a):
    while a and a[-1].is_zero():
        a.pop()
    return a


def _zpoly_divmod(num, den):
    num = list(num)
    _zpoly_trim(num)
    dlead = den[-1]
    quot = [RatFunc(dlead.ring, dlead.ring.zero())] * \
        max(0, len(num) - len(den) + 1)
    while len(num) >= len(den):
        c = num[-1] / dlead
        d = len(num) - len(den)
        quot[d] = c
        for i, dc in enumerate(den):
            num[d + i] = num[d + i] - c * dc
        assert num[-1].is_zero(), "leading term must cancel exactly"
        _zpoly_trim(num)
    return quot, num


def _principal_part(rem, a, e, others):
    """Principal-part coefficients of rem(z)/prod-of-all-factors at pole a.

    rem: z-poly coefficients (RatFunc); pole (z-a)^e; others: remaining
    (location, order) pairs.  Returns [c1..ce], ck = coeff of (z-a)^(-k).
    Taylor-expands rem(a+u)/prod((a-b)+u)^eb to order u^(e-1).
    """
    ring = a.ring
    zero = RatFunc(ring, ring.zero())
    one = RatFunc.const(ring, 1)
    n = e  # need u^0..u^(e-1)
    # rem(a+u) truncated
    g = [zero] * n
    apow_row = [one]  # (a+u)^p coefficients, updated iteratively
    for p, c in enumerate(rem):
        if p > 0:
            apow_row = _trunc_mul(apow_row, [a, one], n)
        if c.is_zero():
            continue
        for t, w in enumerate(apow_row):
            if t < n:
                g[t] = g[t] + c * w
    # divide by ((a-b) + u)^eb for the other poles
    for b, eb in others:
        base = a - b
        inv = base.inverse()
        # (base + u)^(-1) = inv * sum_t (-inv)^t u^t
        series = [inv * ((-1) ** t) * inv**t for t in range(n)]
        for _ in range(eb):
            g = _trunc_mul(g, series, n)
    # g[t] = coeff of u^t of rem(a+u)/prod-others; the (z-a)^(-k)
    # coefficient is the u^(e-k) Taylor coefficient
    return [g[e - k] for k in range(1, e + 1)]


def _trunc_mul(a, b, n):
    ring = (a[0] if a else b[0]).ring
    zero = RatFunc(ring, ring.zero())
    out = [zero] * n
    for i, x in enumerate(a):
        if i >= n or x.is_zero():
            continue
        for j, y in enumerate(b):
            if i + j >= n:
                break
            out[i + j] = out[i + j] + x * y
    return out
