"""The explicit hypergeometric series of the theory: the equivariant
I-function in the fixed-point basis, its per-fixed-point local form, the
non-equivariant limit with nilpotent hyperplane classes, and the
epsilon-stability I-functions.

Index bookkeeping follows the printed products exactly: numerator factors
run over 0 <= b < a*w_i with <b> = <a*w_i> (weak lower bound), denominator
factors over 0 < b < a*d_j with <b> = <a*d_j> (strict bounds).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .geometry import (GitData, Model, admissible, frac_part, is_integer,
                       is_narrow, minus_rank, minus_sectors)
from .ratfunc import RatFunc
from .zfunc import ZRat


class ISeries:
    """Q-series of fixed-point-basis classes with z-rational coefficients.

    data[q] = {(k, m): ZRat}; coefficients absent within the window are
    zero, exponents outside [lo, hi] are not represented.
    """

    __slots__ = ("model", "lo", "hi", "data", "label")

    def __init__(self, model: Model, lo, hi, data=None, label=""):
        self.model = model
        self.lo, self.hi = Fraction(lo), Fraction(hi)
        self.data = {Fraction(q): dict(v) for q, v in (data or {}).items()}
        self.label = label

    def coeff(self, q, k, m) -> ZRat:
        """Coefficient of Q^q; exponents above the window are known zero,
        below the low cutoff they are unknown."""
        from .series import WindowError
        q = Fraction(q)
        if q < self.lo:
            raise WindowError(f"coefficient at Q^{q} below window cutoff "
                              f"{self.lo}")
        entry = self.data.get(q, {})
        return entry.get((k, frac_part(m)), ZRat.zero(self.model.ring))

    def restrict(self, k, m) -> dict:
        """{q: ZRat} for the (k, m) fixed-point component."""
        m = frac_part(m)
        out = {}
        for q, entry in self.data.items():
            v = entry.get((k, m))
            if v is not None and not v.is_zero():
                out[q] = v
        return out

    def entries(self):
        for q in sorted(self.data):
            for km in sorted(self.data[q]):
                yield q, km, self.data[q][km]

    def negate_z(self) -> "ISeries":
        out = {q: {km: v.negate_z() for km, v in entry.items()}
               for q, entry in self.data.items()}
        return ISeries(self.model, self.lo, self.hi, out,
                       label=self.label + "(-z)")

    def add_term(self, q, k, m, v: ZRat):
        q = Fraction(q)
        if not (self.lo <= q <= self.hi):
            return
        slot = self.data.setdefault(q, {})
        key = (k, frac_part(m))
        slot[key] = slot[key] + v if key in slot else v

    def __eq__(self, other):
        if not isinstance(other, ISeries):
            return NotImplemented
        qs = set(self.data) | set(other.data)
        for q in qs:
            a, b = self.data.get(q, {}), other.data.get(q, {})
            for km in set(a) | set(b):
                va = a.get(km, ZRat.zero(self.model.ring))
                vb = b.get(km, ZRat.zero(self.model.ring))
                if not (va == vb):
                    return False
        return True

    __hash__ = None


def _num_factor_bounds(x: Fraction):
    """b-values for a numerator product: 0 <= b < x, <b> = <x>."""
    b = frac_part(x)
    while b < x:
        yield b
        b += 1


def _den_factor_bounds(x: Fraction):
    """b-values for a denominator product: 0 < b < x, <b> = <x>."""
    b = frac_part(x)
    if b == 0:
        b = Fraction(1)
    while b < x:
        yield b
        b += 1


def local_i_coefficient(model: Model, k: int, a: Fraction) -> ZRat:
    """Coefficient of Q^(-a) of the local twisted I-function at P_k:

    z * prod_i prod_b (-b z - w_i a_k) / prod_j prod_b (b z + d_j(a_k - a_j))
    """
    g, ring = model.g, model.ring
    z = model.z()
    out = z
    for i, w in enumerate(g.weights):
        for b in _num_factor_bounds(a * w):
            out = out * (z * (-b) - model.alpha(k) * w)
    for j, d in enumerate(g.degrees, start=1):
        for b in _den_factor_bounds(a * d):
            f = z * b + (model.alpha(k) - model.alpha(j)) * d
            out = out / f
    return ZRat.from_ratfunc(out)


def local_i_function(model: Model, k: int, lo, hi) -> ISeries:
    """Remark-5.6 local series: exponents -a with a in (1/d_k)Z, a > 0."""
    lo, hi = Fraction(lo), Fraction(hi)
    dk = model.g.degrees[k - 1]
    out = ISeries(model, lo, hi, label=f"I_local[k={k}]")
    t = 1
    while Fraction(-t, dk) >= lo:
        a = Fraction(t, dk)
        if -a <= hi:
            out.add_term(-a, k, frac_part(a), local_i_coefficient(model, k, a))
        t += 1
    return out


def glsm_i_function(model: Model, lo, hi) -> ISeries:
    """The GLSM I-function over the full fixed-point basis.

    Walks a over (1/d)Z with 0 < a <= -lo and keeps (k, <a>) entries for
    every k whose degree admits the sector.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    g = model.g
    out = ISeries(model, lo, hi, label="I_GLSM")
    t = 1
    while Fraction(-t, g.d) >= lo:
        a = Fraction(t, g.d)
        if -a <= hi:
            for k in range(1, g.N + 1):
                if is_integer(a * g.degrees[k - 1]):
                    out.add_term(-a, k, frac_part(a),
                                 local_i_coefficient(model, k, a))
        t += 1
    return out


# ---------------------------------------------------------------------------
# non-equivariant I-function (nilpotent hyperplane class per sector)


class CohSeries:
    """Q-series of sector-supported H-polynomials: data[q][m] is the list
    of ZRat coefficients of H^0 .. H^(r_m - 1)."""

    __slots__ = ("model", "lo", "hi", "data")

    def __init__(self, model: Model, lo, hi, data=None):
        self.model = model
        self.lo, self.hi = Fraction(lo), Fraction(hi)
        self.data = {Fraction(q): {m: list(v) for m, v in entry.items()}
                     for q, entry in (data or {}).items()}

    def coeff(self, q, m) -> list:
        return self.data.get(Fraction(q), {}).get(frac_part(m), [])

    def is_zero_at(self, q, m) -> bool:
        return all(c.is_zero() for c in self.coeff(q, m))


def _h_mul(a: list, b: list, r: int, zero) -> list:
    out = [zero] * r
    for i, x in enumerate(a[:r]):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if i + j >= r:
                break
            out[i + j] = out[i + j] + x * y
    return out


def noneq_i_coefficient(model: Model, a: Fraction) -> dict:
    """{m: [H-coefficients]} of the Q^(-a) term of the non-equivariant
    I-function; m = <a>, truncated by the sector rank."""
    g, ring = model.g, model.ring
    m = frac_part(a)
    r = minus_rank(g, m)
    if r == 0:
        return {}
    zero = model.zero()
    z = model.z()
    coeffs = [zero] * r
    coeffs[0] = z  # global z prefactor
    for i, w in enumerate(g.weights):
        for b in _num_factor_bounds(a * w):
            coeffs = _h_mul(coeffs, [z * (-b), model.const(w)], r, zero)
    for j, d in enumerate(g.degrees, start=1):
        for b in _den_factor_bounds(a * d):
            # (b z + d H)^(-1) = (1/(bz)) sum_t (-d/(bz))^t H^t
            inv = (z * b).inverse()
            series = [inv]
            for _ in range(1, r):
                series.append(series[-1] * inv * (-d))
            coeffs = _h_mul(coeffs, series, r, zero)
    return {m: [ZRat.from_ratfunc(c) for c in coeffs]}


def noneq_i_function(model: Model, lo, hi, warn=None) -> CohSeries:
    """Lemma-7.4 non-equivariant I-function.  If (A2) fails the series is
    still produced but narrow support is not guaranteed (callers can pass
    `warn` to collect a notice)."""
    from .geometry import check_assumptions
    rep = check_assumptions(model.g)
    if not rep["a2"] and warn is not None:
        warn.append("A2 fails: narrow support not guaranteed")
    lo, hi = Fraction(lo), Fraction(hi)
    g = model.g
    out = CohSeries(model, lo, hi)
    t = 1
    while Fraction(-t, g.d) >= lo:
        a = Fraction(t, g.d)
        if -a <= hi:
            entry = noneq_i_coefficient(model, a)
            entry = {m: v for m, v in entry.items()
                     if any(not c.is_zero() for c in v)}
            if entry:
                out.data[-a] = entry
        t += 1
    return out


# ---------------------------------------------------------------------------
# epsilon-stability I-functions


def epsilon_i_function(model: Model, k: int, eps: int, lo, hi,
                       char_class=None) -> ISeries:
    """The finite wall-crossing sum

        I(Q, z) = (z/d_k) sum_{0 <= a < eps} Q^(-(a+1)/d_k) / (z^a a!)
                  * c(a) * dual(1_(-(a+1)/d_k)),

    with c(a) supplied by `char_class` (default: untwisted, c = 1).
    Entries whose class carries formal jet variables are returned as a dict
    {jet_key: ISeries-style value}; the default collapses to plain ZRats.
    """
    if eps < 0:
        raise ValueError("epsilon must be >= 0")
    lo, hi = Fraction(lo), Fraction(hi)
    dk = model.g.degrees[k - 1]
    out = ISeries(model, lo, hi, label=f"I_eps[k={k},eps={eps}]")
    for a in range(eps):
        q = Fraction(-(a + 1), dk)
        if not (lo <= q <= hi):
            continue
        m_dual = frac_part(Fraction(a + 1, dk))
        cls = model.const(1) if char_class is None else char_class(a)
        e_n = model.euler_normal(k, frac_part(Fraction(-(a + 1), dk)))
        z = model.z()
        val = z * cls * e_n * Fraction(1, factorial(a))
        for _ in range(a):
            val = val / z
        out.add_term(q, k, m_dual, ZRat.from_ratfunc(val))
    return out
