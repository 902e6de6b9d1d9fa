"""Genus-zero untwisted correlators at a fixed point and the J-functions
built from them.

Values reduce to psi-class integrals on the moduli of marked rational
curves; the degree bookkeeping distinguishes the point theory (gw_point)
from the infinite-stability spin theory (spin_inf), which are related by a
(2g-2+n)/d_k degree shift.  A correlator vanishes unless the sum of its
sector labels is integral (the underlying component of the moduli space is
empty otherwise) and the psi-powers use up the full dimension n-3.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from .geometry import Model, frac_part, is_integer, sectors_at
from .ratfunc import RatFunc
from .zfunc import ZRat

GW_POINT = "gw_point"
SPIN_INF = "spin_inf"


def psi_integral(a) -> Fraction:
    """Integral of psi_1^a_1 ... psi_n^a_n over the moduli of n-pointed
    genus-zero curves: (n-3)!/prod(a_i!) when the powers sum to n-3."""
    a = tuple(int(x) for x in a)
    n = len(a)
    if n < 3:
        raise ValueError("need at least three marked points")
    if any(x < 0 for x in a):
        raise ValueError("psi powers must be nonnegative")
    if sum(a) != n - 3:
        return Fraction(0)
    out = Fraction(factorial(n - 3))
    for x in a:
        out /= factorial(x)
    return out


def correlator_degree(dk: int, marks, theory: str) -> Fraction:
    """The degree at which the genus-zero correlator is supported."""
    msum = sum((frac_part(m) for m, _ in marks), Fraction(0))
    if theory == GW_POINT:
        return -msum
    if theory == SPIN_INF:
        n = len(marks)
        return Fraction(-2 + n, dk) - msum
    raise ValueError(f"unknown theory {theory!r}")


def j_tail_degree(dk: int, inputs, m_out, theory: str) -> Fraction:
    """Q-exponent of the J-function tail term with the given inputs and
    dualized output slot.

    The output slot counts with its representative in (-1, 0], so that the
    two-point pairing glues at degree zero; the inputs count in [0, 1).
    Relative to the symmetric-correlator degree this is an integer shift
    of +1 whenever the output sector is nontrivial.
    """
    marks = list(inputs) + [(m_out, 0)]
    base = correlator_degree(dk, marks, theory)
    return base + (1 if frac_part(m_out) != 0 else 0)


def untwisted_correlator(model: Model, k: int, marks, beta,
                         theory: str = GW_POINT) -> Fraction:
    """<1_(m_1) psi^a_1 ... 1_(m_n) psi^a_n> at degree beta, genus 0.

    marks: sequence of (sector, psi power).  Returns d_k^(-1) times the
    psi integral when beta sits at the supported degree and the sector sum
    is integral; 0 otherwise.
    """
    dk = model.g.degrees[k - 1]
    beta = Fraction(beta)
    marks = [(frac_part(m), int(a)) for m, a in marks]
    if beta != correlator_degree(dk, marks, theory):
        return Fraction(0)
    msum = sum((m for m, _ in marks), Fraction(0))
    if not is_integer(msum):
        return Fraction(0)  # empty sector-matching component
    return Fraction(1, dk) * psi_integral([a for _, a in marks])


# ---------------------------------------------------------------------------
# J-functions with formal insertions
#
# A JSeries maps (t-exponent tuple, Q-exponent) -> {sector: ZRat}; the
# t-variables are indexed by the sectors of P_k in the order of sectors_at.


class JSeries:
    __slots__ = ("model", "k", "theory", "lo", "hi", "t_degree", "data")

    def __init__(self, model: Model, k: int, theory: str, lo, hi,
                 t_degree: int):
        self.model = model
        self.k = k
        self.theory = theory
        self.lo, self.hi = Fraction(lo), Fraction(hi)
        self.t_degree = t_degree
        self.data: dict = {}

    def add(self, tmi, q, m, v: ZRat):
        q = Fraction(q)
        if not (self.lo <= q <= self.hi) or v.is_zero():
            return
        slot = self.data.setdefault((tmi, q), {})
        m = frac_part(m)
        slot[m] = slot[m] + v if m in slot else v

    def get(self, tmi, q, m) -> ZRat:
        return self.data.get((tuple(tmi), Fraction(q)), {}).get(
            frac_part(m), ZRat.zero(self.model.ring))


def j_function(model: Model, k: int, theory: str, lo, hi,
               t_degree: int) -> JSeries:
    """The untwisted J-function of P_k with formal insertions up to total
    degree t_degree in the sector variables t^m.

    gw_point:  J(t,z) = z 1_(0) + t + tails at degree -sum(m);
    spin_inf:  J(t,z) = Q^(1/d_k) z 1_(1/d_k) + t + tails shifted by
               (n-1)/d_k for n insertions.
    """
    g = model.g
    dk = g.degrees[k - 1]
    sectors = sectors_at(g, k)
    J = JSeries(model, k, theory, lo, hi, t_degree)
    zero_t = (0,) * len(sectors)
    z_unit = ZRat.from_ratfunc(model.z())
    if theory == GW_POINT:
        J.add(zero_t, 0, Fraction(0), z_unit)
    else:
        J.add(zero_t, Fraction(1, dk), Fraction(1, dk), z_unit)
    one = ZRat.from_ratfunc(model.const(1))
    for i, m in enumerate(sectors):
        tmi = list(zero_t)
        tmi[i] = 1
        J.add(tuple(tmi), 0, m, one)
    # tails: n >= 2 insertions, one output mark carrying the psi powers
    for n in range(2, t_degree + 1):
        for combo in combinations_with_replacement(range(len(sectors)), n):
            tmi = [0] * len(sectors)
            for i in combo:
                tmi[i] += 1
            sym = Fraction(1)
            for c in tmi:
                sym /= factorial(c)
            inputs = [(sectors[i], 0) for i in combo]
            for m_out in sectors:
                marks = inputs + [(m_out, n - 2)]
                beta = correlator_degree(dk, marks, theory)
                val = untwisted_correlator(model, k, marks, beta, theory)
                if val == 0:
                    continue
                # 1/(z - psi): psi^(n-2) contributes z^-(n-1); dual is
                # d_k * 1_(-m_out)
                coeff = sym * val * dk
                zpow = model.const(coeff)
                zm = model.z()
                for _ in range(n - 1):
                    zpow = zpow / zm
                J.add(tuple(tmi), j_tail_degree(dk, inputs, m_out, theory),
                      frac_part(-m_out), ZRat.from_ratfunc(zpow))
    return J


def z_dt_derivative(J: JSeries, sector_index: int) -> dict:
    """z * d/dt^(sector) of a JSeries, as {(tmi, q): {m: ZRat}}."""
    out: dict = {}
    z = J.model.z()
    for (tmi, q), entry in J.data.items():
        e = tmi[sector_index]
        if not e:
            continue
        t2 = list(tmi)
        t2[sector_index] -= 1
        key = (tuple(t2), q)
        slot = out.setdefault(key, {})
        for m, v in entry.items():
            w = ZRat.from_ratfunc(v.to_ratfunc() * z * e)
            slot[m] = slot[m] + w if m in slot else w
    return out


def substitute_q_shift(J: JSeries, shift_per_degree: Fraction) -> dict:
    """Apply t^m -> Q^shift t^m: move (tmi, q) to (tmi, q + |tmi|*shift)."""
    out: dict = {}
    for (tmi, q), entry in J.data.items():
        q2 = q + sum(tmi) * shift_per_degree
        slot = out.setdefault((tmi, q2), {})
        for m, v in entry.items():
            slot[m] = slot[m] + v if m in slot else v
    return out
