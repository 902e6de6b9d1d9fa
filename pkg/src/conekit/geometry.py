"""GIT input data, Chen-Ruan sector tables for both phases, assumption
checkers, fixed-point Euler classes and the equivariant pairing.

Everything downstream is a function of the weights (w_1..w_M) and degrees
(d_1..d_N) alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .poly import ParamRing
from .ratfunc import RatFunc


def frac_part(x) -> Fraction:
    """<x>: the representative of x mod 1 in [0, 1)."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def is_integer(x) -> bool:
    return Fraction(x).denominator == 1


@dataclass(frozen=True)
class GitData:
    weights: tuple[int, ...]
    degrees: tuple[int, ...]

    def __post_init__(self):
        if not self.weights or not self.degrees:
            raise ValueError("need at least one weight and one degree")
        if any(w <= 0 for w in self.weights) or \
                any(d <= 0 for d in self.degrees):
            raise ValueError("weights and degrees must be positive")
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "degrees", tuple(self.degrees))

    @property
    def M(self) -> int:
        return len(self.weights)

    @property
    def N(self) -> int:
        return len(self.degrees)

    @property
    def d(self) -> int:
        """lcm of the degrees; all sector denominators divide it."""
        return lcm(*self.degrees)

    @property
    def big_d(self) -> int:
        """D = rank of the minus-phase state space = sum of degrees."""
        return sum(self.degrees)

    def gcd_ok(self) -> bool:
        return gcd(*(self.weights + self.degrees)) == 1


# ---------------------------------------------------------------------------
# assumptions


def check_assumptions(g: GitData) -> dict:
    """(A1) w_i | d_j for all i, j; (A2) the index inequality; CY."""
    a1 = all(d % w == 0 for w in g.weights for d in g.degrees)
    a2, witness = True, None
    L = lcm(lcm(*g.weights), g.d)
    for t in range(L):
        m = Fraction(t, L)
        if any(is_integer(m * w) for w in g.weights):
            ni = sum(1 for w in g.weights if is_integer(m * w))
            nj = sum(1 for d in g.degrees if is_integer(m * d))
            if ni < nj:
                a2, witness = False, m
                break
    cy = sum(g.weights) == sum(g.degrees)
    report = {"gcd_ok": g.gcd_ok(), "a1": a1, "a2": a2, "cy": cy}
    if witness is not None:
        report["a2_witness"] = witness
    return report


# ---------------------------------------------------------------------------
# sectors


def minus_sectors(g: GitData) -> list[Fraction]:
    """Sectors of the minus phase: m with some m*d_j integral."""
    return [Fraction(t, g.d) for t in range(g.d)
            if any(is_integer(Fraction(t, g.d) * d) for d in g.degrees)]


def plus_sectors(g: GitData) -> list[Fraction]:
    L = lcm(*g.weights)
    return [Fraction(t, L) for t in range(L)
            if any(is_integer(Fraction(t, L) * w) for w in g.weights)]


def minus_rank(g: GitData, m) -> int:
    return sum(1 for d in g.degrees if is_integer(Fraction(m) * d))


def plus_rank(g: GitData, m) -> int:
    return sum(1 for w in g.weights if is_integer(Fraction(m) * w))


def is_narrow(g: GitData, m) -> bool:
    m = Fraction(m)
    return any(is_integer(m * d) for d in g.degrees) and \
        not any(is_integer(m * w) for w in g.weights)


def narrow_sectors(g: GitData) -> list[Fraction]:
    return [m for m in minus_sectors(g) if is_narrow(g, m)]


def admissible(g: GitData, k: int, m) -> bool:
    """(k, m) indexes a fixed-point basis element iff m*d_k is integral."""
    return is_integer(Fraction(m) * g.degrees[k - 1])


def fixed_point_labels(g: GitData, m) -> list[int]:
    return [k for k in range(1, g.N + 1) if admissible(g, k, m)]


def sectors_at(g: GitData, k: int) -> list[Fraction]:
    dk = g.degrees[k - 1]
    return [Fraction(t, dk) for t in range(dk)]


def state_rank_check(g: GitData) -> dict:
    minus_total = sum(minus_rank(g, m) for m in minus_sectors(g))
    plus_total = sum(plus_rank(g, m) for m in plus_sectors(g))
    cy = sum(g.weights) == sum(g.degrees)
    return {
        "minus_rank": minus_total,
        "plus_rank": plus_total,
        "minus_ok": minus_total == sum(g.degrees),
        "plus_ok": plus_total == sum(g.weights),
        "cy": cy,
        "ranks_match": minus_total == plus_total,
    }


# ---------------------------------------------------------------------------
# the ambient parameter ring


class Model:
    """A GitData together with its parameter ring and cached tables.

    Parameters: z, the torus weights a1..aN, the exponentials X1..XN
    (standing for e^{a_k}), u (standing for e^{-H}), and PI (the formal
    symbol pi*i used by quantum Serre duality).
    """

    def __init__(self, g: GitData, extra_params=(), reduce_threshold: int = 40):
        self.g = g
        names = ["z"] + [f"a{k}" for k in range(1, g.N + 1)] + \
            [f"X{k}" for k in range(1, g.N + 1)] + ["u", "PI"] + \
            list(extra_params)
        self.ring = ParamRing(tuple(names), cyc_order=2 * g.d,
                              reduce_threshold=reduce_threshold)
        self._cache: dict = {}

    # conveniences ------------------------------------------------------
    def z(self) -> RatFunc:
        return RatFunc.var(self.ring, "z")

    def alpha(self, k: int) -> RatFunc:
        return RatFunc.var(self.ring, f"a{k}")

    def X(self, k: int) -> RatFunc:
        return RatFunc.var(self.ring, f"X{k}")

    def u(self) -> RatFunc:
        return RatFunc.var(self.ring, "u")

    def pi_i(self) -> RatFunc:
        return RatFunc.var(self.ring, "PI")

    def const(self, c) -> RatFunc:
        return RatFunc.const(self.ring, c)

    def zero(self) -> RatFunc:
        return RatFunc(self.ring, self.ring.zero())

    def root(self, q) -> RatFunc:
        """e^{2 pi i q} as a ring constant (q rational, 2d*q integral)."""
        from .field import CycNum
        return self.const(CycNum.exp_two_pi_i(q, self.ring.cyc_order))

    # geometry ------------------------------------------------------------
    def euler_normal(self, k: int, m) -> RatFunc:
        """e_T of the normal bundle of the fixed point P_k in X_(m):
        prod over j != k with m*d_j integral of d_j(a_k - a_j)."""
        m = Fraction(m)
        if not admissible(self.g, k, m):
            raise ValueError(f"(k={k}, m={m}) not admissible")
        key = ("eN", k, m)
        if key not in self._cache:
            out = self.const(1)
            for j in range(1, self.g.N + 1):
                if j != k and is_integer(m * self.g.degrees[j - 1]):
                    out = out * (self.alpha(k) - self.alpha(j)) * \
                        self.g.degrees[j - 1]
            self._cache[key] = out
        return self._cache[key]

    def pairing_diag(self, k: int, m) -> RatFunc:
        """(1^k_(m), 1^k_(-m)) = 1 / (d_k e_T(N_k^m))."""
        dk = self.g.degrees[k - 1]
        return self.const(Fraction(1, dk)) / self.euler_normal(k, m)

    def pairing(self, a: dict, b: dict) -> RatFunc:
        """Equivariant Poincare pairing of two fixed-point-basis classes,
        given as {(k, m): RatFunc}."""
        out = self.zero()
        for (k, m), ca in a.items():
            mb = frac_part(-Fraction(m))
            cb = b.get((k, mb))
            if cb is not None:
                out = out + ca * cb * self.pairing_diag(k, m)
        return out

    def alpha_pole(self, k: int, kp: int, beta) -> RatFunc:
        """alpha^beta_{k,k'} = (a_{k'} - a_k)/beta."""
        beta = Fraction(beta)
        return (self.alpha(kp) - self.alpha(k)) * (1 / beta)


def edge_degree_set(g: GitData, k: int, kp: int, m, mp, cutoff) -> list[Fraction]:
    """E^{m,m'}_{k,k'} = {beta in Z - m - m' : cutoff <= beta < 0}."""
    if k == kp:
        raise ValueError("no edges between equal fixed points")
    m, mp, cutoff = Fraction(m), Fraction(mp), Fraction(cutoff)
    start = -frac_part(m + mp)  # largest element candidate <= 0
    if start == 0:
        start = Fraction(-1)
    out = []
    b = start
    while b >= cutoff:
        out.append(b)
        b -= 1
    return out
