"""The diagonal symplectic transform between untwisted and twisted point
theories, in two forms: with formal characteristic-class parameters
(truncated jets) and with the specialization that produces the inverse
equivariant Euler twist.

Per sector m the transform is exp(sum_l [...] z^l); the specialized l = 0
part exponentiates logarithms of the weight atoms and is carried exactly as
a Puiseux monomial in those atoms, while l >= 1 parts are ordinary rational
z-jet coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .bernoulli import bernoulli_poly
from .geometry import Model, frac_part, sectors_at
from .puiseux import PuiseuxElem, PuiseuxRing
from .ratfunc import RatFunc


# ---------------------------------------------------------------------------
# formal jets in the s-parameters


class Jet:
    """Polynomial in formal symbols, truncated at a total degree."""

    __slots__ = ("order", "terms")

    def __init__(self, order: int, terms=None):
        self.order = order
        self.terms = {}
        for mono, c in (terms or {}).items():
            if len(mono) <= order and c != 0:
                self.terms[tuple(sorted(mono))] = c

    @staticmethod
    def const(order: int, c) -> "Jet":
        return Jet(order, {(): Fraction(c)} if c else {})

    @staticmethod
    def sym(order: int, name: str, coeff=1) -> "Jet":
        return Jet(order, {(name,): Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Jet") -> "Jet":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return Jet(self.order, out)

    def __neg__(self) -> "Jet":
        return Jet(self.order, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Jet(self.order,
                       {m: c * other for m, c in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if len(m1) + len(m2) > self.order:
                    continue
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Jet(self.order, out)

    __rmul__ = __mul__

    def exp(self) -> "Jet":
        if () in self.terms:
            raise ValueError("exp of a jet needs zero constant term")
        out = Jet.const(self.order, 1)
        power = Jet.const(self.order, 1)
        for n in range(1, self.order + 1):
            power = power * self
            if power.is_zero():
                break
            out = out + power * Fraction(1, factorial(n))
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Jet.const(self.order, other)
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            (f"{c}" if not m else f"{c}*" + "*".join(m))
            for m, c in sorted(self.terms.items()))


def delta_transform(model: Model, k: int, s_order: int, z_order: int) -> dict:
    """Formal transform: {sector m: [Jet coefficients of z^0..z^order]}
    representing exp(sum_l [sum_i s_l^i B_(l+1)(<w_i m>)/(l+1)! +
    sum_{j != k} st_l^j B_(l+1)(<-d_j m>)/(l+1)!] z^l), jets truncated at
    total degree s_order."""
    g = model.g
    out = {}
    for m in sectors_at(g, k):
        # exponent jet per z power
        exponent = [Jet(s_order) for _ in range(z_order + 1)]
        for l in range(z_order + 1):
            for i, w in enumerate(g.weights, start=1):
                coeff = bernoulli_poly(l + 1, frac_part(m * w)) / \
                    factorial(l + 1)
                exponent[l] = exponent[l] + Jet.sym(s_order, f"s{l}_{i}",
                                                    coeff)
            for j in range(1, g.N + 1):
                if j == k:
                    continue
                coeff = bernoulli_poly(
                    l + 1, frac_part(-m * g.degrees[j - 1])) / \
                    factorial(l + 1)
                exponent[l] = exponent[l] + Jet.sym(s_order, f"st{l}_{j}",
                                                    coeff)
        # multiply the exp(exponent[l] z^l) factors together, truncated in z
        e0 = exponent[0].exp()
        coeffs = [e0] + [Jet(s_order) for _ in range(z_order)]
        for l in range(1, z_order + 1):
            # exp(exponent[l] z^l) = sum_n exponent[l]^n / n! z^(l n)
            factor = [Jet(s_order) for _ in range(z_order + 1)]
            factor[0] = Jet.const(s_order, 1)
            term, n = Jet.const(s_order, 1), 0
            while (n + 1) * l <= z_order:
                n += 1
                term = term * exponent[l] * Fraction(1, n)
                factor[n * l] = factor[n * l] + term
            new = [Jet(s_order) for _ in range(z_order + 1)]
            for p, cp in enumerate(coeffs):
                if cp.is_zero():
                    continue
                for q2, fq in enumerate(factor):
                    if p + q2 <= z_order and not fq.is_zero():
                        new[p + q2] = new[p + q2] + cp * fq
            coeffs = new
        out[m] = coeffs
    return out


# ---------------------------------------------------------------------------
# specialization to the inverse Euler twist


def atom_name_weight(w: int, k: int) -> str:
    return f"w{w}a{k}"


def atom_name_degree(j: int, k: int) -> str:
    return f"D{j}k{k}"


def puiseux_ring_for(model: Model) -> PuiseuxRing:
    g = model.g
    atoms = []
    for k in range(1, g.N + 1):
        for w in sorted(set(g.weights)):
            atoms.append(atom_name_weight(w, k))
        for j in range(1, g.N + 1):
            if j != k:
                atoms.append(atom_name_degree(j, k))
    return PuiseuxRing(model.ring, atoms, atom_values(model))


def delta_ck_data(model: Model, k: int, z_order: int,
                  pring: PuiseuxRing | None = None) -> dict:
    """Specialized transform: {sector m: (prefactor, [e_0..e_z_order])}.

    prefactor = prod_i (w_i a_k)^(-B1(<w_i m>)) *
                prod_{j != k} (d_j(a_j - a_k))^(-B1(<-d_j m>))
    as an exact Puiseux monomial; e_l are the rational z-jet coefficients
    of exp(sum_{l >= 1} c_l z^l) with

    c_l = sum_i (l-1)!/(-w_i a_k)^l * B_(l+1)(<w_i m>)/(l+1)!
        + sum_{j != k} (l-1)!/(d_j a_k - d_j a_j)^l * B_(l+1)(<-d_j m>)/(l+1)!
    """
    g = model.g
    pring = pring or puiseux_ring_for(model)
    out = {}
    for m in sectors_at(g, k):
        exps: dict = {}
        for w in g.weights:
            name = atom_name_weight(w, k)
            exps[name] = exps.get(name, Fraction(0)) - \
                bernoulli_poly(1, frac_part(m * w))
        for j in range(1, g.N + 1):
            if j != k:
                name = atom_name_degree(j, k)
                exps[name] = exps.get(name, Fraction(0)) - \
                    bernoulli_poly(1, frac_part(-m * g.degrees[j - 1]))
        prefactor = pring.monomial(exps)
        cs = [model.zero()]
        for l in range(1, z_order + 1):
            c = model.zero()
            for w in g.weights:
                s_l = model.const(factorial(l - 1)) / \
                    ((-model.alpha(k) * w) ** l)
                c = c + s_l * bernoulli_poly(l + 1, frac_part(m * w)) * \
                    Fraction(1, factorial(l + 1))
            for j in range(1, g.N + 1):
                if j == k:
                    continue
                d = g.degrees[j - 1]
                st_l = model.const(factorial(l - 1)) / \
                    (((model.alpha(k) - model.alpha(j)) * d) ** l)
                c = c + st_l * bernoulli_poly(
                    l + 1, frac_part(-m * d)) * Fraction(1, factorial(l + 1))
            cs.append(c)
        out[m] = (prefactor, exp_jet(model, cs, z_order))
    return out


def exp_jet(model: Model, cs: list, z_order: int) -> list:
    """exp(sum_{l>=1} cs[l] z^l) as [e_0..e_z_order] (RatFunc), via
    E' = L' E."""
    e = [model.const(1)]
    for n in range(1, z_order + 1):
        acc = model.zero()
        for l in range(1, n + 1):
            if l < len(cs):
                acc = acc + cs[l] * l * e[n - l]
        e.append(acc * Fraction(1, n))
    return e


def atom_values(model: Model) -> dict:
    """The closed-form RatFunc value of each atom (for checks that
    eliminate the formal fractional powers, e.g. squares)."""
    g = model.g
    vals = {}
    for k in range(1, g.N + 1):
        for w in sorted(set(g.weights)):
            vals[atom_name_weight(w, k)] = model.alpha(k) * w
        for j in range(1, g.N + 1):
            if j != k:
                vals[atom_name_degree(j, k)] = \
                    (model.alpha(j) - model.alpha(k)) * g.degrees[j - 1]
    return vals
