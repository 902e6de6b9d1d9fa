"""Cone-membership solver.

A series f supported at the fixed point P_k lies on the twisted cone iff

    f = Delta_k ( z * sum_m c_m(z) d/dt^m J(t, -z) |_{t=tau} )

for some z-free tau and polynomial coefficients c_m(z): J is the untwisted
spin J-function, whose correlators are explicit multinomials, and Delta_k
is the specialized diagonal transform.  The solver recovers (tau, c) from
the z^(>=0) coefficients of f grade by grade in lexicographic
(x-monomial, Q^(-1)) order, then reconstructs the z^(<0) part; comparing
that against f's own principal parts is the membership test.

Unknown slots are discovered dynamically at the first grade where they
appear with a structurally nonzero coefficient.  Products of two unsolved
slots are linearized around the current estimates inside a global sweep
loop; the converged state is re-verified exactly against every equation,
so the iteration scheme cannot affect soundness.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from .correlators import SPIN_INF, j_tail_degree
from .delta import delta_ck_data, puiseux_ring_for
from .geometry import Model, frac_part, is_integer, sectors_at
from .puiseux import PuiseuxElem, PuiseuxRing
from .ratfunc import RatFunc


class ConeSolveError(ValueError):
    pass


class LinExpr:
    """const + sum coeff[slot]*(slot - est[slot]), tracked alongside the
    estimated total value; products linearize around the estimates."""

    __slots__ = ("const", "coeffs", "est")

    def __init__(self, const, coeffs=None, est=None):
        self.const = const
        self.coeffs = dict(coeffs or {})
        self.est = est if est is not None else const

    def plus(self, other: "LinExpr") -> "LinExpr":
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out[s] + c if s in out else c
        return LinExpr(self.const + other.const, out, self.est + other.est)

    def scaled(self, c) -> "LinExpr":
        return LinExpr(self.const * c,
                       {s: v * c for s, v in self.coeffs.items()},
                       self.est * c)

    def times(self, other: "LinExpr") -> "LinExpr":
        """Exact when either factor is constant; otherwise the Newton
        linearization  a*b ~ a*est(b) + est(a)*b - est(a)*est(b)."""
        if not self.coeffs:
            return other.scaled(self.const)
        if not other.coeffs:
            return self.scaled(other.const)
        out = self.scaled(other.est).plus(other.scaled(self.est))
        correction = LinExpr(-(self.est * other.est))
        out = out.plus(correction)
        out.est = self.est * other.est
        return out


class ConeSolver:
    def __init__(self, model: Model, k: int, z_top: int = 3,
                 p_depth: int = 4, x_basis=((),), tau_lo=None,
                 tau_hi=Fraction(0), max_sweeps: int = 12):
        self.model = model
        self.k = k
        self.g = model.g
        self.dk = self.g.degrees[k - 1]
        self.sectors = sectors_at(self.g, k)
        self.z_top = z_top
        self.zc_max = z_top - 1
        self.p_depth = p_depth
        self.x_basis = tuple(tuple(x) for x in x_basis)
        self.x_width = len(self.x_basis[0]) if self.x_basis[0] else 0
        self.max_sweeps = max_sweeps
        self.pring: PuiseuxRing = puiseux_ring_for(model)
        self.delta = delta_ck_data(model, k, z_top + p_depth, self.pring)
        self.tau_lo = tau_lo
        self.tau_hi = tau_hi
        self.values: dict = {}
        self._grades: list = []
        self._pool = None
        self._base_cache: dict = {}

    # -- scalar helpers -----------------------------------------------------
    def _pf(self, rf: RatFunc) -> PuiseuxElem:
        return self.pring.scalar(rf)

    def _zero(self) -> PuiseuxElem:
        return self.pring.zero()

    def value(self, slot) -> PuiseuxElem:
        return self.values.get(slot, self._zero())

    def _slot_expr(self, slot, with_symbols: bool) -> LinExpr:
        v = self.value(slot)
        if with_symbols:
            return LinExpr(self._zero(), {slot: self.pring.one()}, v)
        return LinExpr(v)

    # -- tail bookkeeping ---------------------------------------------------
    def _tail_shift(self, m, mus, s_out) -> Fraction:
        inputs = [(m, 0)] + [(mu, 0) for mu in mus]
        return j_tail_degree(self.dk, inputs, frac_part(-s_out), SPIN_INF)

    def _tail_filter(self, m, mus, s_out) -> bool:
        total = frac_part(m) + sum((frac_part(mu) for mu in mus),
                                   Fraction(0)) + frac_part(-s_out)
        return is_integer(total)

    def _active_tau(self):
        return sorted(slot for slot, v in self.values.items()
                      if slot[0] == "tau" and not v.is_zero())

    def _active_c(self):
        return sorted(slot for slot, v in self.values.items()
                      if slot[0] == "c" and not v.is_zero())

    def _tau_in_range(self, q: Fraction) -> bool:
        if self.tau_lo is not None and q < self.tau_lo:
            return False
        return not (self.tau_hi is not None and q > self.tau_hi)

    # ------------------------------------------------------------------
    def cone_coeff(self, grade, s_idx: int, p: int,
                   with_symbols: bool, cache=None) -> LinExpr:
        """E(grade, sector, z^p) as a LinExpr over unsolved slots."""
        key = (grade, s_idx, p)
        if cache is not None and key in cache:
            return cache[key]
        xmi, q = grade
        out = LinExpr(self._zero())
        j = p - 1
        if 0 <= j <= self.zc_max:
            out = out.plus(self._slot_expr(("c", s_idx, j, xmi, q),
                                           with_symbols))
        out = out.plus(self._tail_terms(grade, s_idx, p, with_symbols))
        if cache is not None:
            cache[key] = out
        return out

    def _c_slot_pool(self, xmi, q, with_symbols: bool):
        if not with_symbols:
            return self._active_c()
        if self._pool is None:
            pool = set(self._active_c())
            for grade in self._grades:
                gx, gq = grade
                for m_idx in range(len(self.sectors)):
                    for j in range(self.zc_max + 1):
                        pool.add(("c", m_idx, j, gx, gq))
            self._pool = sorted(pool)
        return self._pool

    def _tail_terms(self, grade, s_idx: int, p: int,
                    with_symbols: bool) -> LinExpr:
        """Sum over n >= 1 of
        z*c_{m,j}z^j * (-1)^n z^(-n) * Q^shift * prod(tau)/sym over
        multisets, at z-power p = j+1-n.  The last tau factor is left free:
        the sector-sum integrality pins its sector and the grade arithmetic
        pins its Q-grade, enabling discovery of unsolved slots.  The free
        factor must dominate the rest of the multiset, so each multiset is
        counted exactly once."""
        xmi, q = grade
        s_out = self.sectors[s_idx]
        m_out = frac_part(-s_out)
        out_offset = 1 if m_out != 0 else 0
        out = LinExpr(self._zero())
        for c_slot in self._c_slot_pool(xmi, q, with_symbols):
            _, m_idx, j, cx, cq = c_slot
            m = self.sectors[m_idx]
            n = j + 1 - p
            if n < 1 or j > self.zc_max:
                continue
            c_expr = self._slot_expr(c_slot, with_symbols)
            if not c_expr.coeffs and c_expr.const.is_zero():
                continue
            sign = Fraction((-1) ** n)
            # the free tau grade must stay in range; with every base grade
            # <= tau_hi the partial sums are monotone, so prune on a bound
            bound = q - cq - Fraction(n, self.dk) - self.tau_hi - 1
            for base, base_q, base_x, base_sum, base_prod, base_w in \
                    self._base_table(n - 1, bound):
                tau_x = _x_sub(xmi, _x_add(base_x, cx))
                if tau_x is None or tau_x not in self.x_basis:
                    continue
                # sector-sum integrality pins the free sector mod 1
                mu = frac_part(-(m + base_sum + m_out))
                if mu.denominator > self.dk or self.dk % mu.denominator:
                    continue
                shift = Fraction(n, self.dk) - m - base_sum - mu - m_out + \
                    out_offset
                tau_q = q - cq - base_q - shift
                if not self._tau_in_range(tau_q):
                    continue
                mu_idx = int(mu * self.dk)
                tau_slot = ("tau", mu_idx, tau_x, tau_q)
                if base and tau_slot < base[-1]:
                    continue  # canonical split: free factor dominates
                weight = _multiset_weight(base + (tau_slot,))
                coeff = base_prod * self.model.const(sign * weight)
                term = c_expr.times(self._slot_expr(tau_slot, with_symbols))
                out = out.plus(term.scaled(coeff))
        return out

    def _base_table(self, size: int, bound: Fraction):
        """Multisets of nonzero tau slots whose Q-grades sum to >= bound,
        with combined data: (base, sum of Q-grades, sum of x-exponents,
        sum of sector reps, product of values, 1/prod(mult!)).

        Every active grade is <= tau_hi <= ... < abs bounds, so partial
        sums only decrease and branches prune early.
        """
        key = (size, bound)
        tbl = self._base_cache.get(key)
        if tbl is not None:
            return tbl
        active = sorted(self._active_tau(), key=lambda t: -t[3])
        one = self.pring.one()
        out = []

        def rec(start, left, base, base_q):
            if base_q < bound:
                return
            if left == 0:
                base_t = tuple(base)
                base_x = _x_sum([t[2] for t in base_t], self.x_width)
                if base_x is None:
                    return
                base_sum = sum((self.sectors[t[1]] for t in base_t),
                               Fraction(0))
                prod = one
                for t in base_t:
                    prod = prod * self.value(t)
                out.append((base_t, base_q, base_x, base_sum, prod,
                            _multiset_weight(base_t)))
                return
            for i in range(start, len(active)):
                slot = active[i]
                rec(i, left - 1, base + [slot], base_q + slot[3])

        rec(0, size, [], Fraction(0))
        self._base_cache[key] = out
        return out

    # ------------------------------------------------------------------
    def f_coeff_expr(self, grade, s_idx: int, p: int,
                     with_symbols: bool, cache=None) -> LinExpr:
        """z^p coefficient of f / (Delta prefactor) = sum_l e_l E_(p-l)."""
        _, e_jets = self.delta[self.sectors[s_idx]]
        out = LinExpr(self._zero())
        for l, e_l in enumerate(e_jets):
            if e_l.is_zero():
                continue
            out = out.plus(self.cone_coeff(grade, s_idx, p - l,
                                           with_symbols, cache).scaled(
                self._pf(e_l)))
        return out

    def target_rhs(self, target, grade, s_idx: int, p: int) -> PuiseuxElem:
        prefactor, _ = self.delta[self.sectors[s_idx]]
        coeff = target.get(grade, {}).get(s_idx, {}).get(p)
        if coeff is None:
            return self._zero()
        return self.pring.scalar(coeff) * prefactor.inverse()

    # ------------------------------------------------------------------
    def solve(self, target: dict, grades) -> dict:
        grades = sorted(set(grades),
                        key=lambda g1: (_x_deg(g1[0]), g1[0], -g1[1]))
        self._grades = grades
        for _ in range(self.max_sweeps):
            if not self._global_sweep(target, grades):
                break
        else:
            raise ConeSolveError("cone solve did not stabilize; enlarge "
                                 "the basis or sweep budget")
        self._final_check(target, grades)
        return {
            "tau": {s: v for s, v in self.values.items()
                    if s[0] == "tau" and not v.is_zero()},
            "c": {s: v for s, v in self.values.items()
                  if s[0] == "c" and not v.is_zero()},
            "negative": self._negative_parts(grades),
        }

    def _global_sweep(self, target, grades) -> bool:
        """Build the full linearized system across all grades, solve it,
        and install the new values; True if anything moved."""
        self._base_cache = {}
        self._pool = None
        cache: dict = {}
        rows = []
        unknowns: dict = {}
        order = []
        for grade in grades:
            for s_idx in range(len(self.sectors)):
                for p in range(0, self.z_top + 1):
                    expr = self.f_coeff_expr(grade, s_idx, p,
                                             with_symbols=True, cache=cache)
                    rhs = self.target_rhs(target, grade, s_idx, p)
                    rows.append((expr, rhs))
                    for slot, cf in expr.coeffs.items():
                        if slot not in unknowns and not cf.is_zero():
                            unknowns[slot] = len(order)
                            order.append(slot)
        if not unknowns:
            return False
        n_u = len(order)
        matrix = []
        for expr, rhs in rows:
            vec = [self._zero()] * n_u
            nonzero = False
            for slot, cf in expr.coeffs.items():
                if slot in unknowns and not cf.is_zero():
                    vec[unknowns[slot]] = cf
                    nonzero = True
            resid = rhs - expr.const
            if nonzero or not resid.is_zero():
                matrix.append((vec, resid))
        solution = _gauss(matrix, n_u)
        changed = False
        new_values = {}
        for idx, val in solution.items():
            slot = order[idx]
            if not (self.value(slot) == val):
                changed = True
            if not val.is_zero():
                new_values[slot] = val
        for slot in list(self.values):
            if slot not in new_values and not self.values[slot].is_zero():
                changed = True
        self.values = new_values
        return changed

    def _final_check(self, target, grades):
        self._base_cache = {}
        cache: dict = {}
        for grade in grades:
            for s_idx in range(len(self.sectors)):
                for p in range(0, self.z_top + 1):
                    expr = self.f_coeff_expr(grade, s_idx, p,
                                             with_symbols=False, cache=cache)
                    rhs = self.target_rhs(target, grade, s_idx, p)
                    if not (expr.const == rhs):
                        raise ConeSolveError(
                            f"no cone solution at grade {grade}, sector "
                            f"{self.sectors[s_idx]}, z^{p}")

    def _negative_parts(self, grades) -> dict:
        self._base_cache = {}
        cache: dict = {}
        out: dict = {}
        for grade in grades:
            slot = out.setdefault(grade, {})
            for s_idx, s in enumerate(self.sectors):
                prefactor, _ = self.delta[s]
                vals = {}
                for p in range(-self.p_depth, 0):
                    expr = self.f_coeff_expr(grade, s_idx, p,
                                             with_symbols=False, cache=cache)
                    pf = expr.const * prefactor
                    if pf.is_zero():
                        continue
                    if not pf.is_scalar():
                        raise ConeSolveError(
                            "negative part keeps fractional atom powers")
                    vals[p] = pf.as_ratfunc()
                if vals:
                    slot[s_idx] = vals
        return out


def _multiset_weight(slots) -> Fraction:
    w = Fraction(1)
    for c in Counter(slots).values():
        w /= factorial(c)
    return w


def _x_sum(xs, width):
    out = (0,) * width
    for x in xs:
        if len(x) != width:
            return None
        out = _x_add(out, x)
    return out


def _x_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _x_sub(a, b):
    out = tuple(x - y for x, y in zip(a, b))
    return None if any(x < 0 for x in out) else out


def _x_deg(x):
    return sum(x)


def _gauss(matrix, n_u):
    """Exact row reduction of [(vec, rhs)]; returns {column: value} for
    pivot columns with free columns set to zero.  Inconsistent rows are
    left for the final check."""
    rows = [(list(vec), rhs) for vec, rhs in matrix]
    pivots = {}
    r = 0
    for col in range(n_u):
        candidates = [i for i in range(r, len(rows))
                      if not rows[i][0][col].is_zero()]
        if not candidates:
            continue
        # cheapest pivot: fewest Puiseux terms, then fewest nonzero entries
        pr = min(candidates,
                 key=lambda i: (len(rows[i][0][col].terms),
                                sum(1 for v in rows[i][0] if v.terms)))
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        vec, rhs = rows[r]
        inv = vec[col].inverse()
        vec = [v * inv for v in vec]
        rhs = rhs * inv
        rows[r] = (vec, rhs)
        for i in range(len(rows)):
            if i != r and not rows[i][0][col].is_zero():
                f = rows[i][0][col]
                rows[i] = ([a - f * b for a, b in zip(rows[i][0], vec)],
                           rows[i][1] - f * rhs)
        pivots[col] = r
        r += 1
        if r == len(rows):
            break
    return {col: rows[ri][1] for col, ri in pivots.items()}


# ---------------------------------------------------------------------------
# targets and the C3 verifier


def laurent_target(solver: ConeSolver, restriction: dict) -> dict:
    """{grade: {sector_index: {p: RatFunc}}} from {sector: {q: ZRat}}."""
    out: dict = {}
    for s_idx, s in enumerate(solver.sectors):
        for q, zr in restriction.get(s, {}).items():
            low, coeffs = zr.laurent_at_zero(solver.z_top)
            if low < -solver.p_depth:
                raise ConeSolveError(
                    f"target pole order {-low} at z=0 exceeds p_depth "
                    f"{solver.p_depth}")
            slot = out.setdefault(((), Fraction(q)), {}).setdefault(s_idx,
                                                                    {})
            for i, c in enumerate(coeffs):
                if not c.is_zero():
                    slot[low + i] = c
    return out


def verify_c3(f, z_top: int = 3, p_depth: int = 4, q_slack=Fraction(1),
              tau_lo=None, tau_hi=Fraction(0)) -> dict:
    """Check that each fixed-point restriction of the cone point f lies on
    the twisted cone, reproducing its z^(<0) part from its z^(>=0) part."""
    model = f.model
    report = {"condition": "C3", "ok": True, "per_k": {}}
    for k in range(1, model.g.N + 1):
        solver = ConeSolver(model, k, z_top=z_top, p_depth=p_depth,
                            tau_lo=tau_lo if tau_lo is not None else
                            f.lo - 1, tau_hi=tau_hi)
        restriction = {m: f.restrict(k, m) for m in solver.sectors}
        grades = []
        q = f.lo
        while q <= f.hi + q_slack:
            grades.append(((), q))
            q += Fraction(1, model.g.d)
        target = laurent_target(solver, restriction)
        try:
            result = solver.solve(target, grades)
        except ConeSolveError as exc:
            report["ok"] = False
            report["per_k"][k] = {"ok": False, "error": str(exc)}
            continue
        mismatches = []
        for grade in grades:
            for s_idx in range(len(solver.sectors)):
                want = target.get(grade, {}).get(s_idx, {})
                got = result["negative"].get(grade, {}).get(s_idx, {})
                for p in range(-p_depth, 0):
                    a = want.get(p, model.zero())
                    b = got.get(p, model.zero())
                    if not (a == b):
                        mismatches.append({
                            "grade": f"{grade}", "sector":
                            str(solver.sectors[s_idx]), "z_power": p,
                            "target": repr(a.reduced()),
                            "cone": repr(b.reduced())})
        ok = not mismatches
        report["per_k"][k] = {"ok": ok, "mismatches": mismatches,
                              "tau_support": sorted(
                                  (s[1], str(s[3])) for s in result["tau"])}
        report["ok"] = report["ok"] and ok
    return report
