"""Localization graphs, their closed-form contributions, and the
recursion/pole-structure verifiers of the cone characterization.

Conventions: a series f handed to the verifiers is a cone point, i.e. the
generating formulas evaluated at -z (the I-function as produced by
conekit.hyper must be passed through .negate_z() first).  The residue
recursion compares, per Q-exponent q,

    Res_{z=(a_k' - a_k)/beta} f_{k,m}  against
    RC^{m,m'}_{k,k'}(beta) * f_{k',-m'}(Q-exponent q - beta) at that z.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product

from .geometry import (GitData, Model, admissible, edge_degree_set,
                       fixed_point_labels, frac_part, is_integer, sectors_at)
from .hyper import ISeries
from .ratfunc import RatFunc
from .series import WindowError
from .zfunc import ZRat


# ---------------------------------------------------------------------------
# closed-form contributions


def _b_values(target: Fraction, upper: Fraction, include_zero: bool,
              include_upper: bool):
    """b with <b> = <target>, 0 <= b (or 0 < b) and b < upper (or <=)."""
    b = frac_part(target)
    if b == 0 and not include_zero:
        b = Fraction(1)
    while b < upper or (include_upper and b == upper):
        yield b
        b += 1


def recursion_coefficient(model: Model, k: int, kp: int, m, mp,
                          beta) -> RatFunc:
    """RC^{m,m'}_{k,k'}(beta): numerator b in [0, -beta w_i), denominator
    b in (0, -beta d_j], zero factors omitted."""
    g = model.g
    m, mp, beta = frac_part(m), frac_part(mp), Fraction(beta)
    if k == kp:
        raise ValueError("recursion needs distinct fixed points")
    if not (beta < 0 and is_integer(beta + m + mp)):
        raise ValueError(f"beta={beta} not in E^{{{m},{mp}}}_{{{k},{kp}}}")
    ak, akp = model.alpha(k), model.alpha(kp)
    out = model.const(Fraction(1, g.degrees[kp - 1])) / model.const(beta)
    for w in g.weights:
        for b in _b_values(m * w, -beta * w, include_zero=True,
                           include_upper=False):
            out = out * ((akp - ak) * (b / beta) - ak * w)
    for j, d in enumerate(g.degrees, start=1):
        for b in _b_values(m * d, -beta * d, include_zero=False,
                           include_upper=True):
            f = (ak - akp) * (b / beta) + (ak - model.alpha(j)) * d
            if not f.is_zero():  # primed product: skip exact zeros
                out = out / f
    return out


def edge_contribution(model: Model, k: int, kp: int, m, mp, beta) -> RatFunc:
    """Contr(e): numerator b in (0, -beta w_i), denominator b in
    [0, -beta d_j], zero factors omitted."""
    g = model.g
    m, mp, beta = frac_part(m), frac_part(mp), Fraction(beta)
    if not (beta < 0 and is_integer(beta + m + mp)):
        raise ValueError(f"beta={beta} not an edge degree for ({m},{mp})")
    ak, akp = model.alpha(k), model.alpha(kp)
    pref = Fraction(1, g.degrees[k - 1] * g.degrees[kp - 1])
    out = model.const(pref) / model.const(beta)
    for w in g.weights:
        for b in _b_values(m * w, -beta * w, include_zero=False,
                           include_upper=False):
            out = out * ((akp - ak) * (b / beta) - ak * w)
    for j, d in enumerate(g.degrees, start=1):
        for b in _b_values(m * d, -beta * d, include_zero=True,
                           include_upper=True):
            f = (ak - akp) * (b / beta) + (ak - model.alpha(j)) * d
            if not f.is_zero():
                out = out / f
    return out


def unstable_vertex_contribution(model: Model, k_v: int, k_ve: int, beta_e,
                                 a: int) -> RatFunc:
    """((a_{k_v} - a_{k_ve}) / beta_e)^a, the psi-class specialization."""
    beta_e = Fraction(beta_e)
    base = (model.alpha(k_v) - model.alpha(k_ve)) * (1 / beta_e)
    return base**a


def flag_contribution(model: Model, k: int, m) -> RatFunc:
    """e_T of the fixed-point normal bundle (stable flags)."""
    return model.euler_normal(k, m)


def rc_edge_relation_gap(model: Model, k: int, m) -> RatFunc:
    """RC / (d_k e_T(N) Contr(e)) as forced by the residue identity:
    the product of the b=0 numerator factors (-w_i a_k) over the i with
    <m w_i> = 0.  Equals 1 exactly when no weight sees the sector."""
    out = model.const(1)
    for w in model.g.weights:
        if is_integer(frac_part(m) * w):
            out = out * (-model.alpha(k) * w)
    return out


# ---------------------------------------------------------------------------
# decorated localization trees


@dataclass(frozen=True)
class LocGraph:
    """A decorated tree.  Vertices are 0-indexed; edges are pairs (i, j)
    with i < j; flags[(v, e)] is the multiplicity at vertex v of edge e;
    marks[i] is the vertex carrying marked point i."""

    n_vertices: int
    edges: tuple
    k: tuple              # k_v per vertex
    beta_v: tuple         # degree per vertex
    beta_e: tuple         # degree per edge (parallel to edges)
    flags: tuple          # ((v, e_index, m), ...)
    marks: tuple          # vertex index per marked point
    aut: int = 1

    def flag_map(self) -> dict:
        return {(v, e): m for v, e, m in self.flags}

    def valence(self, v: int) -> int:
        return sum(1 for (a, b) in self.edges if v in (a, b)) + \
            sum(1 for mv in self.marks if mv == v)

    def is_stable(self, v: int) -> bool:
        val = self.valence(v)
        return val > 2 or (val == 2 and self.beta_v[v] < 0)

    def total_degree(self) -> Fraction:
        return sum(self.beta_v, Fraction(0)) + sum(self.beta_e, Fraction(0))

    def to_json(self) -> dict:
        return {
            "vertices": [{"k": self.k[i], "beta": str(self.beta_v[i])}
                         for i in range(self.n_vertices)],
            "edges": [{"ends": list(self.edges[i]),
                       "beta": str(self.beta_e[i])}
                      for i in range(len(self.edges))],
            "flags": [{"vertex": v, "edge": e, "m": str(m)}
                      for v, e, m in self.flags],
            "marks": list(self.marks),
            "aut": self.aut,
        }


def _labeled_trees(n: int):
    """All labeled trees on n vertices (edge lists), via Prufer sequences."""
    import heapq
    if n == 1:
        yield ()
        return
    if n == 2:
        yield ((0, 1),)
        return
    for seq in product(range(n), repeat=n - 2):
        degree = [1] * n
        for s in seq:
            degree[s] += 1
        leaves = [v for v in range(n) if degree[v] == 1]
        heapq.heapify(leaves)
        edges = []
        for s in seq:
            leaf = heapq.heappop(leaves)
            edges.append((min(leaf, s), max(leaf, s)))
            degree[leaf] -= 1
            degree[s] -= 1
            if degree[s] == 1:
                heapq.heappush(leaves, s)
        u, v = heapq.heappop(leaves), heapq.heappop(leaves)
        edges.append((min(u, v), max(u, v)))
        yield tuple(sorted(edges))


def _beta_v_choices(dk: int, budget: Fraction, stable_needs_neg: bool):
    """Degrees 0, -1/dk, -2/dk, ... >= budget (budget <= 0)."""
    out = []
    t = 0
    while Fraction(-t, dk) >= budget:
        b = Fraction(-t, dk)
        if not (stable_needs_neg and b == 0):
            out.append(b)
        t += 1
    return out


def enumerate_graphs(model: Model, mark_sectors, beta, max_edges: int = 4,
                     beta_e_cutoff=Fraction(-3)) -> list[LocGraph]:
    """Complete list of decorated localization trees for the given marked
    sectors and total degree, within the bounds; deduplicated up to
    decorated isomorphism with |Aut| recorded."""
    g = model.g
    beta = Fraction(beta)
    n = len(mark_sectors)
    mark_sectors = tuple(frac_part(m) for m in mark_sectors)
    raw: dict = {}
    for n_v in range(1, max_edges + 2):
        for edges in set(_labeled_trees(n_v)):
            if len(edges) > max_edges:
                continue
            for assignment in _decorate(model, n_v, edges, mark_sectors,
                                        beta, beta_e_cutoff):
                key = _canonical_form(assignment)
                raw.setdefault(key, []).append(assignment)
    out = []
    from math import factorial
    for key, items in sorted(raw.items()):
        rep = items[0]
        distinct = len({_relabel_key(rep, perm)
                        for perm in permutations(range(rep.n_vertices))})
        aut = factorial(rep.n_vertices) // distinct
        out.append(LocGraph(rep.n_vertices, rep.edges, rep.k, rep.beta_v,
                            rep.beta_e, rep.flags, rep.marks, aut))
    return out


def _decorate(model: Model, n_v: int, edges, mark_sectors, beta, cutoff):
    g = model.g
    n = len(mark_sectors)
    adjacency = {v: [] for v in range(n_v)}
    for idx, (a, b) in enumerate(edges):
        adjacency[a].append((idx, b))
        adjacency[b].append((idx, a))
    # no valence-1 vertices allowed (no rational tails at epsilon = 0)
    for assign in product(range(n_v), repeat=n):
        val = {v: len(adjacency[v]) for v in range(n_v)}
        for mv in assign:
            val[mv] += 1
        if any(val[v] < 2 for v in range(n_v)):
            continue
        for ks in product(range(1, g.N + 1), repeat=n_v):
            if any(ks[a] == ks[b] for a, b in edges):
                continue
            yield from _decorate_degrees(model, n_v, edges, adjacency,
                                         mark_sectors, assign, ks, val,
                                         beta, cutoff)


def _decorate_degrees(model: Model, n_v, edges, adjacency, mark_sectors,
                      assign, ks, val, beta, cutoff):
    g = model.g
    # flag multiplicities per (vertex, edge): admissible at k_v
    flag_slots = []
    for idx, (a, b) in enumerate(edges):
        flag_slots.append(((a, idx), (b, idx)))
    options = []
    for (va, idx), (vb, _) in flag_slots:
        opts_a = sectors_at(g, ks[va])
        opts_b = sectors_at(g, ks[vb])
        options.append([(ma, mb) for ma in opts_a for mb in opts_b])
    for flag_choice in product(*options):
        # unstable candidates: val == 2 with one mark and one edge must
        # carry flag <-m_mark>; enforced below once degrees are fixed
        edge_beta_options = []
        ok = True
        for idx, (a, b) in enumerate(edges):
            ma, mb = flag_choice[idx]
            es = edge_degree_set(g, ks[a], ks[b], ma, mb, cutoff)
            if not es:
                ok = False
                break
            edge_beta_options.append(es)
        if not ok:
            continue
        for ebetas in product(*edge_beta_options):
            budget = beta - sum(ebetas, Fraction(0))
            if budget > 0:
                continue
            yield from _decorate_vertex_degrees(
                model, n_v, edges, mark_sectors, assign, ks, val,
                flag_choice, ebetas, budget)


def _decorate_vertex_degrees(model: Model, n_v, edges, mark_sectors, assign,
                             ks, val, flag_choice, ebetas, budget):
    g = model.g

    def rec(v, remaining, acc):
        if v == n_v:
            if remaining == 0:
                flags = []
                for idx, (a, b) in enumerate(edges):
                    ma, mb = flag_choice[idx]
                    flags.append((a, idx, ma))
                    flags.append((b, idx, mb))
                graph = LocGraph(n_v, tuple(edges), tuple(ks), tuple(acc),
                                 tuple(ebetas), tuple(sorted(flags)),
                                 tuple(assign))
                if _graph_valid(model, graph, mark_sectors):
                    yield graph
            return
        dk = g.degrees[ks[v] - 1]
        for b in _beta_v_choices(dk, remaining, stable_needs_neg=False):
            yield from rec(v + 1, remaining - b, acc + [b])

    yield from rec(0, budget, [])


def _graph_valid(model: Model, graph: LocGraph, mark_sectors) -> bool:
    fm = graph.flag_map()
    for v in range(graph.n_vertices):
        val = graph.valence(v)
        marks_here = [i for i, mv in enumerate(graph.marks) if mv == v]
        edges_here = [idx for idx, e in enumerate(graph.edges) if v in e]
        if val < 2:
            return False
        if val == 2 and graph.beta_v[v] == 0:
            # unstable: exactly one mark and one edge, flag = <-m_mark>
            if len(marks_here) != 1 or len(edges_here) != 1:
                return False
            m_mark = mark_sectors[marks_here[0]]
            if fm[(v, edges_here[0])] != frac_part(-m_mark):
                return False
    return True


def _canonical_form(graph: LocGraph):
    return min(_relabel_key(graph, perm)
               for perm in permutations(range(graph.n_vertices)))


def _relabel_key(graph: LocGraph, perm):
    edges = []
    emap = {}
    for idx, (a, b) in enumerate(graph.edges):
        e2 = (min(perm[a], perm[b]), max(perm[a], perm[b]))
        edges.append((e2, graph.beta_e[idx]))
        emap[idx] = e2
    edges_sorted = sorted(edges)
    eindex = {e: i for i, (e, _) in enumerate(edges_sorted)}
    flags = sorted((perm[v], eindex[emap[e]], m) for v, e, m in graph.flags)
    verts = [None] * graph.n_vertices
    for v in range(graph.n_vertices):
        verts[perm[v]] = (graph.k[v], graph.beta_v[v])
    marks = tuple(perm[mv] for mv in graph.marks)
    return (tuple(verts), tuple(e for e, _ in edges_sorted),
            tuple(b for _, b in edges_sorted), tuple(flags), marks)


# ---------------------------------------------------------------------------
# graph sums


def assemble_graph_sum(model: Model, graphs, oracle, mark_data) -> RatFunc:
    """Sum over graphs of 1/|Aut| times vertex, edge and flag factors.

    mark_data: [(sector, psi power)] per marked point.  `oracle` computes
    stable-vertex integrals: oracle(k, marks, flags, beta_v) with flags
    given as (sector, propagator RatFunc); a failure is re-raised with the
    offending graph attached.
    """
    total = model.zero()
    for graph in graphs:
        fm = graph.flag_map()
        term = model.const(Fraction(1, graph.aut))
        for idx, (a, b) in enumerate(graph.edges):
            term = term * edge_contribution(model, graph.k[a], graph.k[b],
                                            fm[(a, idx)], fm[(b, idx)],
                                            graph.beta_e[idx])
        for v in range(graph.n_vertices):
            marks_here = [mark_data[i] for i, mv in enumerate(graph.marks)
                          if mv == v]
            edges_here = [(idx, e) for idx, e in enumerate(graph.edges)
                          if v in e]
            if graph.is_stable(v):
                flags = []
                for idx, (a, b) in edges_here:
                    other = graph.k[b] if v == a else graph.k[a]
                    # propagator denominator (alpha_{k'} - alpha_{k_v})/beta_e
                    x = (model.alpha(other) - model.alpha(graph.k[v])) / \
                        model.const(graph.beta_e[idx])
                    flags.append((fm[(v, idx)], x))
                    term = term * flag_contribution(model, graph.k[v],
                                                    fm[(v, idx)])
                try:
                    term = term * oracle(graph.k[v], marks_here, flags,
                                         graph.beta_v[v])
                except Exception as exc:
                    raise RuntimeError(
                        f"vertex oracle failed on graph "
                        f"{graph.to_json()}: {exc}") from exc
            else:
                (idx, e), = edges_here
                other = graph.k[e[1]] if v == e[0] else graph.k[e[0]]
                (m_i, a_i), = marks_here
                term = term * unstable_vertex_contribution(
                    model, graph.k[v], other, graph.beta_e[idx], a_i)
        total = total + term
    return total


def untwisted_point_oracle(model: Model):
    """A concrete stable-vertex oracle: untwisted point-theory correlators
    with propagator insertions expanded in psi."""
    from .correlators import GW_POINT, untwisted_correlator

    def oracle(k, marks, flags, beta_v):
        dk = model.g.degrees[k - 1]
        dim = len(marks) + len(flags) - 3
        out = model.zero()
        zero = model.zero()

        def rec(i, acc_marks, weight):
            nonlocal out
            if i == len(flags):
                from .correlators import correlator_degree
                val = untwisted_correlator(
                    model, k, acc_marks,
                    correlator_degree(dk, acc_marks, GW_POINT), GW_POINT)
                if val != 0:
                    out = out + weight * model.const(val)
                return
            m, x = flags[i]
            for j in range(0, dim + 1):
                w = weight * model.const(dk) / x ** (j + 1)
                rec(i + 1, acc_marks + [(m, j)], w)

        rec(0, list(marks), model.const(1))
        return out

    return oracle


# ---------------------------------------------------------------------------
# verifiers


def classify_pole(model: Model, k: int, m, loc: RatFunc):
    """Match a z-pole location against the allowed set: returns
    ('zero',), ('edge', k', m', beta) or None."""
    if loc.is_zero():
        return ("zero",)
    g = model.g
    for kp in range(1, g.N + 1):
        if kp == k:
            continue
        ratio = (model.alpha(kp) - model.alpha(k)) / loc
        try:
            c = ratio.const_value()
        except ValueError:
            continue
        if not c.is_rational():
            continue
        beta = c.as_rational()
        if beta >= 0:
            continue
        mp = frac_part(-beta - frac_part(m))
        if admissible(g, kp, mp):
            return ("edge", kp, mp, beta)
    return None


def verify_c1(f: ISeries) -> dict:
    """Pole-structure check: every z-pole of every coefficient is z=0 or a
    predicted edge pole."""
    model = f.model
    entries = []
    ok = True
    for q, (k, m), v in f.entries():
        for loc in v.pole_locations():
            cls = classify_pole(model, k, m, loc)
            good = cls is not None
            ok = ok and good
            entries.append({
                "q": str(q), "k": k, "m": str(m),
                "pole": repr(loc.reduced()),
                "class": list(map(str, cls)) if cls else None,
                "ok": good,
            })
    return {"condition": "C1", "ok": ok, "poles": entries}


def verify_c2(f: ISeries, beta_cutoff=Fraction(-3), q_min=None) -> dict:
    """Residue recursion check, matched per Q-exponent.

    f must be the cone-point normalization (generating series at -z).
    """
    model = f.model
    g = model.g
    q_min = Fraction(q_min) if q_min is not None else f.lo
    if q_min < f.lo:
        raise WindowError(
            f"insufficient window: need exponents down to {q_min}, "
            f"series starts at {f.lo}")
    mismatches = []
    checked = 0
    for k in range(1, g.N + 1):
        for kp in range(1, g.N + 1):
            if kp == k:
                continue
            for m in sectors_at(g, k):
                for mp in sectors_at(g, kp):
                    for beta in edge_degree_set(g, k, kp, m, mp, beta_cutoff):
                        loc = model.alpha_pole(k, kp, beta)
                        rc = recursion_coefficient(model, k, kp, m, mp, beta)
                        q = q_min
                        qs = []
                        while q <= f.hi:
                            qs.append(q)
                            q += Fraction(1, g.d)
                        for q in qs:
                            lhs = f.coeff(q, k, m).residue_at(loc)
                            rhs_series = f.coeff(q - beta, kp, -mp)
                            rhs = rc * rhs_series.eval_at(loc)
                            checked += 1
                            if not (lhs == rhs):
                                mismatches.append({
                                    "tuple": (k, kp, str(m), str(mp),
                                              str(beta)),
                                    "q": str(q),
                                    "lhs": repr(lhs.reduced()),
                                    "rhs": repr(rhs.reduced()),
                                })
    return {"condition": "C2", "ok": not mismatches, "checked": checked,
            "mismatches": mismatches}
