"""Exact spectral analysis of non-negative integer matrices and substitutions."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

from .algebraic import DEFAULT_WIDTH, AlgebraicInterval, RefinementError, dominant_eigenvalue
from .matrices import IntMatrix, char_poly
from .substitutions import Substitution, incidence_matrix, require_valid

__all__ = [
    "char_poly", "is_primitive", "dominant_eigenvalue", "substitution_eigenvalue",
    "multiplicatively_dependent", "dependence_report", "DependenceReport",
    "PrimitiveDecomposition", "primitive_decomposition", "block_form_violations",
    "condition_C_power", "ConditionCError", "SubSubstitution", "sub_substitutions",
    "frequency_vector",
]


def _pattern(m: IntMatrix) -> list[int]:
    """Positivity pattern as row bitmasks."""
    return [sum(1 << j for j, a in enumerate(r) if a > 0) for r in m.rows]


def _bool_mul(a: list[int], b: list[int]) -> list[int]:
    out = []
    for row in a:
        acc, j = 0, 0
        while row:
            if row & 1:
                acc |= b[j]
            row >>= 1
            j += 1
        out.append(acc)
    return out


def is_primitive(m: IntMatrix) -> bool:
    """Some power of m is positive; checked up to Wielandt's bound (n-1)^2 + 1."""
    n = m.size
    if n == 0:
        return False
    full = (1 << n) - 1
    p = _pattern(m)
    bound = (n - 1) ** 2 + 1
    # repeated squaring: a positive pattern stays positive for all higher powers
    k = 1
    while True:
        if all(r == full for r in p):
            return True
        if k >= bound:
            return False
        p = _bool_mul(p, p)
        k *= 2


def substitution_eigenvalue(s: Substitution, width=DEFAULT_WIDTH) -> AlgebraicInterval:
    return dominant_eigenvalue(incidence_matrix(s.morphism), width)


# -- multiplicative dependence ------------------------------------------------

@dataclass(frozen=True)
class DependenceReport:
    exponents: Optional[tuple[int, int]]
    max_exp: int
    certified: bool

    @property
    def status(self) -> str:
        if self.exponents:
            return "dependent"
        return "independent" if self.certified else f"independent up to {self.max_exp}"

    def to_json(self) -> dict:
        return {"status": self.status, "exponents": list(self.exponents) if self.exponents else None,
                "max_exp": self.max_exp, "certified": self.certified}


def _integer_dependence(a: int, b: int) -> Optional[tuple[int, int]]:
    """Least (p, q) with a^p = b^q for integers a, b > 1, by unique factorization."""
    from sympy import factorint

    fa, fb = factorint(a), factorint(b)
    if set(fa) != set(fb):
        return None
    # need p*ea = q*eb for all primes, with one common ratio
    ratios = {Fraction(fb[pr], fa[pr]) for pr in fa}
    if len(ratios) != 1:
        return None
    r = ratios.pop()  # p/q
    return r.numerator, r.denominator


def dependence_report(a: AlgebraicInterval, b: AlgebraicInterval, max_exp: int = 12) -> DependenceReport:
    """Search for the least (p, q), 1 <= p, q <= max_exp, with a^p = b^q, exactly."""
    one = AlgebraicInterval.from_int(1)
    if a.compare(one) <= 0 or b.compare(one) <= 0:
        raise ValueError("both numbers must exceed 1")
    ia, ib = a.as_integer(), b.as_integer()
    if ia is not None and ib is not None:
        pq = _integer_dependence(ia, ib)
        return DependenceReport(pq if pq and max(pq) <= max_exp else None, max_exp,
                                certified=pq is None)
    a, b = a.copy(), b.copy()
    for lo_num in (a, b):
        lo_num.refine(Fraction(1, 2**20))
    pairs = sorted(((p, q) for p in range(1, max_exp + 1) for q in range(1, max_exp + 1)
                    if gcd(p, q) == 1), key=lambda t: (t[0] + t[1], t[0]))
    powers_a: dict[int, AlgebraicInterval] = {}
    powers_b: dict[int, AlgebraicInterval] = {}
    for p, q in pairs:
        # cheap rigorous rejection from the current rational enclosures
        if a.hi ** p < b.lo ** q or b.hi ** q < a.lo ** p:
            continue
        if p not in powers_a:
            powers_a[p] = a.pow(p)
        if q not in powers_b:
            powers_b[q] = b.pow(q)
        if powers_a[p].equals(powers_b[q]):
            return DependenceReport((p, q), max_exp, certified=False)
    return DependenceReport(None, max_exp, certified=False)


def multiplicatively_dependent(a: AlgebraicInterval, b: AlgebraicInterval,
                               max_exp: int = 12) -> Optional[tuple[int, int]]:
    return dependence_report(a, b, max_exp).exponents


# -- primitive components -------------------------------------------------------

def _successors(m: IntMatrix) -> list[list[int]]:
    """Edges j -> i whenever letter j produces letter i."""
    n = m.size
    return [[i for i in range(n) if m[i, j] > 0] for j in range(n)]


def _sccs(succ: list[list[int]]) -> list[list[int]]:
    """Strongly connected components (Kosaraju, iterative), each sorted."""
    n = len(succ)
    seen = [False] * n
    finish: list[int] = []
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        stack = [(root, iter(succ[root]))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if not seen[w]:
                    seen[w] = True
                    stack.append((w, iter(succ[w])))
                    break
            else:
                stack.pop()
                finish.append(v)
    pred: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        for w in succ[v]:
            pred[w].append(v)
    comp_id = [-1] * n
    comps: list[list[int]] = []
    for root in reversed(finish):
        if comp_id[root] != -1:
            continue
        comp = [root]
        comp_id[root] = len(comps)
        todo = [root]
        while todo:
            v = todo.pop()
            for w in pred[v]:
                if comp_id[w] == -1:
                    comp_id[w] = len(comps)
                    comp.append(w)
                    todo.append(w)
        comps.append(sorted(comp))
    return comps


def _period(comp: Sequence[int], succ: list[list[int]]) -> int:
    """gcd of cycle lengths inside an SCC via BFS levels; 0 for a trivial SCC."""
    members = set(comp)
    root = comp[0]
    level = {root: 0}
    queue = deque([root])
    g = 0
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w not in members:
                continue
            if w in level:
                g = gcd(g, level[v] + 1 - level[w])
            else:
                level[w] = level[v] + 1
                queue.append(w)
    return g


@dataclass
class PrimitiveDecomposition:
    p: int
    partition: list[tuple[int, ...]]
    principal: list[bool]

    @property
    def q(self) -> int:
        return sum(1 for f in self.principal if not f)

    @property
    def components(self) -> int:
        return len(self.partition)

    def to_json(self, names: Sequence[str] = ()) -> dict:
        def nm(a):
            return names[a] if names else a
        return {"p": self.p, "q": self.q,
                "partition": [[nm(a) for a in c] for c in self.partition],
                "principal": list(self.principal)}


def primitive_decomposition(m: IntMatrix) -> PrimitiveDecomposition:
    """Partition into primitive components putting a power of m in lower block form.

    Non-principal components come first in a topological order of the
    production graph; principal ones (producing only themselves) come last.
    """
    n = m.size
    if any(all(m[i, j] == 0 for i in range(n)) for j in range(n)):
        raise ValueError("matrix has a zero column")
    succ = _successors(m)
    p = 1
    for comp in _sccs(succ):
        d = _period(comp, succ)
        if d:
            p = lcm(p, d)
    mp = m ** p
    succ_p = _successors(mp)
    comps = _sccs(succ_p)
    comp_of = {a: k for k, c in enumerate(comps) for a in c}
    out_edges = {k: set() for k in range(len(comps))}
    for j in range(n):
        for i in succ_p[j]:
            if comp_of[i] != comp_of[j]:
                out_edges[comp_of[j]].add(comp_of[i])
    sinks = [k for k in range(len(comps)) if not out_edges[k]]
    others = [k for k in range(len(comps)) if out_edges[k]]
    # Kahn's algorithm over the non-sink components, smallest letter first
    indeg = {k: 0 for k in others}
    for k in others:
        for t in out_edges[k]:
            if t in indeg:
                indeg[t] += 1
    ready = sorted((k for k in others if indeg[k] == 0), key=lambda k: comps[k][0])
    order = []
    while ready:
        k = ready.pop(0)
        order.append(k)
        for t in out_edges[k]:
            if t in indeg:
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
                    ready.sort(key=lambda c: comps[c][0])
    order += sorted(sinks, key=lambda k: comps[k][0])
    partition = [tuple(comps[k]) for k in order]
    principal = [k in sinks for k in order]
    dec = PrimitiveDecomposition(p, partition, principal)
    bad = block_form_violations(m, dec)
    if bad:
        raise AssertionError("decomposition failed its block-form check: " + "; ".join(bad))
    return dec


def block_form_violations(m: IntMatrix, dec: PrimitiveDecomposition) -> list[str]:
    """Every way m^p departs from the block-triangular primitive form; empty when valid."""
    mp = m ** dec.p
    out = []
    parts = dec.partition
    flat = sorted(a for c in parts for a in c)
    if flat != list(range(m.size)):
        out.append("partition does not cover the alphabet disjointly")
    for i, rows in enumerate(parts):
        for j, cols in enumerate(parts):
            blk = mp.block(rows, cols)
            nonzero = any(a for r in blk for a in r)
            if i == j:
                sub = IntMatrix.from_lists(blk)
                if dec.principal[i] and not is_primitive(sub):
                    out.append(f"principal block {i} is not primitive")
                if not dec.principal[i] and nonzero and not is_primitive(sub):
                    out.append(f"diagonal block {i} is neither primitive nor zero")
            elif nonzero:
                # rows = produced letters (component i), columns = producers (component j)
                if i < j:
                    out.append(f"block ({i},{j}) above the diagonal is non-zero")
                elif dec.principal[j]:
                    out.append(f"principal component {j} produces outside itself")
    for j, cols in enumerate(parts):
        if dec.principal[j]:
            continue
        feeds = any(any(a for r in mp.block(parts[i], cols) for a in r) for i in range(j + 1, len(parts)))
        if not feeds:
            out.append(f"non-principal component {j} feeds no later component")
    return out


# -- condition (C) and sub-substitutions ------------------------------------------

class ConditionCError(ValueError):
    pass


@dataclass
class SubSubstitution:
    """A primitive sub-substitution on one component, over its own letters."""

    letters: tuple[int, ...]
    substitution: Substitution
    principal: bool

    @property
    def start_letter(self) -> int:
        return self.letters[self.substitution.start]


def _component_rule(tau: Substitution, comp: Sequence[int], principal: bool) -> dict[int, tuple[int, ...]]:
    members = set(comp)
    rule = {}
    for b in comp:
        img = tau.rules[b]
        rule[b] = img if principal else tuple(c for c in img if c in members)
    return rule


def _fixed_letter(rule: dict[int, tuple[int, ...]], comp: Sequence[int], trivial: bool) -> Optional[int]:
    for a in comp:
        img = rule[a]
        if img and img[0] == a and (len(img) == 1) == trivial:
            return a
    return None


def _condition_C_failures(tau: Substitution) -> tuple[list[str], Optional[PrimitiveDecomposition]]:
    m = incidence_matrix(tau.morphism)
    dec = primitive_decomposition(m)
    fails = []
    if dec.p != 1:
        fails.append(f"C1: matrix needs power {dec.p} to reach block form")
        return fails, dec
    for comp, principal in zip(dec.partition, dec.principal):
        blk = m.submatrix(comp)
        if principal and not blk.is_positive():
            fails.append(f"C2: principal block {list(comp)} not strictly positive")
        elif not principal and not (blk.is_zero() or blk.is_positive()):
            fails.append(f"C2: block {list(comp)} neither zero nor strictly positive")
        if blk.is_zero():
            continue
        rule = _component_rule(tau, comp, principal)
        trivial = blk.size == 1 and blk[0, 0] == 1
        if _fixed_letter(rule, comp, trivial) is None:
            fails.append(f"C3: no fixed start letter on component {list(comp)}")
    return fails, dec


def condition_C_power(s: Substitution, max_k: int = 64) -> tuple[int, PrimitiveDecomposition]:
    """Least k <= max_k such that s^k satisfies condition (C)."""
    require_valid(s)
    last = []
    for k in range(1, max_k + 1):
        fails, dec = _condition_C_failures(s.power(k))
        if not fails:
            return k, dec
        last = fails
    raise ConditionCError(f"no power up to {max_k} satisfies (C); at k={max_k}: " + "; ".join(last))


def sub_substitutions(tau: Substitution) -> list[SubSubstitution]:
    """Sub-substitutions of a substitution satisfying (C), one per non-trivial component."""
    fails, dec = _condition_C_failures(tau)
    if fails:
        raise ConditionCError("; ".join(fails))
    m = incidence_matrix(tau.morphism)
    out = []
    for comp, principal in zip(dec.partition, dec.principal):
        blk = m.submatrix(comp)
        if blk.is_zero() or (blk.size == 1 and blk[0, 0] == 1):
            continue
        rule = _component_rule(tau, comp, principal)
        a = _fixed_letter(rule, comp, trivial=False)
        if a is None:
            raise ConditionCError(f"component {list(comp)} lacks a fixed letter")
        local = {b: i for i, b in enumerate(comp)}
        sub = Substitution(tuple(tuple(local[c] for c in rule[b]) for b in comp), local[a],
                           tuple(tau.names[b] for b in comp))
        if not is_primitive(incidence_matrix(sub.morphism)):
            raise AssertionError(f"sub-substitution on {list(comp)} is not primitive")
        out.append(SubSubstitution(tuple(comp), sub, principal))
    return out


# -- frequencies -------------------------------------------------------------------

def frequency_vector(s: Substitution, tolerance=Fraction(1, 10**6)) -> list[tuple[Fraction, Fraction]]:
    """Rational enclosures of the normalized Perron eigenvector of a primitive substitution.

    The normalized eigenvector lies in the convex hull of the normalized columns
    of every power M^k, so componentwise min/max over those columns bound it.
    Powers are squared until every enclosure is narrower than ``tolerance``.
    """
    m = incidence_matrix(s.morphism)
    if not is_primitive(m):
        raise ValueError("frequency vector needs a primitive substitution")
    tolerance = Fraction(tolerance)
    n = m.size
    mk = m
    for _ in range(64):
        cols = [mk.column(j) for j in range(n)]
        if all(all(c > 0 for c in col) for col in cols):
            normed = [[Fraction(c, sum(col)) for c in col] for col in cols]
            bounds = [(min(v[i] for v in normed), max(v[i] for v in normed)) for i in range(n)]
            if all(hi - lo <= tolerance for lo, hi in bounds):
                return bounds
        mk = mk @ mk
    raise RefinementError("frequency enclosure did not reach the requested tolerance")
