"""Exact univariate polynomials over Q, Sturm sequences and real-root isolation.

Polynomials are plain tuples of coefficients, lowest degree first, with no
trailing zeros.  The zero polynomial is the empty tuple.  Coefficients are
``int`` or :class:`fractions.Fraction`; every operation is exact.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence

Poly = tuple

X = (0, 1)


def trim(p: Sequence) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: Poly) -> int:
    return len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, scale(q, -1))


def scale(p: Poly, c) -> Poly:
    return trim(c * a for a in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def power(p: Poly, n: int) -> Poly:
    out: Poly = (1,)
    for _ in range(n):
        out = mul(out, p)
    return out


def divmod_poly(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(a) for a in p]
    lead = Fraction(q[-1])
    dq = degree(q)
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    for k in range(len(p) - len(q), -1, -1):
        c = r[k + dq] / lead
        quot[k] = c
        if c:
            for j, b in enumerate(q):
                r[k + j] -= c * b
    return _normalize(quot), _normalize(r[:dq])


def rem(p: Poly, q: Poly) -> Poly:
    return divmod_poly(p, q)[1]


def _normalize(coeffs) -> Poly:
    """Trim and turn integral fractions back into ints."""
    out = []
    for c in coeffs:
        if isinstance(c, Fraction) and c.denominator == 1:
            c = c.numerator
        out.append(c)
    return trim(out)


def derivative(p: Poly) -> Poly:
    return trim(i * a for i, a in enumerate(p))[1:] if len(p) > 1 else ()


def evaluate(p: Poly, x):
    acc = 0
    for a in reversed(p):
        acc = acc * x + a
    return acc


def primitive_part(p: Poly) -> Poly:
    """Scale a rational polynomial to a primitive integer polynomial with positive lead."""
    if not p:
        return ()
    fr = [Fraction(a) for a in p]
    den = reduce(lcm, (a.denominator for a in fr), 1)
    ints = [int(a * den) for a in fr]
    g = reduce(gcd, ints, 0)
    if ints[-1] < 0:
        g = -g
    return tuple(a // g for a in ints)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    p, q = trim(p), trim(q)
    while q:
        p, q = q, rem(p, q)
    return primitive_part(p)


def squarefree(p: Poly) -> Poly:
    p = primitive_part(p)
    if degree(p) < 1:
        return p
    g = poly_gcd(p, derivative(p))
    if degree(g) < 1:
        return p
    return primitive_part(divmod_poly(p, g)[0])


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [trim(p), derivative(p)]
    while seq[-1]:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(scale(r, -1))
    return seq


def _sign_changes(seq: list[Poly], x) -> int:
    changes, last = 0, 0
    for s in seq:
        v = evaluate(s, x)
        if v == 0:
            continue
        sign = 1 if v > 0 else -1
        if last and sign != last:
            changes += 1
        last = sign
    return changes


def count_roots(seq: list[Poly], lo, hi) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    if hi <= lo:
        return 0
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def root_bound(p: Poly) -> Fraction:
    """A power of two strictly above the modulus of every root (Cauchy bound)."""
    lead = Fraction(p[-1])
    b = 1 + max((abs(Fraction(a) / lead) for a in p[:-1]), default=Fraction(0))
    bound = Fraction(1)
    while bound <= b:
        bound *= 2
    return bound


# -- formatting / parsing -------------------------------------------------

def to_str(p: Poly, var: str = "x") -> str:
    if not p:
        return "0"
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}{mono}"
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(\*?x(?:\^(\d+))?)?")


def parse(text: str) -> Poly:
    """Parse strings such as ``x^2-3x+1`` or ``2*x - 8``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        k = (int(m.group(4)) if m.group(4) else 1) if m.group(3) else 0
        coeffs[k] = coeffs.get(k, Fraction(0)) + sign * c
        pos = m.end()
    top = max(coeffs)
    return _normalize(coeffs.get(k, 0) for k in range(top + 1))
