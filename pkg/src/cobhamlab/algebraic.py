"""Real algebraic numbers held as (square-free integer polynomial, isolating interval)."""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

from . import polys
from .matrices import IntMatrix, char_poly, companion

DEFAULT_WIDTH = Fraction(1, 10**12)


class RefinementError(ArithmeticError):
    pass


class AlgebraicInterval:
    """The unique root of ``poly`` in the half-open interval ``(lo, hi]``.

    When ``lo == hi`` the root is the rational ``lo`` and is exact.  The
    polynomial is always stored square-free and primitive so that the Sturm
    count over the interval is exactly one.
    """

    __slots__ = ("poly", "lo", "hi", "_sturm")

    def __init__(self, poly: polys.Poly, lo, hi, *, check: bool = True):
        self.poly = polys.squarefree(poly)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self._sturm = polys.sturm_sequence(self.poly)
        if check and self.root_count() != 1:
            raise ValueError(
                f"interval ({self.lo}, {self.hi}] does not isolate one root of {polys.to_str(self.poly)}"
            )

    # -- construction ------------------------------------------------------

    @classmethod
    def largest_root(cls, poly: polys.Poly, width=DEFAULT_WIDTH) -> "AlgebraicInterval":
        p = polys.squarefree(poly)
        if polys.degree(p) < 1:
            raise ValueError("constant polynomial has no roots")
        seq = polys.sturm_sequence(p)
        b = polys.root_bound(p)
        lo, hi = -b, b
        if polys.count_roots(seq, lo, hi) == 0:
            raise ValueError(f"{polys.to_str(p)} has no real root")
        while polys.count_roots(seq, lo, hi) > 1:
            mid = (lo + hi) / 2
            if polys.count_roots(seq, mid, hi) >= 1:
                lo = mid
            else:
                hi = mid
        a = cls(p, lo, hi, check=False)
        a.refine(width)
        return a

    @classmethod
    def from_int(cls, n: int) -> "AlgebraicInterval":
        return cls((-n, 1), n, n, check=False)

    @classmethod
    def from_poly_string(cls, text: str, width=DEFAULT_WIDTH) -> "AlgebraicInterval":
        return cls.largest_root(polys.parse(text), width)

    # -- basic queries -------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def root_count(self) -> int:
        if self.exact:
            return 1 if polys.evaluate(self.poly, self.lo) == 0 else 0
        return polys.count_roots(self._sturm, self.lo, self.hi)

    def __float__(self) -> float:
        return float((self.lo + self.hi) / 2)

    def __repr__(self) -> str:
        return f"AlgebraicInterval({polys.to_str(self.poly)}, ≈{float(self):.15g})"

    def copy(self) -> "AlgebraicInterval":
        a = AlgebraicInterval.__new__(AlgebraicInterval)
        a.poly, a.lo, a.hi, a._sturm = self.poly, self.lo, self.hi, self._sturm
        return a

    def refine(self, width=DEFAULT_WIDTH, max_steps: int = 4000) -> "AlgebraicInterval":
        """Bisect in place until the interval is no wider than ``width``."""
        width = Fraction(width)
        steps = 0
        while not self.exact and self.hi - self.lo > width:
            mid = (self.lo + self.hi) / 2
            if polys.evaluate(self.poly, mid) == 0:
                self.lo = self.hi = mid
                break
            if polys.count_roots(self._sturm, self.lo, mid) == 1:
                self.hi = mid
            else:
                self.lo = mid
            steps += 1
            if steps > max_steps:
                raise RefinementError("interval refinement did not converge")
        return self

    def as_integer(self) -> Optional[int]:
        """The root as an int when it is a rational integer, else None."""
        if self.exact:
            return int(self.lo) if self.lo.denominator == 1 else None
        a = self.copy().refine(Fraction(1, 4))
        if a.exact:
            return int(a.lo) if a.lo.denominator == 1 else None
        for k in (a.lo.__floor__(), a.hi.__ceil__()):
            if a.lo < k <= a.hi and polys.evaluate(self.poly, k) == 0:
                return k
        return None

    # -- exact comparisons -------------------------------------------------

    def contains_root_of(self, q: polys.Poly) -> bool:
        """True iff ``q`` vanishes at this number (decided by gcd + Sturm)."""
        q = polys.trim(q)
        if not q:
            return True
        if self.exact:
            return polys.evaluate(q, self.lo) == 0
        g = polys.poly_gcd(self.poly, q)
        if polys.degree(g) < 1:
            return False
        return polys.count_roots(polys.sturm_sequence(g), self.lo, self.hi) >= 1

    def sign_of(self, q: polys.Poly) -> int:
        """Exact sign of q evaluated at this number."""
        q = polys.trim(q)
        if not q:
            return 0
        if self.exact:
            v = polys.evaluate(q, self.lo)
            return (v > 0) - (v < 0)
        if self.contains_root_of(q):
            return 0
        qs = polys.sturm_sequence(polys.squarefree(q)) if polys.degree(q) >= 1 else None
        while qs is not None and polys.count_roots(qs, self.lo, self.hi) > 0:
            self.refine(self.width / 2)
            if self.exact:
                v = polys.evaluate(q, self.lo)
                return (v > 0) - (v < 0)
        v = polys.evaluate(q, self.hi)
        return (v > 0) - (v < 0)

    def equals(self, other: "AlgebraicInterval") -> bool:
        if self.exact:
            return other.contains_root_of((-self.lo.numerator, self.lo.denominator))
        if other.exact:
            return self.contains_root_of((-other.lo.numerator, other.lo.denominator))
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo >= hi:
            return False
        g = polys.poly_gcd(self.poly, other.poly)
        if polys.degree(g) < 1:
            return False
        return polys.count_roots(polys.sturm_sequence(g), lo, hi) >= 1

    def compare(self, other: "AlgebraicInterval") -> int:
        """-1, 0 or 1 as self <, =, > other."""
        if self.equals(other):
            return 0
        a, b = self.copy(), other.copy()
        while True:
            if a.hi < b.lo or (a.hi == b.lo and not (a.exact and b.exact)):
                return -1
            if b.hi < a.lo or (b.hi == a.lo and not (a.exact and b.exact)):
                return 1
            a.refine(a.width / 2)
            b.refine(b.width / 2)

    def __eq__(self, other):
        if not isinstance(other, AlgebraicInterval):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        return hash(self.poly)

    # -- powers --------------------------------------------------------------

    def power_poly(self, k: int) -> polys.Poly:
        """Square-free integer polynomial whose roots are the k-th powers of poly's roots."""
        if polys.degree(self.poly) == 1:
            r = Fraction(-self.poly[0], self.poly[1]) ** k
            return polys.primitive_part((-r, 1))
        c = companion(self.poly)
        return polys.squarefree(polys.primitive_part(char_poly(c ** k)))

    def pow(self, k: int) -> "AlgebraicInterval":
        """This number raised to k (requires a positive lower endpoint)."""
        a = self.copy()
        if a.lo < 0 or (a.lo == 0 and not a.exact):
            raise RefinementError("power intervals need a positive lower endpoint")
        q = self.power_poly(k)
        seq = polys.sturm_sequence(q)
        while True:
            lo, hi = a.lo ** k, a.hi ** k
            if a.exact:
                return AlgebraicInterval(q, lo, hi, check=False)
            if polys.count_roots(seq, lo, hi) == 1:
                return AlgebraicInterval(q, lo, hi, check=False)
            a.refine(a.width / 2)
            if a.width < Fraction(1, 2**3000):
                raise RefinementError("cannot isolate power")


def dominant_eigenvalue(m: IntMatrix, width=DEFAULT_WIDTH) -> AlgebraicInterval:
    """Perron root of a non-negative integer matrix as an isolating interval."""
    if m.size == 0 or m.is_zero():
        raise ValueError("zero matrix has no dominant eigenvalue")
    return AlgebraicInterval.largest_root(char_poly(m), width)
