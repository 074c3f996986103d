"""Numeration systems, greedy representations, Parry data and β-expansions."""
from __future__ import annotations

import bisect
import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from . import polys
from .algebraic import AlgebraicInterval, RefinementError
from .automata import DigitDFA, from_partial, universal
from .substitutions import Substitution
from .words import Word

RATIO_SAMPLE = 64


class InadmissibleParryData(ValueError):
    pass


class PrecisionError(ArithmeticError):
    pass


# -- numeration systems ---------------------------------------------------------

class NumerationSystem:
    """A strictly increasing integer scale U with U_0 = 1.

    ``digits`` is the size of A_U.  When not given it is ⌈c⌉ where c is the
    largest ratio U_{n+1}/U_n among the first few values; later values are
    checked against c as they are produced.
    """

    def __init__(self, source: Iterable[int], digits: Optional[int] = None, *,
                 recurrence: Optional[tuple[int, ...]] = None,
                 language: Optional[DigitDFA] = None, parry: Optional["ParryData"] = None,
                 name: str = ""):
        self._it = iter(source)
        self._vals: list[int] = []
        self._lock = threading.Lock()
        self.name = name
        self.parry = parry
        self.language = language
        self._recurrence = recurrence
        if digits is None:
            self._extend(RATIO_SAMPLE)
            c = max(Fraction(b, a) for a, b in zip(self._vals, self._vals[1:]))
            self.ratio_bound = c
            self.digits = math.ceil(c)
        else:
            self.ratio_bound = Fraction(digits)
            self.digits = digits

    # values ---------------------------------------------------------------------

    def _extend(self, n: int) -> None:
        with self._lock:
            while len(self._vals) < n:
                try:
                    v = next(self._it)
                except StopIteration:
                    raise ValueError("numeration scale ended") from None
                if not self._vals:
                    if v != 1:
                        raise ValueError("U_0 must be 1")
                else:
                    prev = self._vals[-1]
                    if v <= prev:
                        raise ValueError(f"scale not strictly increasing at index {len(self._vals)}")
                    if hasattr(self, "ratio_bound") and Fraction(v, prev) > self.ratio_bound:
                        raise ValueError(f"ratio bound {self.ratio_bound} exceeded at index {len(self._vals)}")
                self._vals.append(v)

    def value(self, i: int) -> int:
        if i >= len(self._vals):
            self._extend(i + 1)
        return self._vals[i]

    def values(self, n: int) -> list[int]:
        self._extend(n)
        return self._vals[:n]

    def _top_index(self, x: int) -> int:
        """Largest i with U_i <= x (x >= 1)."""
        self._extend(1)
        while self._vals[-1] <= x:
            self._extend(len(self._vals) + 16)
        return bisect.bisect_right(self._vals, x) - 1

    @property
    def recurrence(self) -> Optional["LinearRecurrence"]:
        if self._recurrence is None:
            found = detect_linear_recurrence(self, max_order=8, sample=40)
            self._recurrence = found.coefficients if found else ()
        if not self._recurrence:
            return None
        return LinearRecurrence(tuple(self._recurrence))

    # constructors -------------------------------------------------------------

    @classmethod
    def from_recurrence(cls, coefficients: Sequence[int], initial: Sequence[int],
                        name: str = "") -> "NumerationSystem":
        d = tuple(coefficients)
        init = list(initial)
        if len(init) < len(d):
            raise ValueError("need at least as many initial values as coefficients")

        def gen():
            vals = list(init)
            yield from vals
            while True:
                v = sum(c * vals[-1 - i] for i, c in enumerate(d))
                vals.append(v)
                yield v

        language = universal(d[0]) if len(d) == 1 and init == [1] else None
        return cls(gen(), recurrence=d, language=language, name=name)

    @classmethod
    def base(cls, b: int) -> "NumerationSystem":
        if b < 2:
            raise ValueError("base must be at least 2")
        return cls.from_recurrence((b,), (1,), name=f"base {b}")

    def to_json(self) -> dict:
        if self.parry is not None:
            return {"parry": self.parry.to_json()}
        rec = self.recurrence
        out = {"values": self.values(12), "digits": self.digits}
        if rec:
            out["recurrence"] = list(rec.coefficients)
        return out

    def __repr__(self) -> str:
        return f"NumerationSystem({self.name or self.values(8)})"


def greedy_representation(x: int, U: NumerationSystem) -> Word:
    """MSD digits of the greedy expansion of x; ρ(0) is the single digit 0."""
    if x < 0:
        raise ValueError("only natural numbers have representations")
    if x == 0:
        return (0,)
    top = U._top_index(x)
    vals = U._vals
    out = []
    for i in range(top, -1, -1):
        a, x = divmod(x, vals[i])
        out.append(a)
    return tuple(out)


def digits_value(w: Sequence[int], U: NumerationSystem) -> int:
    n = len(w)
    if n:
        U.value(n - 1)
    vals = U._vals
    return sum(a * vals[n - 1 - i] for i, a in enumerate(w))


@dataclass(frozen=True)
class GreedyCheck:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_greedy_word(w: Sequence[int], U: NumerationSystem) -> GreedyCheck:
    """True iff w = 0^n ρ_U(x) for some x."""
    for i, a in enumerate(w):
        if not 0 <= a < U.digits:
            return GreedyCheck(False, f"digit {a} at position {i} outside 0..{U.digits - 1}")
    n = len(w)
    if n:
        U.value(n)
    vals = U._vals
    acc = 0
    for j in range(n):
        acc += w[n - 1 - j] * vals[j]
        if acc >= vals[j + 1]:
            return GreedyCheck(False, f"suffix of length {j + 1} has value {acc} >= U_{j + 1} = {vals[j + 1]}")
    return GreedyCheck(True)


@dataclass(frozen=True)
class LinearRecurrence:
    coefficients: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients)

    @property
    def polynomial(self) -> polys.Poly:
        """x^k - d_1 x^{k-1} - ... - d_k."""
        return tuple(-c for c in reversed(self.coefficients)) + (1,)

    def to_json(self) -> dict:
        return {"coefficients": list(self.coefficients), "polynomial": polys.to_str(self.polynomial)}


def _solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    """Unique solution of an (over)determined exact linear system, or None."""
    k = len(rows[0])
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_row = 0
    for col in range(k):
        p = next((r for r in range(piv_row, len(a)) if a[r][col] != 0), None)
        if p is None:
            return None
        a[piv_row], a[p] = a[p], a[piv_row]
        pv = a[piv_row][col]
        a[piv_row] = [v / pv for v in a[piv_row]]
        for r in range(len(a)):
            if r != piv_row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[piv_row])]
        piv_row += 1
    if any(row[-1] != 0 for row in a[k:]):
        return None
    return [a[i][-1] for i in range(k)]


def detect_linear_recurrence(U: NumerationSystem, max_order: int = 6,
                             sample: int = 40) -> Optional[LinearRecurrence]:
    """Least-order integer recurrence U_n = d_1 U_{n-1} + ... + d_k U_{n-k} on the sample."""
    if sample < 2 * max_order + 4:
        raise ValueError("sample must be at least 2*max_order + 4")
    vals = [Fraction(v) for v in U.values(sample)]
    for k in range(1, max_order + 1):
        rows = [[vals[n - 1 - i] for i in range(k)] for n in range(k, sample)]
        sol = _solve(rows, vals[k:sample])
        if sol is None or sol[-1] == 0 or any(c.denominator != 1 for c in sol):
            continue
        return LinearRecurrence(tuple(int(c) for c in sol))
    return None


# -- Parry data ------------------------------------------------------------------

@dataclass(frozen=True)
class ParryData:
    """d_α(1) = a_1…a_n (a_{n+1}…a_{n+m})^ω; an empty period means a finite expansion."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.preperiod or self.preperiod[0] < 1:
            raise InadmissibleParryData("a_1 must be at least 1")
        if any(a < 0 for a in self.preperiod + self.period):
            raise InadmissibleParryData("digits must be non-negative")
        if not self.period and self.preperiod[-1] == 0:
            raise InadmissibleParryData("the last digit of a finite expansion must be non-zero")
        if self.period and not any(self.period):
            raise InadmissibleParryData("the period must not be all zeros")

    @property
    def finite(self) -> bool:
        return not self.period

    @property
    def digits(self) -> tuple[int, ...]:
        return self.preperiod + self.period

    def polynomial(self) -> polys.Poly:
        n, m = len(self.preperiod), len(self.period)
        head = [0] * (n + 1)
        head[n] = 1
        for i, a in enumerate(self.preperiod, start=1):
            head[n - i] -= a
        head = polys.trim(head)
        if self.finite:
            return head
        xm1 = (-1,) + (0,) * (m - 1) + (1,)
        tail = [0] * m
        for j, a in enumerate(self.period, start=1):
            tail[m - j] += a
        return polys.sub(polys.mul(xm1, head), polys.trim(tail))

    def quasi_greedy(self) -> tuple[tuple[int, ...], int]:
        """Digits t_1..t_L of d*_α(1) and the index where the cycle restarts."""
        if self.finite:
            t = self.preperiod[:-1] + (self.preperiod[-1] - 1,)
            return t, 0
        return self.digits, len(self.preperiod)

    def to_json(self) -> dict:
        return {"preperiod": list(self.preperiod), "period": list(self.period)}

    @classmethod
    def from_json(cls, obj: dict) -> "ParryData":
        return cls(tuple(obj["preperiod"]), tuple(obj.get("period", ())))


class _Field:
    """Q(α) as rational polynomials reduced mod the Parry polynomial."""

    def __init__(self, modulus: polys.Poly, alpha: AlgebraicInterval):
        self.modulus = modulus
        self.alpha = alpha

    def reduce(self, p: polys.Poly) -> polys.Poly:
        return polys.rem(p, self.modulus) if polys.degree(p) >= polys.degree(self.modulus) else polys._normalize(p)

    def times_alpha(self, p: polys.Poly) -> polys.Poly:
        return self.reduce(polys.mul(p, polys.X))

    def sign(self, p: polys.Poly) -> int:
        p = polys.trim(p)
        if not p:
            return 0
        try:
            # primitive_part rescales to a positive leading coefficient
            return self.alpha.sign_of(polys.primitive_part(p)) * (1 if p[-1] > 0 else -1)
        except RefinementError as e:
            raise PrecisionError(str(e)) from None

    def floor(self, p: polys.Poly) -> int:
        guess = math.floor(float(polys.evaluate(p, Fraction(float(self.alpha)))))
        k = guess
        while self.sign(polys.sub(p, (k,))) < 0:
            k -= 1
        while self.sign(polys.sub(p, (k + 1,))) >= 0:
            k += 1
        return k


@dataclass
class BetaNumber:
    parry: ParryData
    alpha: AlgebraicInterval

    @property
    def field(self) -> _Field:
        return _Field(self.parry.polynomial(), self.alpha)


def _expansion_structure(field: _Field, limit: int) -> tuple[list[int], Optional[tuple[int, int]]]:
    """Digits of d_α(1) until the remainder sequence repeats.

    Returns the digits and (n, m): remainders x_{n+1} = x_{n+m+1}; m = 0 flags
    a zero remainder (finite expansion of length n).
    """
    xs: list[polys.Poly] = [(1,)]
    digits: list[int] = []
    for _ in range(limit):
        y = field.times_alpha(xs[-1])
        a = field.floor(y)
        digits.append(a)
        x = polys.sub(y, (a,))
        if field.sign(x) == 0:
            return digits, (len(digits), 0)
        for i, prev in enumerate(xs[1:], start=1):
            if field.sign(polys.sub(x, prev)) == 0:
                return digits, (i, len(xs) - i)
        xs.append(x)
    return digits, None


def beta_number(p: ParryData) -> BetaNumber:
    """The α > 1 induced by p, after checking that d_α(1) reproduces p."""
    P = p.polynomial()
    alpha = AlgebraicInterval.largest_root(P)
    if alpha.compare(AlgebraicInterval.from_int(1)) <= 0:
        raise InadmissibleParryData(f"{polys.to_str(P)} has no root above 1")
    field = _Field(P, alpha)
    n, m = len(p.preperiod), len(p.period)
    digits, shape = _expansion_structure(field, n + m + 1)
    if shape is None:
        raise InadmissibleParryData(f"d_α(1) starts {digits}, which does not match {p.to_json()}")
    pre, per = shape
    got = ParryData(tuple(digits[:pre]), tuple(digits[pre:pre + per])) if per else ParryData(tuple(digits[:pre]))
    if got != p:
        raise InadmissibleParryData(
            f"data {p.to_json()} is not the expansion of 1 it induces; expected {got.to_json()}")
    return BetaNumber(p, alpha)


def _as_poly(x) -> polys.Poly:
    if isinstance(x, (int, Fraction)):
        return polys.trim((Fraction(x),))
    return polys.trim(tuple(Fraction(c) for c in x))


def beta_expansion(x, beta: BetaNumber, count: int) -> list[int]:
    """First ``count`` digits of d_α(x) with x given as a polynomial in α."""
    field = beta.field
    cur = field.reduce(_as_poly(x))
    if field.sign(cur) < 0 or field.sign(polys.sub(cur, (1,))) > 0:
        raise ValueError("x must lie in [0, 1]")
    out = []
    for _ in range(count):
        y = field.times_alpha(cur)
        a = field.floor(y)
        out.append(a)
        cur = polys.sub(y, (a,))
    return out


def parry_automaton(p: ParryData) -> DigitDFA:
    """MSD automaton of L(α) over the digits 0..t_1, t = d*_α(1)."""
    beta_number(p)
    t, restart = p.quasi_greedy()
    k = t[0] + 1
    L = len(t)
    edges = []
    for i, ti in enumerate(t):
        for c in range(k):
            if c == ti:
                edges.append((i, c, i + 1 if i + 1 < L else restart))
            elif c < ti:
                edges.append((i, c, 0))
    d = from_partial(k, edges, L, 0, range(L))
    return d.minimize()


def _count_sequence(d: DigitDFA) -> Iterator[int]:
    vec = {d.start: 1}
    while True:
        yield sum(c for q, c in vec.items() if q in d.accepting)
        nxt: dict[int, int] = {}
        for q, c in vec.items():
            if q not in d.accepting:
                continue
            for t in d.delta[q]:
                nxt[t] = nxt.get(t, 0) + c
        vec = nxt


def bertrand_system_from_parry(p: ParryData) -> NumerationSystem:
    """U_n = number of length-n words of L(α)."""
    d = parry_automaton(p)
    name = f"Parry {p.to_json()}"
    return NumerationSystem(_count_sequence(d), d.k, language=d, parry=p, name=name)


def omega_substitution(p: ParryData) -> Substitution:
    """ω_α over {1..N}: i → 1^{a_i}(i+1), closing the cycle as the data dictates."""
    beta_number(p)
    a = p.digits
    N = len(a)
    rules = []
    for i in range(N):
        img = (0,) * a[i]
        if i + 1 < N:
            img += (i + 1,)
        elif not p.finite:
            img += (len(p.preperiod),)
        rules.append(img)
    return Substitution(tuple(rules), 0, tuple(str(i + 1) for i in range(N)))


def system_from_json(obj: dict) -> NumerationSystem:
    if "parry" in obj:
        return bertrand_system_from_parry(ParryData.from_json(obj["parry"]))
    return NumerationSystem.from_recurrence(obj["recurrence"], obj["initial"])


def all_words(k: int, n: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(k), repeat=n)


def greedy_words(U: NumerationSystem, n: int) -> Iterator[tuple[int, ...]]:
    """All length-n words of L(U), grown by prepending digits (L(U) is suffix-closed)."""
    vals = U.values(n + 1)
    stack: list[tuple[tuple[int, ...], int]] = [((), 0)]
    while stack:
        w, v = stack.pop()
        j = len(w)
        if j == n:
            yield w
            continue
        for a in range(U.digits):
            nv = v + a * vals[j]
            if nv < vals[j + 1]:
                stack.append(((a,) + w, nv))
