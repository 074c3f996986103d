"""Total deterministic automata over digit alphabets {0..k-1}."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

ORDERS = ("msd", "lsd")


class AutomatonError(ValueError):
    pass


class StateBlowup(AutomatonError):
    pass


@dataclass(frozen=True)
class DigitDFA:
    """``delta[q][c]`` is the successor of state q on digit c; every row is total."""

    k: int
    delta: tuple[tuple[int, ...], ...]
    start: int
    accepting: frozenset
    order: str = "msd"

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(tuple(r) for r in self.delta))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        if self.order not in ORDERS:
            raise AutomatonError(f"order must be one of {ORDERS}")
        n = len(self.delta)
        if not 0 <= self.start < n:
            raise AutomatonError("start state out of range")
        for q, row in enumerate(self.delta):
            if len(row) != self.k:
                raise AutomatonError(f"state {q} is not total over {self.k} digits")
            if any(not 0 <= t < n for t in row):
                raise AutomatonError(f"state {q} has a transition out of range")
        if any(not 0 <= q < n for q in self.accepting):
            raise AutomatonError("accepting state out of range")

    @property
    def size(self) -> int:
        return len(self.delta)

    @property
    def alphabet(self) -> tuple[int, ...]:
        return tuple(range(self.k))

    def run(self, word: Sequence[int]) -> int:
        q = self.start
        for c in word:
            if not 0 <= c < self.k:
                raise AutomatonError(f"digit {c} outside alphabet 0..{self.k - 1}")
            q = self.delta[q][c]
        return q

    def accepts(self, word: Sequence[int]) -> bool:
        return self.run(word) in self.accepting

    def with_order(self, order: str) -> "DigitDFA":
        return DigitDFA(self.k, self.delta, self.start, self.accepting, order)

    def complement(self) -> "DigitDFA":
        return DigitDFA(self.k, self.delta, self.start,
                        frozenset(range(self.size)) - self.accepting, self.order)

    def reachable(self) -> list[int]:
        seen = {self.start: 0}
        order = [self.start]
        todo = deque(order)
        while todo:
            q = todo.popleft()
            for t in self.delta[q]:
                if t not in seen:
                    seen[t] = len(order)
                    order.append(t)
                    todo.append(t)
        return order

    def minimize(self) -> "DigitDFA":
        """Moore partition refinement on the reachable part, numbered in BFS order.

        The result is canonical: two automata with the same language and
        order minimize to equal objects.
        """
        states = self.reachable()
        cls = {q: int(q in self.accepting) for q in states}
        while True:
            sig = {q: (cls[q],) + tuple(cls[t] for t in self.delta[q]) for q in states}
            ids: dict = {}
            new = {q: ids.setdefault(sig[q], len(ids)) for q in states}
            if len(ids) == len(set(cls.values())):
                break
            cls = new
        cls = new
        # canonical BFS numbering of the quotient
        rep = {}
        for q in states:
            rep.setdefault(cls[q], q)
        number = {cls[self.start]: 0}
        todo = deque([cls[self.start]])
        rows: list = []
        while todo:
            c = todo.popleft()
            row = []
            for t in self.delta[rep[c]]:
                ct = cls[t]
                if ct not in number:
                    number[ct] = len(number)
                    todo.append(ct)
                row.append(number[ct])
            rows.append(row)
        acc = {number[cls[q]] for q in states if q in self.accepting}
        return DigitDFA(self.k, rows, 0, acc, self.order)

    def is_empty(self) -> bool:
        return not any(q in self.accepting for q in self.reachable())

    def same_language(self, other: "DigitDFA") -> bool:
        return self.k == other.k and self.minimize() == other.minimize().with_order(self.order)

    def count_words(self, n: int) -> int:
        """Number of accepted words of length n."""
        vec = {self.start: 1}
        for _ in range(n):
            nxt: dict[int, int] = {}
            for q, c in vec.items():
                for t in self.delta[q]:
                    nxt[t] = nxt.get(t, 0) + c
            vec = nxt
        return sum(c for q, c in vec.items() if q in self.accepting)

    def words(self, n: int) -> Iterator[tuple[int, ...]]:
        """Accepted words of length n, assuming the accepted language is prefix-closed
        (every state on the way is accepting).  Used for factorial languages."""
        stack = [((), self.start)]
        while stack:
            w, q = stack.pop()
            if len(w) == n:
                yield w
                continue
            for c in range(self.k - 1, -1, -1):
                t = self.delta[q][c]
                if t in self.accepting:
                    stack.append((w + (c,), t))

    def to_json(self) -> dict:
        return {"alphabet": list(self.alphabet), "states": self.size, "start": self.start,
                "accepting": sorted(self.accepting), "order": self.order,
                "delta": [list(r) for r in self.delta]}

    @classmethod
    def from_json(cls, obj: dict) -> "DigitDFA":
        alphabet = list(obj["alphabet"])
        if alphabet != list(range(len(alphabet))):
            raise AutomatonError("alphabet must be the digits 0..k-1 in order")
        if len(obj["delta"]) != obj["states"]:
            raise AutomatonError("delta must have one row per state")
        return cls(len(alphabet), obj["delta"], obj["start"], obj["accepting"], obj.get("order", "msd"))


def from_partial(k: int, edges: Iterable[tuple[int, int, int]], n_states: int, start: int,
                 accepting: Iterable[int], order: str = "msd") -> DigitDFA:
    """Complete a partial transition list with an explicit dead state."""
    dead = n_states
    rows = [[dead] * k for _ in range(n_states + 1)]
    for q, c, t in edges:
        rows[q][c] = t
    return DigitDFA(k, rows, start, accepting, order)


def empty(k: int, order: str = "msd") -> DigitDFA:
    return DigitDFA(k, [[0] * k], 0, (), order)


def universal(k: int, order: str = "msd") -> DigitDFA:
    return DigitDFA(k, [[0] * k], 0, (0,), order)


_OPS = {
    "union": lambda x, y: x or y,
    "intersection": lambda x, y: x and y,
    "difference": lambda x, y: x and not y,
}


def dfa_boolean(op: str, a: DigitDFA, b: DigitDFA) -> DigitDFA:
    """Product construction followed by minimization."""
    if op not in _OPS:
        raise AutomatonError(f"unknown operation {op!r}")
    if a.k != b.k or a.order != b.order:
        raise AutomatonError("automata must share alphabet and reading order")
    f = _OPS[op]
    start = (a.start, b.start)
    index = {start: 0}
    pairs = [start]
    rows = []
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        row = []
        for c in range(a.k):
            t = (a.delta[p][c], b.delta[q][c])
            if t not in index:
                index[t] = len(pairs)
                pairs.append(t)
            row.append(index[t])
        rows.append(row)
        i += 1
    acc = [j for j, (p, q) in enumerate(pairs) if f(p in a.accepting, q in b.accepting)]
    return DigitDFA(a.k, rows, 0, acc, a.order).minimize()


def reverse_determinize(d: DigitDFA, cap: int = 200_000) -> DigitDFA:
    """Automaton for the mirror language with the reading order flipped."""
    pre = [[[] for _ in range(d.k)] for _ in range(d.size)]
    for q, row in enumerate(d.delta):
        for c, t in enumerate(row):
            pre[t][c].append(q)
    start = frozenset(d.accepting)
    index = {start: 0}
    subsets = [start]
    rows = []
    i = 0
    while i < len(subsets):
        s = subsets[i]
        row = []
        for c in range(d.k):
            t = frozenset(q for x in s for q in pre[x][c])
            if t not in index:
                if len(subsets) >= cap:
                    raise StateBlowup(f"subset construction exceeded {cap} states "
                                      f"(source automaton has {d.size} states)")
                index[t] = len(subsets)
                subsets.append(t)
            row.append(index[t])
        rows.append(row)
        i += 1
    acc = [j for j, s in enumerate(subsets) if d.start in s]
    flipped = "lsd" if d.order == "msd" else "msd"
    return DigitDFA(d.k, rows, 0, acc, flipped).minimize()
