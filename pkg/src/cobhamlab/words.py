"""Finite words, lazily expanded sequences, factors, periodicity and powers.

Letters are dense integer ids ``0..k-1``; a word is a tuple of letter ids.
Display names live with whoever owns the alphabet (usually a substitution).
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

Word = tuple
MIN_REPEATS = 4


class TruncationError(IndexError):
    """Raised when a prefix longer than the generator can supply is requested."""


class LazySequence:
    """A one-sided sequence materialized on demand.

    The source iterator is consumed only through :meth:`ensure`, so the cached
    prefix never changes once produced.  ``capacity`` bounds finite sources.
    """

    def __init__(self, source: Iterable[int], alphabet_size: int,
                 capacity: Optional[int] = None, name: str = ""):
        self._it: Iterator[int] = iter(source)
        self._cache: list[int] = []
        self._lock = threading.Lock()
        self.alphabet_size = alphabet_size
        self.capacity = capacity
        self.name = name

    # constructors ---------------------------------------------------------

    @classmethod
    def from_word(cls, w: Sequence[int], alphabet_size: Optional[int] = None) -> "LazySequence":
        size = alphabet_size if alphabet_size is not None else (max(w) + 1 if w else 1)
        return cls(list(w), size, capacity=len(w))

    @classmethod
    def ultimately_periodic(cls, prefix: Sequence[int], period: Sequence[int],
                            alphabet_size: Optional[int] = None) -> "LazySequence":
        if not period:
            raise ValueError("period must be non-empty")
        size = alphabet_size or max(itertools.chain(prefix, period)) + 1
        return cls(itertools.chain(prefix, itertools.cycle(period)), size)

    @classmethod
    def from_function(cls, f: Callable[[int], int], alphabet_size: int, name: str = "") -> "LazySequence":
        return cls(map(f, itertools.count()), alphabet_size, name=name)

    # access -----------------------------------------------------------------

    def ensure(self, n: int) -> int:
        """Materialize at least ``n`` letters; returns the cached length.

        Stops early only for finite sources, in which case capacity is fixed.
        """
        if len(self._cache) >= n:
            return len(self._cache)
        with self._lock:
            need = n - len(self._cache)
            if need > 0:
                before = len(self._cache)
                self._cache.extend(itertools.islice(self._it, need))
                if len(self._cache) - before < need:
                    self.capacity = len(self._cache)
        return len(self._cache)

    def prefix(self, n: int) -> Word:
        if self.ensure(n) < n:
            raise TruncationError(f"sequence has only {len(self._cache)} letters, {n} requested")
        return tuple(self._cache[:n])

    def array(self, n: int) -> np.ndarray:
        if self.ensure(n) < n:
            raise TruncationError(f"sequence has only {len(self._cache)} letters, {n} requested")
        return np.fromiter(self._cache[:n], dtype=np.int64, count=n)

    def __getitem__(self, i: int) -> int:
        if self.ensure(i + 1) <= i:
            raise TruncationError(f"index {i} beyond capacity {self.capacity}")
        return self._cache[i]

    def __iter__(self) -> Iterator[int]:
        for i in itertools.count():
            if self.ensure(i + 1) <= i:
                return
            yield self._cache[i]

    @property
    def materialized(self) -> int:
        return len(self._cache)

    def __repr__(self) -> str:
        head = "".join(str(a) for a in self._cache[:20])
        return f"LazySequence({self.name or head + '...'})"


@dataclass(frozen=True)
class PeriodicityReport:
    preperiod: int
    period: int
    confirmed_up_to: int

    def to_json(self) -> dict:
        return {"preperiod": self.preperiod, "period": self.period,
                "confirmed_up_to": self.confirmed_up_to, "scope": "within window"}


def factors(seq: LazySequence, length: int, window: int) -> set[Word]:
    """Distinct factors of the given length inside the first ``window`` letters."""
    if not 0 <= length <= window:
        raise ValueError("need window >= length >= 0")
    w = seq.prefix(window)
    if length == 0:
        return {()}
    return {w[i:i + length] for i in range(window - length + 1)}


def occurrences(u: Sequence, host: Sequence) -> list[int]:
    """Start indices of all (possibly overlapping) occurrences of u in host."""
    u, host = tuple(u), tuple(host)
    if not u:
        raise ValueError("occurrences of the empty word are every position")
    n = len(u)
    first = u[0]
    return [i for i in range(len(host) - n + 1) if host[i] == first and host[i:i + n] == u]


def _last_mismatch(x: np.ndarray, p: int) -> int:
    """Index of the last n with x[n] != x[n+p], or -1."""
    diff = np.flatnonzero(x[:-p] != x[p:])
    return int(diff[-1]) if diff.size else -1


def detect_ultimate_periodicity(seq: LazySequence, window: int) -> Optional[PeriodicityReport]:
    """Smallest (preperiod, period) explaining the whole window.

    A candidate needs at least four full periods after the preperiod.  Three
    are not enough: the Fibonacci word contains cubes of every Fibonacci
    length, and near the end of a window they pass for a period.  Results
    only speak for the window.
    """
    if window < 2:
        raise ValueError("window must be at least 2")
    x = seq.array(window)
    best = None
    for p in range(1, window // MIN_REPEATS + 1):
        pre = _last_mismatch(x, p) + 1
        if pre + MIN_REPEATS * p > window:
            continue
        if best is None or (pre, p) < best:
            best = (pre, p)
        if best[0] == 0:
            break
    if best is None:
        return None
    return PeriodicityReport(best[0], best[1], window)


def _longest_run(mask: np.ndarray) -> int:
    if not mask.any():
        return 0
    padded = np.concatenate(([0], mask.view(np.int8), [0]))
    edges = np.flatnonzero(np.diff(padded))
    return int((edges[1::2] - edges[0::2]).max())


def max_power_index(seq: LazySequence, max_len: int, window: int) -> int:
    """Largest N such that u^N occurs in the window for some 1 <= |u| <= max_len.

    Lower-bound evidence only: larger windows can only raise the value.
    """
    if max_len < 1:
        raise ValueError("max_len must be positive")
    x = seq.array(window)
    best = 1 if window else 0
    for p in range(1, min(max_len, window - 1) + 1):
        run = _longest_run(x[:-p] == x[p:])
        best = max(best, (run + p) // p)
    return best


def letter_frequency_estimate(seq: LazySequence, window: int) -> list[Fraction]:
    if window < 1:
        raise ValueError("window must be positive")
    counts = np.bincount(seq.array(window), minlength=seq.alphabet_size)
    return [Fraction(int(c), window) for c in counts]


def render(w: Iterable[int], names: Optional[Sequence[str]] = None, sep: str = "") -> str:
    names = names or None
    return sep.join(names[a] if names else str(a) for a in w)
