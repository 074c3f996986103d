"""Return words, the order coding Θ_u, derived sequences and derived substitutions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .spectra import is_primitive
from .substitutions import Substitution, fixed_point, incidence_matrix, require_valid, validate
from .words import LazySequence, TruncationError, Word

DEFAULT_STABILITY = 4096
DEFAULT_CAP = 1 << 22
DETECT_CAP = 1 << 18


class NotUniformlyRecurrent(RuntimeError):
    """The return-word set did not stabilize inside the scan cap."""


class DecompositionError(ValueError):
    pass


class _Scanner:
    """Substring search over a growing prefix of a sequence.

    Letters are packed into bytes when they fit, which lets ``bytes.find`` do
    the scanning.
    """

    def __init__(self, seq: LazySequence):
        self.seq = seq
        self.packed = seq.alphabet_size <= 256
        self.buf = bytearray() if self.packed else []

    def extend_to(self, n: int) -> int:
        have = len(self.buf)
        if n > have:
            got = self.seq.ensure(n)
            chunk = self.seq._cache[have:min(n, got)]
            if self.packed:
                self.buf.extend(bytes(chunk))
            else:
                self.buf.extend(chunk)
        return len(self.buf)

    def find(self, u: Word, start: int, end: int) -> int:
        """First occurrence of u starting in [start, end - |u|], or -1."""
        if self.packed:
            return self.buf.find(bytes(u), start, end)
        n = len(u)
        for i in range(start, end - n + 1):
            if tuple(self.buf[i:i + n]) == u:
                return i
        return -1

    def word(self, i: int, j: int) -> Word:
        return tuple(self.buf[i:j])


@dataclass(frozen=True)
class ReturnWordTable:
    """Return words on ``base`` listed in Θ order (order of first occurrence).

    Derived letters are the ids ``0..card-1``; they are displayed as ``1..card``.
    """

    base: Word
    words: tuple[Word, ...]
    scanned: int = 0
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {w: k for k, w in enumerate(self.words)})

    @property
    def card(self) -> int:
        return len(self.words)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(str(k + 1) for k in range(self.card))

    def index(self, w: Word) -> Optional[int]:
        return self._index.get(tuple(w))

    def theta(self, letters: Sequence[int]) -> Word:
        out: list[int] = []
        for k in letters:
            out.extend(self.words[k])
        return tuple(out)

    def decompose(self, w: Sequence[int], lookahead: Optional[Sequence[int]] = None) -> Word:
        """Inverse of Θ on a word w such that w·base is a factor beginning with base.

        ``lookahead`` supplies the letters known to follow w (default: base).
        """
        w = tuple(w)
        if not w:
            return ()
        ext = w + tuple(self.base if lookahead is None else lookahead)
        u, n = self.base, len(self.base)
        cuts = [i for i in range(len(w)) if ext[i:i + n] == u]
        if not cuts or cuts[0] != 0:
            raise DecompositionError("word does not start with the base word")
        cuts.append(len(w))
        out = []
        for a, b in zip(cuts, cuts[1:]):
            k = self._index.get(w[a:b])
            if k is None:
                raise DecompositionError(f"{w[a:b]} is not a known return word")
            out.append(k)
        return tuple(out)

    def to_json(self, names: Sequence[str] = ()) -> dict:
        def show(x):
            return "".join(names[a] for a in x) if names else "".join(map(str, x))
        return {"base": show(self.base), "card": self.card,
                "theta": {str(k + 1): show(w) for k, w in enumerate(self.words)},
                "scanned": self.scanned}


def _collect_returns(sc: _Scanner, u: Word, length: int) -> list[Word]:
    found: dict[Word, int] = {}
    i = sc.find(u, 0, length)
    while i != -1:
        j = sc.find(u, i + 1, length)
        if j == -1:
            break
        w = sc.word(i, j)
        if w not in found:
            found[w] = i
        i = j
    return sorted(found, key=found.get)


def return_words(seq: LazySequence, u: Sequence[int], stability_window: int = DEFAULT_STABILITY,
                 cap: int = DEFAULT_CAP) -> ReturnWordTable:
    """Collect the return words on u by scanning a doubling prefix of seq.

    The set is accepted once it is unchanged over two consecutive doublings
    and the scanned prefix is at least ``stability_window`` long.
    """
    u = tuple(u)
    if not u:
        raise ValueError("base word must be non-empty")
    sc = _Scanner(seq)
    length = max(64, 4 * len(u))
    history: list[list[Word]] = []
    while True:
        have = sc.extend_to(length)
        history.append(_collect_returns(sc, u, have))
        stable = len(history) >= 3 and history[-1] == history[-2] == history[-3]
        if stable and have >= stability_window and history[-1]:
            return ReturnWordTable(u, tuple(history[-1]), have)
        if have < length or length >= cap:
            break
        length *= 2
    if not history[-1] and sc.find(u, 0, len(sc.buf)) == -1:
        raise ValueError("base word does not occur in the scanned prefix")
    raise NotUniformlyRecurrent(
        f"return words on a length-{len(u)} word did not stabilize within {len(sc.buf)} letters")


@dataclass
class DerivedSequence:
    sequence: LazySequence
    table: ReturnWordTable


def _derived_letters(sc: _Scanner, table: ReturnWordTable) -> Iterator[int]:
    u = table.base
    i = 0
    chunk = max(4096, 8 * max(len(w) for w in table.words) + len(u))
    while True:
        end = sc.extend_to(i + chunk)
        j = sc.find(u, i + 1, end)
        while j == -1:
            if end < i + chunk:  # finite source exhausted
                return
            chunk *= 2
            end = sc.extend_to(i + chunk)
            j = sc.find(u, i + 1, end)
        k = table.index(sc.word(i, j))
        if k is None:
            raise DecompositionError(
                f"return word at position {i} missing from the table scanned over {table.scanned} letters")
        yield k
        i = j


def derived_sequence(seq: LazySequence, prefix: Sequence[int],
                     stability_window: int = DEFAULT_STABILITY, cap: int = DEFAULT_CAP) -> DerivedSequence:
    """The sequence over R_prefix whose Θ-image is seq."""
    prefix = tuple(prefix)
    if seq.prefix(len(prefix)) != prefix:
        raise ValueError("not a prefix of the sequence")
    table = return_words(seq, prefix, stability_window, cap)
    lazy = LazySequence(_derived_letters(_Scanner(seq), table), table.card,
                        name=f"derived sequence on a length-{len(prefix)} prefix")
    return DerivedSequence(lazy, table)


def derived_substitution(s: Substitution, prefix: Sequence[int],
                         stability_window: int = DEFAULT_STABILITY) -> tuple[Substitution, ReturnWordTable]:
    """The substitution τ_v on R_v with Θ_v τ_v = τ Θ_v, and the table Θ_v."""
    require_valid(s)
    if not is_primitive(incidence_matrix(s.morphism)):
        raise ValueError("derived substitutions need a primitive substitution")
    prefix = tuple(prefix)
    x = fixed_point(s)
    if x.prefix(len(prefix)) != prefix:
        raise ValueError("not a prefix of the fixed point")
    table = return_words(x, prefix, stability_window)
    rules = [table.decompose(s(w)) for w in table.words]
    return Substitution(tuple(rules), 0, table.names), table


def check_derived_identity(s: Substitution, tau_v: Substitution, table: ReturnWordTable) -> bool:
    """Θ_v τ_v(k) = τ Θ_v(k) for every derived letter k."""
    return all(table.theta(tau_v.rules[k]) == s(table.words[k]) for k in range(table.card))


@dataclass
class DetectionResult:
    substitution: Substitution
    tables: tuple[ReturnWordTable, ReturnWordTable]
    prefixes_examined: int


def _prefix_lengths(max_prefixes: int) -> Iterator[int]:
    powers = [1 << i for i in range(max_prefixes)]
    yield from powers
    if len(powers) >= 2:
        lo, hi = powers[-2], powers[-1]
        yield from range(lo + 1, min(hi, lo + 1 + max_prefixes))


def detect_primitive_substitutive(seq: LazySequence, max_prefixes: int = 8,
                                  compare_window: int = 2048,
                                  stability_window: int = DEFAULT_STABILITY,
                                  cap: int = DETECT_CAP) -> Optional[DetectionResult]:
    """Look for prefixes u_i ≠ u_j with equal derived sequences and return σ, Θ_{u_i}σ = Θ_{u_j}.

    Prefix lengths run over 1, 2, 4, ... (max_prefixes of them), then the
    lengths strictly between the last two powers.  None means inconclusive.
    """
    seen: list[tuple[Word, ReturnWordTable, Word]] = []
    examined = 0
    for n in _prefix_lengths(max_prefixes):
        try:
            u = seq.prefix(n)
            d = derived_sequence(seq, u, max(stability_window, 64 * n), cap)
            dprefix = d.sequence.prefix(compare_window)
        except (NotUniformlyRecurrent, TruncationError, DecompositionError, ValueError):
            examined += 1
            continue
        examined += 1
        for u0, t0, d0 in seen:
            if t0.card != d.table.card or d0 != dprefix:
                continue
            try:
                rules = tuple(t0.decompose(w, lookahead=u0) for w in d.table.words)
            except DecompositionError:
                continue
            sigma = Substitution(rules, 0, t0.names)
            if not validate(sigma):
                continue
            if fixed_point(sigma).prefix(compare_window) != dprefix:
                continue
            return DetectionResult(sigma, (t0, d.table), examined)
        seen.append((u, d.table, dprefix))
    return None


@dataclass
class LinRecReport:
    K: Fraction
    samples: list[tuple[int, int, int, int]]

    def holds(self) -> bool:
        K = self.K
        return all(Fraction(n, 1) / K <= lo and hi <= K * n and card <= K * (K + 1) ** 2
                   for n, lo, hi, card in self.samples)

    def to_json(self) -> dict:
        return {"K": str(self.K), "K_approx": float(self.K),
                "samples": [{"prefix_length": n, "min_return": lo, "max_return": hi, "card": c}
                            for n, lo, hi, c in self.samples]}


def _card_constant(card: int, denominator: int = 1 << 10) -> Fraction:
    """Least K = k/denominator with K(K+1)^2 >= card."""
    k = 0
    step = denominator
    # exponential then binary search on the numerator
    while Fraction(k + step, denominator) * (Fraction(k + step, denominator) + 1) ** 2 < card:
        k += step
        step *= 2
    lo, hi = k, k + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        K = Fraction(mid, denominator)
        if K * (K + 1) ** 2 >= card:
            hi = mid
        else:
            lo = mid
    return Fraction(hi, denominator)


def linrec_survey(s: Substitution, prefix_count: int = 8,
                  stability_window: int = DEFAULT_STABILITY) -> LinRecReport:
    """Sample return words on prefixes of length 1, 2, 4, ... and fit the linear recurrence constant."""
    require_valid(s)
    x = fixed_point(s)
    samples = []
    for i in range(prefix_count):
        n = 1 << i
        table = return_words(x, x.prefix(n), max(stability_window, 64 * n))
        lens = [len(w) for w in table.words]
        samples.append((n, min(lens), max(lens), table.card))
    k1 = max(max(Fraction(n, lo), Fraction(hi, n)) for n, lo, hi, _ in samples)
    k2 = _card_constant(max(c for *_, c in samples))
    return LinRecReport(max(k1, k2), samples)
