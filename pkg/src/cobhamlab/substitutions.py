"""Morphisms, substitutions and constructions that preserve substitutivity."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence

from .matrices import IntMatrix
from .words import LazySequence, Word, render


def _default_names(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


@dataclass(frozen=True)
class Morphism:
    """A map from letters ``0..len(rules)-1`` to words over ``0..codomain_size-1``."""

    rules: tuple[Word, ...]
    codomain_size: int
    domain_names: tuple[str, ...] = ()
    codomain_names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(tuple(r) for r in self.rules))
        if not self.domain_names:
            object.__setattr__(self, "domain_names", _default_names(len(self.rules)))
        if not self.codomain_names:
            object.__setattr__(self, "codomain_names", _default_names(self.codomain_size))
        for img in self.rules:
            for b in img:
                if not 0 <= b < self.codomain_size:
                    raise ValueError(f"image letter {b} outside codomain")

    @property
    def domain_size(self) -> int:
        return len(self.rules)

    @property
    def is_letter_to_letter(self) -> bool:
        return (all(len(r) == 1 for r in self.rules)
                and {r[0] for r in self.rules} == set(range(self.codomain_size)))

    @property
    def is_erasing(self) -> bool:
        return any(len(r) == 0 for r in self.rules)

    def __call__(self, w: Sequence[int]) -> Word:
        return apply(self, w)

    def compose(self, inner: "Morphism") -> "Morphism":
        """``self ∘ inner``: apply inner first."""
        if inner.codomain_size != self.domain_size:
            raise ValueError("morphisms are not composable")
        return Morphism(tuple(apply(self, r) for r in inner.rules), self.codomain_size,
                        inner.domain_names, self.codomain_names)

    def show(self) -> str:
        return ", ".join(f"{self.domain_names[a]}->{render(r, self.codomain_names) or 'ε'}"
                         for a, r in enumerate(self.rules))


def apply(m: Morphism, w: Sequence[int]) -> Word:
    out: list[int] = []
    for a in w:
        if not 0 <= a < m.domain_size:
            raise ValueError(f"letter {a} outside the morphism's domain")
        out.extend(m.rules[a])
    return tuple(out)


def incidence_matrix(m: Morphism) -> IntMatrix:
    rows = [[0] * m.domain_size for _ in range(m.codomain_size)]
    for j, img in enumerate(m.rules):
        for i in img:
            rows[i][j] += 1
    return IntMatrix.from_lists(rows)


@dataclass(frozen=True)
class Substitution:
    """An endomorphism with a start letter whose image begins with it.

    Construction does not check the substitution conditions; use
    :func:`validate` for that.
    """

    rules: tuple[Word, ...]
    start: int = 0
    names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(tuple(r) for r in self.rules))
        if not self.names:
            object.__setattr__(self, "names", _default_names(len(self.rules)))
        if len(self.names) != len(self.rules):
            raise ValueError("one name per letter required")
        for img in self.rules:
            for b in img:
                if not 0 <= b < len(self.rules):
                    raise ValueError(f"image letter {b} outside alphabet")

    @classmethod
    def from_strings(cls, rules: Mapping[str, Sequence[str] | str], start: Optional[str] = None,
                     alphabet: Optional[Sequence[str]] = None) -> "Substitution":
        """Build from name-level rules, e.g. ``{"0": "01", "1": "0"}``.

        String images are split into single characters; list images are taken
        as lists of letter names.
        """
        if not isinstance(rules, Mapping):
            if alphabet is None:
                raise ValueError("a list of images needs an explicit alphabet")
            rules = dict(zip(alphabet, rules))
        names = tuple(alphabet) if alphabet else tuple(rules)
        index = {n: i for i, n in enumerate(names)}
        if set(rules) != set(names):
            raise ValueError("rules must be given for exactly the alphabet letters")
        try:
            body = tuple(tuple(index[b] for b in rules[n]) for n in names)
        except KeyError as e:
            raise ValueError(f"image uses unknown letter {e.args[0]!r}") from None
        st = index[start] if start is not None else 0
        return cls(body, st, names)

    @property
    def size(self) -> int:
        return len(self.rules)

    @property
    def morphism(self) -> Morphism:
        return Morphism(self.rules, self.size, self.names, self.names)

    def __call__(self, w: Sequence[int]) -> Word:
        return apply(self.morphism, w)

    def iterate(self, w: Sequence[int], n: int) -> Word:
        w = tuple(w)
        for _ in range(n):
            w = self(w)
        return w

    def power(self, k: int) -> "Substitution":
        return Substitution(tuple(self.iterate((a,), k) for a in range(self.size)), self.start, self.names)

    def word(self, text: str) -> Word:
        """Parse a word of single-character letter names."""
        index = {n: i for i, n in enumerate(self.names)}
        return tuple(index[c] for c in text)

    def show_word(self, w: Sequence[int], sep: str = "") -> str:
        return render(w, self.names, sep)

    def show(self) -> str:
        sep = "" if all(len(n) == 1 for n in self.names) else " "
        return ", ".join(f"{self.names[a]}->{render(r, self.names, sep)}" for a, r in enumerate(self.rules))

    def to_json(self) -> dict:
        single = all(len(n) == 1 for n in self.names)
        rules = {self.names[a]: (render(r, self.names) if single else [self.names[b] for b in r])
                 for a, r in enumerate(self.rules)}
        return {"alphabet": list(self.names), "rules": rules, "start": self.names[self.start]}

    @classmethod
    def from_json(cls, obj: dict) -> "Substitution":
        return cls.from_strings(obj["rules"], obj.get("start"), obj.get("alphabet"))


@dataclass
class ValidationReport:
    failures: list[tuple[str, Optional[int]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def describe(self, names: Sequence[str] = ()) -> list[str]:
        out = []
        for cond, letter in self.failures:
            who = "" if letter is None else f" (letter {names[letter] if names else letter})"
            out.append(cond + who)
        return out


def reachable_letters(s: Substitution, start: Optional[int] = None) -> set[int]:
    todo = [s.start if start is None else start]
    seen = set(todo)
    while todo:
        a = todo.pop()
        for b in s.rules[a]:
            if b not in seen:
                seen.add(b)
                todo.append(b)
    return seen


def growing_letters(s: Substitution) -> set[int]:
    """Letters b with |τ^n(b)| unbounded, for a non-erasing τ.

    Lengths are non-decreasing; b grows iff its length increases somewhere in
    the window n ∈ [k², 2k²] where k is the alphabet size.
    """
    k = s.size
    lengths = [1] * k
    # lengths[b] = |τ^n(b)|, updated by l_{n+1}(b) = Σ_{c in τ(b)} l_n(c)
    lo = k * k
    for _ in range(lo):
        lengths = [sum(lengths[c] for c in img) for img in s.rules]
    grows = set()
    for _ in range(lo):
        nxt = [sum(lengths[c] for c in img) for img in s.rules]
        grows.update(b for b in range(k) if nxt[b] > lengths[b])
        lengths = nxt
    return grows


def validate(s: Substitution) -> ValidationReport:
    rep = ValidationReport()
    if not s.rules:
        rep.failures.append(("empty alphabet", None))
        return rep
    img = s.rules[s.start]
    if not img or img[0] != s.start:
        rep.failures.append(("first letter of the start image is not the start letter", s.start))
    erasing = [a for a, r in enumerate(s.rules) if not r]
    for a in erasing:
        rep.failures.append(("erasing image", a))
    if not erasing:
        grows = growing_letters(s)
        for a in range(s.size):
            if a not in grows:
                rep.failures.append(("letter is not growing", a))
    reach = reachable_letters(s)
    for a in range(s.size):
        if a not in reach:
            rep.failures.append(("letter not reachable from the start letter", a))
    return rep


class InvalidSubstitution(ValueError):
    pass


def require_valid(s: Substitution) -> None:
    rep = validate(s)
    if not rep:
        raise InvalidSubstitution("; ".join(rep.describe(s.names)))


def _fixed_point_letters(s: Substitution) -> Iterator[int]:
    out = list(s.rules[s.start])
    yield from out
    i = 1
    while True:
        img = s.rules[out[i]]
        out.extend(img)
        yield from img
        i += 1


def fixed_point(s: Substitution) -> LazySequence:
    """The fixed point of s starting with its start letter, expanded lazily."""
    require_valid(s)
    return LazySequence(_fixed_point_letters(s), s.size, name=f"fixed point of {s.show()}")


def rebase_under_morphism(s: Substitution, phi: Morphism) -> tuple[Substitution, Morphism]:
    """Substitution τ and letter-to-letter χ with χ(fixed point of τ) = φ(fixed point of s).

    The new alphabet is the set of pairs (c, k) with k < |φ(c)|; τ is built
    from s^n for the least n >= 1 making |s^n(c)| >= |φ(c)| for every c, so
    its dominant eigenvalue is the n-th power of that of s.
    """
    if phi.domain_size != s.size:
        raise ValueError("morphism domain must be the substitution alphabet")
    if phi.is_erasing:
        raise ValueError("the morphism must not erase letters")
    require_valid(s)
    n = rebase_exponent(s, phi)
    images = [s.iterate((c,), n) for c in range(s.size)]
    pairs = [(c, k) for c in range(s.size) for k in range(len(phi.rules[c]))]
    index = {p: i for i, p in enumerate(pairs)}

    def psi(w):
        return tuple(index[(c, k)] for c in w for k in range(len(phi.rules[c])))

    rules = []
    for c, k in pairs:
        last = len(phi.rules[c]) - 1
        zc = images[c]
        rules.append(psi(zc[k:k + 1]) if k < last else psi(zc[last:]))
    names = tuple(f"({s.names[c]},{k})" for c, k in pairs)
    tau = Substitution(tuple(rules), index[(s.start, 0)], names)
    chi = Morphism(tuple((phi.rules[c][k],) for c, k in pairs), phi.codomain_size,
                   names, phi.codomain_names)
    return tau, chi


def rebase_exponent(s: Substitution, phi: Morphism) -> int:
    """Least n >= 1 with |s^n(c)| >= |φ(c)| for every letter c."""
    n = 1
    lengths = [len(r) for r in s.rules]
    while any(lengths[c] < len(phi.rules[c]) for c in range(s.size)):
        lengths = [sum(lengths[b] for b in img) for img in s.rules]
        n += 1
    return n


def block_substitution(s: Substitution, n: int) -> tuple[Substitution, Morphism]:
    """The n-block presentation σ_n of s and the first-coordinate map ρ.

    The block alphabet is the closure of the first n-block under σ_n, which is
    exactly the set of length-n factors of the fixed point.
    """
    if n < 1:
        raise ValueError("block length must be positive")
    require_valid(s)
    x = fixed_point(s)
    first = x.prefix(n)
    blocks: list[Word] = [first]
    index = {first: 0}
    rules: list[Word] = []
    i = 0
    while i < len(blocks):
        b = blocks[i]
        img = s(b)
        k = len(s.rules[b[0]])
        image_blocks = []
        for j in range(k):
            blk = img[j:j + n]
            if len(blk) < n:
                raise ValueError("image too short to form blocks; is s erasing?")
            if blk not in index:
                index[blk] = len(blocks)
                blocks.append(blk)
            image_blocks.append(index[blk])
        rules.append(tuple(image_blocks))
        i += 1
    sep = "" if all(len(nm) == 1 for nm in s.names) else "."
    names = tuple("(" + sep.join(s.names[a] for a in b) + ")" for b in blocks)
    sigma_n = Substitution(tuple(rules), 0, names)
    rho = Morphism(tuple((b[0],) for b in blocks), s.size, names, s.names)
    return sigma_n, rho


@dataclass(frozen=True)
class ProjectionWitness:
    mapping: tuple[int, ...]

    def as_morphism(self, s: Substitution, t: Substitution) -> Morphism:
        return Morphism(tuple((b,) for b in self.mapping), t.size, s.names, t.names)

    def show(self, s: Substitution, t: Substitution) -> str:
        return ", ".join(f"{s.names[a]}->{t.names[b]}" for a, b in enumerate(self.mapping))


def projects_onto(s: Substitution, t: Substitution) -> Optional[ProjectionWitness]:
    """A letter-to-letter φ with φ(start_s) = start_t and φσ = τφ, if one exists."""
    require_valid(s)
    require_valid(t)
    compatible = [[b for b in range(t.size) if len(t.rules[b]) == len(s.rules[c])]
                  for c in range(s.size)]
    order = sorted(range(s.size), key=lambda c: (len(compatible[c]), c))

    def propagate(phi: dict[int, int]) -> Optional[dict[int, int]]:
        phi = dict(phi)
        changed = True
        while changed:
            changed = False
            for c, b in list(phi.items()):
                target = t.rules[b]
                src = s.rules[c]
                if len(src) != len(target):
                    return None
                for x, y in zip(src, target):
                    if x in phi:
                        if phi[x] != y:
                            return None
                    else:
                        if y not in compatible[x]:
                            return None
                        phi[x] = y
                        changed = True
        return phi

    def search(phi: dict[int, int]) -> Optional[dict[int, int]]:
        phi = propagate(phi)
        if phi is None:
            return None
        free = [c for c in order if c not in phi]
        if not free:
            return phi if set(phi.values()) == set(range(t.size)) else None
        c = free[0]
        for b in compatible[c]:
            found = search({**phi, c: b})
            if found is not None:
                return found
        return None

    if t.start not in compatible[s.start]:
        return None
    found = search({s.start: t.start})
    if found is None:
        return None
    return ProjectionWitness(tuple(found[c] for c in range(s.size)))


def check_projection(s: Substitution, t: Substitution, w: ProjectionWitness) -> bool:
    phi = w.as_morphism(s, t)
    return (w.mapping[s.start] == t.start
            and all(phi(s.rules[c]) == t((w.mapping[c],)) for c in range(s.size)))
