"""Square matrices with exact (integer or rational) entries."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import polys


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix indexed by letter-ids; ``rows[i][j]`` is entry (i, j).

    For incidence matrices entry (i, j) counts letter ``i`` in the image of
    letter ``j``, so columns are producers and rows are products.
    """

    rows: tuple[tuple, ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_lists(cls, rows: Iterable[Sequence]) -> "IntMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows))) if self.rows else self

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        cols = list(zip(*other.rows))
        return IntMatrix(tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows
        ))

    def __pow__(self, k: int) -> "IntMatrix":
        result = IntMatrix.identity(self.size)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_nonnegative(self) -> bool:
        return all(a >= 0 for r in self.rows for a in r)

    def is_positive(self) -> bool:
        return all(a > 0 for r in self.rows for a in r)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def submatrix(self, idx: Sequence[int], cols: Sequence[int] | None = None) -> "IntMatrix":
        cols = idx if cols is None else cols
        return IntMatrix(tuple(tuple(self.rows[i][j] for j in cols) for i in idx))

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> list[list]:
        return [[self.rows[i][j] for j in cols] for i in rows]

    def to_json(self) -> dict:
        return {"size": self.size, "rows": [[_jsonable(a) for a in r] for r in self.rows]}

    @classmethod
    def from_json(cls, obj: dict) -> "IntMatrix":
        rows = obj["rows"]
        if obj.get("size", len(rows)) != len(rows):
            raise ValueError("declared size does not match row count")
        return cls.from_lists(rows)


def _jsonable(a):
    if isinstance(a, Fraction):
        return a.numerator if a.denominator == 1 else str(a)
    return a


def char_poly(m: IntMatrix) -> polys.Poly:
    """Characteristic polynomial det(xI - M) by Berkowitz's division-free algorithm."""
    n = m.size
    if n == 0:
        return (1,)
    a = [list(r) for r in m.rows]
    # coefficient vectors, highest degree first
    vec = [1, -a[0][0]]
    for r in range(1, n):
        # partition leading (r+1)x(r+1) submatrix as [[A, R], [C, a_rr]]
        R = [a[i][r] for i in range(r)]          # column above the corner
        C = [a[r][j] for j in range(r)]          # row left of the corner
        A = [row[:r] for row in a[:r]]
        # Toeplitz column: 1, -a_rr, -C R, -C A R, -C A^2 R, ...
        col = [1, -a[r][r]]
        v = R
        for _ in range(r):
            col.append(-sum(c * x for c, x in zip(C, v)))
            v = [sum(A[i][j] * v[j] for j in range(r)) for i in range(r)]
        # multiply lower-triangular Toeplitz (len r+2 x r+1) by vec
        new = []
        for i in range(r + 2):
            new.append(sum(col[i - j] * vec[j] for j in range(len(vec)) if 0 <= i - j < len(col)))
        vec = new
    return polys._normalize(reversed(vec))


def companion(p: polys.Poly) -> IntMatrix:
    """Companion matrix whose characteristic polynomial is p divided by its lead."""
    n = polys.degree(p)
    lead = Fraction(p[-1])
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        c = -Fraction(p[i]) / lead
        rows[i][n - 1] = c.numerator if c.denominator == 1 else c
    return IntMatrix.from_lists(rows)
