"""Exact integer matrices with fraction-free elimination.

Every quantity that feeds a certification verdict is an arbitrary-precision
integer or a `fractions.Fraction`; there is no floating point in this module.
`Rat` is the rational scalar type used for coverage sums and solution
coordinates (stdlib Fraction already guarantees a positive, gcd-reduced
denominator).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major storage."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat: list[int] = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in r)
        return cls(nrows, ncols, tuple(flat))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    def at(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) out of range")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        if not 0 <= i < self.rows:
            raise IndexError(f"row {i} out of range")
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def with_row(self, i: int, new_row: Sequence[int]) -> "IntMatrix":
        if len(new_row) != self.cols:
            raise ValueError("row length mismatch")
        if not 0 <= i < self.rows:
            raise IndexError(f"row {i} out of range")
        ent = list(self.entries)
        ent[i * self.cols : (i + 1) * self.cols] = [int(x) for x in new_row]
        return IntMatrix(self.rows, self.cols, tuple(ent))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "IntMatrix":
        """Submatrix of rows [r0, r1) and columns [c0, c1)."""
        if not (0 <= r0 <= r1 <= self.rows and 0 <= c0 <= c1 <= self.cols):
            raise IndexError("block out of range")
        flat = tuple(
            self.entries[i * self.cols + j] for i in range(r0, r1) for j in range(c0, c1)
        )
        return IntMatrix(r1 - r0, c1 - c0, flat)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __str__(self) -> str:
        width = max((len(str(x)) for x in self.entries), default=1)
        return "\n".join(
            " ".join(str(self.at(i, j)).rjust(width) for j in range(self.cols))
            for i in range(self.rows)
        )


def det_bareiss(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (one-step Bareiss) elimination.

    Intermediate entries are minors of the input, so every division below is
    exact over the integers; nothing is rounded.
    """
    if not m.is_square:
        raise ValueError(f"determinant needs a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        return 1
    a = m.to_rows()
    sign = 1
    prev = 1
    for p in range(n - 1):
        if a[p][p] == 0:
            for r in range(p + 1, n):
                if a[r][p] != 0:
                    a[p], a[r] = a[r], a[p]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[p][p]
        for i in range(p + 1, n):
            f = a[i][p]
            row_i = a[i]
            row_p = a[p]
            for j in range(p + 1, n):
                row_i[j] = (row_i[j] * pivot - f * row_p[j]) // prev
            row_i[p] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def rank(m: IntMatrix) -> int:
    """Rank over the rationals, via fraction-free elimination with column scan."""
    a = m.to_rows()
    nrows, ncols = m.rows, m.cols
    prev = 1
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        pivot = a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c + 1, ncols):
                row_i[j] = (row_i[j] * pivot - f * row_r[j]) // prev
            row_i[c] = 0
        prev = pivot
        r += 1
        if r == nrows:
            break
    return r


def row_combine(
    m: IntMatrix, target: int, add: Iterable[tuple[int, int]]
) -> IntMatrix:
    """Copy of ``m`` with row ``target`` replaced by itself plus sum of coeff*row.

    Source rows are taken from the original matrix, so ``add`` may mention the
    target row itself.
    """
    if not 0 <= target < m.rows:
        raise IndexError(f"target row {target} out of range")
    new_row = m.row(target)
    for coeff, src in add:
        if not 0 <= src < m.rows:
            raise IndexError(f"source row {src} out of range")
        src_row = m.row(src)
        for j in range(m.cols):
            new_row[j] += coeff * src_row[j]
    return m.with_row(target, new_row)


def row_divide_exact(m: IntMatrix, target: int, divisor: int) -> IntMatrix:
    """Copy of ``m`` with row ``target`` divided by ``divisor``; every entry must divide."""
    if divisor == 0:
        raise ValueError("divisor must be non-zero")
    old = m.row(target)
    new_row = []
    for j, x in enumerate(old):
        q, rem = divmod(x, divisor)
        if rem != 0:
            raise ValueError(f"entry {x} at column {j} not divisible by {divisor}")
        new_row.append(q)
    return m.with_row(target, new_row)
