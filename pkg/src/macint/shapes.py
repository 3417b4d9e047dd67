"""Partitions, skew shapes, column-interval diagrams, and cell geometry.

French convention everywhere: cells are (row, col) with row 1 at the bottom.
A diagram is an ordered list of columns, each a contiguous interval of rows
[a, b] with 1 <= a <= b.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from typing import Iterable, Iterator

from .polyring import QT, Monomial, Registry


class ShapeError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


Partition = tuple[int, ...]
Cell = tuple[int, int]


def check_partition(parts: Iterable[int]) -> Partition:
    mu = tuple(parts)
    for i, p in enumerate(mu):
        if p <= 0:
            raise ShapeError("BAD_PARTITION", f"nonpositive part in {mu}")
        if i and mu[i - 1] < p:
            raise ShapeError("BAD_PARTITION", f"parts increase in {mu}")
    return mu


def size(mu: Partition) -> int:
    return sum(mu)


def cells(mu: Partition) -> Iterator[Cell]:
    for i, p in enumerate(mu, start=1):
        for j in range(1, p + 1):
            yield (i, j)


def contains_cell(mu: Partition, u: Cell) -> bool:
    i, j = u
    return 1 <= i <= len(mu) and 1 <= j <= mu[i - 1]


def arm(mu: Partition, u: Cell) -> int:
    """Cells strictly right of u in its row."""
    if not contains_cell(mu, u):
        raise ShapeError("CELL_NOT_IN_SHAPE", f"{u} not in {mu}")
    i, j = u
    return mu[i - 1] - j


def leg(mu: Partition, u: Cell) -> int:
    """Cells strictly above u in its column."""
    if not contains_cell(mu, u):
        raise ShapeError("CELL_NOT_IN_SHAPE", f"{u} not in {mu}")
    i, j = u
    return sum(1 for p in mu[i:] if p >= j)


def conjugate(mu: Partition) -> Partition:
    if not mu:
        return ()
    return tuple(sum(1 for p in mu if p >= j) for j in range(1, mu[0] + 1))


def t_mu(mu: Partition, reg: Registry = QT) -> Monomial:
    """Product of t^(row-1) q^(col-1) over the cells of mu."""
    qe = sum(j - 1 for _, j in cells(mu))
    te = sum(i - 1 for i, _ in cells(mu))
    vec = [0] * len(reg.names)
    vec[reg.index["q"]] = qe
    vec[reg.index["t"]] = te
    return Monomial(reg, tuple(vec))


def dominance_leq(lam: Partition, mu: Partition) -> bool:
    """Prefix-sum comparison: lam is dominated by mu."""
    if sum(lam) != sum(mu):
        raise ShapeError("SIZE_MISMATCH", f"{lam} vs {mu}")
    sl = sm = 0
    for k in range(max(len(lam), len(mu))):
        sl += lam[k] if k < len(lam) else 0
        sm += mu[k] if k < len(mu) else 0
        if sl > sm:
            return False
    return True


@dataclass(frozen=True)
class Diagram:
    """Ordered columns, each a nonempty row interval [a, b]."""

    columns: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for a, b in self.columns:
            if not (1 <= a <= b):
                raise ShapeError("BAD_DIAGRAM", f"bad interval [{a},{b}]")

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def size(self) -> int:
        return sum(b - a + 1 for a, b in self.columns)

    def cells(self) -> list[Cell]:
        out = []
        for k, (a, b) in enumerate(self.columns, start=1):
            out.extend((r, k) for r in range(a, b + 1))
        return out

    def __contains__(self, u: Cell) -> bool:
        r, k = u
        if not (1 <= k <= len(self.columns)):
            return False
        a, b = self.columns[k - 1]
        return a <= r <= b

    def bottom_cells(self) -> set[Cell]:
        return {(a, k) for k, (a, _) in enumerate(self.columns, start=1)}

    def column_cells(self, k: int) -> list[Cell]:
        a, b = self.columns[k - 1]
        return [(r, k) for r in range(a, b + 1)]


def partition_to_diagram(mu: Partition) -> Diagram:
    """Columns [1, mu'_k] for k = 1..mu_1."""
    return Diagram(tuple((1, h) for h in conjugate(mu)))


def reading_cells(d: Diagram) -> list[Cell]:
    """Cells listed top row to bottom row, left to right within a row."""
    if not d.columns:
        return []
    top = max(b for _, b in d.columns)
    out = []
    for r in range(top, 0, -1):
        for k, (a, b) in enumerate(d.columns, start=1):
            if a <= r <= b:
                out.append((r, k))
    return out


def reading_order(d: Diagram) -> dict[Cell, int]:
    """Cell -> 1-based position in reading order."""
    return {u: i for i, u in enumerate(reading_cells(d), start=1)}


def removable_corners(nu: Partition) -> list[Cell]:
    """Cells whose removal leaves a partition, top row first."""
    out = []
    for i in range(1, len(nu) + 1):
        j = nu[i - 1]
        below_ok = i == len(nu) or nu[i] < j
        if below_ok:
            out.append((i, j))
    out.sort(key=lambda u: -u[0])
    return out


@cache
def partitions_of(n: int, max_part: int | None = None) -> tuple[Partition, ...]:
    """All partitions of n in reverse-lex order (largest part first)."""
    if max_part is None:
        max_part = n
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


@dataclass(frozen=True)
class SkewShape:
    outer: Partition
    inner: Partition

    def __post_init__(self):
        lam, mu = self.outer, self.inner
        if len(mu) > len(lam) or any(
            mu[i] > lam[i] for i in range(len(mu))
        ):
            raise ShapeError("NOT_CONTAINED", f"{mu} not inside {lam}")

    def cells(self) -> list[Cell]:
        out = []
        for i, p in enumerate(self.outer, start=1):
            start = self.inner[i - 1] if i <= len(self.inner) else 0
            out.extend((i, j) for j in range(start + 1, p + 1))
        return out

    def size(self) -> int:
        return len(self.cells())
