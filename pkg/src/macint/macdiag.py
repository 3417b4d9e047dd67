"""Filled column diagrams, their generating functions, and deformation moves.

A filled diagram carries one Laurent monomial on every cell that is not the
lowest cell of its column.  The generating function sums q^(inversions)
times the product of fillings at descents over all ways to place 1..n into
the cells, collected by inverse descent set.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cache
from itertools import permutations

import numpy as np

from .polyring import Monomial, Poly, QT, Registry, poly_divide_exact
from .qsymsym import QSymElement
from .shapes import (
    Cell,
    Diagram,
    Partition,
    check_partition,
    conjugate,
    partition_to_diagram,
    reading_cells,
    reading_order,
    t_mu,
)
from .words import ides

DEFAULT_MAX_CELLS = 9


class MacDiagError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def max_cells() -> int:
    raw = os.environ.get("MACINT_MAX_CELLS")
    return int(raw) if raw else DEFAULT_MAX_CELLS


@dataclass
class FilledDiagram:
    reg: Registry
    diagram: Diagram
    filling: dict[Cell, Monomial] = field(default_factory=dict)

    def __post_init__(self):
        if "q" not in self.reg.index:
            raise MacDiagError("BAD_FILLING", "registry must contain q")
        expected = set(self.diagram.cells()) - self.diagram.bottom_cells()
        got = set(self.filling)
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            raise MacDiagError(
                "BAD_FILLING",
                f"filling must cover non-bottom cells exactly; "
                f"missing {missing}, extra {extra}",
            )
        for u, m in self.filling.items():
            if not isinstance(m, Monomial) or m.reg != self.reg:
                raise MacDiagError("BAD_FILLING", f"bad monomial at {u}")

    def size(self) -> int:
        return self.diagram.size()

    def __eq__(self, other):
        if not isinstance(other, FilledDiagram):
            return NotImplemented
        return (
            self.reg == other.reg
            and self.diagram == other.diagram
            and self.filling == other.filling
        )


def _check_length(d: Diagram, w) -> None:
    if len(w) != d.size():
        raise MacDiagError("LENGTH_MISMATCH", f"|w|={len(w)} but |D|={d.size()}")


def _inv_position_pairs(d: Diagram) -> list[tuple[int, int]]:
    """0-based reading positions (u, v) whose letters compare for inversions."""
    cells = reading_cells(d)
    pos = {u: i for i, u in enumerate(cells)}
    pairs = []
    for u in cells:
        i, j = u
        for v in cells:
            i2, j2 = v
            if i2 == i and j < j2:
                pairs.append((pos[u], pos[v]))
            elif i2 == i - 1 and j > j2:
                pairs.append((pos[u], pos[v]))
    return pairs


def _descent_cells(d: Diagram) -> list[tuple[Cell, int, int]]:
    """Cells with a neighbor directly below, as (cell, pos_above, pos_below)."""
    cells = reading_cells(d)
    pos = {u: i for i, u in enumerate(cells)}
    out = []
    for u in cells:
        i, j = u
        below = (i - 1, j)
        if below in d:
            out.append((u, pos[u], pos[below]))
    return out


def inv_d(d: Diagram, w, reg: Registry = QT) -> Monomial:
    """q to the number of attacking pairs read in the wrong order."""
    _check_length(d, w)
    count = sum(1 for pu, pv in _inv_position_pairs(d) if w[pu] > w[pv])
    return reg.var("q", count)


def maj_df(df: FilledDiagram, w) -> Monomial:
    """Product of fillings at cells whose letter exceeds the letter below."""
    _check_length(df.diagram, w)
    out = df.reg.one()
    for u, pu, pv in _descent_cells(df.diagram):
        if w[pu] > w[pv]:
            out = out * df.filling[u]
    return out


def stat(df: FilledDiagram, w) -> Monomial:
    return inv_d(df.diagram, w, df.reg) * maj_df(df, w)


@cache
def _perm_matrix(n: int) -> np.ndarray:
    return np.array(list(permutations(range(1, n + 1))), dtype=np.int8).reshape(
        -1, n
    )


def hhl_polynomial(df: FilledDiagram, jobs: int = 1) -> QSymElement:
    """Sum stat(w) F at the inverse descent set of w over all placements."""
    n = df.size()
    cap = max_cells()
    if n > cap:
        raise MacDiagError(
            "SIZE_CAP_EXCEEDED", f"|D|={n} exceeds cap {cap} (MACINT_MAX_CELLS)"
        )
    reg = df.reg
    nv = len(reg.names)
    if n == 0:
        return QSymElement(reg, 0, "F", {frozenset(): Poly.const(reg, 1)})

    qvec = np.zeros(nv, dtype=np.int64)
    qvec[reg.index["q"]] = 1
    inv_pairs = _inv_position_pairs(df.diagram)
    desc = [
        (np.array(m.exps, dtype=np.int64), pu, pv)
        for (u, pu, pv) in _descent_cells(df.diagram)
        for m in (df.filling[u],)
    ]

    perms = _perm_matrix(n)
    total = perms.shape[0]
    jobs = max(1, int(jobs))
    chunk = (total + jobs - 1) // jobs
    acc: dict[frozenset[int], dict[tuple[int, ...], int]] = {}
    for start in range(0, total, chunk):
        P = perms[start : start + chunk]
        count = np.zeros(P.shape[0], dtype=np.int64)
        for pu, pv in inv_pairs:
            count += P[:, pu] > P[:, pv]
        E = count[:, None] * qvec[None, :]
        for evec, pu, pv in desc:
            E = E + (P[:, pu] > P[:, pv])[:, None] * evec[None, :]
        pos = np.argsort(P, axis=1)
        bits = np.zeros(P.shape[0], dtype=np.int64)
        for i in range(n - 1):
            bits |= (pos[:, i] > pos[:, i + 1]).astype(np.int64) << i
        key = np.column_stack([bits, E])
        uniq, counts = np.unique(key, axis=0, return_counts=True)
        for row, c in zip(uniq, counts):
            s = frozenset(i + 1 for i in range(n - 1) if row[0] >> i & 1)
            exps = tuple(int(e) for e in row[1:])
            bucket = acc.setdefault(s, {})
            bucket[exps] = bucket.get(exps, 0) + int(c)
    coeffs = {
        s: Poly(reg, {Monomial(reg, exps): c for exps, c in bucket.items()})
        for s, bucket in acc.items()
    }
    return QSymElement(reg, n, "F", coeffs)


def hhl_slow(df: FilledDiagram) -> QSymElement:
    """Definitional route, one placement at a time."""
    n = df.size()
    reg = df.reg
    coeffs: dict[frozenset[int], Poly] = {}
    for w in permutations(range(1, n + 1)):
        s = ides(w)
        coeffs[s] = coeffs.get(s, Poly.zero(reg)) + stat(df, w)
    return QSymElement(reg, n, "F", coeffs)


def standard_filling(mu: Partition) -> FilledDiagram:
    """Partition diagram filled with q^(-arm) t^(leg+1) at non-bottom cells."""
    mu = check_partition(mu)
    d = partition_to_diagram(mu)
    fill = {}
    for (i, j) in d.cells():
        if i > 1:
            a = mu[i - 1] - j
            l = sum(1 for p in mu[i:] if p >= j)
            fill[(i, j)] = QT.mono(q=-a, t=l + 1)
    return FilledDiagram(QT, d, fill)


@cache
def hhl_of_partition(mu: Partition) -> QSymElement:
    return hhl_polynomial(standard_filling(mu))


def cycling(df: FilledDiagram) -> FilledDiagram:
    """Send the leftmost column to the far right, shifted up one row."""
    cols = df.diagram.columns
    if not cols:
        return df
    a, b = cols[0]
    newcols = cols[1:] + ((a + 1, b + 1),)
    newfill = {}
    for (r, k), m in df.filling.items():
        if k == 1:
            newfill[(r + 1, len(cols))] = m
        else:
            newfill[(r, k - 1)] = m
    return FilledDiagram(df.reg, Diagram(newcols), newfill)


def in_V(df: FilledDiagram, n: int, m: int) -> bool:
    """Whether a two-column diagram satisfies the exchange compatibility:
    each shared row of the long column factors through the row above the
    short column."""
    if n <= m:
        raise MacDiagError("SHAPE_MISMATCH", f"need n > m, got n={n} m={m}")
    if df.diagram.columns != ((1, n), (1, m)):
        raise MacDiagError(
            "SHAPE_MISMATCH",
            f"need columns [1,{n}],[1,{m}], got {df.diagram.columns}",
        )
    anchor = df.filling[(m + 1, 1)] / df.reg.var("q")
    for i in range(2, m + 1):
        if df.filling[(i, 1)] != anchor * df.filling[(i, 2)]:
            return False
    return True


def _column_pair(df: FilledDiagram, j: int) -> FilledDiagram:
    """Columns j, j+1 as a standalone filled diagram."""
    cols = df.diagram.columns
    sub = Diagram((cols[j - 1], cols[j]))
    fill = {}
    for (r, k), m in df.filling.items():
        if k in (j, j + 1):
            fill[(r, k - j + 1)] = m
    return FilledDiagram(df.reg, sub, fill)


def column_exchange(df: FilledDiagram, j: int) -> FilledDiagram:
    """Swap columns j and j+1 (left strictly longer), dividing the long
    column's cell just above the short column's top by q."""
    cols = df.diagram.columns
    if not (1 <= j < len(cols)):
        raise MacDiagError("NOT_IN_V", f"no adjacent pair at {j}")
    (a1, b1), (a2, b2) = cols[j - 1], cols[j]
    n, m = b1 - a1 + 1, b2 - a2 + 1
    if a1 != 1 or a2 != 1 or n <= m:
        raise MacDiagError(
            "NOT_IN_V", f"columns {j},{j + 1} are not a full long/short pair"
        )
    if not in_V(_column_pair(df, j), n, m):
        raise MacDiagError("NOT_IN_V", f"columns {j},{j + 1} fillings incompatible")
    q = df.reg.var("q")
    newcols = list(cols)
    newcols[j - 1], newcols[j] = cols[j], cols[j - 1]
    newfill = {}
    for (r, k), mono in df.filling.items():
        if k == j:
            newfill[(r, j + 1)] = mono / q if r == m + 1 else mono
        elif k == j + 1:
            newfill[(r, j)] = mono
        else:
            newfill[(r, k)] = mono
    return FilledDiagram(df.reg, Diagram(tuple(newcols)), newfill)


def in_barV(df: FilledDiagram, n: int, m: int, alpha: Monomial) -> bool:
    """Exchange compatibility for a long column next to a floating short
    column (or alone when m = 1), with explicit parameter alpha."""
    if n <= m:
        raise MacDiagError("SHAPE_MISMATCH", f"need n > m, got n={n} m={m}")
    cols = df.diagram.columns
    if m == 1:
        if cols != ((1, n),):
            raise MacDiagError(
                "SHAPE_MISMATCH", f"need single column [1,{n}], got {cols}"
            )
    elif cols != ((1, n), (2, m)):
        raise MacDiagError(
            "SHAPE_MISMATCH",
            f"need columns [1,{n}],[2,{m}], got {cols}",
        )
    if df.filling[(m + 1, 1)] / df.reg.var("q") != alpha:
        return False
    for i in range(3, m + 1):
        if df.filling[(i, 1)] != alpha * df.filling[(i, 2)]:
            return False
    return True


def bar_column_exchange(df: FilledDiagram, j: int) -> FilledDiagram:
    """Swap a long column with the floating short column to its right.

    With no short partner the move splits column j into a single bottom
    cell and a floating copy one row up; the parameter alpha is read off
    the diagram as the row-(m+1) filling divided by q.
    """
    cols = df.diagram.columns
    if not (1 <= j <= len(cols)):
        raise MacDiagError("NOT_IN_BARV", f"no column at {j}")
    a1, b1 = cols[j - 1]
    if a1 != 1:
        raise MacDiagError("NOT_IN_BARV", f"column {j} must start at row 1")
    n = b1
    paired = j < len(cols) and cols[j][0] == 2
    m = cols[j][1] if paired else 1
    if n <= m:
        raise MacDiagError("NOT_IN_BARV", f"need long column, got n={n} m={m}")
    if (m + 1, j) not in df.filling:
        raise MacDiagError("NOT_IN_BARV", f"no filling at row {m + 1} of column {j}")
    alpha = df.filling[(m + 1, j)] / df.reg.var("q")
    pair = _column_pair(df, j) if paired else _single_column(df, j)
    if not in_barV(pair, n, m, alpha):
        raise MacDiagError("NOT_IN_BARV", f"columns at {j} fillings incompatible")

    newfill: dict[Cell, Monomial] = {}
    if paired:
        newcols = list(cols)
        newcols[j - 1], newcols[j] = (1, m), (2, n)
        for (r, k), mono in df.filling.items():
            if k == j:
                if r <= m:
                    newfill[(r, j)] = mono / alpha
                if 3 <= r <= n and r != m + 1:
                    newfill[(r, j + 1)] = mono
            elif k == j + 1:
                pass  # values rebuilt from column j by the compatibility
            else:
                newfill[(r, k)] = mono
        newfill[(m + 1, j + 1)] = alpha
        return FilledDiagram(df.reg, Diagram(tuple(newcols)), newfill)

    # m = 1: the column splits and the diagram gains a column
    newcols = list(cols)
    newcols[j - 1 : j] = [(1, 1), (2, n)]
    for (r, k), mono in df.filling.items():
        if k == j:
            if r >= 3:
                newfill[(r, j + 1)] = mono
        elif k > j:
            newfill[(r, k + 1)] = mono
        else:
            newfill[(r, k)] = mono
    return FilledDiagram(df.reg, Diagram(tuple(newcols)), newfill)


def _single_column(df: FilledDiagram, j: int) -> FilledDiagram:
    sub = Diagram((df.diagram.columns[j - 1],))
    fill = {(r, 1): m for (r, k), m in df.filling.items() if k == j}
    return FilledDiagram(df.reg, sub, fill)


def corner_columns(nu: Partition) -> list[int]:
    """Column indices where the top cell can be removed."""
    a = conjugate(nu)
    return [
        c for c in range(1, len(a) + 1) if c == len(a) or a[c - 1] > a[c]
    ]


def remove_corner_column(nu: Partition, c: int) -> Partition:
    """nu minus the top cell of column c, as a partition."""
    a = list(conjugate(nu))
    a[c - 1] -= 1
    return conjugate(tuple(p for p in a if p > 0))


def deform(
    nu: Partition, i: int, j: int, which: str, trace: list | None = None
) -> FilledDiagram:
    """Deformation diagram for the corner pair (columns i < j) of nu.

    which="mu" removes at column j, which="lambda" at column i.  Exchange
    moves and the final cycling are recorded in trace when given.
    """
    nu = check_partition(nu)
    corners = corner_columns(nu)
    if not (i in corners and j in corners and i < j):
        raise MacDiagError(
            "INVALID_CORNERS", f"columns {i},{j} are not a corner pair of {nu}"
        )
    a = conjugate(nu)
    ell = len(a)
    if which == "mu":
        base = remove_corner_column(nu, j)
        df = standard_filling(base)
        if a[j - 1] == 1:
            # the removed column vanishes: only push column i to the end
            df = _move_right(df, i, len(df.diagram.columns), trace)
            return df
        df = _move_left(df, j, 1, trace)
        df = _move_right(df, i + 1, ell, trace)
    elif which == "lambda":
        base = remove_corner_column(nu, i)
        df = standard_filling(base)
        df = _move_right(df, j, ell, trace)
        df = _move_left(df, i, 1, trace)
    else:
        raise MacDiagError("INVALID_CORNERS", f"which must be mu or lambda: {which}")
    if trace is not None:
        trace.append((df, ("cycle",)))
    return cycling(df)


def _exchange_step(df: FilledDiagram, j: int, trace: list | None) -> FilledDiagram:
    if trace is not None:
        trace.append((df, ("S", j)))
    try:
        return column_exchange(df, j)
    except MacDiagError as e:
        raise MacDiagError(
            "INTERNAL_INVARIANT_VIOLATION", f"exchange at {j} failed: {e}"
        ) from e


def _move_left(df: FilledDiagram, frm: int, to: int, trace: list | None):
    for p in range(frm - 1, to - 1, -1):
        df = _exchange_step(df, p, trace)
    return df


def _move_right(df: FilledDiagram, frm: int, to: int, trace: list | None):
    for p in range(frm, to):
        df = _exchange_step(df, p, trace)
    return df


def validate_corner_pair(lam: Partition, mu: Partition):
    """Check lam and mu differ from their cellwise max at distinct corners.

    Returns (nu, i, j) with i the column of the cell missing from the
    dominance-larger partition.
    """
    lam = check_partition(lam)
    mu = check_partition(mu)
    if lam == mu:
        raise MacDiagError("INVALID_PAIR", "partitions must differ")
    rows = max(len(lam), len(mu))
    nu = tuple(
        max(
            lam[r] if r < len(lam) else 0,
            mu[r] if r < len(mu) else 0,
        )
        for r in range(rows)
    )
    nu = check_partition(nu)
    a_nu = conjugate(nu)
    cols = []
    for part in (lam, mu):
        a_p = conjugate(part)
        a_p = a_p + (0,) * (len(a_nu) - len(a_p))
        diff = [c for c in range(len(a_nu)) if a_nu[c] != a_p[c]]
        if len(diff) != 1 or a_nu[diff[0]] - a_p[diff[0]] != 1:
            raise MacDiagError(
                "INVALID_PAIR", f"{part} is not {nu} minus one corner cell"
            )
        cols.append(diff[0] + 1)
    i, j = sorted(cols)
    return nu, i, j


def intersection_divided_difference(lam: Partition, mu: Partition) -> QSymElement:
    """Common part of two generating functions at adjacent partitions,
    eliminated through the torus weights."""
    lam = check_partition(lam)
    mu = check_partition(mu)
    validate_corner_pair(lam, mu)
    h_lam = hhl_of_partition(tuple(lam))
    h_mu = hhl_of_partition(tuple(mu))
    t_lam = t_mu(lam).as_poly()
    t_m = t_mu(mu).as_poly()
    den = t_lam - t_m
    num = (h_mu.scale(t_lam)) - (h_lam.scale(t_m))
    return num.map_coeffs(lambda p: poly_divide_exact(p, den))


def filled_diagram_to_json(df: FilledDiagram) -> dict:
    cells = sorted(df.filling, key=lambda u: (u[1], u[0]))
    return {
        "columns": [list(c) for c in df.diagram.columns],
        "filling": [
            {"cell": [r, k], "mono": df.filling[(r, k)].serialize()}
            for (r, k) in cells
        ],
    }


def filled_diagram_from_json(reg: Registry, data: dict) -> FilledDiagram:
    from .polyring import parse_mono

    d = Diagram(tuple((int(a), int(b)) for a, b in data["columns"]))
    fill = {}
    for entry in data.get("filling", []):
        r, k = entry["cell"]
        fill[(int(r), int(k))] = parse_mono(reg, entry["mono"])
    return FilledDiagram(reg, d, fill)
