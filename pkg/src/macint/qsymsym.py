"""Quasisymmetric and symmetric functions with polynomial coefficients.

Homogeneous elements only.  Quasisymmetric elements are indexed by subsets
of [n-1] (fundamental F or monomial M basis); symmetric elements by
partitions of n (m, h, e, or s basis).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache

from .polyring import Monomial, Poly, Registry
from .shapes import Partition, check_partition, partitions_of


class QSymError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


Subset = frozenset[int]


def comp_from_subset(n: int, s: Subset) -> tuple[int, ...]:
    cuts = sorted(s) + [n]
    prev = 0
    out = []
    for c in cuts:
        out.append(c - prev)
        prev = c
    return tuple(p for p in out if p > 0) if n else ()


def subset_from_comp(alpha: tuple[int, ...]) -> tuple[int, Subset]:
    n = sum(alpha)
    acc = 0
    cuts = []
    for p in alpha[:-1]:
        acc += p
        cuts.append(acc)
    return n, frozenset(cuts)


def _coerce_poly(reg: Registry, c) -> Poly:
    if isinstance(c, Poly):
        if c.reg is not reg and c.reg != reg:
            raise QSymError("REGISTRY_MISMATCH", "coefficient registry differs")
        return c
    if isinstance(c, Monomial):
        return c.as_poly()
    if isinstance(c, int):
        return Poly.const(reg, c)
    raise QSymError("BAD_COEFF", f"{c!r}")


@dataclass
class QSymElement:
    reg: Registry
    degree: int
    basis: str
    coeffs: dict[Subset, Poly] = field(default_factory=dict)

    def __post_init__(self):
        if self.basis not in ("F", "M"):
            raise QSymError("BAD_BASIS", self.basis)
        clean = {}
        for s, c in self.coeffs.items():
            s = frozenset(s)
            if any(not (1 <= i <= self.degree - 1) for i in s):
                raise QSymError("BAD_INDEX", f"{sorted(s)} not inside [{self.degree - 1}]")
            p = _coerce_poly(self.reg, c)
            if not p.is_zero():
                clean[s] = p
        self.coeffs = clean

    def coeff(self, s) -> Poly:
        return self.coeffs.get(frozenset(s), Poly.zero(self.reg))

    def is_zero(self) -> bool:
        return not self.coeffs

    def map_coeffs(self, fn) -> "QSymElement":
        return QSymElement(
            self.reg, self.degree, self.basis, {s: fn(c) for s, c in self.coeffs.items()}
        )

    def scale(self, c) -> "QSymElement":
        p = _coerce_poly(self.reg, c)
        return self.map_coeffs(lambda x: x * p)

    def _binop(self, other: "QSymElement", sign: int) -> "QSymElement":
        if (
            self.degree != other.degree
            or self.basis != other.basis
            or self.reg != other.reg
        ):
            raise QSymError("MIXED_ELEMENTS", "degree, basis, or registry differs")
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, Poly.zero(self.reg)) + (c if sign > 0 else -c)
        return QSymElement(self.reg, self.degree, self.basis, out)

    def __add__(self, other):
        return self._binop(other, +1)

    def __sub__(self, other):
        return self._binop(other, -1)

    def __eq__(self, other):
        if not isinstance(other, QSymElement):
            return NotImplemented
        if self.reg != other.reg or self.degree != other.degree:
            return False
        a, b = self, other
        if a.basis != b.basis:
            a = f_to_m(a) if a.basis == "F" else a
            b = f_to_m(b) if b.basis == "F" else b
        return a.coeffs == b.coeffs

    def __mul__(self, other: "QSymElement") -> "QSymElement":
        a = f_to_m(self) if self.basis == "F" else self
        b = f_to_m(other) if other.basis == "F" else other
        if a.reg != b.reg:
            raise QSymError("MIXED_ELEMENTS", "registry differs")
        n = a.degree + b.degree
        out: dict[Subset, Poly] = {}
        for s1, c1 in a.coeffs.items():
            a1 = comp_from_subset(a.degree, s1)
            for s2, c2 in b.coeffs.items():
                a2 = comp_from_subset(b.degree, s2)
                prod = c1 * c2
                for gamma in quasi_shuffles(a1, a2):
                    _, s = subset_from_comp(gamma)
                    out[s] = out.get(s, Poly.zero(a.reg)) + prod
        return QSymElement(a.reg, n, "M", out)


@dataclass
class SymElement:
    reg: Registry
    degree: int
    basis: str
    coeffs: dict[Partition, Poly] = field(default_factory=dict)

    def __post_init__(self):
        if self.basis not in ("m", "h", "e", "s"):
            raise QSymError("BAD_BASIS", self.basis)
        clean = {}
        for lam, c in self.coeffs.items():
            lam = check_partition(lam)
            if sum(lam) != self.degree:
                raise QSymError("BAD_INDEX", f"{lam} has size != {self.degree}")
            p = _coerce_poly(self.reg, c)
            if not p.is_zero():
                clean[lam] = p
        self.coeffs = clean

    def coeff(self, lam) -> Poly:
        return self.coeffs.get(tuple(lam), Poly.zero(self.reg))

    def is_zero(self) -> bool:
        return not self.coeffs

    def map_coeffs(self, fn) -> "SymElement":
        return SymElement(
            self.reg, self.degree, self.basis, {s: fn(c) for s, c in self.coeffs.items()}
        )

    def scale(self, c) -> "SymElement":
        p = _coerce_poly(self.reg, c)
        return self.map_coeffs(lambda x: x * p)

    def _binop(self, other: "SymElement", sign: int) -> "SymElement":
        if (
            self.degree != other.degree
            or self.basis != other.basis
            or self.reg != other.reg
        ):
            raise QSymError("MIXED_ELEMENTS", "degree, basis, or registry differs")
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, Poly.zero(self.reg)) + (c if sign > 0 else -c)
        return SymElement(self.reg, self.degree, self.basis, out)

    def __add__(self, other):
        return self._binop(other, +1)

    def __sub__(self, other):
        return self._binop(other, -1)

    def __eq__(self, other):
        if not isinstance(other, SymElement):
            return NotImplemented
        return (
            self.reg == other.reg
            and self.degree == other.degree
            and self.basis == other.basis
            and self.coeffs == other.coeffs
        )


def quasi_shuffles(a: tuple[int, ...], b: tuple[int, ...]):
    """All overlapping shuffles of two compositions, with multiplicity."""
    if not a:
        yield b
        return
    if not b:
        yield a
        return
    for tail in quasi_shuffles(a[1:], b):
        yield (a[0],) + tail
    for tail in quasi_shuffles(a, b[1:]):
        yield (b[0],) + tail
    for tail in quasi_shuffles(a[1:], b[1:]):
        yield (a[0] + b[0],) + tail


def f_to_m(x: QSymElement) -> QSymElement:
    """Fundamental to monomial: the M coefficient of T sums F over subsets of T."""
    if x.basis != "F":
        raise QSymError("BAD_BASIS", f"expected F, got {x.basis}")
    n = x.degree
    out: dict[Subset, Poly] = {}
    universe = list(range(1, n))
    for s, c in x.coeffs.items():
        extra = [i for i in universe if i not in s]
        for bits in range(1 << len(extra)):
            t = set(s)
            for k, i in enumerate(extra):
                if bits >> k & 1:
                    t.add(i)
            t = frozenset(t)
            out[t] = out.get(t, Poly.zero(x.reg)) + c
    return QSymElement(x.reg, n, "M", out)


def qsym_to_sym(x: QSymElement) -> SymElement:
    """Group M coefficients by part multiset; fail with a witness if unequal."""
    m = f_to_m(x) if x.basis == "F" else x
    n = m.degree
    zero = Poly.zero(m.reg)
    groups: dict[Partition, list[tuple[tuple[int, ...], Poly]]] = {}
    for bits in range(1 << max(n - 1, 0)):
        s = frozenset(i for i in range(1, n) if bits >> (i - 1) & 1)
        alpha = comp_from_subset(n, s)
        lam = tuple(sorted(alpha, reverse=True))
        groups.setdefault(lam, []).append((alpha, m.coeffs.get(s, zero)))
    out: dict[Partition, Poly] = {}
    for lam, entries in groups.items():
        ref_alpha, ref = entries[0]
        for alpha, c in entries[1:]:
            if c != ref:
                raise QSymError(
                    "NOT_SYMMETRIC",
                    f"coefficients differ at compositions {ref_alpha} and {alpha}",
                )
        if lam and not ref.is_zero():
            out[lam] = ref
    if n == 0:
        empty = m.coeffs.get(frozenset(), zero)
        if not empty.is_zero():
            out[()] = empty
    return SymElement(m.reg, n, "m", out)


@cache
def kostka_number(lam: Partition, mu: Partition) -> int:
    """Semistandard tableaux of shape lam and content mu."""
    if sum(lam) != sum(mu):
        return 0
    if not lam:
        return 1
    if not mu:
        return 0
    k = mu[-1]
    total = 0
    for nu in _horizontal_strip_removals(lam, k):
        total += kostka_number(nu, mu[:-1])
    return total


def _horizontal_strip_removals(lam: Partition, k: int):
    """All nu with lam/nu a horizontal strip of size k."""

    def build(i: int, rem: int, acc: list[int]):
        if i == len(lam):
            if rem == 0:
                yield tuple(p for p in acc if p > 0)
            return
        lo = lam[i + 1] if i + 1 < len(lam) else 0
        hi = lam[i]
        upper = acc[i - 1] if i > 0 else hi
        for v in range(min(hi, upper), lo - 1, -1):
            take = lam[i] - v
            if take <= rem:
                acc.append(v)
                yield from build(i + 1, rem - take, acc)
                acc.pop()

    yield from build(0, k, [])


def s_to_m(x: SymElement) -> SymElement:
    if x.basis != "s":
        raise QSymError("BAD_BASIS", f"expected s, got {x.basis}")
    out: dict[Partition, Poly] = {}
    zero = Poly.zero(x.reg)
    for lam, c in x.coeffs.items():
        for mu in partitions_of(x.degree):
            k = kostka_number(lam, mu)
            if k:
                out[mu] = out.get(mu, zero) + c * k
    return SymElement(x.reg, x.degree, "m", out)


def m_to_s(x: SymElement) -> SymElement:
    """Back-substitute along dominance, largest partition first."""
    if x.basis != "m":
        raise QSymError("BAD_BASIS", f"expected m, got {x.basis}")
    zero = Poly.zero(x.reg)
    remaining = dict(x.coeffs)
    out: dict[Partition, Poly] = {}
    for lam in partitions_of(x.degree):
        c = remaining.pop(lam, zero)
        if c.is_zero():
            continue
        out[lam] = c
        for mu in partitions_of(x.degree):
            if mu == lam:
                continue
            k = kostka_number(lam, mu)
            if k:
                remaining[mu] = remaining.get(mu, zero) - c * k
    return SymElement(x.reg, x.degree, "s", out)


def schur_positive(x: SymElement):
    """Check every Schur coefficient has nonnegative integer coefficients.

    Returns (True, None) or (False, (partition, monomial)) naming a
    negative term.
    """
    if x.basis == "m":
        x = m_to_s(x)
    elif x.basis == "h":
        x = m_to_s(h_basis_to_m(x))
    elif x.basis != "s":
        raise QSymError("BAD_BASIS", f"cannot expand basis {x.basis}")
    for lam in sorted(x.coeffs, reverse=True):
        c = x.coeffs[lam]
        for mono in sorted(c.terms, key=Monomial.sort_key):
            if c.terms[mono] < 0:
                return False, (lam, mono)
    return True, None


@cache
def _matrix_count(rows: tuple[int, ...], cols: tuple[int, ...]) -> int:
    """Nonnegative integer matrices with the given row and column sums."""
    if not rows:
        return 1 if all(c == 0 for c in cols) else 0
    r = rows[0]

    def fill(i: int, rem: int, left: tuple[int, ...]):
        if i == len(cols):
            if rem == 0:
                yield left
            return
        for v in range(min(rem, cols[i]) + 1):
            yield from fill(i + 1, rem - v, left[:i] + (cols[i] - v,) + left[i + 1 :])

    total = 0
    seen: dict[tuple[int, ...], int] = {}
    for left in fill(0, r, cols):
        key = tuple(sorted(left, reverse=True))
        seen[key] = seen.get(key, 0) + 1
    for key, mult in seen.items():
        total += mult * _matrix_count(rows[1:], key)
    return total


def h_lambda_expansion(lam: Partition, reg: Registry) -> SymElement:
    """Complete homogeneous h_lam in the m basis by matrix counting."""
    lam = check_partition(lam)
    n = sum(lam)
    out: dict[Partition, Poly] = {}
    for mu in partitions_of(n):
        cnt = _matrix_count(lam, mu)
        if cnt:
            out[mu] = Poly.const(reg, cnt)
    return SymElement(reg, n, "m", out)


def h_basis_to_m(x: SymElement) -> SymElement:
    if x.basis != "h":
        raise QSymError("BAD_BASIS", f"expected h, got {x.basis}")
    acc = SymElement(x.reg, x.degree, "m", {})
    for lam, c in x.coeffs.items():
        acc = acc + h_lambda_expansion(lam, x.reg).scale(c)
    return acc


def h_k_qsym(reg: Registry, k: int) -> QSymElement:
    """h_k as a quasisymmetric element: every M coefficient in degree k is 1."""
    coeffs = {}
    for bits in range(1 << max(k - 1, 0)):
        s = frozenset(i for i in range(1, k) if bits >> (i - 1) & 1)
        coeffs[s] = Poly.const(reg, 1)
    return QSymElement(reg, k, "M", coeffs)


def omega_on_F(x: QSymElement) -> QSymElement:
    """Degree-preserving involution sending F at S to F at the complement
    of S reflected through n."""
    if x.basis != "F":
        raise QSymError("BAD_BASIS", f"expected F, got {x.basis}")
    n = x.degree
    out = {}
    for s, c in x.coeffs.items():
        star = frozenset(n - i for i in range(1, n) if i not in s)
        out[star] = c
    return QSymElement(x.reg, n, "F", out)


@cache
def syt_descent_sets(lam: Partition) -> tuple[Subset, ...]:
    """Descent sets of the standard tableaux of shape lam.

    Entry i descends when i+1 lands in a strictly higher row.
    """
    n = sum(lam)
    rows = len(lam)
    out: list[Subset] = []

    def grow(shape: list[int], step: int, row_of: list[int]):
        if step > n:
            out.append(
                frozenset(i for i in range(1, n) if row_of[i + 1] > row_of[i])
            )
            return
        for r in range(1, rows + 1):
            cur = shape[r - 1]
            if cur < lam[r - 1] and (r == 1 or shape[r - 2] > cur):
                shape[r - 1] += 1
                row_of[step] = r
                grow(shape, step + 1, row_of)
                shape[r - 1] -= 1

    grow([0] * rows, 1, [0] * (n + 1))
    return tuple(out)


def schur_qsym_f(lam: Partition, reg: Registry) -> QSymElement:
    """Schur element as a fundamental-basis sum over standard tableaux."""
    lam = check_partition(lam)
    coeffs: dict[Subset, Poly] = {}
    one = Poly.const(reg, 1)
    for s in syt_descent_sets(lam):
        coeffs[s] = coeffs.get(s, Poly.zero(reg)) + one
    return QSymElement(reg, sum(lam), "F", coeffs)


def qsym_to_json(x: QSymElement) -> dict:
    terms = []
    for s in sorted(x.coeffs, key=lambda t: sum(1 << (i - 1) for i in t)):
        terms.append({"index": sorted(s), "coeff": x.coeffs[s].serialize()})
    return {"basis": x.basis, "degree": x.degree, "terms": terms}


def sym_to_json(x: SymElement) -> dict:
    terms = []
    for lam in sorted(x.coeffs, reverse=True):
        terms.append({"index": list(lam), "coeff": x.coeffs[lam].serialize()})
    return {"basis": x.basis, "degree": x.degree, "terms": terms}
