"""Permutations and words: descent statistics, standardization, pattern maps.

A permutation is a tuple containing 1..n once each; a word is any tuple of
positive integers.  Descent sets are frozensets of positions.
"""
from __future__ import annotations

from itertools import permutations
from typing import Callable, Iterator

from .shapes import Diagram, Partition, reading_order


class WordError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


Perm = tuple[int, ...]
Word = tuple[int, ...]
# sub-diagram of a Diagram: column index -> row interval inside that column
SubDiagram = dict[int, tuple[int, int]]


def check_perm(w) -> Perm:
    w = tuple(w)
    if sorted(w) != list(range(1, len(w) + 1)):
        raise WordError("NOT_A_PERMUTATION", f"{w}")
    return w


def inverse(w: Perm) -> Perm:
    w = check_perm(w)
    inv = [0] * len(w)
    for i, v in enumerate(w, start=1):
        inv[v - 1] = i
    return tuple(inv)


def des(w: Word) -> frozenset[int]:
    return frozenset(i for i in range(1, len(w)) if w[i - 1] > w[i])


def ides(w: Perm) -> frozenset[int]:
    return des(inverse(w))


def ides_bar(w: Perm) -> frozenset[int]:
    """ides with the final letter removed when it extends a descending run
    from the previous letter by exactly one."""
    s = ides(w)
    if len(w) >= 2 and w[-1] == w[-2] - 1:
        return s - {w[-1]}
    return s


def standardize(word: Word) -> Perm:
    """Replace letters by ranks, ties broken left to right."""
    order = sorted(range(len(word)), key=lambda i: (word[i], i))
    out = [0] * len(word)
    for rank, i in enumerate(order, start=1):
        out[i] = rank
    return tuple(out)


def destandardize(w: Perm) -> Word:
    """Smallest word standardizing to w: letter = block of w_i when [n]
    is cut after each inverse descent."""
    w = check_perm(w)
    cuts = sorted(ides(w))
    block = [0] * (len(w) + 1)
    b = 1
    prev = 0
    for c in cuts + [len(w)]:
        for v in range(prev + 1, c + 1):
            block[v] = b
        b += 1
        prev = c
    return tuple(block[v] for v in w)


def is_yamanouchi(word: Word) -> bool:
    """Every suffix contains at least as many i as i+1, for all i."""
    if not word:
        return True
    counts = [0] * (max(word) + 2)
    for v in reversed(word):
        counts[v] += 1
        if counts[v] > counts[v - 1] and v > 1:
            return False
    return True


def yamanouchi_words(lam: Partition) -> Iterator[Word]:
    """All words of weight lam whose every suffix is lattice."""
    n = sum(lam)
    k = len(lam)

    def build(remaining: list[int], suffix_counts: list[int], acc: list[int]):
        if len(acc) == n:
            yield tuple(reversed(acc))
            return
        for v in range(1, k + 1):
            if remaining[v] == 0:
                continue
            if v > 1 and suffix_counts[v] + 1 > suffix_counts[v - 1]:
                continue
            remaining[v] -= 1
            suffix_counts[v] += 1
            acc.append(v)
            yield from build(remaining, suffix_counts, acc)
            acc.pop()
            suffix_counts[v] -= 1
            remaining[v] += 1

    rem = [0] * (k + 1)
    for i, p in enumerate(lam, start=1):
        rem[i] = p
    yield from build(rem, [0] * (k + 1), [])


def superstandard(lam: Partition) -> list[Perm]:
    """Standardizations of the lattice words of weight lam."""
    return sorted(standardize(v) for v in yamanouchi_words(lam))


def check_subdiagram(d: Diagram, e: SubDiagram) -> list[tuple[int, int]]:
    """Validate e against d and return its cells."""
    cells = []
    for k, (a, b) in sorted(e.items()):
        if not (1 <= k <= d.ncols):
            raise WordError("NOT_A_SUBDIAGRAM", f"column {k} outside diagram")
        da, db = d.columns[k - 1]
        if not (da <= a <= b <= db):
            raise WordError(
                "NOT_A_SUBDIAGRAM", f"[{a},{b}] outside column {k} = [{da},{db}]"
            )
        cells.extend((r, k) for r in range(a, b + 1))
    return cells


def subdiagram_positions(d: Diagram, e: SubDiagram) -> list[int]:
    """Reading-order positions of e's cells, ascending."""
    nd = reading_order(d)
    return sorted(nd[u] for u in check_subdiagram(d, e))


def restrict(w: Word, d: Diagram, e: SubDiagram) -> Word:
    """Subword of w at the reading positions of e."""
    if len(w) != d.size():
        raise WordError("LENGTH_MISMATCH", f"|w|={len(w)} but |D|={d.size()}")
    return tuple(w[p - 1] for p in subdiagram_positions(d, e))


def pattern_apply(phi: Perm, u: Word) -> Word:
    """Act on u by phi through its standardization pattern."""
    if len(phi) != len(u):
        raise WordError("LENGTH_MISMATCH", f"|phi|={len(phi)} but |u|={len(u)}")
    letters = sorted(u)
    p = standardize(u)
    return tuple(letters[phi[p[i] - 1] - 1] for i in range(len(u)))


def lift(
    phi: Callable[[Perm], Perm], d: Diagram, e: SubDiagram
) -> Callable[[Word], Word]:
    """Extend phi to words on d by pattern action at e's positions."""
    positions = subdiagram_positions(d, e)

    def lifted(w: Word) -> Word:
        if len(w) != d.size():
            raise WordError("LENGTH_MISMATCH", f"|w|={len(w)} but |D|={d.size()}")
        sub = tuple(w[p - 1] for p in positions)
        letters = sorted(sub)
        image = phi(standardize(sub))
        out = list(w)
        for p, r in zip(positions, image):
            out[p - 1] = letters[r - 1]
        return tuple(out)

    return lifted


def check_ides_lemma(w: Perm, sigma: Perm) -> dict:
    """Compare inverse-descent data of w against two tail rearrangements.

    sigma permutes the first n-2 positions of w but must keep positions
    n-3, n-2 in its last two slots.  Returns which hypotheses fired and
    any failed conclusions.
    """
    w = check_perm(w)
    sigma = check_perm(sigma)
    n = len(w)
    if n < 4:
        raise WordError("PRECONDITION_VIOLATED", f"need n >= 4, got {n}")
    if len(sigma) != n - 2:
        raise WordError(
            "PRECONDITION_VIOLATED", f"|sigma|={len(sigma)}, need {n - 2}"
        )
    if {sigma[-2], sigma[-1]} != {n - 3, n - 2}:
        raise WordError(
            "PRECONDITION_VIOLATED",
            f"sigma must end with {{{n - 3},{n - 2}}}, got {sigma[-2:]}",
        )

    prefix = w[: n - 2]
    sprefix = tuple(w[s - 1] for s in sigma)
    w1 = sprefix + (w[-2], w[-1])
    w2 = sprefix + (w[-1], w[-2])

    violations = []

    def conclusions(tag: str):
        if ides(w) != ides(w1):
            violations.append(f"{tag}: ides differs after keep-tail rearrangement")
        if ides_bar(w) != ides_bar(w2):
            violations.append(f"{tag}: ides_bar differs after swap-tail rearrangement")
        if abs(w[-1] - w[-2]) > 1 and ides(w) != ides(w2):
            violations.append(f"{tag}: ides differs after swap-tail rearrangement")

    hyp1 = ides(standardize(prefix)) == ides(standardize(sprefix))
    if hyp1:
        conclusions("same-ides")
    hyp2 = ides_bar(standardize(prefix)) == ides_bar(
        standardize(sprefix)
    ) and abs(w[n - 3] - w[n - 4]) > 1
    if hyp2:
        conclusions("same-ides-bar")

    return {
        "same_ides_prefix": hyp1,
        "same_ides_bar_prefix": hyp2,
        "violations": tuple(violations),
    }


def lemma_sigma_candidates(n: int) -> list[Perm]:
    """All sigma accepted by check_ides_lemma for permutations of size n."""
    if n < 4:
        return []
    out = []
    for head in permutations(range(1, n - 3)):
        for tail in ((n - 3, n - 2), (n - 2, n - 3)):
            out.append(head + tail)
    return out


def parse_perm(s: str) -> Perm:
    if "," in s:
        return check_perm(int(x) for x in s.split(","))
    if not s.isdigit():
        raise WordError("NOT_A_PERMUTATION", f"{s!r}")
    return check_perm(int(c) for c in s)


def format_perm(w: Perm) -> str:
    if len(w) <= 9:
        return "".join(str(v) for v in w)
    return ",".join(str(v) for v in w)


def parse_word(s: str) -> Word:
    if "," in s:
        vals = tuple(int(x) for x in s.split(","))
    elif s.isdigit():
        vals = tuple(int(c) for c in s)
    else:
        raise WordError("BAD_WORD", f"{s!r}")
    if any(v <= 0 for v in vals):
        raise WordError("BAD_WORD", f"{s!r}")
    return vals
