"""Exact sparse Laurent monomials and polynomials over the integers.

Variables live in an ordered registry fixed per computation. Monomials keep a
dense exponent vector aligned with the registry, so canonical form and
equality are structural. Coefficients are arbitrary-precision ints; there are
no rational functions and no floats anywhere.
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping, Union


class PolyError(ValueError):
    """Arithmetic or parse failure; `code` identifies the condition."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class Registry:
    """Ordered variable alphabet; values combine only within one registry."""

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise PolyError("DUPLICATE_VARIABLE", f"repeated name in {names}")
        for nm in names:
            if not _NAME_RE.fullmatch(nm):
                raise PolyError("BAD_VARIABLE_NAME", repr(nm))
        self.names = names
        self.index = {nm: i for i, nm in enumerate(names)}

    def __eq__(self, other):
        return isinstance(other, Registry) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Registry{self.names}"

    def one(self) -> "Monomial":
        return Monomial(self, (0,) * len(self.names))

    def var(self, name: str, exp: int = 1) -> "Monomial":
        if name not in self.index:
            raise PolyError("UNKNOWN_VARIABLE", f"{name!r} not in {self.names}")
        exps = [0] * len(self.names)
        exps[self.index[name]] = exp
        return Monomial(self, tuple(exps))

    def mono(self, **exps: int) -> "Monomial":
        vec = [0] * len(self.names)
        for name, e in exps.items():
            if name not in self.index:
                raise PolyError("UNKNOWN_VARIABLE", f"{name!r} not in {self.names}")
            vec[self.index[name]] = e
        return Monomial(self, tuple(vec))

    def embed(self, m: "Monomial") -> "Monomial":
        """Re-register a monomial from another registry by variable name."""
        vec = [0] * len(self.names)
        for nm, e in zip(m.reg.names, m.exps):
            if e:
                if nm not in self.index:
                    raise PolyError("UNKNOWN_VARIABLE", f"{nm!r} not in {self.names}")
                vec[self.index[nm]] = e
        return Monomial(self, tuple(vec))

    def embed_poly(self, p: "Poly") -> "Poly":
        return Poly(self, {self.embed(m): c for m, c in p.terms.items()})


def _check_same(reg_a: Registry, reg_b: Registry):
    if reg_a != reg_b:
        raise PolyError("REGISTRY_MISMATCH", f"{reg_a} vs {reg_b}")


class Monomial:
    """Laurent monomial: dense integer exponent vector over a registry."""

    __slots__ = ("reg", "exps", "_hash")

    def __init__(self, reg: Registry, exps: tuple[int, ...]):
        self.reg = reg
        self.exps = exps
        self._hash = hash(exps)

    def __eq__(self, other):
        return (
            isinstance(other, Monomial)
            and self.exps == other.exps
            and self.reg.names == other.reg.names
        )

    def __hash__(self):
        return self._hash

    def __mul__(self, other):
        if isinstance(other, Monomial):
            _check_same(self.reg, other.reg)
            return Monomial(self.reg, tuple(a + b for a, b in zip(self.exps, other.exps)))
        if isinstance(other, (int, Poly)):
            return self.as_poly() * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: "Monomial") -> "Monomial":
        _check_same(self.reg, other.reg)
        return Monomial(self.reg, tuple(a - b for a, b in zip(self.exps, other.exps)))

    def __pow__(self, k: int) -> "Monomial":
        return Monomial(self.reg, tuple(a * k for a in self.exps))

    def __add__(self, other):
        return self.as_poly() + other

    __radd__ = __add__

    def __sub__(self, other):
        return self.as_poly() - other

    def __rsub__(self, other):
        return -(self.as_poly() - other)

    def __neg__(self):
        return Poly(self.reg, {self: -1})

    def degree(self) -> int:
        return sum(self.exps)

    def sort_key(self) -> tuple:
        return (sum(self.exps), self.exps)

    def is_one(self) -> bool:
        return not any(self.exps)

    def as_poly(self) -> "Poly":
        return Poly(self.reg, {self: 1})

    def serialize(self) -> str:
        parts = []
        for nm, e in zip(self.reg.names, self.exps):
            if e == 1:
                parts.append(nm)
            elif e != 0:
                parts.append(f"{nm}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        return self.serialize()


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    _check_same(m1.reg, m2.reg)
    return m1 * m2


class Poly:
    """Laurent polynomial: mapping Monomial -> nonzero int, canonical."""

    __slots__ = ("reg", "terms")
    __hash__ = None

    def __init__(self, reg: Registry, terms: Mapping[Monomial, int] | None = None):
        self.reg = reg
        self.terms: dict[Monomial, int] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = c

    @classmethod
    def zero(cls, reg: Registry) -> "Poly":
        return cls(reg)

    @classmethod
    def const(cls, reg: Registry, c: int) -> "Poly":
        return cls(reg, {reg.one(): c})

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1 and next(iter(self.terms.values())) == 1

    def as_monomial(self) -> Monomial:
        if not self.is_monomial():
            raise PolyError("NOT_A_MONOMIAL", self.serialize())
        return next(iter(self.terms))

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            _check_same(self.reg, other.reg)
            return other
        if isinstance(other, Monomial):
            _check_same(self.reg, other.reg)
            return other.as_poly()
        if isinstance(other, int):
            return Poly.const(self.reg, other)
        raise PolyError("BAD_OPERAND", repr(other))

    def __eq__(self, other):
        if isinstance(other, (Monomial, int)):
            try:
                other = self._coerce(other)
            except PolyError:
                return NotImplemented
        if not isinstance(other, Poly):
            return NotImplemented
        return self.reg.names == other.reg.names and self.terms == other.terms

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(self.reg, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.reg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return Poly(self.reg, {m: c * other for m, c in self.terms.items()})
        if isinstance(other, Monomial):
            _check_same(self.reg, other.reg)
            return Poly(self.reg, {m * other: c for m, c in self.terms.items()})
        other = self._coerce(other)
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly(self.reg, out)

    __rmul__ = __mul__

    def content_monomial(self) -> Monomial:
        """Componentwise minimum of exponents over all terms."""
        if self.is_zero():
            return self.reg.one()
        mins = None
        for m in self.terms:
            if mins is None:
                mins = list(m.exps)
            else:
                mins = [min(a, b) for a, b in zip(mins, m.exps)]
        return Monomial(self.reg, tuple(mins))

    def divide_exact(self, den: "Poly") -> "Poly":
        return poly_divide_exact(self, den)

    def specialize(self, bindings: Mapping[str, Union[int, Monomial]]) -> "Poly":
        return specialize(self, bindings)

    def serialize(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, key=Monomial.sort_key):
            c = self.terms[m]
            if m.is_one():
                bits.append(str(c))
            elif c == 1:
                bits.append(m.serialize())
            elif c == -1:
                bits.append("-" + m.serialize())
            else:
                bits.append(f"{c}*{m.serialize()}")
        return "+".join(bits).replace("+-", "-")

    def __repr__(self):
        return self.serialize()


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_neg(p: Poly) -> Poly:
    return -p


def poly_divide_exact(num: Poly, den: Poly) -> Poly:
    """Exact quotient num/den over the Laurent ring; NOT_DIVISIBLE otherwise."""
    _check_same(num.reg, den.reg)
    if den.is_zero():
        raise PolyError("DIVISION_BY_ZERO", "zero denominator")
    if num.is_zero():
        return Poly.zero(num.reg)
    reg = num.reg
    # shift out negative exponents: every monomial is a unit
    shift_n = num.content_monomial()
    shift_d = den.content_monomial()
    n_terms = {m / shift_n: c for m, c in num.terms.items()}
    d_terms = {m / shift_d: c for m, c in den.terms.items()}
    lead_d = max(d_terms, key=Monomial.sort_key)
    lc_d = d_terms[lead_d]
    rem = dict(n_terms)
    quot: dict[Monomial, int] = {}
    while rem:
        lead_r = max(rem, key=Monomial.sort_key)
        step = lead_r / lead_d
        if any(e < 0 for e in step.exps):
            raise PolyError("NOT_DIVISIBLE", f"{num.serialize()} by {den.serialize()}")
        c, r = divmod(rem[lead_r], lc_d)
        if r:
            raise PolyError("NOT_DIVISIBLE", f"{num.serialize()} by {den.serialize()}")
        quot[step] = c
        for m, cd in d_terms.items():
            key = m * step
            s = rem.get(key, 0) - c * cd
            if s:
                rem[key] = s
            else:
                rem.pop(key, None)
    shift = shift_n / shift_d
    return Poly(reg, {m * shift: c for m, c in quot.items()})


def specialize(p: Poly, bindings: Mapping[str, Union[int, Monomial]]) -> Poly:
    """Substitute variables by integers or monomials, then renormalize."""
    reg = p.reg
    idx_bindings: dict[int, Union[int, Monomial]] = {}
    for name, val in bindings.items():
        if name not in reg.index:
            raise PolyError("UNKNOWN_VARIABLE", f"{name!r} not in {reg.names}")
        if isinstance(val, Monomial):
            _check_same(reg, val.reg)
        elif not isinstance(val, int):
            raise PolyError("BAD_BINDING", f"{name}={val!r}")
        idx_bindings[reg.index[name]] = val
    out = Poly.zero(reg)
    for m, c in p.terms.items():
        coeff = c
        vec = list(m.exps)
        extra = reg.one()
        dead = False
        for i, val in idx_bindings.items():
            e = vec[i]
            if e == 0:
                continue
            vec[i] = 0
            if isinstance(val, int):
                if val == 0:
                    if e < 0:
                        raise PolyError(
                            "ZERO_TO_NEGATIVE_POWER",
                            f"{reg.names[i]}^{e} at {reg.names[i]}=0",
                        )
                    dead = True
                elif e < 0 and val not in (1, -1):
                    raise PolyError(
                        "NON_UNIT_TO_NEGATIVE_POWER",
                        f"{reg.names[i]}^{e} at {reg.names[i]}={val}",
                    )
                else:
                    coeff *= val ** e if e > 0 else val ** (-e)
            else:
                extra = extra * (val ** e)
        if not dead:
            out = out + Poly(reg, {Monomial(reg, tuple(vec)) * extra: coeff})
    return out


# ---------------------------------------------------------------------------
# textual grammar:  poly := term ('+' term)*
#                   term := int ('*' mono)? | '-'? mono
#                   mono := var('^'int)? ('*' var('^'int)?)*

_INT_RE = re.compile(r"-?\d+")


def parse_mono(reg: Registry, text: str) -> Monomial:
    text = text.strip()
    if text == "1":
        return reg.one()
    vec = [0] * len(reg.names)
    for factor in text.split("*"):
        factor = factor.strip()
        if "^" in factor:
            name, _, exp = factor.partition("^")
            name, exp = name.strip(), exp.strip()
            if not _INT_RE.fullmatch(exp):
                raise PolyError("PARSE_ERROR", f"bad exponent in {factor!r}")
            e = int(exp)
        else:
            name, e = factor, 1
        if name not in reg.index:
            raise PolyError("PARSE_ERROR", f"unknown variable {name!r}")
        vec[reg.index[name]] += e
    return Monomial(reg, tuple(vec))


def _parse_term(reg: Registry, text: str) -> Poly:
    text = text.strip()
    if not text:
        raise PolyError("PARSE_ERROR", "empty term")
    sign = 1
    if text.startswith("-"):
        sign, text = -1, text[1:].strip()
    if _INT_RE.fullmatch(text):
        return Poly.const(reg, sign * int(text))
    head, star, rest = text.partition("*")
    if star and _INT_RE.fullmatch(head.strip()):
        return Poly(reg, {parse_mono(reg, rest): sign * int(head)})
    return Poly(reg, {parse_mono(reg, text): sign})


def parse_poly(reg: Registry, text: str) -> Poly:
    text = "".join(text.split())
    if text == "0":
        return Poly.zero(reg)
    # '-' only opens a term or an exponent; split on '+' and on '-' that
    # follows a term boundary (not after '^' or '*')
    out = Poly.zero(reg)
    chunks = []
    cur = []
    for i, ch in enumerate(text):
        if ch == "+" and cur:
            chunks.append("".join(cur))
            cur = []
        elif ch == "-" and cur and text[i - 1] not in "^*+-":
            chunks.append("".join(cur))
            cur = ["-"]
        else:
            cur.append(ch)
    if cur:
        chunks.append("".join(cur))
    for chunk in chunks:
        out = out + _parse_term(reg, chunk)
    return out


QT = Registry(("q", "t"))
