"""Supported groups G = Z^m x|_A Z, their group rings, and the map alpha.

A group element is a pair (v, n): v in Z^m is the kernel-of-alpha part and
n is the power of the distinguished element mu.  Multiplication follows
(v, n)(w, k) = (v + A^n w, n + k), so mu x^w mu^-1 = x^(A w).  The free
abelian case is A = I.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import (
    RATIONAL_TYPES,
    IntMatrix,
    MonomialAutomorphism,
    int_identity,
    int_matrix,
    int_matvec,
    var_names,
)
from .textio import parse_with


@dataclass(frozen=True)
class GroupDescriptor:
    """G = Z^m x|_A Z with alpha(v, n) = t^(l n)."""

    matrix: IntMatrix
    alpha_scale: int = 1
    kind: str = "monomial_extension"
    theta: MonomialAutomorphism = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", int_matrix(self.matrix))
        if self.alpha_scale < 1:
            raise ValueError("alpha scale l must be >= 1; l = 0 models have no circle direction")
        object.__setattr__(self, "theta", MonomialAutomorphism(self.matrix))

    @classmethod
    def free_abelian(cls, m: int, alpha_scale: int = 1) -> GroupDescriptor:
        return cls(int_identity(m), alpha_scale, "free_abelian")

    @classmethod
    def monomial_extension(cls, matrix: Iterable[Iterable[int]], alpha_scale: int = 1) -> GroupDescriptor:
        return cls(int_matrix(matrix), alpha_scale, "monomial_extension")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @property
    def is_abelian(self) -> bool:
        return self.matrix == int_identity(self.rank)

    def identity(self) -> GroupElement:
        return GroupElement((0,) * self.rank, 0)

    def mu(self) -> GroupElement:
        return GroupElement((0,) * self.rank, 1)

    def gen(self, i: int) -> GroupElement:
        v = [0] * self.rank
        v[i] = 1
        return GroupElement(tuple(v), 0)

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        if h.shift_free_zero():
            return g
        w = h.vector if g.shift == 0 else int_matvec(self.theta.power_matrix(g.shift), h.vector)
        return GroupElement(tuple(a + b for a, b in zip(g.vector, w)), g.shift + h.shift)

    def inverse(self, g: GroupElement) -> GroupElement:
        # (v, n)^-1 = (-A^-n v, -n)
        w = int_matvec(self.theta.power_matrix(-g.shift), g.vector)
        return GroupElement(tuple(-a for a in w), -g.shift)

    def power(self, g: GroupElement, k: int) -> GroupElement:
        if k < 0:
            g, k = self.inverse(g), -k
        result = self.identity()
        for _ in range(k):
            result = self.mul(result, g)
        return result

    def to_json(self) -> dict:
        if self.kind == "free_abelian":
            return {"kind": "free_abelian", "m": self.rank, "l": self.alpha_scale}
        return {"kind": "monomial_extension", "A": [list(r) for r in self.matrix], "l": self.alpha_scale}

    @classmethod
    def from_json(cls, data: Mapping) -> GroupDescriptor:
        kind = data.get("kind")
        l = int(data.get("l", 1))
        if kind == "free_abelian":
            return cls.free_abelian(int(data["m"]), l)
        if kind == "monomial_extension":
            return cls.monomial_extension(data["A"], l)
        raise ValueError(f"unknown group kind {kind!r}")


@dataclass(frozen=True, order=True)
class GroupElement:
    vector: tuple
    shift: int

    def shift_free_zero(self) -> bool:
        return self.shift == 0 and not any(self.vector)

    def is_identity(self) -> bool:
        return self.shift_free_zero()


def group_mul(desc: GroupDescriptor, g: GroupElement, h: GroupElement) -> GroupElement:
    return desc.mul(g, h)


def alpha_degree(desc: GroupDescriptor, g: GroupElement) -> int:
    """The d with alpha(g) = t^(l d)."""
    return g.shift


def render_group_element(desc: GroupDescriptor, g: GroupElement) -> str:
    parts = []
    if any(g.vector):
        if desc.rank == 1:
            parts.append(f"x^{g.vector[0]}")
        else:
            parts.append("x^" + "_".join(str(a) for a in g.vector))
    if g.shift:
        parts.append(f"s^{g.shift}")
    return "*".join(parts) if parts else "1"


class GroupRingElement:
    """Finite formal sum of group elements with rational coefficients."""

    __slots__ = ("desc", "terms")

    def __init__(self, desc: GroupDescriptor, terms: Mapping[GroupElement, object] | None = None):
        self.desc = desc
        self.terms = {g: Fraction(c) for g, c in (terms or {}).items() if c != 0}

    @classmethod
    def _clean(cls, desc, terms: dict) -> GroupRingElement:
        obj = object.__new__(cls)
        obj.desc = desc
        obj.terms = terms
        return obj

    @classmethod
    def one(cls, desc: GroupDescriptor) -> GroupRingElement:
        return cls._clean(desc, {desc.identity(): Fraction(1)})

    @classmethod
    def zero(cls, desc: GroupDescriptor) -> GroupRingElement:
        return cls._clean(desc, {})

    @classmethod
    def from_group(cls, desc: GroupDescriptor, g: GroupElement, c=1) -> GroupRingElement:
        return cls(desc, {g: c})

    def is_zero(self) -> bool:
        return not self.terms

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def degrees(self) -> set:
        return {g.shift for g in self.terms}

    def min_degree(self) -> int | None:
        return min((g.shift for g in self.terms), default=None)

    def slice(self, d: int) -> GroupRingElement:
        return GroupRingElement._clean(self.desc, {g: c for g, c in self.terms.items() if g.shift == d})

    def monomial(self):
        """(coefficient, group element) when this is a single term."""
        if len(self.terms) == 1:
            (g, c), = self.terms.items()
            return c, g
        return None

    def _coerce(self, other) -> GroupRingElement:
        if isinstance(other, GroupRingElement):
            return other
        if isinstance(other, RATIONAL_TYPES):
            return GroupRingElement(self.desc, {self.desc.identity(): other})
        raise TypeError(f"cannot combine GroupRingElement with {type(other).__name__}")

    def __add__(self, other) -> GroupRingElement:
        other = self._coerce(other)
        out = dict(self.terms)
        for g, c in other.terms.items():
            v = out.get(g, 0) + c
            if v:
                out[g] = v
            else:
                out.pop(g, None)
        return GroupRingElement._clean(self.desc, out)

    __radd__ = __add__

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement._clean(self.desc, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other) -> GroupRingElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> GroupRingElement:
        return self._coerce(other) - self

    def __mul__(self, other) -> GroupRingElement:
        if isinstance(other, RATIONAL_TYPES):
            return self.scale(other)
        out: dict = {}
        mul = self.desc.mul
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                k = mul(g, h)
                out[k] = out.get(k, 0) + a * b
        return GroupRingElement._clean(self.desc, {g: c for g, c in out.items() if c})

    def __rmul__(self, other) -> GroupRingElement:
        if isinstance(other, RATIONAL_TYPES):
            return self.scale(other)
        return self._coerce(other) * self

    def scale(self, c) -> GroupRingElement:
        c = Fraction(c)
        if not c:
            return GroupRingElement.zero(self.desc)
        return GroupRingElement._clean(self.desc, {g: v * c for g, v in self.terms.items()})

    def __pow__(self, n: int) -> GroupRingElement:
        if n < 0:
            m = self.monomial()
            if m is None or abs(m[0]) != 1:
                raise ValueError("only signed group elements have inverses in Z[G]")
            c, g = m
            return GroupRingElement(self.desc, {self.desc.power(g, n): c ** n})
        result = GroupRingElement.one(self.desc)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, RATIONAL_TYPES):
            other = self._coerce(other)
        return isinstance(other, GroupRingElement) and self.desc == other.desc and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        # descending: shift first, then vector
        items = sorted(self.terms.items(), key=lambda gc: (gc[0].shift, gc[0].vector), reverse=True)
        for i, (g, c) in enumerate(items):
            mono = render_group_element(self.desc, g)
            neg = c < 0
            a = -c if neg else c
            if mono == "1":
                body = str(a)
            else:
                body = mono if a == 1 else f"{a}*{mono}"
            if i == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"GroupRingElement({self.render()!r})"


class _GroupRingContext:
    def __init__(self, desc: GroupDescriptor):
        self.desc = desc
        self.names = var_names(desc.rank)

    def number(self, n: int):
        return GroupRingElement(self.desc, {self.desc.identity(): n})

    def name(self, name: str, exp):
        d = self.desc
        if name == "s":
            if isinstance(exp, tuple):
                raise ValueError("s takes an integer exponent")
            return GroupRingElement.from_group(d, GroupElement((0,) * d.rank, 1 if exp is None else exp))
        if name == "x" and d.rank >= 1:
            if exp is None:
                exp = 1
            if isinstance(exp, int):
                if d.rank != 1:
                    raise ValueError(f"x needs a {d.rank}-component exponent such as x^1_0")
                exp = (exp,)
            if len(exp) != d.rank:
                raise ValueError(f"exponent vector must have {d.rank} components")
            return GroupRingElement.from_group(d, GroupElement(tuple(exp), 0))
        if name in self.names and d.rank > 1:
            i = self.names.index(name)
            e = [0] * d.rank
            e[i] = 1 if exp is None else exp
            if isinstance(e[i], tuple):
                raise ValueError("named variables take integer exponents")
            return GroupRingElement.from_group(d, GroupElement(tuple(e), 0))
        raise KeyError(name)

    def big_o(self, name, k):
        raise ValueError("O-terms are not allowed in group-ring expressions")

    def divide(self, a: GroupRingElement, b: GroupRingElement):
        m = b.monomial()
        if m is None or not m[1].is_identity():
            raise ValueError("group-ring division only by nonzero integers")
        if m[0] == 0:
            raise ZeroDivisionError
        return a.scale(1 / m[0])

    def power(self, a: GroupRingElement, n: int):
        return a ** n


def parse_group_ring(desc: GroupDescriptor, text: str) -> GroupRingElement:
    return parse_with(text, _GroupRingContext(desc))
