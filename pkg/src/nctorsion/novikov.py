"""Truncated elements of the Novikov completion of Q[G] along alpha.

An element is a map from alpha-degree d to the homogeneous slice of
degree d, known exactly for every d <= ``precision`` (absolute).  Exact
finite sums carry ``precision = None``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Mapping

from .algebra import RATIONAL_TYPES
from .groups import GroupDescriptor, GroupElement, GroupRingElement

DEFAULT_PRECISION = 16


class PrecisionError(ValueError):
    """A truncated value is not known far enough for the requested check."""


def _min_prec(*values):
    known = [v for v in values if v is not None]
    return min(known) if known else None


class NovikovElement:
    __slots__ = ("desc", "slices", "precision")

    def __init__(self, desc: GroupDescriptor, slices: Mapping[int, GroupRingElement] | None = None,
                 precision: int | None = None):
        self.desc = desc
        self.precision = precision
        clean = {}
        for d, s in (slices or {}).items():
            if s.is_zero() or (precision is not None and d > precision):
                continue
            if s.degrees() != {d}:
                raise ValueError(f"slice {d} is not homogeneous of alpha-degree {d}")
            clean[d] = s
        self.slices = dict(sorted(clean.items()))

    @classmethod
    def from_group_ring(cls, r: GroupRingElement, precision: int | None = None) -> NovikovElement:
        slices = {d: r.slice(d) for d in r.degrees()}
        return cls(r.desc, slices, precision)

    @classmethod
    def one(cls, desc: GroupDescriptor, precision: int | None = None) -> NovikovElement:
        return cls.from_group_ring(GroupRingElement.one(desc), precision)

    @classmethod
    def zero(cls, desc: GroupDescriptor, precision: int | None = None) -> NovikovElement:
        return cls(desc, {}, precision)

    @property
    def min_degree(self) -> int | None:
        return next(iter(self.slices), None)

    def is_zero(self) -> bool:
        return not self.slices

    def slice(self, d: int) -> GroupRingElement:
        if self.precision is not None and d > self.precision:
            raise PrecisionError(f"degree {d} lies beyond precision {self.precision}")
        return self.slices.get(d, GroupRingElement.zero(self.desc))

    def truncate(self, precision: int) -> NovikovElement:
        return NovikovElement(self.desc, self.slices, _min_prec(precision, self.precision))

    def to_group_ring(self) -> GroupRingElement:
        out = GroupRingElement.zero(self.desc)
        for s in self.slices.values():
            out = out + s
        return out

    def __add__(self, other: NovikovElement) -> NovikovElement:
        prec = _min_prec(self.precision, other.precision)
        out = dict(self.slices)
        for d, s in other.slices.items():
            out[d] = out[d] + s if d in out else s
        return NovikovElement(self.desc, out, prec)

    def __neg__(self) -> NovikovElement:
        return NovikovElement(self.desc, {d: -s for d, s in self.slices.items()}, self.precision)

    def __sub__(self, other: NovikovElement) -> NovikovElement:
        return self + (-other)

    def scale(self, c) -> NovikovElement:
        return NovikovElement(self.desc, {d: s.scale(c) for d, s in self.slices.items()}, self.precision)

    def __mul__(self, other) -> NovikovElement:
        if isinstance(other, RATIONAL_TYPES):
            return self.scale(other)
        return novikov_mul(self, other)

    def __pow__(self, n: int) -> NovikovElement:
        if n < 0:
            return novikov_invert_unit(self) ** (-n)
        result = NovikovElement.one(self.desc, self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        return (isinstance(other, NovikovElement) and self.desc == other.desc
                and self.precision == other.precision and self.slices == other.slices)

    def render(self) -> str:
        if not self.slices:
            body = "0"
        else:
            parts = []
            for s in self.slices.values():
                text = s.render()
                parts.append(f"({text})" if len(s.terms) > 1 else text)
            body = " + ".join(parts).replace("+ -", "- ")
        if self.precision is not None:
            body += f" + O(deg {self.precision + 1})"
        return body

    def __repr__(self) -> str:
        return f"NovikovElement({self.render()!r})"


def novikov_mul(a: NovikovElement, b: NovikovElement) -> NovikovElement:
    if a.desc != b.desc:
        raise ValueError("operands live over different groups")
    prec = None
    if a.precision is not None and b.min_degree is not None:
        prec = a.precision + b.min_degree
    if b.precision is not None and a.min_degree is not None:
        p = b.precision + a.min_degree
        prec = p if prec is None else min(prec, p)
    if a.is_zero() or b.is_zero():
        # zero times anything truncated is still only known to the partner's precision
        return NovikovElement.zero(a.desc, _min_prec(a.precision, b.precision) if prec is None else prec)
    out: dict[int, GroupRingElement] = {}
    for d1, s1 in a.slices.items():
        for d2, s2 in b.slices.items():
            d = d1 + d2
            if prec is not None and d > prec:
                break
            p = s1 * s2
            out[d] = out[d] + p if d in out else p
    return NovikovElement(a.desc, out, prec)


def novikov_invert_unit(u: NovikovElement, precision: int | None = None) -> NovikovElement:
    """Inverse of a unit whose lowest slice is a signed group element.

    ``precision`` is the relative number of degrees to expand when ``u`` is
    an exact non-monomial element; it defaults to 16.
    """
    if u.is_zero():
        raise ZeroDivisionError("zero not invertible")
    m = u.min_degree
    lead = u.slices[m].monomial()
    if lead is None or abs(lead[0]) != 1:
        raise ValueError(f"unsupported unit: lowest slice {u.slices[m].render()} is not +-(group element)")
    c, g = lead
    desc = u.desc
    inv_lead = GroupRingElement.from_group(desc, desc.inverse(g), 1 / c)
    lead_inv = NovikovElement.from_group_ring(inv_lead)
    if len(u.slices) == 1 and u.precision is None:
        return lead_inv
    if u.precision is not None:
        rel = u.precision - m
    else:
        rel = DEFAULT_PRECISION if precision is None else precision
    # u = lead (1 + r) with r of min degree >= 1; u^-1 = (sum (-r)^j) lead^-1
    r = (lead_inv * u - NovikovElement.one(desc)).truncate(rel)
    geom = NovikovElement.one(desc, rel)
    power = NovikovElement.one(desc, rel)
    neg_r = -r
    for _ in range(rel):
        power = (power * neg_r).truncate(rel)
        if power.is_zero():
            break
        geom = geom + power
    return (geom * lead_inv).truncate(rel - m)


def _require_plus(lam: NovikovElement):
    if lam.min_degree is not None and lam.min_degree < 1:
        raise ValueError(f"not in the positive part: minimum degree {lam.min_degree} <= 0")


def formal_exp(lam: NovikovElement, precision: int | None = None) -> NovikovElement:
    """exp(lam) = sum lam^n / n! for lam of minimum degree >= 1."""
    _require_plus(lam)
    prec = lam.precision if lam.precision is not None else (
        DEFAULT_PRECISION if precision is None else precision)
    lam = lam.truncate(prec)
    result = NovikovElement.one(lam.desc, prec)
    power = NovikovElement.one(lam.desc, prec)
    for n in range(1, prec + 1):
        power = power * lam
        if power.is_zero():
            break
        result = result + power.scale(Fraction(1, factorial(n)))
    return result


def formal_log(u: NovikovElement, precision: int | None = None) -> NovikovElement:
    """log(1 + lam) = sum (-1)^(n+1) lam^n / n for lam of minimum degree >= 1."""
    desc = u.desc
    lam = u - NovikovElement.one(desc)
    _require_plus(lam)
    prec = lam.precision if lam.precision is not None else (
        DEFAULT_PRECISION if precision is None else precision)
    lam = lam.truncate(prec)
    result = NovikovElement.zero(desc, prec)
    power = NovikovElement.one(desc, prec)
    for n in range(1, prec + 1):
        power = power * lam
        if power.is_zero():
            break
        term = power.scale(Fraction((-1) ** (n + 1), n))
        result = result + term
    return result


def compare_truncated(a: NovikovElement, b: NovikovElement, k: int) -> bool:
    """True iff every slice of degree <= k agrees."""
    for x in (a, b):
        if x.precision is not None and x.precision < k:
            raise PrecisionError(f"comparison through degree {k} needs precision >= {k}, have {x.precision}")
    degrees = {d for d in a.slices if d <= k} | {d for d in b.slices if d <= k}
    zero = GroupRingElement.zero(a.desc)
    return all(a.slices.get(d, zero) == b.slices.get(d, zero) for d in degrees)


def geometric_unit(desc: GroupDescriptor, g: GroupElement, sign: int = 1, precision: int = DEFAULT_PRECISION) -> NovikovElement:
    """(1 - sign*g)^-1 = sum (sign*g)^j through degree ``precision``."""
    gamma = NovikovElement.from_group_ring(GroupRingElement.from_group(desc, g, sign))
    return novikov_invert_unit(NovikovElement.one(desc) - gamma, precision)
