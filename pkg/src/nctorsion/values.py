"""Torsion values, their ambiguity, and the three-way comparator.

A torsion value lives in the abelianized unit group of K_theta((T)) modulo
a declared ambiguity subgroup.  Only part of that quotient is computable,
so comparisons answer EQUAL (a sufficient condition was certified),
DISTINCT (a homomorphic invariant differs) or COMPATIBLE (neither).

Two routes certify EQUAL:

* the series route: r = a b^-1 equals +-rho(g) times a series that is 1
  through degree k;
* the reduced-norm route, for theta of finite order n: the cyclic algebra
  K_theta((T)) has trivial SK_1, so the reduced norm into K((T^n)) is a
  complete invariant of the abelianized unit group.  Agreement of reduced
  norms through the matching S-degree certifies equality there.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from .algebra import MonomialAutomorphism, MultiPoly, RationalFunction, hnf_rows, lattice_reduce
from .groups import GroupDescriptor
from .laurent import LeadClass, TwistedLaurentSeries, coefficient_norm, leading_invariant, reduced_norm
from .novikov import PrecisionError


class Verdict(str, enum.Enum):
    EQUAL = "EQUAL"
    COMPATIBLE = "COMPATIBLE"
    DISTINCT = "DISTINCT"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Ambiguity:
    """Either {+-1} ("trivial") or +-rho(G) ("full")."""

    kind: str = "trivial"
    desc: GroupDescriptor | None = None

    def __post_init__(self):
        if self.kind not in ("trivial", "full"):
            raise ValueError(f"unknown ambiguity kind {self.kind!r}")
        if self.kind == "full" and self.desc is None:
            raise ValueError("full ambiguity needs a group descriptor")

    @classmethod
    def trivial(cls) -> Ambiguity:
        return cls("trivial")

    @classmethod
    def full(cls, desc: GroupDescriptor) -> Ambiguity:
        return cls("full", desc)

    def render(self) -> str:
        return "+-1" if self.kind == "trivial" else "+-rho(G)"


@dataclass
class TorsionValue:
    """A unit ``sign * series`` read modulo commutators and ``ambiguity``."""

    series: TwistedLaurentSeries
    sign: int = 1
    ambiguity: Ambiguity = field(default_factory=Ambiguity.trivial)
    log: list = field(default_factory=list)

    def __post_init__(self):
        if self.series.is_zero():
            raise ZeroDivisionError("a torsion value must be a unit")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +-1")

    @property
    def value(self) -> TwistedLaurentSeries:
        return self.series if self.sign > 0 else -self.series

    @property
    def invariants(self) -> tuple[int, LeadClass]:
        return leading_invariant(self.value)

    def __mul__(self, other: TorsionValue) -> TorsionValue:
        return TorsionValue(self.series * other.series, self.sign * other.sign,
                            _join(self.ambiguity, other.ambiguity), self.log + other.log)

    def inverse(self, prec: int | None = None) -> TorsionValue:
        """``prec`` sets the expansion length when an exact series is inverted."""
        s = self.series.inverse() if prec is None or isinstance(self.series, RationalFunction) \
            else self.series.inverse(prec)
        return TorsionValue(s, self.sign, self.ambiguity, list(self.log))

    def __pow__(self, n: int) -> TorsionValue:
        if n >= 0:
            return TorsionValue(self.series ** n, self.sign ** n, self.ambiguity, list(self.log))
        return self.inverse() ** (-n)

    def with_ambiguity(self, amb: Ambiguity) -> TorsionValue:
        return TorsionValue(self.series, self.sign, amb, list(self.log))

    def render(self) -> str:
        return f"[{self.value.render()}] mod {self.ambiguity.render()}"


def _join(a: Ambiguity, b: Ambiguity) -> Ambiguity:
    return a if a.kind == "full" else b


def one_value(theta: MonomialAutomorphism, ambiguity: Ambiguity | None = None, scale: int = 1) -> TorsionValue:
    return TorsionValue(TwistedLaurentSeries.one(theta, scale=scale), 1, ambiguity or Ambiguity.trivial())


# ---------------------------------------------------------------------------
# invariants used by the comparator
# ---------------------------------------------------------------------------


def _poly_content(p: MultiPoly) -> Fraction:
    nums = [c.numerator for c in p.terms.values()]
    dens = [c.denominator for c in p.terms.values()]
    return Fraction(reduce(gcd, nums), reduce(lcm, dens))


def content(c: RationalFunction) -> Fraction:
    """Gauss content |num| / |den|; multiplicative and theta-invariant."""
    return abs(_poly_content(c.num) / _poly_content(c.den))


def _norm_matrix(theta: MonomialAutomorphism):
    """S = sum_{j<n} A^j, so that N(x^w) = x^(S w)."""
    n = theta.order()
    m = theta.nvars
    total = [[0] * m for _ in range(m)]
    for j in range(n):
        p = theta.power_matrix(j)
        for a in range(m):
            for b in range(m):
                total[a][b] += p[a][b]
    return total


def _norm_exponent_allowed(theta: MonomialAutomorphism, e, full: bool) -> bool:
    if not any(e):
        return True
    if not full:
        return False
    s = _norm_matrix(theta)
    m = theta.nvars
    cols = [[s[i][j] for i in range(m)] for j in range(m)]
    return not any(lattice_reduce(e, hnf_rows(cols, m)))


def _signed_monomial(c: RationalFunction):
    mono = c.monomial_data()
    if mono is None:
        return None
    coef, e = mono
    return coef, e


@dataclass
class Comparison:
    verdict: Verdict
    reason: str
    ratio: TwistedLaurentSeries | None = None
    normalized: TwistedLaurentSeries | None = None

    def __str__(self) -> str:
        return f"{self.verdict}: {self.reason}"


def _ambiguity_of(a: TorsionValue, b: TorsionValue) -> Ambiguity:
    if a.ambiguity.kind != b.ambiguity.kind:
        raise ValueError("torsion values carry different ambiguity descriptors")
    return a.ambiguity


def torsion_compare(a: TorsionValue, b: TorsionValue, k: int) -> Verdict:
    return compare_values(a, b, k).verdict


def compare_values(a: TorsionValue, b: TorsionValue, k: int) -> Comparison:
    amb = _ambiguity_of(a, b)
    full = amb.kind == "full"
    bv = b.value
    if isinstance(bv, TwistedLaurentSeries) and bv.prec is None and not bv.is_zero():
        # exact divisor: expand far enough that the ratio reaches degree k
        bv = bv.inverse(k + 2 + abs(bv.val) + abs(a.value.val))
    else:
        bv = bv.inverse()
    r = a.value * bv
    theta = r.theta
    if r.is_zero():
        raise PrecisionError("ratio vanished to working precision")
    v = r.val
    lead = r.lead
    order = theta.order()

    # series route: r = +-x^w T^v (1 + O(T^(k+1)))
    mono = _signed_monomial(lead)
    if mono is not None and abs(mono[0]) == 1 and (full or (v == 0 and not any(mono[1]))):
        g = TwistedLaurentSeries.monomial(theta, RationalFunction.monomial(mono[1], mono[0]), v, r.scale)
        normalized = g.inverse() * r
        if normalized.prec is not None and normalized.prec <= k:
            raise PrecisionError(f"comparison through degree {k} needs O(T^{k + 1}), have O(T^{normalized.prec})")
        if all(normalized.coeff(n).is_zero() for n in range(1, k + 1)):
            return Comparison(Verdict.EQUAL, "ratio is a signed ambiguity element up to degree k", r, normalized)

    # necessary invariants
    if not full and v != 0:
        return Comparison(Verdict.DISTINCT, f"valuation of the ratio is {v}, not 0", r)
    if content(lead) != 1:
        return Comparison(Verdict.DISTINCT, f"leading coefficient {lead.render()} has content {content(lead)}", r)
    if order is None:
        return Comparison(Verdict.COMPATIBLE, "leading data agree; series differ and theta has infinite order", r)
    norm = coefficient_norm(theta, lead)
    nmono = _signed_monomial(norm)
    allowed_signs = {1, (-1) ** order}
    if nmono is None or nmono[0] not in allowed_signs or not _norm_exponent_allowed(theta, nmono[1], full):
        return Comparison(Verdict.DISTINCT, f"norm of the leading coefficient {norm.render()} is outside the ambiguity", r)

    # reduced-norm route
    shifted = r if v == 0 else TwistedLaurentSeries.monomial(theta, 1, -v, r.scale) * r
    nrd = reduced_norm(shifted)
    target = RationalFunction.monomial(nmono[1], nmono[0])
    need = -(-k // order)  # S-degrees 0..ceil(k/n)
    if nrd.prec is not None and nrd.prec <= need:
        raise PrecisionError(f"comparison through degree {k} needs the reduced norm to O(S^{need + 1}), "
                             f"have O(S^{nrd.prec})")
    ok = nrd.coeff(0) == target and all(nrd.coeff(q).is_zero() for q in range(1, need + 1))
    if ok:
        return Comparison(Verdict.EQUAL, "reduced norms agree up to an ambiguity element", r, nrd)
    return Comparison(Verdict.COMPATIBLE, "leading invariants agree but reduced norms differ in positive degree", r, nrd)
