"""Closed orbits, Lefschetz signs and the zeta function of a circle-valued flow.

Orbits are combinatorial records.  A prime orbit with holonomy g and
eigenvalue counts (i_+, i_-) contributes the factor

    (1 - (-1)^(i_-) g)^((-1)^(i_+ + i_- + 1))

to the zeta function, equivalently exp(sum_j eps(o^j) g^j / j).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import int_identity, int_matmul
from .groups import GroupDescriptor, GroupElement, GroupRingElement, render_group_element
from .laurent import rho_embed
from .linalg import SeriesField, SkewMatrix, dieudonne_det
from .novikov import NovikovElement, formal_exp, geometric_unit
from .values import Ambiguity, TorsionValue, one_value


class OrbitError(ValueError):
    pass


@dataclass(frozen=True)
class ClosedOrbit:
    """A closed orbit class.  ``period`` is p(o); ``multiplicity`` counts identical copies."""

    holonomy: GroupElement
    i_plus: int = 0
    i_minus: int = 0
    period: int = 1
    multiplicity: int = 1

    def __post_init__(self):
        if self.holonomy.shift < 1:
            raise OrbitError(f"holonomy has alpha-degree {self.holonomy.shift}; closed orbits need degree >= 1")
        if self.i_plus < 0 or self.i_minus < 0 or self.period < 1 or self.multiplicity < 1:
            raise OrbitError("orbit data must be non-negative with period and multiplicity >= 1")

    @property
    def degree(self) -> int:
        return self.holonomy.shift

    def exponent(self) -> int:
        return (-1) ** (self.i_plus + self.i_minus + 1)

    def sign(self) -> int:
        """The sign s in the factor (1 - s g)."""
        return (-1) ** self.i_minus


@dataclass
class OrbitSet:
    """Prime orbits, complete through alpha-degree ``complete_through`` (None: all listed)."""

    desc: GroupDescriptor
    orbits: list[ClosedOrbit] = field(default_factory=list)
    complete_through: int | None = None

    def require(self, k: int):
        if self.complete_through is not None and self.complete_through < k:
            raise OrbitError(f"orbit set is complete only through degree {self.complete_through}; asked for {k}")
        for o in self.orbits:
            if o.period != 1:
                raise OrbitError("orbit sets hold prime orbits (period 1) only")

    def upto(self, k: int) -> list[ClosedOrbit]:
        return [o for o in self.orbits if o.degree <= k]

    def counts_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for o in self.orbits:
            out[o.degree] = out.get(o.degree, 0) + o.multiplicity
        return dict(sorted(out.items()))

    def table(self) -> list[dict]:
        return [{"holonomy": render_group_element(self.desc, o.holonomy), "degree": o.degree,
                 "i_plus": o.i_plus, "i_minus": o.i_minus, "multiplicity": o.multiplicity}
                for o in self.orbits]


def lefschetz_sign(i_plus: int, i_minus: int, j: int) -> int:
    """eps(o^j) = (-1)^(i_+ + (j + 1) i_-)."""
    if j < 1:
        raise ValueError("j must be >= 1")
    return (-1) ** (i_plus + (j + 1) * i_minus)


def _orbit_factor(desc: GroupDescriptor, o: ClosedOrbit, k: int) -> NovikovElement:
    s = o.sign()
    if o.exponent() > 0:
        one = NovikovElement.one(desc, k)
        gamma = NovikovElement.from_group_ring(GroupRingElement.from_group(desc, o.holonomy, s))
        base = (one - gamma).truncate(k)
    else:
        base = geometric_unit(desc, o.holonomy, s, k)
    return base ** o.multiplicity


def zeta_product(orbits: OrbitSet, k: int) -> NovikovElement:
    """Truncated product over prime orbits of degree <= k, in list order."""
    orbits.require(k)
    desc = orbits.desc
    result = NovikovElement.one(desc, k)
    for o in orbits.upto(k):
        result = (result * _orbit_factor(desc, o, k)).truncate(k)
    return result


def zeta_exp(orbits: OrbitSet, k: int) -> NovikovElement:
    """Product over orbits of exp(multiplicity * sum_j eps(o^j) g^j / j)."""
    orbits.require(k)
    desc = orbits.desc
    result = NovikovElement.one(desc, k)
    for o in orbits.upto(k):
        log_terms = {}
        g = desc.identity()
        for j in range(1, k // o.degree + 1):
            g = desc.mul(g, o.holonomy)
            c = Fraction(o.multiplicity * lefschetz_sign(o.i_plus, o.i_minus, j), j)
            log_terms[g.shift] = GroupRingElement.from_group(desc, g, c)
        lam = NovikovElement(desc, log_terms, k)
        result = (result * formal_exp(lam)).truncate(k)
    return result


# ---------------------------------------------------------------------------
# orbits from monomial return maps
# ---------------------------------------------------------------------------


def _mobius(n: int) -> int:
    m, out, p = n, 1, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def primitive_counts(traces: dict[int, int], k: int) -> dict[int, int]:
    """r_p with sum_{p | m} p r_p = traces[m] for m <= k."""
    out = {}
    for p in range(1, k + 1):
        total = sum(_mobius(p // d) * traces[d] for d in _divisors(p))
        if total % p:
            raise OrbitError(f"traces are not realizable by orbits: degree {p} gives {total}/{p}")
        out[p] = total // p
    return out


def _monomial_entry(e: GroupRingElement, where: str):
    mono = e.monomial()
    if mono is None:
        raise OrbitError(f"non-monomial entry {e.render()} at {where}")
    c, g = mono
    if g.shift < 1:
        raise OrbitError(f"entry {e.render()} at {where} has alpha-degree {g.shift} < 1")
    return c, g


def _lyndon_cycles(weights: dict[tuple[int, int], tuple], n: int, k: int):
    """Closed walks a_0 -> a_1 -> ... -> a_0 whose vertex word is Lyndon and whose degree is <= k.

    Every primitive cyclic class of closed walks appears exactly once.
    """
    out_edges: dict[int, list[int]] = {a: [] for a in range(n)}
    for (a, b) in weights:
        out_edges[a].append(b)
    for a in out_edges:
        out_edges[a].sort()

    results = []

    def extend(word, deg):
        last = word[-1]
        for b in out_edges[last]:
            if b < word[0]:
                continue
            nd = deg + weights[(last, b)][1].shift
            if nd > k:
                continue
            if b == word[0] and _is_lyndon(word):
                results.append(tuple(word))
            if nd < k:
                extend(word + [b], nd)

    for a in range(n):
        extend([a], 0)
    return results


def _is_lyndon(word: Sequence[int]) -> bool:
    n = len(word)
    return all(tuple(word) < tuple(word[i:]) + tuple(word[:i]) for i in range(1, n))


def _walk_weight(desc: GroupDescriptor, weights, word) -> tuple[Fraction, GroupElement]:
    c_total = Fraction(1)
    g_total = desc.identity()
    n = len(word)
    for i in range(n):
        c, g = weights[(word[i], word[(i + 1) % n])]
        c_total *= c
        g_total = desc.mul(g_total, g)
    return c_total, g_total


def _necklace_orbits(desc: GroupDescriptor, c: Fraction, g: GroupElement, exponent: int, k: int) -> list[ClosedOrbit]:
    """Orbits whose zeta factors multiply to (1 - c g)^exponent through degree k."""
    if c == 1:
        # (1 - g)^e: i_- = 0 and (-1)^(i_+ + 1) = e
        return [ClosedOrbit(g, 0 if exponent < 0 else 1, 0)]
    if c == -1:
        # (1 + g)^e: i_- = 1 and (-1)^(i_+) = e
        return [ClosedOrbit(g, 0 if exponent > 0 else 1, 1)]
    if c.denominator != 1:
        raise OrbitError(f"cycle weight {c} is not an integer; no orbit realization")
    c = int(c)
    # log (1 - c g)^e = -e sum_m c^m g^m / m ; orbits with holonomy g^n and i_- = 0
    out = []
    hol = desc.identity()
    for n in range(1, k // g.shift + 1):
        hol = desc.mul(hol, g)
        total = sum(_mobius(n // d) * c ** d for d in _divisors(n))
        signed = -exponent * total
        if signed % n:
            raise OrbitError("necklace count is not integral")
        r = signed // n
        if r:
            # an orbit with i_- = 0 contributes (-1)^(i_+) sum_j g^j / j to the log
            out.append(ClosedOrbit(hol, 0 if r > 0 else 1, 0, 1, abs(r)))
    return out


@dataclass
class EnumerationResult:
    orbits: OrbitSet
    det_product: TorsionValue
    cycles: list[dict]


def orbit_enumerate(desc: GroupDescriptor, phis: Sequence[Sequence[Sequence[GroupRingElement]]], k: int,
                    prec: int | None = None) -> EnumerationResult:
    """Orbits from the monomial matrices phi_0, phi_1, ... and prod_i det(I - phi_(i-1))^((-1)^i).

    ``phis[j]`` is phi_j; its factor carries the exponent (-1)^(j+1).
    """
    orbits: list[ClosedOrbit] = []
    cycles = []
    fld = SeriesField(desc.theta, desc.alpha_scale, prec if prec is not None else k + 2)
    det = one_value(desc.theta, Ambiguity.full(desc), desc.alpha_scale)
    for j, phi in enumerate(phis):
        n = len(phi)
        exponent = (-1) ** (j + 1)
        weights = {}
        for a, row in enumerate(phi):
            if len(row) != n:
                raise OrbitError(f"phi_{j} is not square")
            for b, e in enumerate(row):
                if not e.is_zero():
                    weights[(a, b)] = _monomial_entry(e, f"phi_{j}[{a + 1},{b + 1}]")
        for word in _lyndon_cycles(weights, n, k):
            c, g = _walk_weight(desc, weights, word)
            cycles.append({"block": j, "cells": [w + 1 for w in word], "coefficient": str(c),
                           "holonomy": render_group_element(desc, g)})
            orbits.extend(_necklace_orbits(desc, c, g, exponent, k))
        if n:
            mat = SkewMatrix(fld, [[(1 if a == b else 0) - rho_embed(e) for b, e in enumerate(row)]
                                   for a, row in enumerate(phi)], n)
            factor = dieudonne_det(mat, ambiguity=Ambiguity.full(desc))
            det = det * (factor if exponent > 0 else factor.inverse())
    if desc.is_abelian:
        orbits = merge_orbits(orbits)
    return EnumerationResult(OrbitSet(desc, orbits, k), det, cycles)


def merge_orbits(orbits: Sequence[ClosedOrbit]) -> list[ClosedOrbit]:
    """Collect orbits with equal holonomy and i_- into one record with the net exponent.

    Factors with equal holonomy commute, and opposite parities of i_+ give
    inverse factors, so over an abelian group the product is unchanged.
    """
    net: dict[tuple, int] = {}
    for o in orbits:
        key = (o.holonomy, o.i_minus % 2)
        net[key] = net.get(key, 0) + o.multiplicity * o.exponent()
    out = []
    for (g, im), n in sorted(net.items(), key=lambda kv: (kv[0][0].shift, kv[0][0].vector, kv[0][1])):
        if n:
            # exponent (-1)^(i_+ + i_- + 1) = sign(n)
            ip = (im + (1 if n > 0 else 0)) % 2
            out.append(ClosedOrbit(g, ip, im, 1, abs(n)))
    return out


# ---------------------------------------------------------------------------
# suspension flows of hyperbolic toral automorphisms
# ---------------------------------------------------------------------------


def _det2(m) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def fixed_point_counts(a, k: int) -> dict[int, int]:
    """N_m = |det(A^m - I)| for m = 1..k."""
    out = {}
    p = int_identity(2)
    for m in range(1, k + 1):
        p = int_matmul(p, a)
        out[m] = abs(_det2([[p[0][0] - 1, p[0][1]], [p[1][0], p[1][1] - 1]]))
    return out


def torus_suspension_orbits(a, k: int) -> OrbitSet:
    """Prime orbits of the suspension of a hyperbolic A in SL(2, Z), through period k.

    Holonomy of a period-p orbit is mu^p in G = Z.  The return map of a
    period-p orbit has eigenvalues lambda^p and lambda^-p, which fixes i_+, i_-.
    """
    a = [list(map(int, r)) for r in a]
    if len(a) != 2 or any(len(r) != 2 for r in a):
        raise OrbitError("A must be a 2x2 integer matrix")
    if _det2(a) != 1:
        raise OrbitError("A must have determinant 1")
    tr = a[0][0] + a[1][1]
    if abs(tr) <= 2:
        raise OrbitError(f"A is not hyperbolic: |tr A| = {abs(tr)} <= 2")
    desc = GroupDescriptor.free_abelian(0)
    counts = primitive_counts(fixed_point_counts(a, k), k)
    orbits = []
    for p, r in counts.items():
        if r == 0:
            continue
        if tr > 0 or p % 2 == 0:
            ip, im = 1, 0
        else:
            ip, im = 0, 1
        orbits.append(ClosedOrbit(GroupElement((), p), ip, im, 1, r))
    return OrbitSet(desc, orbits, k)


def cat_map_phis(a) -> list[list[list[GroupRingElement]]]:
    """phi_0 = (t), phi_1 = t A, phi_2 = (t): the homology model of the torus bundle."""
    desc = GroupDescriptor.free_abelian(0)
    mu = desc.mu()

    def e(c):
        return GroupRingElement.from_group(desc, mu, c)

    return [[[e(1)]], [[e(a[0][0]), e(a[0][1])], [e(a[1][0]), e(a[1][1])]], [[e(1)]]]
