"""Truncated twisted Laurent series over Q(x_1..x_m).

Elements are sums  a_v T^v + a_{v+1} T^(v+1) + ...  with T = t^l and the
commutation rule T c = theta(c) T.  ``prec`` is absolute: the value is known
modulo T^prec, and ``None`` marks an exact (finite) element.
"""

from __future__ import annotations

from itertools import permutations
from typing import Sequence

from .algebra import (
    RATIONAL_TYPES,
    MonomialAutomorphism,
    RationalFunction,
    hnf_rows,
    int_identity,
    lattice_reduce,
    var_names,
)
from .groups import GroupDescriptor, GroupRingElement
from .novikov import DEFAULT_PRECISION, NovikovElement, PrecisionError
from .textio import parse_with


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TwistedLaurentSeries:
    __slots__ = ("theta", "val", "coeffs", "prec", "scale")

    def __init__(self, theta: MonomialAutomorphism, val: int, coeffs: Sequence[RationalFunction],
                 prec: int | None = None, scale: int = 1):
        self.theta = theta
        self.scale = scale
        coeffs = list(coeffs)
        # strip leading zeros
        i = 0
        while i < len(coeffs) and coeffs[i].is_zero():
            i += 1
        val += i
        coeffs = coeffs[i:]
        if prec is not None:
            keep = max(0, prec - val)
            coeffs = coeffs[:keep]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            val = prec if prec is not None else 0
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    # construction -------------------------------------------------------
    @property
    def nvars(self) -> int:
        return self.theta.nvars

    def _const(self, c) -> RationalFunction:
        return RationalFunction.constant(self.nvars, c)

    @classmethod
    def constant(cls, theta, c, prec=None, scale=1) -> TwistedLaurentSeries:
        if not isinstance(c, RationalFunction):
            c = RationalFunction.constant(theta.nvars, c)
        return cls(theta, 0, [c], prec, scale)

    @classmethod
    def zero(cls, theta, prec=None, scale=1) -> TwistedLaurentSeries:
        return cls(theta, 0, [], prec, scale)

    @classmethod
    def one(cls, theta, prec=None, scale=1) -> TwistedLaurentSeries:
        return cls.constant(theta, 1, prec, scale)

    @classmethod
    def monomial(cls, theta, c, degree: int, scale=1) -> TwistedLaurentSeries:
        if not isinstance(c, RationalFunction):
            c = RationalFunction.constant(theta.nvars, c)
        return cls(theta, degree, [c], None, scale)

    @classmethod
    def T(cls, theta, scale=1) -> TwistedLaurentSeries:
        return cls.monomial(theta, 1, 1, scale)

    def with_prec(self, prec: int | None) -> TwistedLaurentSeries:
        return TwistedLaurentSeries(self.theta, self.val, self.coeffs, _min_prec(prec, self.prec), self.scale)

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.prec is None

    @property
    def lead(self) -> RationalFunction:
        if not self.coeffs:
            raise ZeroDivisionError("zero series has no leading coefficient")
        return self.coeffs[0]

    def coeff(self, n: int) -> RationalFunction:
        if self.prec is not None and n >= self.prec:
            raise PrecisionError(f"coefficient of T^{n} lies beyond precision O(T^{self.prec})")
        i = n - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self._const(0)

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def _check(self, other: TwistedLaurentSeries):
        if self.theta != other.theta:
            raise ValueError("series use different automorphisms")

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> TwistedLaurentSeries:
        if isinstance(other, TwistedLaurentSeries):
            self._check(other)
            return other
        if isinstance(other, RATIONAL_TYPES + (RationalFunction,)):
            return TwistedLaurentSeries.constant(self.theta, other, None, self.scale)
        raise TypeError(f"cannot combine series with {type(other).__name__}")

    def __add__(self, other) -> TwistedLaurentSeries:
        other = self._coerce(other)
        prec = _min_prec(self.prec, other.prec)
        if not other.coeffs:
            return self.with_prec(prec)
        if not self.coeffs:
            return other.with_prec(prec)
        lo = min(self.val, other.val)
        hi = max(self.val + len(self.coeffs), other.val + len(other.coeffs))
        if prec is not None:
            hi = min(hi, prec)
        zero = self._const(0)
        out = []
        for n in range(lo, hi):
            i, j = n - self.val, n - other.val
            a = self.coeffs[i] if 0 <= i < len(self.coeffs) else None
            b = other.coeffs[j] if 0 <= j < len(other.coeffs) else None
            if a is None:
                out.append(b if b is not None else zero)
            elif b is None:
                out.append(a)
            else:
                out.append(a + b)
        return TwistedLaurentSeries(self.theta, lo, out, prec, self.scale)

    __radd__ = __add__

    def __neg__(self) -> TwistedLaurentSeries:
        return TwistedLaurentSeries(self.theta, self.val, [-c for c in self.coeffs], self.prec, self.scale)

    def __sub__(self, other) -> TwistedLaurentSeries:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> TwistedLaurentSeries:
        return self._coerce(other) - self

    def __mul__(self, other) -> TwistedLaurentSeries:
        return series_mul(self, self._coerce(other))

    def __rmul__(self, other) -> TwistedLaurentSeries:
        return series_mul(self._coerce(other), self)

    def inverse(self, prec: int | None = None) -> TwistedLaurentSeries:
        return series_invert(self, prec)

    def __truediv__(self, other) -> TwistedLaurentSeries:
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int) -> TwistedLaurentSeries:
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = TwistedLaurentSeries.one(self.theta, scale=self.scale)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def apply_theta(self, power: int) -> TwistedLaurentSeries:
        """Coefficientwise theta^power; equals conjugation by T^power."""
        return TwistedLaurentSeries(self.theta, self.val, [self.theta.apply(c, power) for c in self.coeffs],
                                    self.prec, self.scale)

    def truncated_equal(self, other: TwistedLaurentSeries, k: int) -> bool:
        """Coefficients agree for every degree <= k."""
        for x in (self, other):
            if x.prec is not None and x.prec <= k:
                raise PrecisionError(f"comparison through degree {k} needs O(T^{k + 1}), have O(T^{x.prec})")
        lo = min(self.val, other.val)
        return all(self.coeff(n) == other.coeff(n) for n in range(lo, k + 1))

    def __eq__(self, other) -> bool:
        return (isinstance(other, TwistedLaurentSeries) and self.theta == other.theta
                and self.val == other.val and self.prec == other.prec and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.val, self.prec, tuple(self.coeffs)))

    # text ---------------------------------------------------------------
    def render(self, var: str = "t") -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            n = (self.val + i) * self.scale
            mono = "" if n == 0 else (var if n == 1 else f"{var}^{n}")
            text = c.render()
            neg = False
            if c.is_laurent() and len(c.num.terms) == 1:
                (_, lc), = c.num.terms.items()
                if lc < 0:
                    neg = True
                    text = (-c).render()
            elif len(c.num.terms) > 1 and c.den.is_one():
                text = f"({text})"
            if mono:
                body = mono if text == "1" else f"{text}*{mono}"
            else:
                body = text
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        if self.prec is not None:
            n = self.prec * self.scale
            o = f"O({var}^{n})" if n != 1 else f"O({var})"
            parts.append(f" + {o}" if parts else o)
        return "".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"TwistedLaurentSeries({self.render()!r})"

    def coefficient_strings(self, upto: int | None = None) -> list[str]:
        """Exact coefficient strings from degree 0 (or the valuation) through ``upto``."""
        start = min(0, self.val) if self.coeffs else 0
        end = upto if upto is not None else (self.val + len(self.coeffs) - 1)
        return [self.coeff(n).render() for n in range(start, end + 1)]


def series_mul(a: TwistedLaurentSeries, b: TwistedLaurentSeries) -> TwistedLaurentSeries:
    a._check(b)
    prec = None
    if a.prec is not None:
        prec = a.prec + (b.val if b.coeffs else b.prec if b.prec is not None else 0)
    if b.prec is not None:
        p = b.prec + (a.val if a.coeffs else a.prec if a.prec is not None else 0)
        prec = p if prec is None else min(prec, p)
    if not a.coeffs or not b.coeffs:
        return TwistedLaurentSeries.zero(a.theta, prec, a.scale)
    theta = a.theta
    ident = theta.is_identity() or theta.nvars == 0
    val = a.val + b.val
    n_out = len(a.coeffs) + len(b.coeffs) - 1
    if prec is not None:
        n_out = min(n_out, prec - val)
    if n_out <= 0:
        return TwistedLaurentSeries.zero(a.theta, prec, a.scale)
    out: list = [None] * n_out
    for i, ai in enumerate(a.coeffs):
        if i >= n_out:
            break
        if ai.is_zero():
            continue
        power = a.val + i
        for j, bj in enumerate(b.coeffs[: n_out - i]):
            if bj.is_zero():
                continue
            tb = bj if ident else theta.apply(bj, power)
            p = ai * tb
            k = i + j
            out[k] = p if out[k] is None else out[k] + p
    zero = RationalFunction.constant(theta.nvars, 0)
    return TwistedLaurentSeries(theta, val, [c if c is not None else zero for c in out], prec, a.scale)


def series_arith(a: TwistedLaurentSeries, b: TwistedLaurentSeries, op: str) -> TwistedLaurentSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return series_mul(a, b)
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def series_invert(u: TwistedLaurentSeries, prec: int | None = None) -> TwistedLaurentSeries:
    """Two-sided inverse.

    For an exact non-monomial ``u`` the result is expanded to ``prec``
    relative terms (default 16); a truncated ``u`` fixes the precision.
    """
    if not u.coeffs:
        raise ZeroDivisionError("zero not invertible")
    theta = u.theta
    v = u.val
    c0inv = u.coeffs[0].inverse()
    if u.prec is None and len(u.coeffs) == 1:
        return TwistedLaurentSeries(theta, -v, [theta.apply(c0inv, -v)], None, u.scale)
    rel = (u.prec - v) if u.prec is not None else (DEFAULT_PRECISION if prec is None else prec)
    # coefficient n of u*w: sum_i u_i theta^(v+i)(w_{n-i}); solve for w_n
    w = [theta.apply(c0inv, -v)]
    ident = theta.is_identity() or theta.nvars == 0
    cache: dict = {}

    def tw(j: int, p: int):
        if ident:
            return w[j]
        key = (j, p)
        r = cache.get(key)
        if r is None:
            r = theta.apply(w[j], p)
            cache[key] = r
        return r

    for n in range(1, rel):
        acc = None
        for i in range(1, min(n, len(u.coeffs) - 1) + 1):
            ui = u.coeffs[i]
            if ui.is_zero():
                continue
            term = ui * tw(n - i, v + i)
            acc = term if acc is None else acc + term
        if acc is None or acc.is_zero():
            w.append(RationalFunction.constant(theta.nvars, 0))
        else:
            w.append(theta.apply(-(c0inv * acc), -v))
    return TwistedLaurentSeries(theta, -v, w, -v + rel, u.scale)


# ---------------------------------------------------------------------------
# embedding of the group ring
# ---------------------------------------------------------------------------


def rho_embed(r, prec: int | None = None) -> TwistedLaurentSeries:
    """x^v mu^n  ->  x^v T^n, extended linearly (and to Novikov elements)."""
    if isinstance(r, NovikovElement):
        desc = r.desc
        out = TwistedLaurentSeries.zero(desc.theta, r.precision + 1 if r.precision is not None else None,
                                        desc.alpha_scale)
        for s in r.slices.values():
            out = out + rho_embed(s)
        return out.with_prec(prec) if prec is not None else out
    if not isinstance(r, GroupRingElement):
        raise TypeError("rho_embed expects a group-ring or Novikov element")
    desc: GroupDescriptor = r.desc
    by_deg: dict[int, RationalFunction] = {}
    for g, c in r.terms.items():
        mono = RationalFunction.monomial(g.vector, c)
        by_deg[g.shift] = by_deg[g.shift] + mono if g.shift in by_deg else mono
    if not by_deg:
        return TwistedLaurentSeries.zero(desc.theta, prec, desc.alpha_scale)
    lo = min(by_deg)
    hi = max(by_deg)
    zero = RationalFunction.constant(desc.rank, 0)
    coeffs = [by_deg.get(n, zero) for n in range(lo, hi + 1)]
    return TwistedLaurentSeries(desc.theta, lo, coeffs, prec, desc.alpha_scale)


# ---------------------------------------------------------------------------
# abelian invariants
# ---------------------------------------------------------------------------


class LeadClass:
    """Class of a leading coefficient modulo N = <theta(c)/c>.

    ``kind`` is ``"norm"`` (finite-order theta: the class is determined by
    the norm prod_j theta^j(c)), ``"lattice"`` (infinite order, monomial
    lead: coefficient and exponent reduced modulo (A - I)Z^m) or
    ``"undecided"``.
    """

    __slots__ = ("kind", "data")

    def __init__(self, kind: str, data):
        self.kind = kind
        self.data = data

    def __eq__(self, other):
        if not isinstance(other, LeadClass) or "undecided" in (self.kind, other.kind):
            return NotImplemented
        return self.kind == other.kind and self.data == other.data

    def __hash__(self):
        return hash((self.kind, str(self.data)))

    def render(self) -> str:
        if self.kind == "norm":
            return f"norm {self.data.render()}"
        if self.kind == "lattice":
            c, e = self.data
            return f"{c}*x^{'_'.join(map(str, e))} mod (A-I)Z^m"
        return f"undecided ({self.data.render()})"

    def __repr__(self):
        return f"LeadClass({self.render()!r})"


def coefficient_norm(theta: MonomialAutomorphism, c: RationalFunction) -> RationalFunction:
    n = theta.order()
    out = c
    for j in range(1, n):
        out = out * theta.apply(c, j)
    return out


def _image_lattice(theta: MonomialAutomorphism):
    m = theta.nvars
    a = theta.matrix
    cols = [[a[i][j] - (i == j) for i in range(m)] for j in range(m)]
    return hnf_rows(cols, m)


def lead_class(theta: MonomialAutomorphism, c: RationalFunction) -> LeadClass:
    if c.is_zero():
        raise ZeroDivisionError("zero has no class")
    if theta.order() is not None:
        return LeadClass("norm", coefficient_norm(theta, c))
    mono = c.monomial_data()
    if mono is None:
        return LeadClass("undecided", c)
    coef, e = mono
    return LeadClass("lattice", (coef, lattice_reduce(e, _image_lattice(theta))))


def leading_invariant(u: TwistedLaurentSeries) -> tuple[int, LeadClass]:
    if u.is_zero():
        raise ZeroDivisionError("zero series has no leading invariant")
    return u.val, lead_class(u.theta, u.lead)


# ---------------------------------------------------------------------------
# reduced norm for finite-order theta
# ---------------------------------------------------------------------------


def _commutative_det(rows: list[list[TwistedLaurentSeries]]) -> TwistedLaurentSeries:
    n = len(rows)
    if n <= 3:
        total = None
        for perm in permutations(range(n)):
            sign = 1
            for i in range(n):
                for j in range(i + 1, n):
                    if perm[i] > perm[j]:
                        sign = -sign
            term = rows[0][perm[0]]
            for i in range(1, n):
                term = term * rows[i][perm[i]]
            term = term if sign > 0 else -term
            total = term if total is None else total + term
        return total
    m = [list(r) for r in rows]
    det = None
    sign = 1
    for c in range(n):
        piv = min((r for r in range(c, n) if not m[r][c].is_zero()), key=lambda r: m[r][c].val, default=None)
        if piv is None:
            return TwistedLaurentSeries.zero(m[0][0].theta, m[0][0].prec)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        inv = m[c][c].inverse()
        for r in range(c + 1, n):
            if m[r][c].is_zero():
                continue
            f = m[r][c] * inv
            m[r] = [x - f * y for x, y in zip(m[r], m[c])]
        det = m[c][c] if det is None else det * m[c][c]
    return det if sign > 0 else -det


def reduced_norm(u: TwistedLaurentSeries) -> TwistedLaurentSeries:
    """Reduced norm into K((S)), S = T^n, for theta of finite order n.

    Computed as the determinant of left multiplication by ``u`` on the right
    K((S))-basis 1, T, ..., T^(n-1).  The result is a series in S with
    identity twist.
    """
    theta = u.theta
    n = theta.order()
    if n is None:
        raise ValueError("reduced norm needs an automorphism of finite order")
    ident = MonomialAutomorphism(int_identity(theta.nvars))
    if n == 1:
        return TwistedLaurentSeries(ident, u.val, u.coeffs, u.prec, u.scale)
    zero = RationalFunction.constant(theta.nvars, 0)
    # buckets[rho][j] -> {q: coefficient}
    entries = [[dict() for _ in range(n)] for _ in range(n)]
    for idx, c in enumerate(u.coeffs):
        if c.is_zero():
            continue
        i = u.val + idx
        for j in range(n):
            q, rho = divmod(i + j, n)
            term = theta.apply(c, -(i + j))
            d = entries[rho][j]
            d[q] = d[q] + term if q in d else term
    rows = []
    for rho in range(n):
        row = []
        for j in range(n):
            d = entries[rho][j]
            if d:
                lo, hi = min(d), max(d)
                coeffs = [d.get(q, zero) for q in range(lo, hi + 1)]
            else:
                lo, coeffs = 0, []
            row.append(TwistedLaurentSeries(ident, lo, coeffs, _entry_prec(u, n, rho, j), u.scale * n))
        rows.append(row)
    return _commutative_det(rows)


def _entry_prec(u: TwistedLaurentSeries, n: int, rho: int, j: int):
    # entry (rho, j) holds u_i with i + j = q n + rho; u_i unknown for i >= prec
    if u.prec is None:
        return None
    # smallest q with q n + rho - j >= prec
    return -((-(u.prec + j - rho)) // n)


def reduced_norm_monomial(theta: MonomialAutomorphism, c: RationalFunction, degree: int, scale: int = 1):
    return reduced_norm(TwistedLaurentSeries.monomial(theta, c, degree, scale))


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


class _SeriesContext:
    def __init__(self, theta: MonomialAutomorphism, scale: int = 1, var: str = "t"):
        self.theta = theta
        self.scale = scale
        self.var = var
        self.names = var_names(theta.nvars)
        self.prec = None

    def number(self, n: int):
        return TwistedLaurentSeries.constant(self.theta, n, None, self.scale)

    def _t_power(self, e: int):
        if e % self.scale:
            raise ValueError(f"powers of t must be multiples of {self.scale}")
        return TwistedLaurentSeries.monomial(self.theta, 1, e // self.scale, self.scale)

    def name(self, name: str, exp):
        if name == self.var:
            if isinstance(exp, tuple):
                raise ValueError(f"{self.var} takes an integer exponent")
            return self._t_power(1 if exp is None else exp)
        m = self.theta.nvars
        if name == "x" and m > 1 and isinstance(exp, tuple):
            if len(exp) != m:
                raise ValueError(f"exponent vector must have {m} components")
            return TwistedLaurentSeries.monomial(self.theta, RationalFunction.monomial(exp), 0, self.scale)
        if name in self.names:
            if isinstance(exp, tuple):
                raise ValueError("vector exponents need the name x")
            e = [0] * m
            e[self.names.index(name)] = 1 if exp is None else exp
            return TwistedLaurentSeries.monomial(self.theta, RationalFunction.monomial(e), 0, self.scale)
        raise KeyError(name)

    def big_o(self, name: str, k: int):
        if name != self.var:
            raise ValueError(f"O-term must be in {self.var}")
        if k % self.scale:
            raise ValueError(f"O-term degree must be a multiple of {self.scale}")
        return TwistedLaurentSeries.zero(self.theta, k // self.scale, self.scale)

    def divide(self, a, b):
        if b.is_zero():
            raise ZeroDivisionError
        return a / b

    def power(self, a, n: int):
        if n < 0 and a.is_zero():
            raise ZeroDivisionError
        return a ** n


def parse_series(text: str, theta: MonomialAutomorphism, scale: int = 1) -> TwistedLaurentSeries:
    return parse_with(text, _SeriesContext(theta, scale))
