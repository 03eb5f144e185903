"""Exact arithmetic in Q(x_1, ..., x_m) and its monomial automorphisms.

Polynomials are Laurent: exponent vectors may be negative, so group-ring
images of Z[Z^m] embed without denominators.  Rational functions are kept
in a canonical reduced form, so equality is structural.
"""

from __future__ import annotations

from fractions import Fraction

from flint import fmpq, fmpq_mpoly_ctx, fmpq_poly
from gmpy2 import mpq
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

Exp = tuple  # tuple[int, ...]

RATIONAL_TYPES = (int, Fraction, type(mpq(0)))

_ZERO = mpq(0)
_ONE = mpq(1)


def var_names(nvars: int) -> list[str]:
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"x{i + 1}" for i in range(nvars)]


# ---------------------------------------------------------------------------
# integer matrices
# ---------------------------------------------------------------------------

IntMatrix = tuple  # tuple[tuple[int, ...], ...]


def int_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    return tuple(tuple(int(a) for a in row) for row in rows)


def int_identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def int_matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if not a:
        return ()
    cols = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def int_matvec(a: IntMatrix, v: Sequence[int]) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def int_det(a: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def int_inverse(a: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    out = []
    for row in m:
        inv_row = row[n:]
        if any(x.denominator != 1 for x in inv_row):
            raise ValueError("matrix is not invertible over the integers")
        out.append(tuple(int(x) for x in inv_row))
    return tuple(out)


def int_matpow(a: IntMatrix, p: int) -> IntMatrix:
    n = len(a)
    if p < 0:
        a = int_inverse(a)
        p = -p
    result = int_identity(n)
    base = a
    while p:
        if p & 1:
            result = int_matmul(result, base)
        base = int_matmul(base, base)
        p >>= 1
    return result


def hnf_rows(vectors: Iterable[Sequence[int]], dim: int) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Returns echelon rows with positive pivots; entries above each pivot are
    reduced into ``[0, pivot)``.
    """
    rows = [list(v) for v in vectors if any(v)]
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        nz = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not nz:
            col += 1
            continue
        # Euclid on the column until a single row carries it
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[col] != 0:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows = rest
        col += 1
    # reduce above pivots
    for i, b in enumerate(basis):
        c = next(j for j, x in enumerate(b) if x)
        for k in range(i):
            q = basis[k][c] // b[c]
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], b)]
    return basis


def lattice_reduce(v: Sequence[int], hnf: list[list[int]]) -> tuple:
    """Canonical representative of ``v`` modulo the lattice with HNF ``hnf``."""
    v = list(v)
    for b in hnf:
        c = next(j for j, x in enumerate(b) if x)
        q = v[c] // b[c]
        if q:
            v = [x - q * y for x, y in zip(v, b)]
    return tuple(v)


def has_root_of_unity_eigenvalue(a: IntMatrix) -> bool:
    n = len(a)
    if n == 0:
        return False
    # orders j with phi(j) <= n cover every root-of-unity eigenvalue
    bound = max(2, 6 * n * n)
    ident = int_identity(n)
    power = ident
    for _ in range(bound):
        power = int_matmul(power, a)
        diff = tuple(tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(power, ident))
        if int_det(diff) == 0:
            return True
    return False


def finite_order(a: IntMatrix, bound: int = 240) -> int | None:
    """Smallest n >= 1 with a^n = I, or None if none up to ``bound``."""
    n = len(a)
    ident = int_identity(n)
    power = ident
    for k in range(1, bound + 1):
        power = int_matmul(power, a)
        if power == ident:
            return k
    return None


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


class MultiPoly:
    """Laurent polynomial with rational coefficients in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms", "_hash", "_fl")

    def __init__(self, nvars: int, terms: Mapping | None = None, _clean: bool = False):
        self.nvars = nvars
        if terms is None:
            self._terms = {}
        elif _clean:
            self._terms = terms
        else:
            self._terms = {tuple(e): mpq(c) for e, c in terms.items() if c != 0}
            for e in self._terms:
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
        self._hash = None
        self._fl = None

    @property
    def terms(self) -> dict:
        # univariate results of flint arithmetic only build their dict on demand
        if self._terms is None:
            q, lo = self._fl
            d = int(q.denom())
            self._terms = {(i + lo,): mpq(int(c), d) for i, c in enumerate(q.numer().coeffs()) if c}
        return self._terms

    @classmethod
    def constant(cls, nvars: int, c) -> MultiPoly:
        c = mpq(c)
        return cls(nvars, {(0,) * nvars: c} if c else {}, _clean=True)

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> MultiPoly:
        c = mpq(c)
        return cls(len(exp), {tuple(exp): c} if c else {}, _clean=True)

    @classmethod
    def gen(cls, nvars: int, i: int) -> MultiPoly:
        e = [0] * nvars
        e[i] = 1
        return cls.monomial(e)

    def is_zero(self) -> bool:
        if self._terms is None:
            return self._fl[0].is_zero()
        return not self._terms

    def is_constant(self) -> bool:
        if self._terms is None:
            q, lo = self._fl
            return q.is_zero() or (lo == 0 and q.degree() == 0)
        return not self._terms or (len(self._terms) == 1 and (0,) * self.nvars in self._terms)

    def is_one(self) -> bool:
        if self._terms is None:
            q, lo = self._fl
            return lo == 0 and q.is_one()
        return len(self._terms) == 1 and self._terms.get((0,) * self.nvars) == 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, _ZERO)

    def leading(self) -> tuple:
        """Lex-largest (exponent, coefficient)."""
        e = max(self.terms)
        return e, self.terms[e]

    def min_exponent(self) -> tuple:
        ts = self.terms
        if not ts:
            return (0,) * self.nvars
        return tuple(min(e[i] for e in ts) for i in range(self.nvars))

    def shift(self, exp: Sequence[int]) -> MultiPoly:
        if not any(exp):
            return self
        return MultiPoly(
            self.nvars, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()}, _clean=True
        )

    def scale(self, c) -> MultiPoly:
        c = mpq(c)
        if c == 0:
            return MultiPoly(self.nvars)
        if c == 1:
            return self
        if self._terms is None:
            return _from_uni(self._fl[0] * fmpq(int(c.numerator), int(c.denominator)), self._fl[1])
        return MultiPoly(self.nvars, {e: v * c for e, v in self.terms.items()}, _clean=True)

    def map_exponents(self, mat: IntMatrix) -> MultiPoly:
        """Substitute x^e -> x^(mat e)."""
        out = {}
        for e, c in self.terms.items():
            out[int_matvec(mat, e)] = c
        return MultiPoly(self.nvars, out, _clean=True)

    def __neg__(self) -> MultiPoly:
        if self._terms is None:
            return _from_uni(-self._fl[0], self._fl[1])
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __add__(self, other: MultiPoly) -> MultiPoly:
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MultiPoly(self.nvars, out, _clean=True)

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = -c
            else:
                v -= c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MultiPoly(self.nvars, out, _clean=True)

    def __mul__(self, other: MultiPoly) -> MultiPoly:
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly(self.nvars)
        if len(a) == 1 and (0,) * self.nvars in a:
            return other.scale(a[(0,) * self.nvars])
        if len(b) == 1 and (0,) * self.nvars in b:
            return self.scale(b[(0,) * self.nvars])
        if len(a) * len(b) > 48:
            if self.nvars == 1:
                fa, la = _uni(self)
                fb, lb = _uni(other)
                return _from_uni(fa * fb, la + lb)
            return _flint_mul(self, other)
        out: dict = {}
        if self.nvars == 1:
            for (e1,), c1 in a.items():
                for (e2,), c2 in b.items():
                    k = (e1 + e2,)
                    out[k] = out.get(k, _ZERO) + c1 * c2
        else:
            for e1, c1 in a.items():
                for e2, c2 in b.items():
                    k = tuple(x + y for x, y in zip(e1, e2))
                    out[k] = out.get(k, _ZERO) + c1 * c2
        return MultiPoly(self.nvars, {e: c for e, c in out.items() if c}, _clean=True)

    def __pow__(self, n: int) -> MultiPoly:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly) and self._fl is not None and other._fl is not None:
            return self._fl == other._fl
        return isinstance(other, MultiPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        total = _ZERO
        for e, c in self.terms.items():
            term = c
            for xi, ei in zip(point, e):
                term *= Fraction(xi) ** ei
            total += term
        return total

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), reverse=True)

    def render(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or var_names(self.nvars)
        parts = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k != 0
            )
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            if i == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self.render()!r})"


# -- gcd machinery ----------------------------------------------------------


def _to_flint(p: MultiPoly, ctx):
    return ctx.from_dict({e: fmpq(int(c.numerator), int(c.denominator)) for e, c in p.terms.items()})


def _from_flint(q, nvars: int) -> MultiPoly:
    return MultiPoly(nvars, {tuple(int(a) for a in e): mpq(int(c.p), int(c.q)) for e, c in q.to_dict().items()}, _clean=True)


def _uni(p: MultiPoly):
    """(fmpq_poly, lowest exponent) for a one-variable polynomial, cached on ``p``."""
    if p._fl is None:
        ts = p.terms
        lo = min(e for (e,) in ts)
        dense = [0] * (max(e for (e,) in ts) - lo + 1)
        for (e,), c in ts.items():
            dense[e - lo] = fmpq(int(c.numerator), int(c.denominator))
        p._fl = (fmpq_poly(dense), lo)
    return p._fl


def _from_uni(q, lo: int) -> MultiPoly:
    """Wrap ``q * x^lo``; ``q`` must be zero or have a nonzero constant term."""
    out = MultiPoly(1)
    if q:
        out._terms = None
        out._fl = (q, lo)
    return out


def _strip_uni(q, lo: int):
    """Move powers of x out of ``q`` so that its constant term is nonzero."""
    if q and q[0] == 0:
        cs = q.coeffs()
        k = next(i for i, c in enumerate(cs) if c)
        return q.right_shift(k), lo + k
    return q, lo


@lru_cache(maxsize=None)
def _flint_ctx(nvars: int):
    return fmpq_mpoly_ctx.get(tuple(f"v{i}" for i in range(nvars)), "lex")


def _flint_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    # flint wants non-negative exponents, so shift both factors first
    n = a.nvars
    sa, sb = a.min_exponent(), b.min_exponent()
    ctx = _flint_ctx(n)
    prod = _to_flint(a.shift(tuple(-e for e in sa)), ctx) * _to_flint(b.shift(tuple(-e for e in sb)), ctx)
    return _from_flint(prod, n).shift(tuple(x + y for x, y in zip(sa, sb)))


def poly_gcd_and_cofactors(a: MultiPoly, b: MultiPoly) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """gcd(a, b), a/gcd, b/gcd for genuine polynomials (non-negative exponents)."""
    n = a.nvars
    if n == 0 or a.is_constant() or b.is_constant():
        return MultiPoly.constant(n, 1), a, b
    ctx = _flint_ctx(n)
    fa, fb = _to_flint(a, ctx), _to_flint(b, ctx)
    g = fa.gcd(fb)
    return _from_flint(g, n), _from_flint(fa / g, n), _from_flint(fb / g, n)


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


class RationalFunction:
    """Element of Q(x_1..x_m) in canonical form.

    The denominator is a genuine polynomial with no monomial factor and a
    lex-leading coefficient of 1; numerator and denominator are coprime in
    the Laurent ring.  Two equal values therefore have equal fields.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.constant(num.nvars, 1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num: MultiPoly, den: MultiPoly) -> RationalFunction:
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, nvars: int, c) -> RationalFunction:
        return cls._raw(MultiPoly.constant(nvars, c), MultiPoly.constant(nvars, 1))

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> RationalFunction:
        n = len(exp)
        return cls._raw(MultiPoly.monomial(exp, c), MultiPoly.constant(n, 1))

    @classmethod
    def gen(cls, nvars: int, i: int) -> RationalFunction:
        return cls._raw(MultiPoly.gen(nvars, i), MultiPoly.constant(nvars, 1))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def monomial_data(self):
        """(coefficient, exponent) if this is c*x^e, else None."""
        if self.den.is_one() and len(self.num.terms) == 1:
            (e, c), = self.num.terms.items()
            return c, e
        return None

    def __neg__(self) -> RationalFunction:
        return RationalFunction._raw(-self.num, self.den)

    def __add__(self, other) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            other = self._coerce(other)
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den.is_one() and other.den.is_one():
            return RationalFunction._raw(self.num + other.num, self.den)
        if self.nvars == 1:
            return _add_uni(self, other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other) -> RationalFunction:
        return self._coerce(other) - self

    def __mul__(self, other) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            other = self._coerce(other)
        if self.num.is_zero() or other.num.is_zero():
            return RationalFunction.constant(self.nvars, 0)
        if self.den.is_one() and other.den.is_one():
            return RationalFunction._raw(self.num * other.num, self.den)
        if other.is_constant_value():
            return RationalFunction._raw(self.num.scale(other.num.constant_term()), self.den)
        if self.is_constant_value():
            return RationalFunction._raw(other.num.scale(self.num.constant_term()), other.den)
        if self.nvars == 1:
            return _mul_uni(self, other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def is_constant_value(self) -> bool:
        return self.den.is_one() and self.num.is_constant()

    def inverse(self) -> RationalFunction:
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> RationalFunction:
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> RationalFunction:
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction._raw(self.num ** n, self.den ** n)

    def _coerce(self, c) -> RationalFunction:
        if isinstance(c, RATIONAL_TYPES):
            return RationalFunction.constant(self.nvars, c)
        raise TypeError(f"cannot combine RationalFunction with {type(c).__name__}")

    def __eq__(self, other) -> bool:
        if isinstance(other, RATIONAL_TYPES):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def map_exponents(self, mat: IntMatrix) -> RationalFunction:
        num = self.num.map_exponents(mat)
        if self.den.is_one():
            return RationalFunction._raw(num, self.den)
        # a monomial substitution preserves coprimality; only renormalize
        return RationalFunction._raw(*_normalize_coprime(num, self.den.map_exponents(mat)))

    def evaluate(self, point: Sequence) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("pole at evaluation point")
        return self.num.evaluate(point) / d

    def render(self, names: Sequence[str] | None = None) -> str:
        n = self.num.render(names)
        if self.den.is_one():
            return n
        d = self.den.render(names)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1 or not self.den.is_constant():
            d = f"({d})"
        return f"{n}/{d}"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"RationalFunction({self.render()!r})"


def _normalize_coprime(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    shift = den.min_exponent()
    if any(shift):
        neg = tuple(-s for s in shift)
        den = den.shift(neg)
        num = num.shift(neg)
    _, lc = den.leading()
    if lc != 1:
        inv = 1 / lc
        den = den.scale(inv)
        num = num.scale(inv)
    return num, den


def _normalize(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    nv = num.nvars
    if not num.terms:
        return num, MultiPoly.constant(nv, 1)
    if len(den.terms) == 1:
        (e, c), = den.terms.items()
        return num.shift(tuple(-x for x in e)).scale(1 / c), MultiPoly.constant(nv, 1)
    if nv == 1:
        return _normalize_uni(*_uni(num), *_uni(den))
    dshift = den.min_exponent()
    nshift = num.min_exponent()
    den0 = den.shift(tuple(-s for s in dshift))
    num0 = num.shift(tuple(-s for s in nshift))
    _, num0, den0 = poly_gcd_and_cofactors(num0, den0)
    num = num0.shift(tuple(a - b for a, b in zip(nshift, dshift)))
    return _normalize_coprime(num, den0)


def _normalize_uni(fn, nlo: int, fd, dlo: int) -> tuple[MultiPoly, MultiPoly]:
    # both inputs have a nonzero constant term after removing their lowest power
    g = fn.gcd(fd)
    if g.degree() > 0:
        fn, fd = fn // g, fd // g
    lc = fd[fd.degree()]
    if lc != 1:
        fn, fd = fn / lc, fd / lc
    return _from_uni(fn, nlo - dlo), _from_uni(fd, 0)


def _raw_uni(fn, nlo: int, fd) -> RationalFunction:
    return RationalFunction._raw(_from_uni(fn, nlo), _from_uni(fd, 0))


def _mul_uni(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    # canonical denominators have lowest exponent 0, so only numerators carry a shift
    na, la = _uni(a.num)
    nb, lb = _uni(b.num)
    da, db = _uni(a.den)[0], _uni(b.den)[0]
    # cross-cancel: the factors are already coprime in pairs
    g1, g2 = na.gcd(db), nb.gcd(da)
    if g1.degree() > 0:
        na, db = na // g1, db // g1
    if g2.degree() > 0:
        nb, da = nb // g2, da // g2
    fn, fd = na * nb, da * db
    lc = fd.leading_coefficient()
    if lc != 1:
        fn, fd = fn / lc, fd / lc
    return _raw_uni(fn, la + lb, fd)


def _add_uni(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    na, la = _uni(a.num)
    nb, lb = _uni(b.num)
    da, db = _uni(a.den)[0], _uni(b.den)[0]
    lo = min(la, lb)
    if da == db:
        fn = na.left_shift(la - lo) + nb.left_shift(lb - lo)
        fd = da
    else:
        fn = (na * db).left_shift(la - lo) + (nb * da).left_shift(lb - lo)
        fd = da * db
    if not fn:
        return RationalFunction.constant(1, 0)
    fn, lo = _strip_uni(fn, lo)
    if fd.degree() == 0:
        return _raw_uni(fn, lo, fd)
    return RationalFunction._raw(*_normalize_uni(fn, lo, fd, 0))


def ratfun_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def ratfun_eq(a: RationalFunction, b: RationalFunction) -> bool:
    return (a - b).is_zero()


# ---------------------------------------------------------------------------
# monomial automorphisms
# ---------------------------------------------------------------------------


class MonomialAutomorphism:
    """x_j -> prod_i x_i^{A[i][j]}, i.e. exponent vectors transform by A."""

    __slots__ = ("matrix", "_powers", "_order")

    def __init__(self, matrix: Iterable[Iterable[int]]):
        self.matrix = int_matrix(matrix)
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix):
            raise ValueError("automorphism matrix must be square")
        if abs(int_det(self.matrix)) != 1:
            raise ValueError("automorphism matrix must have determinant +-1")
        self._powers = {0: int_identity(n), 1: self.matrix}
        self._order = -1

    @classmethod
    def identity(cls, nvars: int) -> MonomialAutomorphism:
        return cls(int_identity(nvars))

    @property
    def nvars(self) -> int:
        return len(self.matrix)

    def power_matrix(self, p: int) -> IntMatrix:
        mat = self._powers.get(p)
        if mat is None:
            mat = int_matpow(self.matrix, p)
            self._powers[p] = mat
        return mat

    def is_identity(self) -> bool:
        return self.matrix == int_identity(self.nvars)

    def order(self) -> int | None:
        """Finite order of the automorphism, or None if it has infinite order."""
        if self._order == -1:
            self._order = finite_order(self.matrix)
        return self._order

    def apply(self, a: RationalFunction, power: int = 1) -> RationalFunction:
        if power == 0 or self.nvars == 0:
            return a
        mat = self.power_matrix(power)
        if mat == self._powers[0]:
            return a
        return a.map_exponents(mat)

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialAutomorphism) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"MonomialAutomorphism({[list(r) for r in self.matrix]})"


def automorphism_apply(theta: MonomialAutomorphism, a: RationalFunction, power: int = 1) -> RationalFunction:
    return theta.apply(a, power)
