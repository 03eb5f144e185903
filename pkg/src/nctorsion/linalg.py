"""Linear algebra over Q(x) and over twisted Laurent series fields.

Matrices act on column vectors of right vector spaces: scalars multiply
vectors from the right, so row operations (left multiples of rows) keep the
right-linear relations among columns intact.  The Dieudonne determinant is
the product of the diagonal pivots after such row operations.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .algebra import MonomialAutomorphism, RationalFunction, var_names
from .laurent import TwistedLaurentSeries, parse_series
from .novikov import DEFAULT_PRECISION, PrecisionError
from .textio import parse_with
from .values import Ambiguity, TorsionValue


# ---------------------------------------------------------------------------
# coefficient fields
# ---------------------------------------------------------------------------


class RationalField:
    """Commutative mode: entries are elements of Q(x_1..x_m)."""

    commutative = True

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.theta = MonomialAutomorphism.identity(nvars)
        self.scale = 1

    def __eq__(self, other):
        return isinstance(other, RationalField) and other.nvars == self.nvars

    def __hash__(self):
        return hash(("Q(x)", self.nvars))

    def zero(self):
        return RationalFunction.constant(self.nvars, 0)

    def one(self):
        return RationalFunction.constant(self.nvars, 1)

    def coerce(self, c):
        if isinstance(c, RationalFunction):
            return c
        return RationalFunction.constant(self.nvars, c)

    @staticmethod
    def is_zero(e) -> bool:
        return e.is_zero()

    @staticmethod
    def val(e) -> int:
        return 0

    def inv(self, e):
        return e.inverse()

    def to_series(self, e) -> TwistedLaurentSeries:
        return TwistedLaurentSeries.constant(self.theta, e)

    def render(self, e) -> str:
        return e.render()

    def parse(self, text: str):
        return parse_rational(text, self.nvars)


class SeriesField:
    """Entries are twisted Laurent series; ``prec`` bounds expansions of inverses."""

    commutative = False

    def __init__(self, theta: MonomialAutomorphism, scale: int = 1, prec: int = DEFAULT_PRECISION):
        self.theta = theta
        self.scale = scale
        self.prec = prec
        self.nvars = theta.nvars

    def with_prec(self, prec: int) -> SeriesField:
        return SeriesField(self.theta, self.scale, prec)

    def __eq__(self, other):
        return isinstance(other, SeriesField) and other.theta == self.theta and other.scale == self.scale

    def __hash__(self):
        return hash(("series", self.theta, self.scale))

    def zero(self):
        return TwistedLaurentSeries.zero(self.theta, scale=self.scale)

    def one(self):
        return TwistedLaurentSeries.one(self.theta, scale=self.scale)

    def coerce(self, c):
        if isinstance(c, TwistedLaurentSeries):
            return c
        return TwistedLaurentSeries.constant(self.theta, c, None, self.scale)

    @staticmethod
    def is_zero(e) -> bool:
        return e.is_zero()

    @staticmethod
    def val(e) -> int:
        return e.val

    def inv(self, e):
        return e.inverse(self.prec)

    @staticmethod
    def to_series(e) -> TwistedLaurentSeries:
        return e

    @staticmethod
    def render(e) -> str:
        return e.render()

    def parse(self, text: str):
        s = parse_series(text, self.theta, self.scale)
        return s


class _RationalContext:
    def __init__(self, nvars: int):
        self.nvars = nvars
        self.names = var_names(nvars)

    def number(self, n):
        return RationalFunction.constant(self.nvars, n)

    def name(self, name, exp):
        m = self.nvars
        if name == "x" and m > 1 and isinstance(exp, tuple):
            if len(exp) != m:
                raise ValueError(f"exponent vector must have {m} components")
            return RationalFunction.monomial(exp)
        if name in self.names:
            if isinstance(exp, tuple):
                raise ValueError("vector exponents need the name x")
            e = [0] * m
            e[self.names.index(name)] = 1 if exp is None else exp
            return RationalFunction.monomial(e)
        raise KeyError(name)

    def big_o(self, name, k):
        raise ValueError("O-terms are not allowed in rational functions")

    def divide(self, a, b):
        if b.is_zero():
            raise ZeroDivisionError
        return a / b

    def power(self, a, n):
        if n < 0 and a.is_zero():
            raise ZeroDivisionError
        return a ** n


def parse_rational(text: str, nvars: int) -> RationalFunction:
    return parse_with(text, _RationalContext(nvars))


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


class SkewMatrix:
    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, fld, rows: Sequence[Sequence], ncols: int | None = None):
        self.field = fld
        self.rows = [[fld.coerce(e) for e in r] for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("matrix rows have different lengths")

    @classmethod
    def zeros(cls, fld, nrows: int, ncols: int) -> SkewMatrix:
        z = fld.zero()
        return cls(fld, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, fld, n: int) -> SkewMatrix:
        z, o = fld.zero(), fld.one()
        return cls(fld, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> SkewMatrix:
        return SkewMatrix(self.field, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def __matmul__(self, other: SkewMatrix) -> SkewMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        fld = self.field
        out = []
        for r in self.rows:
            row = []
            for j in range(other.ncols):
                acc = None
                for k, a in enumerate(r):
                    b = other.rows[k][j]
                    if fld.is_zero(a) or fld.is_zero(b):
                        continue
                    p = a * b
                    acc = p if acc is None else acc + p
                row.append(acc if acc is not None else fld.zero())
            out.append(row)
        return SkewMatrix(fld, out, other.ncols)

    def __add__(self, other: SkewMatrix) -> SkewMatrix:
        return SkewMatrix(self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                          self.ncols)

    def __neg__(self) -> SkewMatrix:
        return SkewMatrix(self.field, [[-a for a in r] for r in self.rows], self.ncols)

    def __sub__(self, other: SkewMatrix) -> SkewMatrix:
        return self + (-other)

    def apply(self, v: Sequence) -> list:
        fld = self.field
        out = []
        for r in self.rows:
            acc = fld.zero()
            for a, b in zip(r, v):
                if not fld.is_zero(a) and not fld.is_zero(b):
                    acc = acc + a * b
            out.append(acc)
        return out

    def is_zero(self) -> bool:
        return all(self.field.is_zero(e) for r in self.rows for e in r)

    def nonzero_entries(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.rows) for j, e in enumerate(r) if not self.field.is_zero(e)]

    def map(self, fn: Callable) -> SkewMatrix:
        return SkewMatrix(self.field, [[fn(e) for e in r] for r in self.rows], self.ncols)

    def render(self) -> list[list[str]]:
        return [[self.field.render(e) for e in r] for r in self.rows]

    def __repr__(self) -> str:
        return f"SkewMatrix({self.render()!r})"


def block_matrix(fld, blocks: Sequence[Sequence[SkewMatrix | None]], row_sizes: Sequence[int],
                 col_sizes: Sequence[int]) -> SkewMatrix:
    """Assemble from blocks; ``None`` stands for a zero block."""
    z = fld.zero()
    rows = []
    for bi, h in enumerate(row_sizes):
        for i in range(h):
            row = []
            for bj, w in enumerate(col_sizes):
                b = blocks[bi][bj]
                if b is None:
                    row.extend([z] * w)
                else:
                    if b.shape != (h, w):
                        raise ValueError(f"block ({bi},{bj}) has shape {b.shape}, expected {(h, w)}")
                    row.extend(b.rows[i])
            rows.append(row)
    return SkewMatrix(fld, rows, sum(col_sizes))


# ---------------------------------------------------------------------------
# pivoting and echelon forms
# ---------------------------------------------------------------------------

PIVOT_STRATEGIES = ("valuation", "first", "last", "random")


def _choose(fld, candidates: list[tuple[int, object]], strategy: str, rng: random.Random | None):
    """candidates: (row index, entry) with nonzero entries, in row order."""
    if strategy == "valuation":
        return min(candidates, key=lambda c: fld.val(c[1]))
    if strategy == "first":
        return candidates[0]
    if strategy == "last":
        return candidates[-1]
    if strategy == "random":
        return (rng or random).choice(candidates)
    raise ValueError(f"unknown pivot strategy {strategy!r}; choose from {', '.join(PIVOT_STRATEGIES)}")


@dataclass
class Echelon:
    """Row echelon data: ``pivots`` lists (original row, column) pairs in stage order."""

    pivots: list[tuple[int, int]]
    reduced: list[list]
    row_order: list[int]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def pivot_rows(self) -> list[int]:
        return [r for r, _ in self.pivots]

    @property
    def pivot_cols(self) -> list[int]:
        return [c for _, c in self.pivots]


def echelon(m: SkewMatrix, strategy: str = "valuation", seed: int | None = None) -> Echelon:
    """Row echelon form by left row operations; records which original rows pivot."""
    fld = m.field
    rng = random.Random(seed) if strategy == "random" else None
    rows = [list(r) for r in m.rows]
    labels = list(range(m.nrows))
    pivots = []
    top = 0
    for col in range(m.ncols):
        if top >= len(rows):
            break
        cands = [(i, rows[i][col]) for i in range(top, len(rows)) if not fld.is_zero(rows[i][col])]
        if not cands:
            continue
        p, piv = _choose(fld, cands, strategy, rng)
        rows[top], rows[p] = rows[p], rows[top]
        labels[top], labels[p] = labels[p], labels[top]
        inv = fld.inv(piv)
        prow = rows[top]
        for i in range(top + 1, len(rows)):
            e = rows[i][col]
            if fld.is_zero(e):
                continue
            f = e * inv
            rows[i] = [a if fld.is_zero(b) else a - f * b for a, b in zip(rows[i], prow)]
            rows[i][col] = fld.zero()
        pivots.append((labels[top], col))
        top += 1
    return Echelon(pivots, rows, labels)


def rank(m: SkewMatrix) -> int:
    return echelon(m).rank


def rref(m: SkewMatrix, strategy: str = "valuation") -> tuple[list[list], list[int]]:
    """Reduced row echelon form (pivots normalized to 1) and pivot columns."""
    fld = m.field
    rows = [list(r) for r in m.rows]
    pcols = []
    top = 0
    for col in range(m.ncols):
        if top >= len(rows):
            break
        cands = [(i, rows[i][col]) for i in range(top, len(rows)) if not fld.is_zero(rows[i][col])]
        if not cands:
            continue
        p, piv = _choose(fld, cands, strategy, None)
        rows[top], rows[p] = rows[p], rows[top]
        inv = fld.inv(piv)
        rows[top] = [inv * a if not fld.is_zero(a) else a for a in rows[top]]
        rows[top][col] = fld.one()
        for i in range(len(rows)):
            if i == top:
                continue
            e = rows[i][col]
            if fld.is_zero(e):
                continue
            rows[i] = [a if fld.is_zero(b) else a - e * b for a, b in zip(rows[i], rows[top])]
            rows[i][col] = fld.zero()
        pcols.append(col)
        top += 1
    return rows, pcols


def right_kernel(m: SkewMatrix) -> list[list]:
    """Basis of {v : m v = 0} (v scaled on the right)."""
    fld = m.field
    rows, pcols = rref(m)
    free = [j for j in range(m.ncols) if j not in pcols]
    basis = []
    for f in free:
        v = [fld.zero() for _ in range(m.ncols)]
        v[f] = fld.one()
        for r, pc in enumerate(pcols):
            e = rows[r][f]
            if not fld.is_zero(e):
                v[pc] = -e
        basis.append(v)
    return basis


def solve(m: SkewMatrix, b: Sequence):
    """Some v with m v = b, or None if inconsistent."""
    fld = m.field
    aug = SkewMatrix(fld, [list(r) + [bi] for r, bi in zip(m.rows, b)], m.ncols + 1)
    rows, pcols = rref(aug)
    if m.ncols in pcols:
        return None
    v = [fld.zero() for _ in range(m.ncols)]
    for r, pc in enumerate(pcols):
        v[pc] = rows[r][m.ncols]
    return v


def in_span(vectors: Sequence[Sequence], target: Sequence, fld) -> bool:
    if not vectors:
        return all(fld.is_zero(e) for e in target)
    cols = SkewMatrix(fld, [list(r) for r in zip(*vectors)], len(vectors))
    return solve(cols, target) is not None


# ---------------------------------------------------------------------------
# Dieudonne determinant
# ---------------------------------------------------------------------------


class SingularMatrixError(ArithmeticError):
    pass


@dataclass
class PivotStep:
    stage: int
    row: int
    valuation: int
    pivot: str

    def as_dict(self) -> dict:
        return {"stage": self.stage, "row": self.row, "valuation": self.valuation, "pivot": self.pivot}


def dieudonne_det(m: SkewMatrix, strategy: str = "valuation", seed: int | None = None,
                  ambiguity: Ambiguity | None = None) -> TorsionValue:
    """Product of diagonal pivots after row reduction, with swap sign kept apart."""
    if m.nrows != m.ncols:
        raise ValueError(f"determinant of a non-square {m.shape} matrix")
    fld = m.field
    amb = ambiguity or Ambiguity.trivial()
    n = m.nrows
    if n == 0:
        return TorsionValue(fld.to_series(fld.one()), 1, amb)
    rng = random.Random(seed) if strategy == "random" else None
    rows = [list(r) for r in m.rows]
    labels = list(range(n))
    sign = 1
    log = []
    prod = None
    for c in range(n):
        cands = [(i, rows[i][c]) for i in range(c, n) if not fld.is_zero(rows[i][c])]
        if not cands:
            raise SingularMatrixError(f"no unit pivot at stage {c + 1}")
        p, piv = _choose(fld, cands, strategy, rng)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            labels[c], labels[p] = labels[p], labels[c]
            sign = -sign
        log.append(PivotStep(c + 1, labels[c] + 1, fld.val(piv), fld.render(piv)))
        piv_series = fld.to_series(piv)
        prod = piv_series if prod is None else prod * piv_series
        if c == n - 1:
            break
        inv = fld.inv(piv)
        prow = rows[c]
        for i in range(c + 1, n):
            e = rows[i][c]
            if fld.is_zero(e):
                continue
            f = e * inv
            rows[i] = [a if fld.is_zero(b) else a - f * b for a, b in zip(rows[i], prow)]
            rows[i][c] = fld.zero()
    if prod.is_zero():
        raise PrecisionError("insufficient precision: pivot product vanished")
    return TorsionValue(prod, sign, amb, [s.as_dict() for s in log])


def schur_eliminate(b: SkewMatrix, stages: int | None = None) -> SkewMatrix:
    """Gauss-Jordan stages b_ij <- b_ij - b_im b_mm^-1 b_mj for i != m."""
    fld = b.field
    n = b.nrows
    stages = n if stages is None else stages
    rows = [list(r) for r in b.rows]
    for m in range(stages):
        piv = rows[m][m]
        if fld.is_zero(piv):
            raise SingularMatrixError(f"stage {m + 1} pivot is not invertible")
        inv = fld.inv(piv)
        for i in range(n):
            if i == m or fld.is_zero(rows[i][m]):
                continue
            f = rows[i][m] * inv
            rows[i] = [a if fld.is_zero(x) else a - f * x for a, x in zip(rows[i], rows[m])]
            rows[i][m] = fld.zero()
    return SkewMatrix(fld, rows, b.ncols)


def diagonal_product(m: SkewMatrix) -> TwistedLaurentSeries:
    fld = m.field
    prod = fld.to_series(fld.one())
    for i in range(m.nrows):
        prod = prod * fld.to_series(m.rows[i][i])
    return prod


# ---------------------------------------------------------------------------
# elimination lemma
# ---------------------------------------------------------------------------


class HypothesisError(ValueError):
    def __init__(self, message: str, cycle: list[int]):
        super().__init__(message)
        self.cycle = cycle


def short_cycle_through_first(a: SkewMatrix, k: int) -> list[int] | None:
    """Shortest closed walk 1 -> ... -> 1 of length <= k with all a-entries nonzero (1-based)."""
    fld = a.field
    n = a.nrows
    edges = [[j for j in range(n) if not fld.is_zero(a.rows[i][j])] for i in range(n)]
    # BFS from vertex 0 over walks; first return to 0 gives the shortest cycle
    parent = {0: None}
    frontier = deque([(0, 0)])
    while frontier:
        v, d = frontier.popleft()
        if d >= k:
            continue
        for w in edges[v]:
            if w == 0:
                path = [v]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return [i + 1 for i in reversed(path)] + [1]
            if w not in parent:
                parent[w] = v
                frontier.append((w, d + 1))
    return None


def minor_equivalence_check(b: SkewMatrix, k: int, strategy: str = "valuation") -> bool:
    """Check det(B) ~_k det(B without row/column 1) for B = I - A.

    A's entries must have positive valuation.  The hypothesis (no closed walk
    through index 1 of length <= k in the support of A) is verified first.
    """
    fld = b.field
    n = b.nrows
    ident = SkewMatrix.identity(fld, n)
    a = ident - b
    for i, j in a.nonzero_entries():
        if fld.val(a.rows[i][j]) < 1:
            raise ValueError(f"entry ({i + 1},{j + 1}) of A has valuation < 1")
    cycle = short_cycle_through_first(a, k)
    if cycle is not None:
        raise HypothesisError(f"hypothesis violated by the cycle {cycle}", cycle)
    from .values import torsion_compare, Verdict

    full = dieudonne_det(b, strategy)
    minor = dieudonne_det(b.submatrix(range(1, n), range(1, n)), strategy) if n > 1 else \
        TorsionValue(fld.to_series(fld.one()))
    if full.value.truncated_equal(minor.value, k):
        return True
    return torsion_compare(full, minor, k) is Verdict.EQUAL
