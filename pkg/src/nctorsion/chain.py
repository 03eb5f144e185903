"""Based chain complexes over a field or skew field and their torsion.

Complexes are C_n -> ... -> C_0 with ``diffs[i]`` the matrix of
d_i : C_i -> C_(i-1) (columns are images of basis vectors).  Two torsion
routines are provided: the base-change form with exponent (-1)^(i+1) and
the alternating product of split determinants with exponent (-1)^i.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .groups import GroupDescriptor, GroupRingElement
from .laurent import rho_embed
from .linalg import (
    SeriesField,
    SkewMatrix,
    dieudonne_det,
    echelon,
    rank,
    solve,
)
from .novikov import PrecisionError
from .values import Ambiguity, TorsionValue, compare_values, one_value


class ChainComplexError(ValueError):
    pass


class BasedChainComplex:
    """``dims[i]`` = dim C_i; ``diffs[i]`` (i >= 1) is a dims[i-1] x dims[i] matrix."""

    def __init__(self, fld, dims: Sequence[int], diffs: dict[int, SkewMatrix] | Sequence[SkewMatrix],
                 labels: Sequence[Sequence[str]] | None = None):
        self.field = fld
        self.dims = list(dims)
        if not isinstance(diffs, dict):
            diffs = {i + 1: d for i, d in enumerate(diffs)}
        self.diffs: dict[int, SkewMatrix] = {}
        for i in range(1, len(self.dims)):
            d = diffs.get(i)
            if d is None:
                d = SkewMatrix.zeros(fld, self.dims[i - 1], self.dims[i])
            if d.shape != (self.dims[i - 1], self.dims[i]):
                raise ChainComplexError(f"d_{i} has shape {d.shape}, expected {(self.dims[i - 1], self.dims[i])}")
            self.diffs[i] = d
        self.labels = [list(l) for l in labels] if labels else [[f"c{i}_{j + 1}" for j in range(n)]
                                                               for i, n in enumerate(self.dims)]

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def d(self, i: int) -> SkewMatrix:
        """d_i, with zero maps outside the stored range."""
        if 1 <= i <= self.top:
            return self.diffs[i]
        rows = self.dims[i - 1] if 0 <= i - 1 <= self.top else 0
        cols = self.dims[i] if 0 <= i <= self.top else 0
        return SkewMatrix.zeros(self.field, rows, cols)

    def dim(self, i: int) -> int:
        return self.dims[i] if 0 <= i <= self.top else 0

    def with_field(self, fld) -> BasedChainComplex:
        """Same entries over ``fld``, e.g. a series field with more working precision."""
        diffs = {i: SkewMatrix(fld, d.rows, d.ncols) for i, d in self.diffs.items()}
        return BasedChainComplex(fld, self.dims, diffs, self.labels)


@dataclass
class HomologyBasis:
    """Cycle vectors per degree whose classes form a homology basis."""

    vectors: dict[int, list[list]] = field(default_factory=dict)

    def get(self, i: int) -> list[list]:
        return self.vectors.get(i, [])


@dataclass
class ValidationReport:
    homology_ranks: list[int]
    boundary_ranks: dict[int, int]

    @property
    def acyclic(self) -> bool:
        return not any(self.homology_ranks)


def validate_complex(c: BasedChainComplex) -> ValidationReport:
    for i in range(2, c.top + 1):
        prod = c.d(i - 1) @ c.d(i)
        bad = prod.nonzero_entries()
        if bad:
            r, s = bad[0]
            raise ChainComplexError(
                f"d_{i - 1} d_{i} != 0: entry ({r + 1},{s + 1}) is {c.field.render(prod.rows[r][s])}")
    ranks = {i: rank(c.d(i)) for i in range(1, c.top + 1)}
    hom = [c.dims[i] - ranks.get(i, 0) - ranks.get(i + 1, 0) for i in range(c.top + 1)]
    return ValidationReport(hom, ranks)


def _unit(fld, n: int, j: int) -> list:
    z, o = fld.zero(), fld.one()
    return [o if r == j else z for r in range(n)]


def _independent_columns(m: SkewMatrix, rng: random.Random | None) -> list[int]:
    order = list(range(m.ncols))
    if rng is not None:
        rng.shuffle(order)
    ech = echelon(m.submatrix(range(m.nrows), order))
    return sorted(order[c] for c in ech.pivot_cols)


def torsion_milnor(c: BasedChainComplex, h: HomologyBasis | None = None, strategy: str = "valuation",
                   seed: int | None = None, ambiguity: Ambiguity | None = None) -> TorsionValue:
    """prod_i [b_i h_i b_(i-1) / c_i]^((-1)^(i+1)).

    b_i are independent columns of d_(i+1); lifts of b_(i-1) are the
    matching basis vectors of C_i.  ``seed`` randomizes which columns are
    chosen, to exercise independence of these choices.
    """
    fld = c.field
    h = h or HomologyBasis()
    rng = random.Random(seed) if seed is not None else None
    chosen = {i: _independent_columns(c.d(i), rng) for i in range(1, c.top + 1)}
    result = one_value(fld.theta, ambiguity, fld.scale)
    log = []
    for i in range(c.top + 1):
        n = c.dims[i]
        cols: list[list] = []
        if i + 1 <= c.top:
            d_up = c.d(i + 1)
            cols += [d_up.column(j) for j in chosen[i + 1]]
        for v in h.get(i):
            if len(v) != n:
                raise ChainComplexError(f"homology vector in degree {i} has length {len(v)}, expected {n}")
            cols.append([fld.coerce(e) for e in v])
        if i >= 1:
            cols += [_unit(fld, n, j) for j in chosen[i]]
        if len(cols) != n:
            raise ChainComplexError(
                f"degree {i}: {len(cols)} vectors for a space of dimension {n}; homology basis inconsistent")
        if n == 0:
            continue
        mat = SkewMatrix(fld, [list(r) for r in zip(*cols)], n)
        try:
            det = dieudonne_det(mat, strategy, seed)
        except ArithmeticError as exc:
            raise ChainComplexError(f"degree {i}: base-change matrix is singular ({exc}); "
                                    "homology basis inconsistent") from exc
        log.append({"degree": i, "pivots": det.log})
        det = det.with_ambiguity(result.ambiguity)
        result = result * (det if (i + 1) % 2 == 0 else det.inverse(getattr(fld, "prec", None)))
    result.log = log
    return result


def turaev_split(c: BasedChainComplex) -> dict[int, list[int]]:
    """Greedy choice of C'_i (indices into the basis of C_i), top degree first."""
    primes: dict[int, list[int]] = {c.top: list(range(c.dim(c.top)))}
    for i in range(c.top, 0, -1):
        sub = c.d(i).submatrix(range(c.dim(i - 1)), primes[i])
        ech = echelon(sub)
        if ech.rank != len(primes[i]):
            raise ChainComplexError(f"no valid split: d_{i} restricted to C'_{i} has rank {ech.rank} < {len(primes[i])}")
        rows = set(ech.pivot_rows)
        primes[i - 1] = [r for r in range(c.dim(i - 1)) if r not in rows]
    if primes[0]:
        raise ChainComplexError("no valid split: complex is not acyclic in degree 0")
    return primes


def torsion_turaev(c: BasedChainComplex, split: dict[int, list[int]] | None = None,
                   strategy: str = "valuation", ambiguity: Ambiguity | None = None) -> TorsionValue:
    """prod_i det(pr_(C''_(i-1)) d_i |C'_i)^((-1)^i)."""
    fld = c.field
    primes = split if split is not None else turaev_split(c)
    result = one_value(fld.theta, ambiguity, fld.scale)
    log = []
    for i in range(1, c.top + 1):
        cols = list(primes.get(i, []))
        rows = [r for r in range(c.dim(i - 1)) if r not in set(primes.get(i - 1, []))]
        if len(rows) != len(cols):
            raise ChainComplexError(f"split in degree {i} is not square: {len(rows)} x {len(cols)}")
        if not cols:
            continue
        det = dieudonne_det(c.d(i).submatrix(rows, cols), strategy).with_ambiguity(result.ambiguity)
        log.append({"degree": i, "rows": rows, "cols": cols, "pivots": det.log})
        result = result * (det if i % 2 == 0 else det.inverse(getattr(fld, "prec", None)))
    result.log = log
    return result


def compare_milnor_turaev(c: BasedChainComplex, k: int, max_prec: int = 128):
    """Compare both torsions through degree k, doubling the working precision as needed."""
    while True:
        try:
            a = torsion_milnor(c)
            return compare_values(a, torsion_turaev(c, ambiguity=a.ambiguity), k)
        except PrecisionError:
            fld = c.field
            if not isinstance(fld, SeriesField) or 2 * fld.prec > max_prec:
                raise
            c = c.with_field(fld.with_prec(2 * fld.prec))


# ---------------------------------------------------------------------------
# short exact sequences
# ---------------------------------------------------------------------------


def _homology_coords(c: BasedChainComplex, h: HomologyBasis, i: int, z: list) -> list:
    """Coordinates of the class of the cycle z in the basis h_i."""
    fld = c.field
    hs = h.get(i)
    bd = c.d(i + 1)
    cols = [list(v) for v in hs] + [bd.column(j) for j in range(bd.ncols)]
    if not cols:
        return []
    m = SkewMatrix(fld, [list(r) for r in zip(*cols)], len(cols))
    sol = solve(m, z)
    if sol is None:
        raise ChainComplexError(f"vector in degree {i} is not a cycle modulo boundaries spanned by h")
    return sol[: len(hs)]


def long_exact_sequence(sub: BasedChainComplex, total: BasedChainComplex, quot: BasedChainComplex,
                        h_sub: HomologyBasis, h_total: HomologyBasis, h_quot: HomologyBasis) -> BasedChainComplex:
    """The homology sequence as an acyclic complex, graded H_(3i+2)=H_i(C'), H_(3i+1)=H_i(C), H_(3i)=H_i(C'')."""
    fld = total.field
    top = total.top
    dims = []
    for i in range(top + 1):
        dims += [len(h_quot.get(i)), len(h_total.get(i)), len(h_sub.get(i))]
    diffs = {}
    for i in range(top + 1):
        n_sub = sub.dim(i)
        # H_i(C') -> H_i(C): inclusion into the first block
        cols = [_homology_coords(total, h_total, i, list(z) + [fld.zero()] * quot.dim(i)) for z in h_sub.get(i)]
        diffs[3 * i + 2] = _cols_to_matrix(fld, cols, len(h_total.get(i)))
        # H_i(C) -> H_i(C''): projection onto the second block
        cols = [_homology_coords(quot, h_quot, i, list(z)[n_sub:]) for z in h_total.get(i)]
        diffs[3 * i + 1] = _cols_to_matrix(fld, cols, len(h_quot.get(i)))
        if i >= 1:
            # connecting map H_i(C'') -> H_(i-1)(C')
            cols = []
            for z in h_quot.get(i):
                lifted = [fld.zero()] * n_sub + list(z)
                image = total.d(i).apply(lifted)
                if any(not fld.is_zero(e) for e in image[sub.dim(i - 1):]):
                    raise ChainComplexError("lift of a quotient cycle does not land in the subcomplex")
                cols.append(_homology_coords(sub, h_sub, i - 1, image[: sub.dim(i - 1)]))
            diffs[3 * i] = _cols_to_matrix(fld, cols, len(h_sub.get(i - 1)))
    return BasedChainComplex(fld, dims, diffs)


def _cols_to_matrix(fld, cols: list[list], nrows: int) -> SkewMatrix:
    if not cols:
        return SkewMatrix.zeros(fld, nrows, 0)
    return SkewMatrix(fld, [list(r) for r in zip(*cols)], len(cols))


def check_short_exact(sub: BasedChainComplex, total: BasedChainComplex, quot: BasedChainComplex):
    """Hypothesis: C_i = C'_i + C''_i on concatenated bases with block upper-triangular d."""
    fld = total.field
    for i in range(total.top + 1):
        if total.dim(i) != sub.dim(i) + quot.dim(i):
            raise ChainComplexError(f"degree {i}: dim C != dim C' + dim C''")
    for i in range(1, total.top + 1):
        d = total.d(i)
        a, b = sub.dim(i - 1), sub.dim(i)
        for r in range(d.nrows):
            for s in range(d.ncols):
                e = d.rows[r][s]
                if r < a and s < b:
                    want = sub.d(i).rows[r][s]
                elif r >= a and s >= b:
                    want = quot.d(i).rows[r - a][s - b]
                elif r >= a and s < b:
                    want = fld.zero()
                else:
                    continue
                if e != want:
                    raise ChainComplexError(
                        f"[c'c''/c] != 1: d_{i} entry ({r + 1},{s + 1}) breaks the block form of the sequence")


@dataclass
class MultiplicativityReport:
    tau_total: TorsionValue
    tau_sub: TorsionValue
    tau_quot: TorsionValue
    tau_homology: TorsionValue
    verdict: object
    reason: str


def multiplicativity_check(sub: BasedChainComplex, total: BasedChainComplex, quot: BasedChainComplex,
                           h_sub: HomologyBasis, h_total: HomologyBasis, h_quot: HomologyBasis,
                           k: int = 0) -> MultiplicativityReport:
    """tau(C) against tau(C') tau(C'') tau(H), compared up to sign."""
    check_short_exact(sub, total, quot)
    t_total = torsion_milnor(total, h_total)
    t_sub = torsion_milnor(sub, h_sub)
    t_quot = torsion_milnor(quot, h_quot)
    hseq = long_exact_sequence(sub, total, quot, h_sub, h_total, h_quot)
    t_h = torsion_milnor(hseq)
    cmp = compare_values(t_total, t_sub * t_quot * t_h, k)
    return MultiplicativityReport(t_total, t_sub, t_quot, t_h, cmp.verdict, cmp.reason)


# ---------------------------------------------------------------------------
# CW data
# ---------------------------------------------------------------------------


@dataclass
class CWDatum:
    """Cells per dimension and boundary matrices over Z[G] (columns = cell boundaries)."""

    desc: GroupDescriptor
    cells: list[int]
    boundaries: dict[int, list[list[GroupRingElement]]]
    labels: list[list[str]] | None = None

    def boundary(self, i: int) -> list[list[GroupRingElement]]:
        b = self.boundaries.get(i)
        if b is None:
            return [[GroupRingElement.zero(self.desc)] * self.cells[i] for _ in range(self.cells[i - 1])]
        return b

    def check(self):
        for i in range(2, len(self.cells)):
            lo, hi = self.boundary(i - 1), self.boundary(i)
            for r in range(self.cells[i - 2]):
                for s in range(self.cells[i]):
                    acc = GroupRingElement.zero(self.desc)
                    for k in range(self.cells[i - 1]):
                        acc = acc + lo[r][k] * hi[k][s]
                    if not acc.is_zero():
                        raise ChainComplexError(f"boundary^2 != 0 at d_{i - 1} d_{i} entry ({r + 1},{s + 1})")


def cw_complex(x: CWDatum, prec: int) -> BasedChainComplex:
    fld = SeriesField(x.desc.theta, x.desc.alpha_scale, prec)
    diffs = {}
    for i in range(1, len(x.cells)):
        b = x.boundary(i)
        diffs[i] = SkewMatrix(fld, [[rho_embed(e) for e in row] for row in b], x.cells[i])
    return BasedChainComplex(fld, x.cells, diffs, x.labels)


def reidemeister_torsion(x: CWDatum, k: int, strategy: str = "valuation") -> TorsionValue:
    x.check()
    c = cw_complex(x, k + 1 + 2 * max(1, x.desc.theta.order() or 1))
    report = validate_complex(c)
    if not report.acyclic:
        raise ChainComplexError(f"twisted complex is not acyclic: homology ranks {report.homology_ranks}")
    return torsion_milnor(c, None, strategy, ambiguity=Ambiguity.full(x.desc))


def relift(x: CWDatum, dim: int, cell: int, g) -> CWDatum:
    """Replace the lift of ``cell`` in dimension ``dim`` by its translate under g."""
    desc = x.desc
    gr = GroupRingElement.from_group(desc, g)
    gi = GroupRingElement.from_group(desc, desc.inverse(g))
    bounds = {i: [list(r) for r in x.boundary(i)] for i in range(1, len(x.cells))}
    if dim >= 1:
        for row in bounds[dim]:
            row[cell] = row[cell] * gr
    if dim + 1 < len(x.cells):
        bounds[dim + 1][cell] = [gi * e for e in bounds[dim + 1][cell]]
    return CWDatum(desc, list(x.cells), bounds, x.labels)
