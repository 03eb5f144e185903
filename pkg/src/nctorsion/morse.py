"""The combinatorial model of a circle-valued Morse function and the torsion identities.

C_i = D_i + E_i + F_i with F_i = E_(i-1).  Over Z[G] the differential is

    d_i = [[ N_i,  0,     W_i          ],
           [-M_i,  S_i,   I - phi_(i-1)],
           [ 0,    0,    -S_(i-1)      ]]

where S_i is the differential of the cut surface (E_i -> E_(i-1)).  The
lower-right block maps F_i = E_(i-1) to F_(i-1) = E_(i-2), so it is S_(i-1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .chain import BasedChainComplex, ChainComplexError, torsion_milnor, turaev_split, validate_complex
from .groups import GroupDescriptor, GroupElement, GroupRingElement
from .laurent import TwistedLaurentSeries, rho_embed
from .linalg import SeriesField, SingularMatrixError, SkewMatrix, dieudonne_det
from .novikov import NovikovElement, PrecisionError
from .values import Ambiguity, TorsionValue, Verdict, compare_values, one_value
from .zeta import EnumerationResult, orbit_enumerate, zeta_product

Grid = list  # list[list[GroupRingElement]]


class ModelError(ValueError):
    pass


def gr_zeros(desc: GroupDescriptor, rows: int, cols: int) -> Grid:
    z = GroupRingElement.zero(desc)
    return [[z] * cols for _ in range(rows)]


def gr_matmul(desc: GroupDescriptor, a: Grid, b: Grid, inner: int) -> Grid:
    z = GroupRingElement.zero(desc)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(cols):
            acc = z
            for t in range(inner):
                if not row[t].is_zero() and not b[t][j].is_zero():
                    acc = acc + row[t] * b[t][j]
            new.append(acc)
        out.append(new)
    return out


def _shape_ok(g: Grid, rows: int, cols: int) -> bool:
    return len(g) == rows and all(len(r) == cols for r in g)


@dataclass
class CircleMorseModel:
    """Blocks indexed by degree: N, M, W for i = 1..n; phi for j = 0..n-1; dsigma for i = 1..n-1.

    ``d[i]`` counts critical points of index i (i = 0..n) and ``e[i]`` the
    cells of the cut surface in dimension i (i = 0..n-1).  Missing blocks are zero.
    """

    desc: GroupDescriptor
    d: list[int]
    e: list[int]
    N: dict[int, Grid] = field(default_factory=dict)
    M: dict[int, Grid] = field(default_factory=dict)
    W: dict[int, Grid] = field(default_factory=dict)
    phi: dict[int, Grid] = field(default_factory=dict)
    dsigma: dict[int, Grid] = field(default_factory=dict)
    name: str = ""

    @property
    def top(self) -> int:
        return len(self.d) - 1

    def dd(self, i: int) -> int:
        return self.d[i] if 0 <= i < len(self.d) else 0

    def ee(self, i: int) -> int:
        return self.e[i] if 0 <= i < len(self.e) else 0

    def _get(self, table: dict, i: int, rows: int, cols: int, name: str) -> Grid:
        g = table.get(i)
        if g is None:
            return gr_zeros(self.desc, rows, cols)
        if not _shape_ok(g, rows, cols):
            raise ModelError(f"{name}_{i} should be {rows} x {cols}")
        return g

    def n_block(self, i):
        return self._get(self.N, i, self.dd(i - 1), self.dd(i), "N")

    def m_block(self, i):
        return self._get(self.M, i, self.ee(i - 1), self.dd(i), "M")

    def w_block(self, i):
        return self._get(self.W, i, self.dd(i - 1), self.ee(i - 1), "W")

    def phi_block(self, j):
        return self._get(self.phi, j, self.ee(j), self.ee(j), "phi")

    def s_block(self, i):
        return self._get(self.dsigma, i, self.ee(i - 1), self.ee(i), "dsigma")

    def cell_dims(self) -> list[int]:
        return [self.dd(i) + self.ee(i) + self.ee(i - 1) for i in range(self.top + 1)]

    def phis(self) -> list[Grid]:
        return [self.phi_block(j) for j in range(len(self.e))]

    def labels(self) -> list[list[str]]:
        out = []
        for i in range(self.top + 1):
            out.append([f"D{i}.{a + 1}" for a in range(self.dd(i))] + [f"E{i}.{a + 1}" for a in range(self.ee(i))]
                       + [f"F{i}.{a + 1}" for a in range(self.ee(i - 1))])
        return out

    # -- the Z[G] differential -------------------------------------------------

    def differential(self, i: int) -> Grid:
        desc = self.desc
        one = GroupRingElement.one(desc)
        rows_d, rows_e, rows_f = self.dd(i - 1), self.ee(i - 1), self.ee(i - 2)
        cols_d, cols_e, cols_f = self.dd(i), self.ee(i), self.ee(i - 1)
        n, m, w = self.n_block(i), self.m_block(i), self.w_block(i)
        s_i, s_lo = self.s_block(i), self.s_block(i - 1)
        phi = self.phi_block(i - 1)
        zero = GroupRingElement.zero(desc)
        out = []
        for r in range(rows_d):
            out.append(list(n[r]) + [zero] * cols_e + list(w[r]))
        for r in range(rows_e):
            ip = [(one if r == c else zero) - phi[r][c] for c in range(cols_f)]
            out.append([-x for x in m[r]] + list(s_i[r]) + ip)
        for r in range(rows_f):
            out.append([zero] * (cols_d + cols_e) + [-x for x in s_lo[r]])
        return out

    def validate(self):
        """Shapes, degree conditions and d^2 = 0 over Z[G]."""
        if len(self.e) != len(self.d) - 1:
            raise ModelError(f"need len(e) = len(d) - 1, got {len(self.e)} and {len(self.d)}")
        if any(x < 0 for x in self.d + self.e):
            raise ModelError("negative dimension")
        for i in range(1, self.top + 1):
            for name, g in (("N", self.n_block(i)), ("M", self.m_block(i)), ("W", self.w_block(i))):
                for r, row in enumerate(g):
                    for c, x in enumerate(row):
                        lo = x.min_degree()
                        if lo is not None and lo < 0:
                            raise ModelError(f"{name}_{i}[{r + 1},{c + 1}] has alpha-degree {lo} < 0")
        for j in range(len(self.e)):
            for r, row in enumerate(self.phi_block(j)):
                for c, x in enumerate(row):
                    if x.is_zero():
                        continue
                    mono = x.monomial()
                    if mono is None or mono[1].shift < 1:
                        raise ModelError(f"phi_{j}[{r + 1},{c + 1}] = {x.render()} is not a monomial of degree >= 1")
        for i in range(1, self.top):
            self.s_block(i)
        block_names = ("D", "E", "F")
        for i in range(2, self.top + 1):
            lo, hi = self.differential(i - 1), self.differential(i)
            prod = gr_matmul(self.desc, lo, hi, len(hi))
            for r, row in enumerate(prod):
                for c, x in enumerate(row):
                    if not x.is_zero():
                        rb = _block_of(r, [self.dd(i - 2), self.ee(i - 2), self.ee(i - 3)])
                        cb = _block_of(c, [self.dd(i), self.ee(i), self.ee(i - 1)])
                        raise ModelError(f"d_{i - 1} d_{i} != 0: block ({block_names[rb]}{i - 2}, "
                                         f"{block_names[cb]}{i}) entry ({r + 1},{c + 1}) = {x.render()}")
        return self


def _block_of(idx: int, sizes: list[int]) -> int:
    for b, s in enumerate(sizes):
        if idx < s:
            return b
        idx -= s
    return len(sizes) - 1


def series_field(desc: GroupDescriptor, prec: int) -> SeriesField:
    return SeriesField(desc.theta, desc.alpha_scale, prec)


def _embed(fld, grid: Grid, cols: int) -> SkewMatrix:
    return SkewMatrix(fld, [[rho_embed(x) for x in row] for row in grid], cols)


def assemble_differential(model: CircleMorseModel, prec: int = 16) -> BasedChainComplex:
    model.validate()
    fld = series_field(model.desc, prec)
    dims = model.cell_dims()
    diffs = {i: _embed(fld, model.differential(i), dims[i]) for i in range(1, model.top + 1)}
    c = BasedChainComplex(fld, dims, diffs, model.labels())
    report = validate_complex(c)
    if not report.acyclic:
        raise ChainComplexError(f"assembled complex is not acyclic: homology ranks {report.homology_ranks}")
    return c


# ---------------------------------------------------------------------------
# the Novikov complex
# ---------------------------------------------------------------------------


@dataclass
class NovikovComplexData:
    field: SeriesField
    dims: list[int]
    K: dict[int, SkewMatrix]

    def complex(self) -> BasedChainComplex:
        return BasedChainComplex(self.field, self.dims, self.K,
                                 [[f"D{i}.{a + 1}" for a in range(n)] for i, n in enumerate(self.dims)])

    def squares_vanish(self) -> bool:
        for i in range(2, len(self.dims)):
            p = self.K[i - 1] @ self.K[i]
            for row in p.rows:
                for x in row:
                    if not _zero_to_prec(x):
                        return False
        return True


def _zero_to_prec(x: TwistedLaurentSeries) -> bool:
    return x.is_zero()


def _truncate(m: SkewMatrix, prec: int) -> SkewMatrix:
    return m.map(lambda x: x.with_prec(prec))


def geometric_inverse(phi: SkewMatrix, prec: int) -> SkewMatrix:
    """(I - phi)^-1 = sum_j phi^j through absolute degree ``prec`` (entries of phi have valuation >= 1)."""
    fld = phi.field
    n = phi.nrows
    total = SkewMatrix.identity(fld, n)
    power = SkewMatrix.identity(fld, n)
    for _ in range(prec):
        power = _truncate(power @ phi, prec)
        if power.is_zero():
            break
        total = total + power
    return _truncate(total, prec)


def novikov_K(model: CircleMorseModel, precision: int = 16) -> NovikovComplexData:
    """K_i = N_i + W_i (I - phi_(i-1))^-1 M_i as series matrices."""
    fld = series_field(model.desc, precision)
    K = {}
    for i in range(1, model.top + 1):
        rows, cols, mid = model.dd(i - 1), model.dd(i), model.ee(i - 1)
        k = _embed(fld, model.n_block(i), cols)
        if rows and cols and mid:
            g = geometric_inverse(_embed(fld, model.phi_block(i - 1), mid), precision)
            k = k + _embed(fld, model.w_block(i), mid) @ g @ _embed(fld, model.m_block(i), cols)
        K[i] = k
    return NovikovComplexData(fld, [model.dd(i) for i in range(model.top + 1)], K)


def novikov_torsion(model: CircleMorseModel, precision: int = 16, data: NovikovComplexData | None = None) -> TorsionValue:
    amb = Ambiguity.full(model.desc)
    if not any(model.d):
        return one_value(model.desc.theta, amb, model.desc.alpha_scale)
    data = data or novikov_K(model, precision)
    c = data.complex()
    report = validate_complex(c)
    if not report.acyclic:
        raise ChainComplexError(f"Novikov complex is not acyclic: homology ranks {report.homology_ranks}")
    return torsion_milnor(c, ambiguity=amb)


# ---------------------------------------------------------------------------
# factorization and the main identity
# ---------------------------------------------------------------------------


def _adaptive(fn, start: int, limit: int):
    w = start
    while True:
        try:
            return fn(w)
        except PrecisionError:
            if 2 * w > limit:
                raise
            w *= 2


@dataclass
class FactorizationReport:
    verdict: Verdict
    reason: str
    lhs: TorsionValue
    rhs: TorsionValue
    split: dict
    working_precision: int


def factorization_check(model: CircleMorseModel, precision: int = 10) -> FactorizationReport:
    """tau(X') against prod_i [det(I - phi_(i-1)) det K_i]^((-1)^i), through degree ``precision``."""
    model.validate()
    amb = Ambiguity.full(model.desc)

    def run(w: int) -> FactorizationReport:
        lhs = torsion_milnor(assemble_differential(model, w), ambiguity=amb)
        data = novikov_K(model, w)
        dc = data.complex()
        split = turaev_split(dc) if any(model.d) else {}
        fld = data.field
        rhs = one_value(model.desc.theta, amb, model.desc.alpha_scale)
        for i in range(1, model.top + 1):
            factor = one_value(model.desc.theta, amb, model.desc.alpha_scale)
            e = model.ee(i - 1)
            if e:
                phi = _embed(fld, model.phi_block(i - 1), e)
                factor = factor * dieudonne_det(SkewMatrix.identity(fld, e) - phi, ambiguity=amb)
            cols = list(split.get(i, []))
            rows = [r for r in range(model.dd(i - 1)) if r not in set(split.get(i - 1, []))]
            if cols:
                try:
                    factor = factor * dieudonne_det(data.K[i].submatrix(rows, cols), ambiguity=amb)
                except SingularMatrixError as exc:
                    raise ModelError(f"K_{i} is singular on the chosen split: {exc}") from exc
            rhs = rhs * (factor if i % 2 == 0 else factor.inverse(fld.prec))
        cmp = compare_values(lhs, rhs, precision)
        return FactorizationReport(cmp.verdict, cmp.reason, lhs, rhs, split, w)

    return _adaptive(run, precision + 4, 16 * (precision + 4))


def canonical_series(v: TorsionValue) -> TwistedLaurentSeries:
    """The value divided by its leading term when that is +-x^w t^v, else by t^v."""
    s = v.value
    lead = s.lead
    mono = lead.monomial_data()
    if v.ambiguity.kind == "full" and mono is not None and abs(mono[0]) == 1:
        g = TwistedLaurentSeries.monomial(s.theta, lead, s.val, s.scale)
    else:
        g = TwistedLaurentSeries.monomial(s.theta, 1, s.val, s.scale)
    return g.inverse() * s


@dataclass
class TheoremReport:
    verdict: Verdict
    reason: str
    k: int
    lhs: TorsionValue
    rhs: TorsionValue
    zeta: NovikovElement
    novikov: TorsionValue
    enumeration: EnumerationResult
    working_precision: int

    def lhs_series(self) -> TwistedLaurentSeries:
        return canonical_series(self.lhs)

    def rhs_series(self) -> TwistedLaurentSeries:
        return canonical_series(self.rhs)


def verify_main_theorem(model: CircleMorseModel, k: int = 16) -> TheoremReport:
    """tau(X) against rho(zeta) tau_Nov, compared through degree k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    model.validate()
    amb = Ambiguity.full(model.desc)
    margin = 2 * (model.desc.theta.order() or 1)

    def run(w: int) -> TheoremReport:
        depth = k + margin
        enum = orbit_enumerate(model.desc, model.phis(), depth)
        zeta = zeta_product(enum.orbits, depth)
        lhs = torsion_milnor(assemble_differential(model, w), ambiguity=amb)
        nov = novikov_torsion(model, w)
        rhs = TorsionValue(rho_embed(zeta), 1, amb) * nov
        cmp = compare_values(lhs, rhs, k)
        return TheoremReport(cmp.verdict, cmp.reason, k, lhs, rhs, zeta, nov, enum, w)

    return _adaptive(run, k + margin + 2, 16 * (k + margin + 2))


# ---------------------------------------------------------------------------
# model constructors
# ---------------------------------------------------------------------------


def _mono(desc: GroupDescriptor, c, vector=None, shift: int = 0) -> GroupRingElement:
    v = tuple(vector) if vector is not None else (0,) * desc.rank
    return GroupRingElement.from_group(desc, GroupElement(v, shift), c)


def circle_model() -> CircleMorseModel:
    """S^1 with f the identity: a point as cut surface, phi_0 = (t), no critical points."""
    desc = GroupDescriptor.free_abelian(0)
    return CircleMorseModel(desc, [0, 0], [1], phi={0: [[_mono(desc, 1, shift=1)]]}, name="circle")


def cat_map_model(a) -> CircleMorseModel:
    """Torus bundle with monodromy A, on the homology of the fibre: e = (1, 2, 1), dsigma = 0."""
    desc = GroupDescriptor.free_abelian(0)
    t = lambda c: _mono(desc, c, shift=1)  # noqa: E731
    phi = {0: [[t(1)]], 1: [[t(a[0][0]), t(a[0][1])], [t(a[1][0]), t(a[1][1])]], 2: [[t(1)]]}
    return CircleMorseModel(desc, [0, 0, 0, 0], [1, 2, 1], phi=phi, name=f"catmap tr={a[0][0] + a[1][1]}")


def _append_col(g: Grid, col: list) -> Grid:
    return [list(r) + [c] for r, c in zip(g, col)]


def stabilize(model: CircleMorseModel, j: int, unit: GroupRingElement, m: list | None = None,
              w: list | None = None) -> CircleMorseModel:
    """Add a cancelling pair p (index j+1), q (index j) with d p = unit q - m.

    ``m`` is a column over E_j with dsigma_j m = 0; ``w`` a row over
    E_j = F_(j+1) giving the q-coefficients of the F-cells, with w dsigma_(j+1) = 0.
    The new K entry is unit + w (I - phi_j)^-1 m, so the pair cancels with a
    unit pivot when w = 0 or m = 0.
    """
    if not 0 <= j < model.top:
        raise ModelError(f"pair degree j must satisfy 0 <= j < {model.top}")
    desc = model.desc
    zero = GroupRingElement.zero(desc)
    e_j = model.ee(j)
    m = m if m is not None else [zero] * e_j
    w = w if w is not None else [zero] * e_j
    d = list(model.d)
    N = {i: [list(r) for r in model.n_block(i)] for i in range(1, model.top + 1)}
    M = {i: [list(r) for r in model.m_block(i)] for i in range(1, model.top + 1)}
    W = {i: [list(r) for r in model.w_block(i)] for i in range(1, model.top + 1)}
    # p in degree j+1, q in degree j
    n1 = N[j + 1]
    n1 = _append_col(n1, [zero] * len(n1))
    n1.append([zero] * (d[j + 1]) + [unit])
    N[j + 1] = n1
    if j >= 1:
        N[j] = _append_col(N[j], [zero] * model.dd(j - 1))
        M[j] = _append_col(M[j], [zero] * model.ee(j - 1))
    if j + 2 <= model.top:
        N[j + 2].append([zero] * model.dd(j + 2))
        W[j + 2].append([zero] * model.ee(j + 1))
    M[j + 1] = _append_col(M[j + 1], list(m))
    W[j + 1].append(list(w))
    d[j] += 1
    d[j + 1] += 1
    out = CircleMorseModel(desc, d, list(model.e), N, M, W, dict(model.phi), dict(model.dsigma),
                           name=(model.name + " stabilized").strip())
    return out.validate()


# ---------------------------------------------------------------------------
# random models
# ---------------------------------------------------------------------------


def _random_element(desc: GroupDescriptor, rng: random.Random, min_shift: int, max_shift: int,
                    terms: int = 2) -> GroupRingElement:
    out = GroupRingElement.zero(desc)
    for _ in range(rng.randint(1, terms)):
        v = tuple(rng.randint(-1, 1) for _ in range(desc.rank))
        out = out + _mono(desc, rng.choice([1, -1, 2]), v, rng.randint(min_shift, max_shift))
    return out


def _random_grid(desc, rng, rows, cols, density=0.6, **kw) -> Grid:
    zero = GroupRingElement.zero(desc)
    return [[_random_element(desc, rng, **kw) if rng.random() < density else zero for _ in range(cols)]
            for _ in range(rows)]


def _random_phi(desc, rng, n) -> Grid:
    zero = GroupRingElement.zero(desc)
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if rng.random() < 0.6:
                v = tuple(rng.randint(-1, 1) for _ in range(desc.rank))
                row.append(_mono(desc, rng.choice([1, -1, 1, 2, -2]), v, rng.randint(1, 2)))
            else:
                row.append(zero)
        rows.append(row)
    return rows


def random_model(desc: GroupDescriptor, rng: random.Random, max_top: int = 3, max_e: int = 2,
                 max_pair: int = 2) -> CircleMorseModel:
    """A two-block model: critical points in degrees j, j+1 joined through the cut surface.

    The surface differential is zero, so d^2 = 0 reduces to M_j = 0 and
    W_(j+2) = 0; N_(j+1), M_(j+1), W_(j+1) and every phi are random.
    Resampled until K_(j+1) is nonsingular.
    """
    while True:
        top = rng.randint(1, max_top)
        e = [rng.randint(0, max_e) for _ in range(top)]
        j = rng.randrange(top)
        r = rng.randint(1, max_pair)
        d = [0] * (top + 1)
        d[j] = d[j + 1] = r
        phi = {i: _random_phi(desc, rng, e[i]) for i in range(top)}
        N = {j + 1: _random_grid(desc, rng, r, r, 0.8, min_shift=0, max_shift=1)}
        M = {j + 1: _random_grid(desc, rng, e[j], r, 0.5, min_shift=0, max_shift=1)}
        W = {j + 1: _random_grid(desc, rng, r, e[j], 0.5, min_shift=0, max_shift=1)}
        model = CircleMorseModel(desc, d, e, N, M, W, phi, name="random").validate()
        try:
            novikov_torsion(model, 8)
        except (ChainComplexError, SingularMatrixError, PrecisionError):
            continue
        return model
