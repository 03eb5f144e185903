"""Random instances for property tests, the acceptance suite and the corpus."""

from __future__ import annotations

import random

from .algebra import MultiPoly, RationalFunction
from .chain import BasedChainComplex, HomologyBasis
from .laurent import TwistedLaurentSeries
from .linalg import RationalField, SkewMatrix, echelon, right_kernel, rref


def random_laurent_poly(rng: random.Random, nvars: int, terms: int = 2, exp_range: int = 2,
                        coeff_range: int = 3) -> RationalFunction:
    out = {}
    for _ in range(rng.randint(1, terms)):
        e = tuple(rng.randint(-exp_range, exp_range) for _ in range(nvars))
        c = rng.randint(-coeff_range, coeff_range)
        if c:
            out[e] = out.get(e, 0) + c
    return RationalFunction(MultiPoly(nvars, out))


def random_scalar(fld, rng: random.Random, density: float = 0.7):
    """A random entry; zero with probability 1 - density."""
    if rng.random() > density:
        return fld.zero()
    if isinstance(fld, RationalField):
        return random_laurent_poly(rng, fld.nvars)
    coeffs = []
    for _ in range(rng.randint(1, 3)):
        coeffs.append(random_laurent_poly(rng, fld.nvars, terms=1) if rng.random() < 0.8
                      else RationalFunction.constant(fld.nvars, 0))
    return TwistedLaurentSeries(fld.theta, rng.randint(-1, 1), coeffs, None, fld.scale)


def random_unit_scalar(fld, rng: random.Random, exact_inverse: bool = False):
    """A nonzero entry; with ``exact_inverse`` a series is a single monomial."""
    while True:
        e = random_scalar(fld, rng, 1.0)
        if fld.is_zero(e):
            continue
        if exact_inverse and isinstance(e, TwistedLaurentSeries) and not e.is_monomial():
            continue
        return e


def _unitriangular_inverse(m: SkewMatrix, lower: bool) -> SkewMatrix:
    """Exact inverse by substitution; no division is needed."""
    fld = m.field
    n = m.nrows
    z, o = fld.zero(), fld.one()
    x = [[o if i == j else z for j in range(n)] for i in range(n)]
    order = range(n) if lower else range(n - 1, -1, -1)
    for i in order:
        ks = range(i) if lower else range(i + 1, n)
        for j in range(n):
            acc = o if i == j else z
            for k in ks:
                a = m.rows[i][k]
                if not fld.is_zero(a) and not fld.is_zero(x[k][j]):
                    acc = acc - a * x[k][j]
            x[i][j] = acc
    return SkewMatrix(fld, x, n)


def random_invertible(fld, n: int, rng: random.Random) -> tuple[SkewMatrix, SkewMatrix]:
    """(P, P^-1) for P = L D U with L, U unitriangular and D diagonal; P^-1 is exact."""
    z, o = fld.zero(), fld.one()
    lower = SkewMatrix(fld, [[o if i == j else (random_scalar(fld, rng, 0.5) if i > j else z) for j in range(n)]
                             for i in range(n)], n)
    upper = SkewMatrix(fld, [[o if i == j else (random_scalar(fld, rng, 0.5) if i < j else z) for j in range(n)]
                             for i in range(n)], n)
    units = [random_unit_scalar(fld, rng, exact_inverse=True) for _ in range(n)]
    diag = SkewMatrix(fld, [[units[i] if i == j else z for j in range(n)] for i in range(n)], n)
    diag_inv = SkewMatrix(fld, [[fld.inv(units[i]) if i == j else z for j in range(n)] for i in range(n)], n)
    p = lower @ diag @ upper
    p_inv = _unitriangular_inverse(upper, False) @ diag_inv @ _unitriangular_inverse(lower, True)
    return p, p_inv


def matrix_inverse(p: SkewMatrix) -> SkewMatrix:
    fld = p.field
    n = p.nrows
    z, o = fld.zero(), fld.one()
    aug = SkewMatrix(fld, [list(r) + [o if i == j else z for j in range(n)] for i, r in enumerate(p.rows)], 2 * n)
    rows, pcols = rref(aug)
    if pcols[:n] != list(range(n)):
        raise ArithmeticError("matrix is singular")
    return SkewMatrix(fld, [r[n:] for r in rows[:n]], n)


def random_acyclic_complex(fld, rng: random.Random, max_dim: int = 5, max_degree: int = 4) -> BasedChainComplex:
    """Direct sum of elementary pairs K -> K, conjugated by random base changes."""
    top = rng.randint(1, max_degree - 1) if max_degree > 1 else 1
    # r[i] = rank of d_i; dims[i] = r[i] + r[i+1]
    while True:
        r = [0] + [rng.randint(0, 3) for _ in range(top)] + [0]
        dims = [r[i] + r[i + 1] for i in range(top + 1)]
        if sum(dims) and all(d <= max_dim for d in dims):
            break
    return conjugated_complex(fld, rng, dims, r)


def conjugated_complex(fld, rng: random.Random, dims: list[int], r: list[int],
                       homology: list[int] | None = None) -> BasedChainComplex:
    """Standard complex with d_i of rank r[i] (plus ``homology`` extra free generators), base-changed."""
    top = len(dims) - 1
    z, o = fld.zero(), fld.one()
    homology = homology or [0] * (top + 1)
    # standard basis of C_i: [targets of d_i (r[i]) | free (homology[i]) | sources of d_(i+1)... ]
    # layout: first r[i+1] vectors are images, next homology[i], last r[i] are sources of d_i
    std = {}
    for i in range(1, top + 1):
        rows, cols = dims[i - 1], dims[i]
        m = [[z] * cols for _ in range(rows)]
        for k in range(r[i]):
            m[k][cols - r[i] + k] = random_unit_scalar(fld, rng) if rng.random() < 0.5 else o
        std[i] = SkewMatrix(fld, m, cols)
    mats = {i: random_invertible(fld, dims[i], rng) if dims[i] else None for i in range(top + 1)}
    diffs = {}
    for i in range(1, top + 1):
        d = std[i]
        if dims[i - 1] and dims[i]:
            p_lo = mats[i - 1][0]
            p_hi_inv = mats[i][1]
            d = p_lo @ d @ p_hi_inv
        diffs[i] = d
    c = BasedChainComplex(fld, dims, diffs)
    c.base_changes = mats  # type: ignore[attr-defined]
    return c


def random_complex_with_homology(fld, rng: random.Random, top: int = 2, max_rank: int = 2,
                                 max_hom: int = 1) -> tuple[BasedChainComplex, HomologyBasis]:
    r = [0] + [rng.randint(0, max_rank) for _ in range(top)] + [0]
    hom = [rng.randint(0, max_hom) for _ in range(top + 1)]
    dims = [r[i] + hom[i] + r[i + 1] for i in range(top + 1)]
    dims = [max(d, 0) for d in dims]
    c = conjugated_complex(fld, rng, dims, r, hom)
    h = HomologyBasis()
    for i in range(top + 1):
        # standard homology vectors sit at positions r[i+1] .. r[i+1]+hom[i]; push through P_i
        p = c.base_changes[i][0] if dims[i] else None  # type: ignore[attr-defined]
        vecs = []
        for k in range(hom[i]):
            pos = r[i + 1] + k
            vecs.append(p.column(pos))
        h.vectors[i] = vecs
    return c, h


def random_short_exact(fld, rng: random.Random, top: int = 2):
    """(C', C, C'', h', h, h'') with C an extension of C'' by C' and a generically nonzero connecting map."""
    sub, h_sub = random_complex_with_homology(fld, rng, top)
    quot, h_quot = random_complex_with_homology(fld, rng, top)
    # d = [[d', X], [0, d'']] with X_i = d'_i Y_i - Y_(i-1) d''_i + z_(i-1) f_i
    ys = {i: SkewMatrix(fld, [[random_scalar(fld, rng, 0.5) for _ in range(quot.dim(i))]
                              for _ in range(sub.dim(i))], quot.dim(i)) for i in range(top + 1)}
    diffs = {}
    for i in range(1, top + 1):
        x = sub.d(i) @ ys[i] - ys[i - 1] @ quot.d(i)
        # z f: z a cycle of C'_(i-1), f a functional on C''_i vanishing on d''(C''_(i+1)) and on cycles' lifts
        cycles = h_sub.get(i - 1)
        if cycles and quot.dim(i):
            z = cycles[rng.randrange(len(cycles))]
            f = _functional_killing_boundaries(quot, i, rng)
            if f is not None:
                zf = SkewMatrix(fld, [[z[a] * f[b] for b in range(quot.dim(i))] for a in range(sub.dim(i - 1))],
                                quot.dim(i))
                x = x + zf
        diffs[i] = _blocks(fld, sub.d(i), x, quot.d(i))
    dims = [sub.dim(i) + quot.dim(i) for i in range(top + 1)]
    total = BasedChainComplex(fld, dims, diffs)
    return sub, total, quot, h_sub, _total_homology(total), h_quot


def _functional_killing_boundaries(quot: BasedChainComplex, i: int, rng: random.Random):
    """A random row vector f with f d''_(i+1) = 0.

    This keeps the extension a complex: the z f terms contribute
    z f d''_(i+1) = 0 to d^2, and d' z = 0 because z is a cycle.
    """
    fld = quot.field
    d_up = quot.d(i + 1)
    n = quot.dim(i)
    # left kernel of d_up: solve d_up^T f^T = 0 (commutative use only)
    if d_up.ncols == 0:
        basis = [[fld.one() if a == b else fld.zero() for a in range(n)] for b in range(n)]
    else:
        tr = SkewMatrix(fld, [list(col) for col in zip(*d_up.rows)], n)
        basis = right_kernel(tr)
    if not basis:
        return None
    f = [fld.zero()] * n
    for v in basis:
        c = random_unit_scalar(fld, rng)
        f = [a + c * b for a, b in zip(f, v)]
    return f


def _blocks(fld, a: SkewMatrix, x: SkewMatrix, b: SkewMatrix) -> SkewMatrix:
    z = fld.zero()
    rows = [list(ra) + list(rx) for ra, rx in zip(a.rows, x.rows)]
    rows += [[z] * a.ncols + list(rb) for rb in b.rows]
    return SkewMatrix(fld, rows, a.ncols + b.ncols)


def _total_homology(c: BasedChainComplex) -> HomologyBasis:
    """Cycles completing the boundaries to a basis of the cycle space, per degree."""
    fld = c.field

    def span_rank(vectors):
        if not vectors:
            return 0
        return echelon(SkewMatrix(fld, [list(r) for r in zip(*vectors)], len(vectors))).rank

    h = HomologyBasis()
    for i in range(c.top + 1):
        cycles = right_kernel(c.d(i)) if c.dim(i) else []
        bd = c.d(i + 1)
        current = [bd.column(j) for j in range(bd.ncols)]
        r = span_rank(current)
        chosen = []
        for z in cycles:
            if span_rank(current + [z]) > r:
                current.append(z)
                chosen.append(z)
                r += 1
        h.vectors[i] = chosen
    return h
