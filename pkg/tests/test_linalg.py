import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nctorsion.algebra import MonomialAutomorphism, RationalFunction
from nctorsion.generators import random_invertible, random_scalar
from nctorsion.groups import GroupDescriptor
from nctorsion.laurent import leading_invariant, parse_series
from nctorsion.linalg import (
    HypothesisError,
    RationalField,
    SeriesField,
    SingularMatrixError,
    SkewMatrix,
    dieudonne_det,
    diagonal_product,
    minor_equivalence_check,
    schur_eliminate,
)
from nctorsion.values import Ambiguity, TorsionValue, Verdict, compare_values, torsion_compare

FLIP = MonomialAutomorphism([[-1]])
F = SeriesField(FLIP, 1, 12)
Q1 = RationalField(1)
Q0 = RationalField(0)


def mat(fld, rows):
    return SkewMatrix(fld, [[fld.parse(str(e)) for e in r] for r in rows], len(rows[0]))


def cofactor_det(rows):
    if len(rows) == 1:
        return rows[0][0]
    total = None
    for j, a in enumerate(rows[0]):
        if a.is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * cofactor_det(minor)
        term = term if j % 2 == 0 else -term
        total = term if total is None else total + term
    return total if total is not None else rows[0][0] * 0


def test_identity_det():
    assert dieudonne_det(SkewMatrix.identity(F, 3)).value == parse_series("1", FLIP)


def test_twisted_two_by_two():
    m = mat(F, [["x", "t"], ["t", "x"]])
    d1, d2 = dieudonne_det(m), dieudonne_det(m, "last")
    assert d1.value.truncated_equal(parse_series("x^2 - x^2*t^2", FLIP), 11)
    assert torsion_compare(d1, d2, 8) == Verdict.EQUAL
    v, c = d1.invariants
    assert v == 0 and c == leading_invariant(parse_series("1", FLIP))[1]


def test_commutative_det():
    assert dieudonne_det(mat(Q0, [[2, 1], [1, 1]])).value.coeff(0) == RationalFunction.constant(0, 1)


def test_singular_matrix():
    with pytest.raises(SingularMatrixError, match="no unit pivot at stage 2"):
        dieudonne_det(mat(Q1, [["x", "1"], ["x^2", "x"]]))


def test_row_swap_sign():
    d = dieudonne_det(mat(Q1, [["0", "1"], ["1", "0"]]))
    assert d.sign == -1 and d.value.coeff(0) == RationalFunction.constant(1, -1)


@given(st.integers(0, 10_000), st.integers(1, 4))
def test_cofactor_agreement(seed, n):
    rng = random.Random(seed)
    rows = [[random_scalar(Q1, rng) for _ in range(n)] for _ in range(n)]
    ref = cofactor_det(rows)
    if ref.is_zero():
        with pytest.raises(SingularMatrixError):
            dieudonne_det(SkewMatrix(Q1, rows, n))
        return
    assert dieudonne_det(SkewMatrix(Q1, rows, n)).value.coeff(0) == ref


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_commutative_multiplicativity(seed, n):
    rng = random.Random(seed)
    a, _ = random_invertible(Q1, n, rng)
    b, _ = random_invertible(Q1, n, rng)
    assert dieudonne_det(a @ b).value == dieudonne_det(a).value * dieudonne_det(b).value


@given(st.integers(0, 10_000), st.integers(1, 3), st.sampled_from(["first", "last", "random"]))
def test_pivot_order_independence(seed, n, strategy):
    rng = random.Random(seed)
    m, _ = random_invertible(F, n, rng)
    a = dieudonne_det(m)
    b = dieudonne_det(m, strategy, seed=seed)
    assert torsion_compare(a, b, 6) == Verdict.EQUAL


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_invariant_multiplicativity(seed, n):
    rng = random.Random(seed)
    a, _ = random_invertible(F, n, rng)
    b, _ = random_invertible(F, n, rng)
    assert dieudonne_det(a @ b).invariants == (dieudonne_det(a) * dieudonne_det(b)).invariants


def _monomial_a(rng, n, density=0.4):
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if rng.random() < density:
                row.append(F.parse(f"{rng.choice([1, -1, 2])}*x^{rng.randint(-2, 2)}*t^{rng.randint(1, 2)}"))
            else:
                row.append(F.zero())
        rows.append(row)
    return SkewMatrix(F, rows, n)


def test_schur_examples():
    assert schur_eliminate(SkewMatrix.identity(F, 3)).rows == SkewMatrix.identity(F, 3).rows
    upper = mat(F, [["0", "x*t", "t"], ["0", "0", "2*t"], ["0", "0", "0"]])
    b = SkewMatrix.identity(F, 3) - upper
    out = schur_eliminate(b)
    assert all(out.rows[i][i] == F.one() for i in range(3))


@given(st.integers(0, 10_000))
def test_schur_preserves_determinant(seed):
    rng = random.Random(seed)
    b = SkewMatrix.identity(F, 3) - _monomial_a(rng, 3, 0.7)
    ref = dieudonne_det(b)
    for stages in range(4):
        out = schur_eliminate(b, stages)
        assert torsion_compare(dieudonne_det(out), ref, 8) == Verdict.EQUAL
    final = schur_eliminate(b)
    assert all(final.rows[i][j].is_zero() for i in range(3) for j in range(3) if i != j)
    assert torsion_compare(TorsionValue(diagonal_product(final)), ref, 8) == Verdict.EQUAL


def test_minor_equivalence_examples():
    b = SkewMatrix.identity(F, 2) - mat(F, [["0", "x*t"], ["x^2*t", "0"]])
    assert minor_equivalence_check(b, 1)
    with pytest.raises(HypothesisError) as err:
        minor_equivalence_check(b, 2)
    assert err.value.cycle == [1, 2, 1]
    col_zero = SkewMatrix.identity(F, 3) - mat(F, [["0", "t", "x*t"], ["0", "0", "t"], ["0", "t^2", "0"]])
    assert minor_equivalence_check(col_zero, 6)


@given(st.integers(0, 10_000), st.integers(2, 6), st.integers(1, 6))
def test_minor_equivalence_under_hypothesis(seed, n, k):
    rng = random.Random(seed)
    a = _monomial_a(rng, n)
    b = SkewMatrix.identity(F, n) - a
    try:
        assert minor_equivalence_check(b, k)
    except HypothesisError as exc:
        assert exc.cycle[0] == 1 and exc.cycle[-1] == 1 and len(exc.cycle) - 1 <= k


# --- comparator -------------------------------------------------------------

ID0 = MonomialAutomorphism.identity(0)
FULL0 = Ambiguity.full(GroupDescriptor.free_abelian(0))


def test_compare_up_to_ambiguity():
    a = TorsionValue(parse_series("(1-3*t+t^2)/(1-t)^2", ID0), 1, FULL0)
    b = TorsionValue(parse_series("-t*(1-3*t+t^2)/(1-t)^2", ID0), 1, FULL0)
    assert compare_values(a, b, 12).verdict == Verdict.EQUAL


def test_compare_compatible_and_distinct():
    a, b = TorsionValue(parse_series("1-t", ID0)), TorsionValue(parse_series("1+t", ID0))
    assert compare_values(a, b, 5).verdict == Verdict.COMPATIBLE
    c = TorsionValue(parse_series("t*(1-t)", ID0))
    assert compare_values(a, c, 5).verdict == Verdict.DISTINCT
    assert compare_values(a, a, 5).verdict == Verdict.EQUAL


def test_compare_needs_precision():
    from nctorsion.novikov import PrecisionError
    a = TorsionValue(parse_series("1 - t + O(t^4)", ID0))
    with pytest.raises(PrecisionError):
        compare_values(a, a, 6)
