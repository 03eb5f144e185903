import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nctorsion.chain import validate_complex
from nctorsion.groups import GroupDescriptor, GroupRingElement, parse_group_ring
from nctorsion.laurent import parse_series, rho_embed
from nctorsion.algebra import MonomialAutomorphism
from nctorsion.morse import (
    CircleMorseModel,
    ModelError,
    assemble_differential,
    canonical_series,
    cat_map_model,
    circle_model,
    factorization_check,
    novikov_K,
    novikov_torsion,
    random_model,
    stabilize,
    verify_main_theorem,
)
from nctorsion.values import Verdict, compare_values

Z = GroupDescriptor.free_abelian(0)
FA1 = GroupDescriptor.free_abelian(1)
ME = GroupDescriptor.monomial_extension([[-1]])
CAT = [[2, 1], [1, 1]]
CATMAP_SERIES = ["1"] + [str(-n) for n in range(1, 13)]


def g(desc, text):
    return parse_group_ring(desc, text)


def coeffs(value, k):
    s = canonical_series(value)
    return [s.coeff(n).render() for n in range(k + 1)]


def torus_model():
    # Sigma is a circle with monodromy x; f is the projection of the torus to its second factor
    return CircleMorseModel(FA1, [0, 0, 0], [1, 1], phi={0: [[g(FA1, "s")]], 1: [[g(FA1, "s")]]},
                            dsigma={1: [[g(FA1, "x - 1")]]}, name="torus")


def test_fibration_blocks():
    m = cat_map_model(CAT)
    c = assemble_differential(m, 12)
    assert c.dims == [1, 3, 3, 1]
    assert validate_complex(c).acyclic
    assert all(k.nrows == 0 and k.ncols == 0 for k in novikov_K(m, 8).K.values())
    assert novikov_torsion(m, 8).value == parse_series("1", MonomialAutomorphism.identity(0))


def test_surface_differential_model():
    m = torus_model().validate()
    assert validate_complex(assemble_differential(m, 10)).acyclic
    assert factorization_check(m, 8).verdict == Verdict.EQUAL
    rep = verify_main_theorem(m, 8)
    assert rep.verdict == Verdict.EQUAL
    assert coeffs(rep.lhs, 8) == ["1"] + ["0"] * 8


def test_bad_square_reports_block():
    m = CircleMorseModel(FA1, [0, 0, 0], [1, 1], phi={0: [[g(FA1, "s")]], 1: [[g(FA1, "2*s")]]},
                         dsigma={1: [[g(FA1, "x - 1")]]})
    with pytest.raises(ModelError, match=r"d_1 d_2 != 0"):
        m.validate()


def test_phi_must_be_monomial_of_positive_degree():
    with pytest.raises(ModelError, match=r"phi_0\[1,1\]"):
        CircleMorseModel(Z, [0, 0], [1], phi={0: [[g(Z, "1")]]}).validate()
    with pytest.raises(ModelError, match=r"phi_0\[1,1\]"):
        CircleMorseModel(Z, [0, 0], [1], phi={0: [[g(Z, "s + s^2")]]}).validate()


def test_negative_degree_entry_rejected():
    with pytest.raises(ModelError, match="alpha-degree -1"):
        CircleMorseModel(Z, [1, 1], [0], N={1: [[g(Z, "s^-1")]]}).validate()


def test_single_pair_model():
    w = g(FA1, "x")
    m = CircleMorseModel(FA1, [0, 1, 1], [0, 0], N={2: [[w]]}).validate()
    k = novikov_K(m, 8).K
    assert k[2].rows[0][0] == rho_embed(w)
    tau = novikov_torsion(m, 8)
    # the two-term rule puts det K_2 in the numerator at this degree
    assert tau.value == rho_embed(w)


def test_K_is_N_when_phi_vanishes():
    m = CircleMorseModel(FA1, [1, 1], [1], N={1: [[g(FA1, "2 + x")]]}, M={1: [[g(FA1, "1")]]},
                         W={1: [[g(FA1, "0")]]}).validate()
    assert novikov_K(m, 6).K[1].rows[0][0] == rho_embed(g(FA1, "2 + x"))


def test_K_geometric_series():
    m = CircleMorseModel(FA1, [1, 1], [1], N={1: [[g(FA1, "0")]]}, M={1: [[g(FA1, "1")]]},
                         W={1: [[g(FA1, "1")]]}, phi={0: [[g(FA1, "3*x*s")]]})
    k = novikov_K(m, 8).K[1].rows[0][0]
    assert (rho_embed(g(FA1, "1 - 3*x*s")) * k).truncated_equal(parse_series("1", FA1.theta), 7)


def test_circle_model():
    rep = verify_main_theorem(circle_model(), 12)
    assert rep.verdict == Verdict.EQUAL
    assert coeffs(rep.lhs, 12) == ["1"] * 13
    assert coeffs(rep.rhs, 12) == ["1"] * 13


def test_catmap_identity():
    rep = verify_main_theorem(cat_map_model(CAT), 12)
    assert rep.verdict == Verdict.EQUAL
    assert coeffs(rep.lhs, 12) == CATMAP_SERIES
    assert coeffs(rep.rhs, 12) == CATMAP_SERIES


def test_stabilization_invariance():
    base = verify_main_theorem(cat_map_model(CAT), 10)
    mu = GroupRingElement.from_group(Z, Z.mu())
    stab = stabilize(cat_map_model(CAT), 1, -mu, m=[mu.scale(2), GroupRingElement.one(Z)])
    rep = verify_main_theorem(stab, 10)
    assert rep.verdict == Verdict.EQUAL
    assert compare_values(rep.lhs, base.lhs, 10).verdict == Verdict.EQUAL
    assert compare_values(rep.rhs, base.rhs, 10).verdict == Verdict.EQUAL
    # the pair is visible: the Novikov torsion is no longer 1
    assert rep.novikov.value != base.novikov.value


@pytest.mark.parametrize("desc", [FA1, ME], ids=["free", "flip"])
@given(seed=st.integers(0, 10_000))
def test_factorization_on_random_models(desc, seed):
    m = random_model(desc, random.Random(seed))
    assert factorization_check(m, 6).verdict == Verdict.EQUAL


@pytest.mark.parametrize("desc", [FA1, ME], ids=["free", "flip"])
@given(seed=st.integers(0, 10_000))
def test_K_squares_vanish(desc, seed):
    m = random_model(desc, random.Random(seed), max_top=3, max_pair=2)
    assert novikov_K(m, 6).squares_vanish()


@given(seed=st.integers(0, 10_000))
def test_main_identity_on_random_models(seed):
    m = random_model(ME, random.Random(seed), max_top=2, max_e=2, max_pair=1)
    assert verify_main_theorem(m, 4).verdict == Verdict.EQUAL


def test_stabilization_with_non_unit_pivot_keeps_the_identity():
    base = verify_main_theorem(cat_map_model(CAT), 10)
    mu = GroupRingElement.from_group(Z, Z.mu())
    one = GroupRingElement.one(Z)
    stab = stabilize(cat_map_model(CAT), 1, -mu, m=[mu.scale(2), one], w=[one, mu])
    rep = verify_main_theorem(stab, 10)
    assert rep.verdict == Verdict.EQUAL
    # the pivot -mu + w (I - phi)^-1 m is not a unit, so both sides move
    assert compare_values(rep.lhs, base.lhs, 10).verdict == Verdict.DISTINCT


def test_stabilize_rejects_bad_degree():
    with pytest.raises(ModelError):
        stabilize(cat_map_model(CAT), 5, GroupRingElement.one(Z))
