import pytest
from hypothesis import given
from hypothesis import strategies as st

from nctorsion.groups import GroupDescriptor, GroupElement, GroupRingElement, parse_group_ring
from nctorsion.laurent import leading_invariant, rho_embed
from nctorsion.novikov import NovikovElement, compare_truncated
from nctorsion.values import Verdict, compare_values
from nctorsion.zeta import (
    ClosedOrbit,
    OrbitError,
    OrbitSet,
    cat_map_phis,
    fixed_point_counts,
    lefschetz_sign,
    orbit_enumerate,
    primitive_counts,
    torus_suspension_orbits,
    zeta_exp,
    zeta_product,
)

Z = GroupDescriptor.free_abelian(0)
FA1 = GroupDescriptor.free_abelian(1)
ME = GroupDescriptor.monomial_extension([[-1]])
CAT = [[2, 1], [1, 1]]


def nov(desc, text):
    return NovikovElement.from_group_ring(parse_group_ring(desc, text))


def test_lefschetz_signs():
    assert all(lefschetz_sign(1, 0, j) == -1 for j in range(1, 5))
    assert lefschetz_sign(0, 1, 1) == 1
    assert lefschetz_sign(0, 1, 2) == -1
    with pytest.raises(ValueError):
        lefschetz_sign(0, 0, 0)


def test_orbit_degree_must_be_positive():
    with pytest.raises(OrbitError):
        ClosedOrbit(GroupElement((), 0))


def test_single_orbit_factors():
    g = GroupElement((1,), 1)
    one = OrbitSet(FA1, [ClosedOrbit(g, 1, 0)])
    assert compare_truncated(zeta_product(one, 6), nov(FA1, "1 - x*s"), 6)
    geo = OrbitSet(FA1, [ClosedOrbit(g, 0, 0)])
    expect = nov(FA1, " + ".join(f"x^{j}*s^{j}" for j in range(0, 7)))
    assert compare_truncated(zeta_product(geo, 6), expect, 6)
    assert compare_truncated(zeta_exp(geo, 6), expect, 6)
    assert compare_truncated(zeta_exp(one, 6), nov(FA1, "1 - x*s"), 6)


def test_empty_orbit_set():
    assert compare_truncated(zeta_product(OrbitSet(Z, []), 5), NovikovElement.one(Z), 5)


def test_catmap_orbit_counts():
    assert [fixed_point_counts(CAT, 4)[m] for m in range(1, 5)] == [1, 5, 16, 45]
    counts = torus_suspension_orbits(CAT, 4).counts_by_degree()
    assert counts == {1: 1, 2: 2, 3: 5, 4: 10}


def test_catmap_zeta_through_four():
    orbits = torus_suspension_orbits(CAT, 4)
    expect = nov(Z, "1 - s - 2*s^2 - 3*s^3 - 4*s^4")
    assert compare_truncated(zeta_product(orbits, 4), expect, 4)
    assert compare_truncated(zeta_exp(orbits, 4), expect, 4)


def test_incomplete_orbit_set_rejected():
    with pytest.raises(OrbitError, match="complete only through degree 4"):
        zeta_product(torus_suspension_orbits(CAT, 4), 6)


def test_non_hyperbolic_rejected():
    with pytest.raises(OrbitError, match="not hyperbolic"):
        torus_suspension_orbits([[1, 1], [0, 1]], 4)


@given(st.integers(-9, 9).filter(lambda t: abs(t) > 2), st.integers(1, 8))
def test_primitive_counts_reassemble(tr, k):
    a = [[tr, -1], [1, 0]]
    n = fixed_point_counts(a, k)
    r = primitive_counts(n, k)
    for m in range(1, k + 1):
        assert sum(p * r[p] for p in r if m % p == 0) == n[m]


orbit_lists = st.lists(
    st.builds(lambda v, n, ip, im, mult: ClosedOrbit(GroupElement((v,), n), ip, im, 1, mult),
              st.integers(-2, 2), st.integers(1, 3), st.integers(0, 2), st.integers(0, 2), st.integers(1, 2)),
    max_size=4)


@pytest.mark.parametrize("desc", [FA1, ME], ids=["free", "flip"])
@given(orbits=orbit_lists)
def test_exp_form_equals_product(desc, orbits):
    o = OrbitSet(desc, orbits)
    assert compare_truncated(zeta_product(o, 6), zeta_exp(o, 6), 6)


@given(orbits=orbit_lists, data=st.data())
def test_order_independence(orbits, data):
    perm = data.draw(st.permutations(orbits))
    a = zeta_product(OrbitSet(FA1, orbits), 6)
    b = zeta_product(OrbitSet(FA1, perm), 6)
    assert compare_truncated(a, b, 6)
    # over a twisted group only the necessary invariants survive reordering
    a = rho_embed(zeta_product(OrbitSet(ME, orbits), 6))
    b = rho_embed(zeta_product(OrbitSet(ME, perm), 6))
    assert leading_invariant(a) == leading_invariant(b)


@pytest.mark.parametrize("tr", range(3, 9))
def test_enumeration_matches_suspension_orbits(tr):
    a = [[tr - 1, 1], [tr - 2, 1]]
    enum = orbit_enumerate(Z, cat_map_phis(a), 10)
    via_orbits = rho_embed(zeta_product(enum.orbits, 10))
    via_formula = rho_embed(zeta_product(torus_suspension_orbits(a, 10), 10))
    assert via_orbits.truncated_equal(via_formula, 10)
    assert enum.det_product.value.truncated_equal(via_formula, 10)


def test_single_block_determinant():
    phi = [[[GroupRingElement.from_group(FA1, GroupElement((1,), 1), 3)]]]
    enum = orbit_enumerate(FA1, phi, 6)
    # phi_0 carries exponent -1: det(I - phi_0)^-1 = (1 - 3 x t)^-1
    expect = rho_embed(parse_group_ring(FA1, "1 - 3*x*s")).inverse(8)
    assert enum.det_product.value.truncated_equal(expect, 6)
    assert compare_truncated(zeta_product(enum.orbits, 6), zeta_exp(enum.orbits, 6), 6)


def test_cell_outside_short_cycles_is_invisible():
    s = lambda text: parse_group_ring(FA1, text)  # noqa: E731
    small = [[[s("x*s")]]]
    # cell 2 only lies on a cycle of degree 5
    big = [[[s("x*s"), s("s^2")], [s("x^2*s^3"), s("0")]]]
    a = orbit_enumerate(FA1, small, 4)
    b = orbit_enumerate(FA1, big, 4)
    assert compare_truncated(zeta_product(a.orbits, 4), zeta_product(b.orbits, 4), 4)
    assert compare_values(a.det_product, b.det_product, 4).verdict == Verdict.EQUAL


def test_non_monomial_phi_rejected():
    with pytest.raises(OrbitError, match=r"phi_0\[1,1\]"):
        orbit_enumerate(FA1, [[[parse_group_ring(FA1, "s + x*s")]]], 4)


def test_fractional_weight_rejected():
    with pytest.raises(OrbitError):
        orbit_enumerate(FA1, [[[parse_group_ring(FA1, "1/2*s")]]], 4)
