import random
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stsurf import theta as T
from stsurf.theta import tc

seeds = st.integers(0, 10**6)


def test_parity():
    assert len(T.EVEN_CHARACTERISTICS) == 10 and len(T.ODD_CHARACTERISTICS) == 6
    assert tc((1, 1), (1, 0)).odd and not tc((1, 1), (1, 1)).odd


@pytest.mark.parametrize("d", [3, 4, 5, 6, 7])
def test_generators_are_members(d):
    for g in T.generators(d):
        assert T.is_member(g, d)
        S = T.siegel_embedding(g, d)
        assert S.dtype == np.int64


def test_non_members_rejected():
    d = 5
    bad = T.KMatrix(T.k(1), T.k(1, 0), T.k(0), T.k(1))
    assert not T.is_member(bad, d)
    with pytest.raises(T.NotInGroupError):
        T.characteristic_action(bad, tc((0, 0), (0, 0)), d)


def test_identity_fixes_everything():
    for c in T.ALL_CHARACTERISTICS:
        assert T.characteristic_action(T.IDENTITY, c, 5) == c


@given(seeds, st.sampled_from([3, 4, 5, 6, 7]))
def test_action_preserves_parity(seed, d):
    m = T.random_element(d, random.Random(seed))
    for c in T.ALL_CHARACTERISTICS:
        assert T.characteristic_action(m, c, d).odd == c.odd


@given(seeds, st.sampled_from([3, 5, 7, 9]))
def test_distinguished_characteristic_is_fixed(seed, d):
    m = T.random_element(d, random.Random(seed))
    assert T.characteristic_action(m, T.INVARIANT_ODD_D, d) == T.INVARIANT_ODD_D


@given(seeds, seeds, st.sampled_from([3, 4, 5]))
def test_action_is_a_homomorphism(s1, s2, d):
    a = T.random_element(d, random.Random(s1), length=3)
    b = T.random_element(d, random.Random(s2), length=3)
    for c in T.ALL_CHARACTERISTICS:
        assert T.characteristic_action(a @ b, c, d) == T.characteristic_action(a, T.characteristic_action(b, c, d), d)


@pytest.mark.parametrize("d,sizes", [(3, [1, 9]), (4, [4, 6]), (5, [1, 9]), (6, [4, 6])])
def test_even_orbit_sizes(d, sizes):
    even = [o for o in T.orbit_decomposition(d) if not next(iter(o)).odd]
    assert sorted(map(len, even)) == sizes


def test_orbit_report_flags_splits():
    r = T.orbit_report(4)
    assert r.match
    assert set(r.claimed) == {"E0", "E2"}


def test_base_change_examples():
    for d in (3, 4, 5, 7):
        t = T.base_change_table(d)
        assert t[tc((0, 0), (0, 0))] == T.BaseChangedCharacteristic((0, 0), (0, 0))
        assert t[tc((0, 0), (1, 0))] == T.BaseChangedCharacteristic((0, 0), (1, 1))
        assert t[tc((1, 0), (1, 0))] == T.BaseChangedCharacteristic((d, 0), (1, 1))


@given(st.sampled_from(T.ALL_CHARACTERISTICS), st.sampled_from([1, 2]), st.integers(-6, 6),
       st.sampled_from([3, 4, 5, 6, 7]))
def test_chart_change(c, i, k, d):
    assert T.vanishing_order(c, i, k, d) - T.vanishing_order(c, i, 0, d) == -Q(k * k, 2)


@given(st.sampled_from(T.ALL_CHARACTERISTICS), st.sampled_from([1, 2]), st.integers(-4, 4),
       st.sampled_from([3, 4, 5, 6, 7]))
def test_vanishing_case_split(c, i, k, d):
    odd = T.base_change(c, d).dg1[i - 1] % 2
    assert T.vanishing_order(c, i, k, d) == (Q(1, 8) if odd else 0) - Q(k * k, 2)


def test_vanishing_examples():
    c = T.INVARIANT_ODD_D
    assert [T.vanishing_order(c, 1, k, 5) for k in (-2, -1, 0, 1, 2)] == [
        Q(-15, 8), Q(-3, 8), Q(1, 8), Q(-3, 8), Q(-15, 8)]
    assert T.vanishing_order(tc((0, 0), (0, 0)), 1, 0, 5) == 0


@given(st.integers(3, 40), st.integers(-5, 5))
def test_building_blocks(d, k):
    th, eta = T.building_block_orders(d, k)
    assert th + Q(k * k * d, 2) == Q(d, 8)
    assert eta == Q(d, 24)


def test_building_block_examples():
    assert T.building_block_orders(5, 0) == (Q(5, 8), Q(5, 24))
    assert T.building_block_orders(3, 1) == (Q(-9, 8), Q(1, 8))


@given(seeds, st.sampled_from(T.ALL_CHARACTERISTICS))
def test_theta_symmetry(seed, c):
    rng = random.Random(seed)
    z, u = T.random_upper_point(rng)
    a = T.theta_series(c, z, u, 5).value
    b = T.theta_series(c, z, [-x for x in u], 5).value
    assert abs(a - (-b if c.odd else b)) < 1e-10


@given(seeds, st.sampled_from(T.ALL_CHARACTERISTICS[::3]))
def test_hilbert_theta_matches_siegel_theta(seed, c):
    rng = random.Random(seed)
    d = rng.choice([3, 4, 5])
    z, u = T.random_upper_point(rng)
    Z, U = T.siegel_point(z, u, d)
    assert abs(T.theta_series(c, z, u, d).value - T.siegel_theta(c, Z, U, 30)) < 1e-10


def test_truncation_converges():
    rng = random.Random(5)
    z, u = T.random_upper_point(rng, min_imag=0.5)
    v = T.theta_series(tc((0, 0), (0, 0)), z, u, 5)
    w = T.theta_series(tc((0, 0), (0, 0)), z, u, 5, radius=(v.radius[0] + 2, v.radius[1] + 2))
    assert v.tail_bound <= 1e-12
    assert abs(v.value - w.value) <= max(v.tail_bound, 1e-14) * 10


def test_bad_point_rejected():
    with pytest.raises(ValueError):
        T.theta_series(tc((0, 0), (0, 0)), [1j, -1j], [0, 0], 3)


def test_cyclotomic_zero_test():
    assert (T.Cyclo.root(0) + T.Cyclo.root(Q(1, 2))).is_zero()
    assert (T.Cyclo.root(0) + T.Cyclo.root(Q(1, 3)) + T.Cyclo.root(Q(2, 3))).is_zero()
    assert not (T.Cyclo.root(0) + T.Cyclo.root(Q(1, 3))).is_zero()


@pytest.mark.parametrize("d", [3, 5, 7])
def test_theta2_leading_terms(d):
    up = Q((2 * d + 3) ** 2, 8)
    a, cf = T.theta2(0, d, up).leading()
    assert a == Q(1, 8) and set(cf) == {Q(1, 2)}
    assert cf[Q(1, 2)].terms == {Q(-1, 4 * d) % 1: 1}
    s1 = T.theta2(1, d, up)
    a, cf = s1.leading()
    assert a == Q(1, 8) and set(cf) == {Q(-1, 2)}
    later = s1.coefficient(Q((2 * d - 1) ** 2, 8))
    assert later[Q(2 * d - 1, 2)].terms == {Q(2 * d + 1, 4 * d): 1}


@pytest.mark.parametrize("d", [3, 5, 7, 9])
def test_boundary_report(d):
    r = T.boundary_expansion_checks(d)
    assert r.det1_leading[0] == Q(1, 4)
    assert r.det2_leading is not None
    assert r.zero_section_order == 1
    assert set(r.torsion_orders.values()) == {0}
    assert r.ok


def test_zero_section_series_vanishes_identically():
    for d in (3, 5, 7):
        t1, t2 = T.zero_section_lift(d)
        for shift in (0, 1, -2):
            assert T.torsion_substituted(-1, d, t1 + d * shift, t2 + shift, Q(20)).vanishes()


def test_condition_reported():
    rng = random.Random(3)
    z, u = T.random_upper_point(rng)
    v = T.theta_series(T.tc((0, 0), (0, 0)), z, u, 3)
    assert v.condition >= 1.0
    ratio, cond = T.transformation_check(T.IDENTITY, T.k(0), T.k(0),
                                             T.tc((0, 0), (0, 0)), z, u, 3)
    assert abs(ratio - 1) < 1e-12 and cond >= 1.0
