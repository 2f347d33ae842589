from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stsurf import chow, formulas
from stsurf.chow import BaseClass, ChowExpression as E

G = E.gen
ODD = [3, 5, 7, 9, 11]

gens = st.sampled_from(chow.GENERATORS)
linear = st.lists(st.tuples(gens, st.fractions(-5, 5, max_denominator=6)), min_size=1, max_size=4).map(
    lambda ts: sum((G(g, c) for g, c in ts), E()))


def test_jacobi_class_examples():
    assert chow.jacobi_class((Q(1, 2), Q(1, 2)), (Q(1, 2), Q(1, 2)), 5) == E(
        {("L1",): Q(7, 10), ("L2",): Q(7, 10), ("N1",): Q(1, 5), ("N2",): Q(1, 5)})
    dj = chow.j_dtheta(7)
    assert [dj.coefficient(g) for g in ("L1", "L2", "N1", "N2")] == [
        Q(1, 2) + Q(1, 7), Q(3, 2) + Q(1, 7), Q(1, 7), Q(1, 7)]
    assert chow.jacobi_class((0, 0), (0, 0), 5) == E()


def test_torsion_class_examples():
    assert chow.torsion_class(1, 5) == G("N1")
    assert chow.torsion_class(2, 5) == (G("N1") + G("L1")).scale(3)
    for m in (3, 5):
        assert chow.torsion_class(2 * m, 7) == (G("N1") + G("L1")).scale(Q(3 * formulas.delta(m), m))


@given(linear, linear, linear)
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert E.one() * a == a


def test_degree_cap():
    with pytest.raises(ValueError):
        G("L1") * G("L1") * G("L2") * G("D1")


def test_pushforward_table():
    d = 5
    assert chow.pushforward(G("N1") * G("N2") * G("L1"), d) == BaseClass(lam1=Q(25))
    assert chow.pushforward(G("L1") * G("L2") * G("D1"), d) == BaseClass()
    assert chow.pushforward(G("N1") * G("N1") * G("N1"), d) == BaseClass()
    assert chow.pushforward(G("N1") * G("N1") * G("N2"), d) == BaseClass(lam1=Q(-25))
    assert chow.pushforward(G("N1") * G("N2") * G("D2"), d) == BaseClass(R2=Q(25))
    with pytest.raises(ValueError):
        chow.pushforward(G("N1") * G("N2"), d)


@given(linear, linear, linear)
def test_pushforward_is_symmetric_and_linear(a, b, c):
    d = 7
    assert chow.pushforward(a * b * c, d) == chow.pushforward(c * a * b, d)
    assert chow.pushforward((a + b) * c * c, d) == chow.pushforward(a * c * c, d) + chow.pushforward(b * c * c, d)


@given(linear, linear, linear)
def test_boundary_relation_commutes_with_product(a, b, c):
    d = 5
    rel = {f"D{i}": G(f"L{i}", Q(12, d)) for i in (1, 2)}

    def sub(x):
        for name, val in rel.items():
            x = x.substitute(name, val)
        return x

    before = chow.pushforward(sub(a) * sub(b) * sub(c), d).to_divisor(d)
    after = chow.pushforward(a * b * c, d).to_divisor(d)
    assert before.same(after)


def test_boundary_corrections():
    bc = chow.boundary_corrections(5)
    assert bc.B_theta == (G("D1") + G("D2")).scale(Q(1, 8))
    assert bc.B_mN(1) == BaseClass(R2=Q(1))
    assert bc.B_mN(3) == BaseClass()


@pytest.mark.parametrize("d", ODD)
def test_intermediate_terms(d):
    for m in (1, 3, 5, 6):
        t = chow.o_terms(m, d)
        k = Q(formulas.delta(m), m) if m > 1 else Q(1)
        main = t.main.to_divisor(d)
        if m == 1:
            assert main.same(formulas.DivisorClass(Q(d), Q(2 * d + 1)))
        else:
            assert main.same(formulas.DivisorClass(k * d * (1 + Q(2, d)), k * d * (2 + Q(1, d))))
        edge = formulas.DivisorClass(k * Q(3, 2), k * Q(3, 2))
        assert t.theta_boundary.to_divisor(d).same(edge)
        assert t.dtheta_boundary.to_divisor(d).same(edge)


@pytest.mark.parametrize("d", ODD)
def test_pushforward_of_origami_loci(d):
    assert chow.pushforward_O(1, d).same(formulas.DivisorClass(Q(d - 3), Q(2, d) * (d * d - d - 6)))
    assert chow.pushforward_O(2, d).same(formulas.DivisorClass(Q(3 * d - 3), Q(6 * (d - 1))))
    for m in (3, 5):
        k = Q(formulas.delta(m), m) * d
        assert chow.pushforward_O(m, d).same(formulas.DivisorClass(k * (1 - Q(1, d)), k * (2 - Q(2, d))))


def test_derived_class_example():
    assert chow.derive_T_class(5, 1, 1).same(formulas.DivisorClass(Q(12, 5), Q(24, 5)))


def test_even_degree_rejected():
    with pytest.raises(ValueError):
        chow.pushforward_O(1, 4)
    with pytest.raises(ValueError):
        chow.derive_T_class(5, 1, 0)
