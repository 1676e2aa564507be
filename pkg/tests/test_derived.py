"""D^b(kA_n)：分次 Hom、复合、锥与 F"""
from hypothesis import given, strategies as st
from sympy import Rational

from src.engine.derived import (DMorphism, DObject, F_apply, Summand, ZERO, block_kind, get_derived, shift_D,
                                summand)
from src.engine.repcore import Interval


def obj(*items: Summand) -> DObject:
    return DObject.of(items)


@st.composite
def summands(draw, n=4):
    a = draw(st.integers(1, n))
    b = draw(st.integers(a, n))
    return Summand(draw(st.integers(-3, 3)), Interval(a, b))


def test_graded_hom_examples():
    D = get_derived(2)
    P1, S1, S2 = summand(1, 1), summand(1, 1), summand(2, 2)
    assert D.hom_dim(obj(P1), obj(P1)) == 1
    assert D.hom_dim(obj(S2), obj(S1.shifted(1))) == 1
    assert D.hom_dim(obj(S2), obj(S1.shifted(2))) == 0


def test_hom_graded_degrees():
    D = get_derived(2)
    graded = D.hom_graded(obj(summand(2, 2)), obj(summand(1, 1)), range(-1, 3))
    assert {k: len(v) for k, v in graded.items()} == {-1: 0, 0: 0, 1: 1, 2: 0}


def test_block_kinds():
    assert block_kind(summand(1, 1), summand(1, 2)) == "hom"
    assert block_kind(summand(2, 2), summand(1, 1, 1)) == "ext"
    assert block_kind(summand(2, 2), summand(1, 1, 2)) is None


def test_identity_is_neutral():
    D = get_derived(3)
    X, Y = obj(summand(1, 2)), obj(summand(1, 3))
    f = DMorphism(X, Y, {(0, 0): Rational(3)})
    assert D.compose_D(D.identity(X), f).coeffs == f.coeffs
    assert D.compose_D(f, D.identity(Y)).coeffs == f.coeffs


def test_ext_composed_with_ext_is_zero():
    D = get_derived(3)
    S3, S2, S1 = obj(summand(3, 3)), obj(summand(2, 2, 1)), obj(summand(1, 1, 2))
    f = DMorphism(S3, S2, {(0, 0): Rational(1)})
    g = DMorphism(S2, S1, {(0, 0): Rational(1)})
    assert D.compose_D(f, g).is_zero()


def test_cone_of_identity_is_zero():
    D = get_derived(3)
    X = obj(summand(2, 3))
    assert D.cone_object(D.identity(X)) == ZERO


def test_cone_of_zero_map_splits():
    D = get_derived(3)
    x, y = summand(2, 3), summand(1, 1)
    assert D.cone_object(DMorphism(obj(x), obj(y))) == obj(y, x.shifted(1))


def test_cone_of_inclusion_is_cokernel():
    D = get_derived(2)
    f = DMorphism(obj(summand(1, 1)), obj(summand(1, 2)), {(0, 0): Rational(1)})
    tri = D.cone_D(f)
    assert tri.Z == obj(summand(2, 2))
    assert D.compose_D(f, tri.g).is_zero()
    assert D.compose_D(tri.g, tri.h).is_zero()
    assert not tri.h.is_zero()


def test_shift_moves_every_summand():
    X = obj(summand(1, 2), summand(3, 3, 1))
    assert shift_D(X, 2) == obj(summand(1, 2, 2), summand(3, 3, 3))


@given(summands(), st.integers(2, 4))
def test_F_is_invertible_on_objects(x, d):
    X = obj(x)
    assert F_apply(F_apply(X, d, 4), d, 4, power=-1) == X


@given(summands())
def test_tau_inverse_pair(x):
    D = get_derived(4)
    assert D.tau_summand(D.tau_inv_summand(x)) == x
    assert D.tau_inv_summand(D.tau_summand(x)) == x


def test_F_on_morphism_keeps_nonzero_block():
    D = get_derived(3)
    f = DMorphism(obj(summand(1, 1)), obj(summand(1, 2)), {(0, 0): Rational(1)})
    Ff = D.F_apply(f, 2)
    assert Ff.source == D.F_object(f.source, 2)
    assert Ff.target == D.F_object(f.target, 2)
    assert not Ff.is_zero()
    back = D.F_apply(Ff, 2, power=-1)
    assert back.coeffs == f.coeffs
