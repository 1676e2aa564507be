"""A_n 表示：Hom / Ext¹ / τ 与条形码"""
import pytest
from hypothesis import given, strategies as st

from src.engine.errors import InvalidInterval
from src.engine.repcore import (Interval, all_intervals, ar_duality_mismatches, barcode, canonical_map,
                                cokernel, compose_mod, direct_sum, ext1_dim, ext1_space, hom_dim,
                                hom_rule, interval, is_morphism, kernel, rep_of, tau, tau_inv,
                                verify_fast_rules)


@st.composite
def intervals(draw, n=5):
    a = draw(st.integers(1, n))
    b = draw(st.integers(a, n))
    return Interval(a, b)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_fast_rules_agree_with_linear_algebra(n):
    assert verify_fast_rules(n) == ()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ar_duality(n):
    assert ar_duality_mismatches(n) == []


def test_interval_bounds():
    assert interval(2, 3, 4) == Interval(2, 3)
    with pytest.raises(InvalidInterval):
        interval(0, 1, 3)
    with pytest.raises(InvalidInterval):
        interval(3, 2, 3)
    with pytest.raises(InvalidInterval):
        interval(1, 5, 4)


def test_interval_count():
    assert len(all_intervals(4)) == 10


def test_simple_projective_maps_into_p2():
    assert hom_dim(Interval(1, 1), Interval(1, 2), 2) == 1
    assert hom_dim(Interval(1, 2), Interval(1, 1), 2) == 0


def test_ext_between_simples():
    assert ext1_dim(Interval(2, 2), Interval(1, 1), 2) == 1
    assert ext1_dim(Interval(1, 1), Interval(2, 2), 2) == 0
    assert ext1_space(Interval(1, 3), rep_of(Interval(2, 2), 3)) == []


def test_tau_of_simple():
    assert tau(Interval(2, 2), 2) == Interval(1, 1)
    assert tau(Interval(1, 2), 3) is None
    assert tau_inv(Interval(2, 3), 3) is None


@given(intervals())
def test_tau_inverts_tau_inv(x):
    n = 5
    if x.a > 1:
        assert tau_inv(tau(x, n), n) == x
    if x.b < n:
        assert tau(tau_inv(x, n), n) == x


@given(intervals(), intervals())
def test_hom_dimension_at_most_one(x, y):
    assert hom_dim(x, y, 5) == int(hom_rule(x, y))


@given(st.lists(intervals(n=4), min_size=1, max_size=4))
def test_barcode_recovers_direct_sum(parts):
    M = direct_sum([rep_of(x, 4) for x in parts], 4)
    assert barcode(M) == sorted(parts)


def test_canonical_map_is_morphism():
    f = canonical_map(Interval(1, 2), Interval(1, 3), 3)
    assert is_morphism(f)
    assert not f.is_zero()


def test_kernel_and_cokernel_of_inclusion():
    f = canonical_map(Interval(1, 1), Interval(1, 2), 2)
    K, _ = kernel(f)
    Q, _ = cokernel(f)
    assert K.is_zero()
    assert barcode(Q) == [Interval(2, 2)]


def test_ext_times_ext_vanishes():
    e1 = ext1_space(Interval(3, 3), rep_of(Interval(2, 2), 3))[0]
    e2 = ext1_space(Interval(2, 2), rep_of(Interval(1, 1), 3))[0]
    assert compose_mod(e1, e2) is None
