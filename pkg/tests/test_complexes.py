"""投射复形：标准复形、锥与正规形"""
from hypothesis import given, strategies as st

from src.engine.complexes import (ChainHom, cone, find_iso, identity_chain, normal_form, standard_complex,
                                  compose_chain)
from src.engine.repcore import Interval


@st.composite
def shifted_intervals(draw, n=4):
    a = draw(st.integers(1, n))
    b = draw(st.integers(a, n))
    return Interval(a, b), draw(st.integers(-2, 2))


def test_standard_complex_layout():
    K, layout = standard_complex([(Interval(2, 3), 0)], 3)
    assert K.term(0) == (3,)
    assert K.term(-1) == (1,)
    assert layout[0].top_deg == 0 and layout[0].low_pos == 0
    assert K.is_complex()


def test_projective_has_single_term():
    K, layout = standard_complex([(Interval(1, 2), 1)], 3)
    assert K.degrees() == [-1]
    assert layout[0].low_pos is None


@given(st.lists(shifted_intervals(), min_size=1, max_size=3))
def test_normal_form_recovers_summands(items):
    K, _ = standard_complex(items, 4)
    expected = sorted(items, key=lambda item: (item[1], item[0].a, item[0].b))
    assert normal_form(K) == expected


def test_cone_of_identity_is_contractible():
    K, _ = standard_complex([(Interval(2, 4), 0), (Interval(1, 3), 1)], 4)
    C, inc, proj = cone(identity_chain(K))
    assert C.is_complex()
    assert normal_form(C) == []
    assert inc.is_chain_map()
    assert proj.is_chain_map()


def test_find_iso_gives_inverse_pair():
    K, _ = standard_complex([(Interval(2, 3), 0)], 3)
    phi, psi = find_iso(K, K)
    endo = ChainHom(K, K)
    diff = endo.vector(compose_chain(phi, psi)) - endo.vector(identity_chain(K))
    assert ChainHom(K, K).is_null_homotopic(endo.chain(diff))
