"""余挠对：谓词、按核分类、t-结构与余 t-结构"""
import pytest
from hypothesis import given, strategies as st

from src.cluster.cotorsion import (CotorsionPair, brute_force_pairs, classify, enumerate_all,
                                   enumerate_co_t_structures, enumerate_t_structures, enumerate_with_core,
                                   is_cotorsion_pair, is_torsion_pair, lemma_triple, pair_to_json, rigid_cores, swap,
                                   trivial_pairs, validated_pair)
from src.cluster.subcalc import components_of_quotient, perp_left, shifted
from src.cluster.polygon import triangulations
from src.engine.errors import NotRigid, SuiteFailure


def objs(cat, text):
    return frozenset(cat.parse_list(text))


def test_trivial_pairs_are_cotorsion(c2a3):
    for P in trivial_pairs(c2a3):
        ok, _ = is_cotorsion_pair(c2a3, P.X, P.Y)
        assert ok


def test_cluster_tilting_pair(c2a4):
    T = objs(c2a4, "P1,P2,P3,P4")
    P = validated_pair(c2a4, T, T)
    assert P.core == T and P.delta == 4
    assert classify(c2a4, P) == {"t_structure": False, "co_t_structure": False, "cluster_tilting": True}
    assert len(P.witness["triangles"]) == len(c2a4.objects)


def test_rejects_ext_between_sides(c2a4):
    ok, witness = is_cotorsion_pair(c2a4, objs(c2a4, "S2"), objs(c2a4, "S1"))
    assert not ok
    assert witness["reason"] == "ext"


def test_rejects_missing_decomposition(c2a4):
    ok, witness = is_cotorsion_pair(c2a4, objs(c2a4, "P1"), objs(c2a4, "P1"))
    assert not ok
    assert witness["reason"] == "decomposition"
    with pytest.raises(SuiteFailure):
        validated_pair(c2a4, objs(c2a4, "P1"), objs(c2a4, "P1"))


def test_predicates_need_d2(c4a3):
    with pytest.raises(ValueError):
        is_cotorsion_pair(c4a3, [], c4a3.objects)
    with pytest.raises(ValueError):
        enumerate_t_structures(c4a3)


# ============ 按核分类 ============

def test_core_with_two_shifted_projectives(c2a4):
    pairs = enumerate_with_core(c2a4, objs(c2a4, "P2[1],P3[1]"))
    assert len(pairs) == 4
    assert all(P.core == objs(c2a4, "P2[1],P3[1]") for P in pairs)


def test_pair_count_is_two_to_the_components(c2a4):
    I = objs(c2a4, "E")
    pairs = enumerate_with_core(c2a4, I)
    assert len(pairs) == 2 ** components_of_quotient(c2a4, I).ns == 4
    X = perp_left(c2a4, I, 1)
    assert validated_pair(c2a4, X, I) in pairs
    assert validated_pair(c2a4, I, X) in pairs


def test_core_must_be_rigid(c2a4):
    with pytest.raises(NotRigid):
        enumerate_with_core(c2a4, objs(c2a4, "S1,S2"))


def test_swap_keeps_cotorsion(c2a4):
    for P in enumerate_with_core(c2a4, objs(c2a4, "E")):
        Q = swap(P)
        ok, _ = is_cotorsion_pair(c2a4, Q.X, Q.Y)
        assert ok
        assert Q.core == P.core


def test_torsion_pair_from_cotorsion(c2a3):
    for P in enumerate_with_core(c2a3, objs(c2a3, "P2")):
        ok, _ = is_torsion_pair(c2a3, P.X, shifted(c2a3, P.Y, 1))
        assert ok


@given(st.data())
def test_brute_force_agrees_with_classification(c2a3, data):
    I = data.draw(st.sampled_from(rigid_cores(c2a3)))
    brute = brute_force_pairs(c2a3, I)
    assert brute is not None
    assert brute == enumerate_with_core(c2a3, I)


@given(st.data())
def test_lemma_triple_holds(c2a3, data):
    I = data.draw(st.sampled_from(rigid_cores(c2a3)))
    for P in enumerate_with_core(c2a3, I):
        assert all(lemma_triple(c2a3, P).values())


def test_brute_force_gives_up_on_large_region(c2a4):
    assert brute_force_pairs(c2a4, [], limit=5) is None


# ============ 分层 ============

def test_strata(c2a3):
    strata = enumerate_all(c2a3)
    assert sorted(strata) == [0, 1, 2, 3]
    assert strata[0] == trivial_pairs(c2a3)
    assert len(strata[3]) == len(triangulations(3))
    assert all(P.X == P.Y for P in strata[3])


def test_parallel_enumeration_matches(c2a3):
    assert enumerate_all(c2a3, jobs=3) == enumerate_all(c2a3)


def test_rigid_cores_cover_noncrossing_sets(c2a3):
    cores = rigid_cores(c2a3)
    assert len(cores) == 45
    assert cores[0] == frozenset()


# ============ t-结构 ============

@pytest.mark.parametrize("n", [1, 2, 3])
def test_only_trivial_t_structures(n, request):
    cat = request.getfixturevalue(f"c2a{n}")
    assert enumerate_t_structures(cat) == trivial_pairs(cat)
    assert enumerate_co_t_structures(cat) == trivial_pairs(cat)


def test_classify_trivial_pairs(c2a2):
    everything = frozenset(c2a2.objects)
    P = CotorsionPair(everything, frozenset())
    assert classify(c2a2, P) == {"t_structure": True, "co_t_structure": True, "cluster_tilting": False}
    assert pair_to_json(c2a2, P)["delta"] == 0
    assert pair_to_json(c2a2, P)["X"] == c2a2.names(everything)
