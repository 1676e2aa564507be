"""余挠对的心与心投影"""
import pytest

from src.cluster.cotorsion import enumerate_all, enumerate_with_core, swap, trivial_pairs, validated_pair
from src.cluster.heart import (abelian_subcategory_check, heart, heart_projection, lemma_hypotheses, tables_isomorphic,
                               verify_heart_theorem)
from src.cluster.subcalc import perp_left
from src.engine.errors import NotRigid

CORE = "P2[1],P3[1]"


def objs(cat, text):
    return frozenset(cat.parse_list(text))


@pytest.fixture(scope="module")
def table(c2a4):
    """核 {P2[1], P3[1]} 的四个余挠对及其心"""
    I = objs(c2a4, CORE)
    perp = perp_left(c2a4, I, 1)
    third = validated_pair(c2a4, objs(c2a4, "P2[1],P3[1],P4[1],I4"), objs(c2a4, "P2[1],P3[1],P1[1],P1"))
    return [
        (validated_pair(c2a4, I, perp), objs(c2a4, "P2,P3,S3")),
        (validated_pair(c2a4, perp, I), objs(c2a4, "S2,I2,I3")),
        (third, objs(c2a4, "P2,P4,I3")),
        (swap(third), objs(c2a4, "S2,E,S3")),
    ]


def test_table_lists_every_pair_with_core(c2a4, table):
    assert set(enumerate_with_core(c2a4, objs(c2a4, CORE))) == {P for P, _ in table}


def test_hearts_match_table(c2a4, table):
    for P, expected in table:
        report = heart(c2a4, P)
        assert frozenset(report.heart) == expected
        assert report.H - P.core == expected


def test_hearts_with_same_core_are_equivalent(c2a4, table):
    reports = [heart(c2a4, P) for P, _ in table]
    assert all(tables_isomorphic(reports[0], r) for r in reports[1:])
    ok, info = verify_heart_theorem(c2a4, objs(c2a4, CORE))
    assert ok
    assert info["pairs"] == 4
    assert info["sizes"] == [3, 3, 3, 3]


def test_cluster_tilting_heart(c2a4):
    T = objs(c2a4, "P1,P2,P3,P4")
    report = heart(c2a4, validated_pair(c2a4, T, T))
    assert len(report.heart) == 10
    assert report.end_I_quiver.nc == 1


def test_trivial_pairs_have_empty_heart(c2a3):
    for P in trivial_pairs(c2a3):
        assert heart(c2a3, P).heart == []


def test_quotient_t_structure_heart_is_empty(c2a4, table):
    for P, _ in table:
        report = heart(c2a4, P)
        assert report.tstructure_heart_A == frozenset()
        assert abelian_subcategory_check(c2a4, P, report)


def test_tables_of_different_size_are_not_isomorphic(c2a4, table):
    T = objs(c2a4, "P1,P2,P3,P4")
    big = heart(c2a4, validated_pair(c2a4, T, T))
    assert not tables_isomorphic(heart(c2a4, table[0][0]), big)


# ============ 心投影 ============

def test_projection_on_cluster_tilting_pair(c2a4):
    T = objs(c2a4, "P1,P2,P3,P4")
    P = validated_pair(c2a4, T, T)
    for M in c2a4.objects:
        proj = heart_projection(c2a4, M, P)
        assert proj.M_bar == (() if M in T else (M,))


def test_projection_vanishes_on_both_sides(c2a4, table):
    for P, expected in table:
        for M in P.X | P.Y:
            assert heart_projection(c2a4, M, P).M_bar == ()
        for M in expected:
            assert heart_projection(c2a4, M, P).M_bar == (M,)


def test_projection_lands_in_heart(c2a4, table):
    T = objs(c2a4, "P1,P2,P3,P4")
    pairs = [P for P, _ in table] + [validated_pair(c2a4, T, T)]
    for P in pairs:
        H = set(heart(c2a4, P).heart)
        for M in c2a4.objects:
            assert set(heart_projection(c2a4, M, P).M_bar) <= H


@pytest.mark.slow
def test_projection_lands_in_heart_for_every_pair(c2a4):
    for pairs in enumerate_all(c2a4).values():
        for P in pairs:
            H = set(heart(c2a4, P).heart)
            for M in c2a4.objects:
                assert set(heart_projection(c2a4, M, P).M_bar) <= H, (c2a4.names(P.X), c2a4.name(M))


def test_projection_witness_is_serializable(c2a4, table):
    P, _ = table[0]
    doc = heart_projection(c2a4, c2a4.parse("S3"), P).to_json(c2a4)
    assert doc["M"] == "S3"
    assert doc["M_bar"] == ["S3"]


def test_lemma_hypotheses(c2a4):
    ok, info = lemma_hypotheses(c2a4, objs(c2a4, CORE))
    assert ok, info["failures"]


def test_heart_theorem_needs_rigid_core(c2a4):
    with pytest.raises(NotRigid):
        verify_heart_theorem(c2a4, objs(c2a4, "S1,S2"))
