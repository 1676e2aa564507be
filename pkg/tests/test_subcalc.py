"""子范畴演算：垂直、刚性、逼近、分解与 IY 平移"""
import pytest

from src.cluster.orbit import OrbitCategory
from src.cluster.polygon import PolygonModel, cells, cross, rotate, triangulations
from src.cluster.subcalc import (approximation_cone, check_ct_decomposition, cluster_tilting_objects, complements,
                                 components_of_quotient, decompose_category, gabriel_quiver, in_extension_chain,
                                 is_cluster_tilting, is_cluster_tilting_in_subquotient, is_relative_cluster_tilting,
                                 is_rigid, iy_shift, iy_shift_inv, min_left_approx, min_right_approx, perp_left,
                                 perp_right, quotient_hom_dim, rigid_subcategories, shifted)
from src.engine.errors import NotAPartition, NotInPerp, NotRigid, NotSubset


def objs(cat, text):
    return frozenset(cat.parse_list(text))


# ============ 垂直与刚性 ============

def test_perp_matches_polygon(c2a4):
    model = PolygonModel(c2a4)
    for X in c2a4.objects:
        for k in (1, 2):
            target = rotate(model.arc_of_object(X), k - 1)
            expected = frozenset(Y for Y in c2a4.objects if not cross(model.arc_of_object(Y), target))
            assert perp_left(c2a4, [X], k) == expected


def test_perp_right_is_ext_orthogonal(c2a4):
    S = objs(c2a4, "E")
    assert perp_right(c2a4, S, 1) == frozenset(Y for Y in c2a4.objects if c2a4.ext_dim(c2a4.parse("E"), Y) == 0)
    assert perp_right(c2a4, S, 1) == perp_left(c2a4, S, 1)


def test_rigidity(c2a4):
    assert is_rigid(c2a4, objs(c2a4, "P1,P2,P3,P4"))
    assert not is_rigid(c2a4, objs(c2a4, "S2,S1"))
    assert is_rigid(c2a4, [])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cluster_tilting_count_is_catalan(n, request):
    cat = request.getfixturevalue(f"c2a{n}")
    cts = cluster_tilting_objects(cat)
    assert len(cts) == len(triangulations(n))
    assert all(len(T) == n for T in cts)


def test_rigid_subcategories_match_noncrossing_sets(c2a3):
    assert len(rigid_subcategories(c2a3)) == 45


def test_projectives_are_cluster_tilting(c2a4):
    assert is_cluster_tilting(c2a4, objs(c2a4, "P1,P2,P3,P4"))
    assert not is_cluster_tilting(c2a4, objs(c2a4, "P1,P2,P3"))


def test_almost_complete_has_two_complements(c2a4):
    comps = complements(c2a4, objs(c2a4, "P1,P2,P3"))
    assert len(comps) == 2
    assert c2a4.parse("P4") in comps


# ============ 逼近 ============

def test_right_approximation_by_projectives(c2a3):
    approx = min_right_approx(c2a3, c2a3.parse("S2"), objs(c2a3, "P1,P2,P3"))
    assert approx.objects == (c2a3.parse("P2"),)
    assert approximation_cone(c2a3, approx) == (c2a3.parse("P1[1]"),)


def test_approximation_of_member_is_identity(c2a4):
    X = c2a4.parse("E")
    right = min_right_approx(c2a4, X, objs(c2a4, "E,P4"))
    left = min_left_approx(c2a4, X, objs(c2a4, "E,P4"))
    assert right.objects == (X,)
    assert left.objects == (X,)
    assert approximation_cone(c2a4, right) == ()


def test_approximation_caches_belong_to_category(c2a3):
    fresh = OrbitCategory.from_json(c2a3.to_json())
    assert fresh.memo == {}
    approx = min_right_approx(fresh, fresh.parse("S2"), objs(fresh, "P1,P2,P3"))
    assert approximation_cone(fresh, approx) == (fresh.parse("P1[1]"),)
    assert {key[0] for key in fresh.memo} == {"right", "cone"}
    assert fresh.memo is not c2a3.memo


def test_empty_approximation(c2a4):
    approx = min_right_approx(c2a4, c2a4.parse("S2"), [])
    assert approx.is_zero()
    assert approximation_cone(c2a4, approx) == (c2a4.parse("S2"),)


# ============ 商范畴与分解 ============

def test_quotient_hom_kills_maps_through_ideal(c2a3):
    P1, P2, P3 = c2a3.parse_list("P1,P2,P3")
    assert c2a3.hom_dim(P1, P3) == 1
    assert quotient_hom_dim(c2a3, P1, P3, []) == 1
    assert quotient_hom_dim(c2a3, P1, P3, [P2]) == 0
    assert quotient_hom_dim(c2a3, P1, P2, [P3]) == 1


def test_components_with_core_E(c2a4):
    dec = components_of_quotient(c2a4, objs(c2a4, "E"))
    assert dec.ns == 2
    assert dec.components == sorted([objs(c2a4, "S2,S3"), objs(c2a4, "P3,P4[1],P4,I2,P1[1]")], key=sorted)
    assert dec.component_of(c2a4.parse("S2")) == objs(c2a4, "S2,S3")


def test_components_match_cells(c2a4):
    model = PolygonModel(c2a4)
    for I in rigid_subcategories(c2a4):
        assert components_of_quotient(c2a4, I).ns == cells(model.arcs_of(I), 4).ns


def test_components_require_rigid_core(c2a4):
    with pytest.raises(NotRigid):
        components_of_quotient(c2a4, objs(c2a4, "S1,S2"))


def test_components_gate_higher_d(c4a3):
    with pytest.raises(ValueError):
        components_of_quotient(c4a3, [])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cluster_category_is_indecomposable(n, request):
    assert decompose_category(request.getfixturevalue(f"c2a{n}")).ns == 1


def test_gabriel_quiver_is_connected(c2a4):
    for T in cluster_tilting_objects(c2a4):
        assert gabriel_quiver(c2a4, T).nc == 1


def test_gabriel_quiver_of_projectives_is_linear(c2a4):
    q = gabriel_quiver(c2a4, objs(c2a4, "P1,P2,P3,P4"))
    assert sum(q.arrow_counts.values()) == 3
    assert q.loops() == 0


# ============ d = 4 的例子 ============

def test_example_in_c4a3(c4a3):
    T = objs(c4a3, "P1,P3,S3[1]")
    assert is_cluster_tilting(c4a3, T)
    assert c4a3.hom_dim(c4a3.parse("P3[1]"), c4a3.parse("S3[1]")) != 0
    ok, report = check_ct_decomposition(c4a3, T, [objs(c4a3, "P1,P3"), objs(c4a3, "S3[1]")])
    assert not ok
    assert report["condition2"]
    assert not report["condition3"]
    assert report["witness3"]["k"] in (1, 2)
    assert complements(c4a3, objs(c4a3, "P1,P3")) == sorted(c4a3.parse_list("P2,S3,S3[1],S3[2]"))


def test_decomposition_requires_partition(c4a3):
    T = objs(c4a3, "P1,P3,S3[1]")
    with pytest.raises(NotAPartition):
        check_ct_decomposition(c4a3, T, [objs(c4a3, "P1"), objs(c4a3, "S3[1]")])


def test_trivial_decomposition_passes_both_routes(c2a3):
    T = objs(c2a3, "P1,P2,P3")
    ok, report = check_ct_decomposition(c2a3, T, [T])
    assert ok
    assert report["routes"][0]["cones_match"] and report["routes"][0]["perp_match"]


def test_extension_chain(c2a3):
    T = objs(c2a3, "P1,P2,P3")
    chain = [T, shifted(c2a3, T, 1)]
    assert all(in_extension_chain(c2a3, Z, chain) for Z in c2a3.objects)
    assert in_extension_chain(c2a3, c2a3.parse("P2"), [T])
    assert not in_extension_chain(c2a3, c2a3.parse("S2"), [T])


# ============ IY 平移与相对簇倾斜 ============

def test_iy_shift_with_empty_core_is_shift(c2a4):
    for M in c2a4.objects:
        assert iy_shift(c2a4, M, []) == c2a4.shift(M, 1)
        assert iy_shift_inv(c2a4, M, []) == c2a4.shift(M, -1)


def test_iy_shift_round_trip(c2a4):
    D = objs(c2a4, "E")
    for M in perp_left(c2a4, D, 1) - D:
        up = iy_shift(c2a4, M, D)
        assert up is not None
        assert iy_shift_inv(c2a4, up, D) == M


def test_iy_shift_requires_perp(c2a4):
    with pytest.raises(NotInPerp):
        iy_shift(c2a4, c2a4.parse("S2"), objs(c2a4, "S3"))
    with pytest.raises(NotRigid):
        iy_shift(c2a4, c2a4.parse("P1"), objs(c2a4, "S1,S2"))


def test_relative_cluster_tilting(c2a4):
    I = objs(c2a4, "E")
    T = objs(c2a4, "P4[1],P3,E,S3")
    X = perp_left(c2a4, I, 1)
    assert is_relative_cluster_tilting(c2a4, T, X)
    assert is_cluster_tilting_in_subquotient(c2a4, T, I)
    with pytest.raises(NotSubset):
        is_relative_cluster_tilting(c2a4, objs(c2a4, "S1"), I)
