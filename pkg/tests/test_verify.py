from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import trees
from treepart.catalog import seven_node_tree
from treepart.errors import PreconditionError
from treepart.instance import Tree
from treepart.polytopes import extended_path_system, square_system, theta0_system, theta_path_system
from treepart.verify import (
    affine_rank,
    check_inclusion,
    classify_trivial_facets,
    determinant,
    enumerate_vertices,
    facet_check,
    find_bad_subdeterminant,
    find_fractional_optimum,
    predicted_facet,
    strictness_witness,
    tdi_witness,
    trees_up_to,
    verify_inclusions,
    verify_non_tu,
    verify_path_integrality,
    verify_path_vertices,
    verify_tdi,
    verify_triangle_examples,
)

small_ints = st.integers(-3, 3)


def test_tree_census():
    # nonisomorphic trees on 1..7 nodes: 1, 1, 1, 2, 3, 6, 11
    counts = {}
    for t in trees_up_to(7):
        counts[t.n + 1] = counts.get(t.n + 1, 0) + 1
    assert [counts[k] for k in range(1, 8)] == [1, 1, 1, 2, 3, 6, 11]


@given(st.lists(st.lists(small_ints, min_size=4, max_size=4), min_size=1, max_size=7))
@settings(max_examples=80, deadline=None)
def test_affine_rank_matches_numpy(points):
    base = np.array(points[0])
    diffs = np.array(points) - base
    assert affine_rank(points) == np.linalg.matrix_rank(diffs)


@given(st.integers(1, 5).flatmap(lambda k: st.lists(st.lists(small_ints, min_size=k, max_size=k),
                                                      min_size=k, max_size=k)))
@settings(max_examples=80, deadline=None)
def test_determinant_matches_numpy(M):
    assert determinant(M) == round(np.linalg.det(np.array(M, dtype=float)))


def test_rank_and_determinant_edge_cases():
    assert affine_rank([]) == -1
    assert affine_rank([(1, 2)]) == 0
    assert determinant([]) == 1
    assert determinant([[0, 1], [1, 0]]) == -1


def test_facet_check_on_a_two_edge_path():
    tree = Tree.path(2)
    rows = {(r.family, r.nodes): r for r in theta0_system(tree).rows}
    path_row = rows[("path", (0, 2))]
    rep = facet_check(tree, path_row)
    assert rep.valid and rep.is_facet and rep.face_dimension == 2
    upper_mid = next(r for k, r in rows.items() if k[0] == "box" and k[1] == ("upper", 0, 1))
    assert not facet_check(tree, upper_mid).is_facet


@given(trees(min_nodes=2, max_nodes=6))
@settings(max_examples=30, deadline=None)
def test_predicted_facets_agree(tree):
    for fr in classify_trivial_facets(tree):
        assert fr.agree, fr


def test_lower_box_on_one_edge():
    tree = Tree.path(1)
    lower = next(r for r in theta0_system(tree).rows if r.nodes[0] == "lower")
    assert facet_check(tree, lower).is_facet
    assert predicted_facet(tree, lower)[0]


def test_square_rows_are_facets_on_seven_node_tree():
    tree = seven_node_tree()
    for row in square_system(tree).rows:
        assert facet_check(tree, row).is_facet


def test_triangle_examples():
    out = verify_triangle_examples()
    assert out["ok"]
    assert out["star_triangle"] == {"valid": True, "facet": True, "face_dimension": 5}
    assert out["star_triangle_reversed"]["valid"] is False
    assert out["tree_example"]["valid"]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_path_system_vertices_are_lifted_multicuts(n):
    rep = verify_path_vertices(n)
    assert rep.matches_lifted and rep.all_integral
    assert len(rep.vertices) == 2 ** n


def test_vertex_enumeration_of_theta0_has_fractional_points():
    verts = enumerate_vertices(theta0_system(Tree.path(3)))
    assert any(v.denominator != 1 for x in verts for v in x)


def test_path_integrality_small():
    rep = verify_path_integrality(4, trials=40, seed=1)
    assert rep.ok and rep.passed == 40
    with pytest.raises(PreconditionError):
        verify_path_integrality(7, trials=1)


def test_theta0_is_not_integral():
    found = find_fractional_optimum("theta0", n_values=[3], trials=200)
    assert found is not None
    n, c, x = found
    assert any(v.denominator != 1 for v in x)


def test_tdi_zero_objective():
    n = 3
    size = extended_path_system(n).space.size
    w = tdi_witness(n, [0] * size)
    assert w.valid and w.primal_value == 0 == w.dual_value


def test_tdi_single_long_pair():
    n = 3
    space = extended_path_system(n).space
    c = [0] * space.size
    c[space.var(0, 3)] = 1
    w = tdi_witness(n, c)
    assert w.valid and w.primal_value == 1
    assert all(v >= 0 for v in w.y)


def test_tdi_random_trials():
    out = verify_tdi(4, trials=25, seed=9)
    assert out["ok"]
    assert all(p == d for p, d in out["values"])


def test_non_tu():
    found = verify_non_tu(4)
    assert found is not None
    rows, cols, det = found
    M = theta_path_system(4).matrix()
    assert abs(det) >= 2
    assert determinant([[M[i][j] for j in cols] for i in rows]) == det
    assert verify_non_tu(2) is None and verify_non_tu(3) is None


def test_bad_subdeterminant_search():
    assert find_bad_subdeterminant([[1, 1], [-1, 1]]) == ((0, 1), (0, 1), 2)
    assert find_bad_subdeterminant([[1, 0], [0, 1]]) is None


def test_inclusions_on_paths_and_a_tree():
    out = verify_inclusions(4)
    assert out["ok"] and out["vertices_in_all"]
    assert [(c["weaker"], c["stronger"]) for c in out["chains"]] == [("theta1", "path"), ("theta0", "theta1")]
    assert verify_inclusions(seven_node_tree())["ok"]


def test_reverse_inclusion_fails():
    # theta0 does not imply the square rows
    tree = Tree.path(3)
    res = check_inclusion(square_system(tree), theta0_system(tree), ("square", "theta0"))
    assert not res.ok


def test_strictness_witness():
    row, point, violation = strictness_witness(3)
    assert row.family == "square" and violation == Fraction(2, 3)
    tree = Tree.path(3)
    assert theta0_system(tree).satisfied_by(point)
    assert not row.satisfied_by(point)
