import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings

from conftest import instances
from treepart.catalog import five_node_example
from treepart.errors import InputError, PreconditionError
from treepart.generate import generate_instance
from treepart.instance import Instance, Tree, evaluate_objective, load_instance
from treepart.oracle import solve_bruteforce
from treepart.solver import BncConfig, lower_bound, solution_dict, solution_json, solve_exact

DATA = Path(__file__).parent / "data"


def test_five_node_example():
    inst = five_node_example()
    y, value, cert = solve_exact(inst)
    assert value == -3 and y == (1, 1, 0, 1)
    assert cert.optimal and cert.bound == -3 and cert.incumbent == -3


def test_five_node_root_bounds():
    inst = five_node_example()
    assert lower_bound(inst, "theta0") == Fraction(-7, 2)
    assert lower_bound(inst, "theta1") == -3
    assert lower_bound(inst, "theta1+squares") == -3


def test_path_exact_relaxation_closes_at_the_root():
    inst = generate_instance("path", 9, seed=3)
    y, value, cert = solve_exact(inst, BncConfig(relaxation="path-exact"))
    assert value == solve_bruteforce(inst)[1]
    assert cert.nodes == 1 and cert.optimal
    with pytest.raises(PreconditionError):
        solve_exact(five_node_example(), BncConfig(relaxation="path-exact"))


def test_star_with_attracting_leaves():
    # leaves want to share a block, the center repels each of them
    star = Tree.star(3)
    costs = {(0, k): 2 for k in (1, 2, 3)}
    costs.update({(1, 2): -1, (1, 3): -1, (2, 3): -1})
    inst = Instance(star, costs)
    for rel in ("theta0", "theta1", "theta1+squares"):
        _, value, cert = solve_exact(inst, BncConfig(relaxation=rel))
        assert value == solve_bruteforce(inst)[1]
        assert cert.optimal


def test_nonnegative_costs_have_zero_bound():
    inst = generate_instance("tree", 8, seed=5, cost_range=(0, 6))
    for rel in ("theta0", "theta1", "theta1+squares"):
        assert lower_bound(inst, rel) == 0
    y, value, _ = solve_exact(inst)
    assert value == 0 and y == (0,) * inst.tree.n


def test_square_rows_can_tighten_the_bound():
    inst = load_instance((DATA / "square_gain.json").read_bytes())
    assert lower_bound(inst, "theta1") == Fraction(-19, 2)
    assert lower_bound(inst, "theta1+squares") == -9 == solve_bruteforce(inst)[1]


@given(instances(max_nodes=8))
@settings(max_examples=25, deadline=None)
def test_matches_bruteforce_and_bounds_are_ordered(inst):
    opt = solve_bruteforce(inst)[1]
    y, value, cert = solve_exact(inst)
    assert value == opt == evaluate_objective(inst, y)
    assert cert.optimal and cert.bound == opt
    b0, b1, b2 = (lower_bound(inst, r) for r in ("theta0", "theta1", "theta1+squares"))
    assert b0 <= b1 <= b2 <= opt


def test_node_limit_reports_a_gap():
    inst = generate_instance("tree", 10, seed=11)
    opt = solve_bruteforce(inst)[1]
    _, value, cert = solve_exact(inst, BncConfig(relaxation="theta0", node_limit=1, cut_rounds=1))
    assert not cert.optimal and cert.nodes == 1
    assert cert.bound <= opt <= value
    _, value, cert = solve_exact(inst, BncConfig(relaxation="theta0"))
    assert cert.optimal and value == opt


def test_path_fallback_uses_dp():
    inst = generate_instance("path", 10, seed=2)
    _, value, cert = solve_exact(inst, BncConfig(path_fallback=True))
    assert value == solve_bruteforce(inst)[1]
    assert cert.relaxation == "dp" and cert.nodes == 0


def test_single_node_tree():
    inst = Instance(Tree(1, []))
    assert solve_exact(inst)[1] == 0
    assert lower_bound(inst) == 0


def test_config_validation():
    with pytest.raises(InputError):
        BncConfig(relaxation="theta2")
    with pytest.raises(InputError):
        BncConfig(node_limit=0)
    with pytest.raises(InputError):
        lower_bound(five_node_example(), "nope")


def test_solution_output():
    inst = five_node_example()
    y, value, cert = solve_exact(inst)
    doc = solution_dict(inst, y, value, cert)
    assert set(doc) == {"value", "cut_edges", "components", "optimal", "bound", "nodes", "cuts"}
    assert doc["value"] == "-3" and doc["cut_edges"] == [[2, 3]]
    assert doc["components"] == [[0, 1, 2], [3, 4]]
    assert json.loads(solution_json(inst, y, value, cert)) == doc
