import networkx as nx
import pytest
from hypothesis import strategies as st

from treepart import lp
from treepart.instance import Instance, Tree

# acceptance lines collected by tests/test_acceptance.py, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []

# every certified LP solve in the session lands here (see test_acceptance criterion 12)
SESSION_AUDIT = lp.AuditLog()


@pytest.fixture(scope="session", autouse=True)
def _session_audit():
    token = lp._AUDIT.set(SESSION_AUDIT)
    yield SESSION_AUDIT
    lp._AUDIT.reset(token)


def pytest_configure(config):
    config.addinivalue_line("markers", "run_last: move the test to the end of the session")


def pytest_collection_modifyitems(items):
    # the LP audit criterion has to see every solve of the session
    items.sort(key=lambda item: item.get_closest_marker("run_last") is not None)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def tree_from_prufer(nodes, seq):
    if nodes == 1:
        return Tree(1, [])
    g = nx.from_prufer_sequence(seq) if nodes > 2 else nx.path_graph(2)
    return Tree(nodes, sorted(tuple(sorted(e)) for e in g.edges()))


@st.composite
def trees(draw, min_nodes=2, max_nodes=8):
    nodes = draw(st.integers(min_nodes, max_nodes))
    seq = draw(st.lists(st.integers(0, nodes - 1), min_size=max(nodes - 2, 0), max_size=max(nodes - 2, 0)))
    return tree_from_prufer(nodes, seq)


@st.composite
def instances(draw, min_nodes=2, max_nodes=8, lo=-10, hi=10):
    tree = draw(trees(min_nodes, max_nodes))
    costs = draw(st.lists(st.integers(lo, hi), min_size=tree.m, max_size=tree.m))
    return Instance(tree, dict(zip(tree.pairs, costs)))


@st.composite
def path_instances(draw, max_edges=8, lo=-10, hi=10):
    n = draw(st.integers(1, max_edges))
    tree = Tree.path(n)
    costs = draw(st.lists(st.integers(lo, hi), min_size=tree.m, max_size=tree.m))
    return Instance(tree, dict(zip(tree.pairs, costs)))
