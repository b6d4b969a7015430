"""Shared fixtures and brute-force oracles.

The oracles below deliberately avoid the package's own evaluation, BFS and
enumeration code so tests can compare two independent routes.
"""

import itertools

import networkx as nx
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from cliquetree.builder import CliqueTreePlan, build_ct, make_plan

# exhaustive checks inside properties have uneven runtimes
settings.register_profile("cliquetree", deadline=None)
settings.load_profile("cliquetree")

# transition maps of the three-automaton parity and sync networks
TRIANGLE_PARITY_MAP = {
    "000": "000", "001": "111", "010": "111", "011": "000",
    "100": "111", "101": "000", "110": "000", "111": "111",
}
TRIANGLE_SYNC_MAP = {
    "000": "111", "001": "000", "010": "000", "011": "111",
    "100": "000", "101": "111", "110": "111", "111": "000",
}
# three-node example f0 = not x1 or x2, f1 = x0, f2 = x1
THREE_NODE_MAP = {
    "000": "100", "001": "100", "010": "001", "011": "101",
    "100": "110", "101": "110", "110": "011", "111": "111",
}

# eleven-automaton binary tree, attach points (1-based labels): 2,3 on 1; 4,5 on 2; 6,7 on 3; 8,9 on 1; 10,11 on 9
ELEVEN_ATTACH = (0, 1, 2, 0, 8)

# its cliques, 1-based labels
ELEVEN_CLIQUES_1BASED = [(1, 2, 3), (2, 4, 5), (3, 6, 7), (1, 8, 9), (9, 10, 11)]
# a branching 16-automaton ternary tree, cliques with 1-based labels
BRANCHING_CLIQUES_1BASED = [(9, 10, 5, 8), (11, 6, 13, 12), (5, 1, 7, 6), (2, 3, 4, 1), (14, 15, 16, 3)]
# an addition order producing it: 2,3,4 on 1; 5,6,7 on 1; 8,9,10 on 5; 11,12,13 on 6; 14,15,16 on 3
BRANCHING_ATTACH = (0, 0, 4, 5, 2)


def edges_from_cliques(cliques_1based):
    """Directed edge set (0-based) of a union of cliques, self-loops included."""
    edges = set()
    for c in cliques_1based:
        for u in c:
            for v in c:
                edges.add((u - 1, v - 1))
    return edges


def brute_step(neighbors, offsets, k, x):
    return tuple((sum(x[j] for j in nb) + off) % k for nb, off in zip(neighbors, offsets))


def brute_configs(n, k):
    return list(itertools.product(range(k), repeat=n))


def brute_limit(step_fn, x):
    """(transient, cycle) by plain list search."""
    orbit = [tuple(x)]
    while True:
        y = step_fn(orbit[-1])
        if y in orbit:
            start = orbit.index(y)
            return start, orbit[start:]
        orbit.append(y)


def nx_graph(network):
    G = nx.Graph()
    G.add_nodes_from(range(network.n))
    for v, nb in enumerate(network.neighbors):
        G.add_edges_from((u, v) for u in nb)
    return G


def nx_diameter(network):
    return nx.diameter(nx_graph(network))


def nx_ball(network, u, r):
    return set(nx.single_source_shortest_path_length(nx_graph(network), u, cutoff=r))


def config(s):
    return tuple(int(c) for c in s)


@st.composite
def plans(draw, k=None, max_cliques=6):
    k = draw(st.integers(2, 4)) if k is None else k
    cliques = draw(st.integers(0, max_cliques))
    attach = []
    for t in range(cliques):
        attach.append(draw(st.integers(0, t * k)))
    return CliqueTreePlan(k, tuple(attach))


def criterion2_networks():
    """Parity networks of acceptance criterion 2: line, star and 5 random seeds."""
    nets = []
    for k, sizes in ((2, (3, 5, 7, 9, 11)), (3, (4, 7, 10)), (4, (5, 9))):
        for n in sizes:
            cliques = (n - 1) // k
            shapes = ["line", "star"] + [f"random:{s}" for s in range(1, 6)]
            for shape in shapes:
                nets.append(build_ct(make_plan(k, cliques, shape)))
    return nets


@pytest.fixture
def ct3():
    return build_ct(CliqueTreePlan(2, (0,)))


@pytest.fixture
def ct11():
    return build_ct(CliqueTreePlan(2, ELEVEN_ATTACH))


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
