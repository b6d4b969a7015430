"""Space-time diagrams (binary PGM) and Graphviz text for networks."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .analysis import all_configurations, semantic_digraph
from .builder import CliqueTreePlan
from .core import format_configuration
from .engine import Trajectory

STATE_GRAPH_LIMIT = 4096


def flatten(plan: CliqueTreePlan) -> list[int]:
    """Column order for a space-time diagram.

    Depth-first from automaton 0: each time an automaton is placed, the
    cliques attached to it are expanded immediately, new automata in index
    order. A line of cliques comes out as ``0, 1, ..., n-1``.
    """
    children: list[list[int]] = [[] for _ in range(plan.n)]
    for t, a in enumerate(plan.attach):
        children[a].append(t)
    order = []
    stack = [iter([0])]
    while stack:
        v = next(stack[-1], None)
        if v is None:
            stack.pop()
            continue
        order.append(v)
        stack.append(w for t in children[v] for w in plan.new_automata(t))
    return order


def identity_order(n: int) -> list[int]:
    return list(range(n))


def grey_levels(k: int) -> np.ndarray:
    if k < 2:
        raise ValueError("grey mapping needs k >= 2")
    return (np.arange(k) * 255) // (k - 1)


def render_pgm(traj: Trajectory, order: Sequence[int]) -> bytes:
    """Binary P5 image: one row per state (time downwards), one column per automaton."""
    order = list(order)
    if len(order) != traj.n or sorted(order) != list(range(traj.n)):
        raise ValueError(f"column order is not a permutation of 0..{traj.n - 1}")
    pixels = grey_levels(traj.k).astype(np.uint8)[traj.states[:, order].astype(np.intp)]
    height, width = pixels.shape
    return f"P5\n{width} {height}\n255\n".encode("ascii") + pixels.tobytes()


def read_pgm(data: bytes) -> np.ndarray:
    """Parse a P5 image written by ``render_pgm`` (no comments, maxval 255)."""
    magic, dims, maxval, rest = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise ValueError("not an 8-bit P5 image")
    width, height = (int(v) for v in dims.split())
    if len(rest) != width * height:
        raise ValueError("pixel data length does not match header")
    return np.frombuffer(rest, dtype=np.uint8).reshape(height, width)


def render_dynamics_dot(network, state_graph: bool = False) -> str:
    """Interaction digraph in DOT, optionally followed by the configuration graph."""
    g = semantic_digraph(network)
    lines = ["digraph interaction {"]
    lines += [f"  {v};" for v in range(g.n)]
    lines += [f"  {u} -> {v};" for u, v in sorted(g.edges())]
    lines.append("}")
    if state_graph:
        if network.k ** network.n > STATE_GRAPH_LIMIT:
            raise ValueError(f"k^n = {network.k ** network.n} exceeds state-graph limit {STATE_GRAPH_LIMIT}")
        X = all_configurations(network.n, network.k)
        Y = network.step_many(X)
        lines.append("digraph dynamics {")
        for x, y in zip(X.tolist(), Y.tolist()):
            lines.append(f'  "{format_configuration(x, network.k)}" -> "{format_configuration(y, network.k)}";')
        lines.append("}")
    return "\n".join(lines) + "\n"
