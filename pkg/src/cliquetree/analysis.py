"""Interaction digraphs, distances, and verification of network behaviour.

Distances and neighbourhoods are measured on the symmetric closure of the
interaction digraph; for clique-tree networks the closure changes nothing.

Exhaustive verification runs every configuration of ``Sigma^n`` through the
batched update ``NetworkSpec.step_many``. Failing configurations are
re-checked one at a time with ``engine.find_limit`` and then minimised.
"""

from __future__ import annotations

import json
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import networkx as nx
import numpy as np

from .core import Configuration, NetworkSpec, add_one, format_configuration, uniform
from .engine import UndeterminedError, find_limit, reference_k_parity
from .rng import SeededDraws

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "CLIQUETREE_BUDGET"

PROPERTIES = ("decides_k_parity", "synchronises", "radius_claim", "plus_one_invariance")


class BudgetExceeded(ValueError):
    pass


def default_budget() -> int:
    return int(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET))


# --------------------------------------------------------------------------
# digraphs

@dataclass(frozen=True)
class InteractionDigraph:
    n: int
    out_edges: tuple[tuple[int, ...], ...]  # out_edges[u] = automata that u influences

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.out_edges[u]]

    def undirected_adjacency(self) -> list[set[int]]:
        adj = [set(vs) for vs in self.out_edges]
        for u, vs in enumerate(self.out_edges):
            for v in vs:
                adj[v].add(u)
        return adj


def _digraph_from_edges(n: int, edges) -> InteractionDigraph:
    out = [set() for _ in range(n)]
    for u, v in edges:
        out[u].add(v)
    return InteractionDigraph(n, tuple(tuple(sorted(s)) for s in out))


def semantic_digraph(network: NetworkSpec) -> InteractionDigraph:
    """Edge ``(u, v)`` iff ``u`` is a neighbour of ``v``.

    Exact for sum rules: every neighbour has coefficient 1, nonzero mod k,
    so changing that neighbour always changes the sum.
    """
    return _digraph_from_edges(
        network.n, ((u, v) for v, nb in enumerate(network.neighbors) for u in nb))


def all_configurations(n: int, k: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows ``start..stop`` of ``Sigma^n`` in lexicographic order (automaton 0 most significant)."""
    if stop is None:
        stop = k**n
    idx = np.arange(start, stop, dtype=np.int64)
    powers = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    dtype = np.uint8 if k <= 256 else np.int64
    return ((idx[:, None] // powers[None, :]) % k).astype(dtype)


def empirical_digraph(network, budget: int | None = None) -> InteractionDigraph:
    """Find every edge by perturbing one automaton over all configurations."""
    n, k = network.n, network.k
    budget = default_budget() if budget is None else budget
    if n * k**n > budget:
        raise BudgetExceeded(f"n * k^n = {n * k**n} exceeds budget {budget}")
    X = all_configurations(n, k)
    base = network.step_many(X)
    edges = []
    for u in range(n):
        changed = np.zeros(n, dtype=bool)
        for delta in range(1, k):
            Xp = X.copy()
            Xp[:, u] = (Xp[:, u].astype(np.int64) + delta) % k
            changed |= (network.step_many(Xp) != base).any(axis=0)
        edges.extend((u, v) for v in np.flatnonzero(changed).tolist())
    return _digraph_from_edges(n, edges)


def neighbourhood(g: InteractionDigraph, u: int, r: int) -> set[int]:
    if not 0 <= u < g.n:
        raise IndexError(f"automaton {u} out of range")
    if r < 0:
        raise ValueError("radius must be non-negative")
    adj = g.undirected_adjacency()
    reached = {u}
    frontier = {u}
    for _ in range(r):
        frontier = {w for v in frontier for w in adj[v]} - reached
        if not frontier:
            break
        reached |= frontier
    return reached


def distance_matrix(g: InteractionDigraph) -> np.ndarray:
    """All-pairs BFS distances on the symmetric closure; -1 marks unreachable pairs."""
    adj = [sorted(s) for s in g.undirected_adjacency()]
    dist = np.full((g.n, g.n), -1, dtype=np.int64)
    for src in range(g.n):
        row = dist[src]
        row[src] = 0
        queue = deque([src])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if row[w] < 0:
                    row[w] = row[v] + 1
                    queue.append(w)
    return dist


def diameter(g: InteractionDigraph) -> int:
    dist = distance_matrix(g)
    if (dist < 0).any():
        raise ValueError("interaction graph is disconnected")
    return int(dist.max())


def predicted_diameter(k: int, n: int) -> int:
    """Diameter of the line-of-cliques network with ``n`` automata."""
    if n <= 1 or (n - 1) % k:
        raise ValueError(f"n={n} is not of the form 1 + C*k with C >= 1 for k={k}")
    return (n - 1) // k


def multiplicity_violations(g: InteractionDigraph, k: int) -> list[tuple[int, int, int, int]]:
    """Check that one update counts every automaton of ``N_{r+1}(i)`` 1 mod k times.

    For each ``i``, ``r <= diameter`` and ``j`` in ``N_{r+1}(i)``, counts the
    ``v`` in ``N_1(i)`` with ``j`` in ``N_r(v)``. Returns ``(i, r, j, count)``
    for every count not congruent to 1.
    """
    dist = distance_matrix(g)
    D = int(dist.max())
    bad = []
    for i in range(g.n):
        ball = np.flatnonzero((dist[i] >= 0) & (dist[i] <= 1))
        for r in range(D + 1):
            counts = ((dist[ball] >= 0) & (dist[ball] <= r)).sum(axis=0)
            targets = np.flatnonzero((dist[i] >= 0) & (dist[i] <= r + 1))
            for j in targets[counts[targets] % k != 1 % k].tolist():
                bad.append((i, r, j, int(counts[j])))
    return bad


def clique_incidence_is_tree(network: NetworkSpec) -> bool:
    """Whether the maximal cliques of the interaction graph hang together as a tree.

    Builds the bipartite graph of maximal cliques versus automata; it is a
    tree exactly when no cycle of cliques exists.
    """
    G = nx.Graph()
    G.add_nodes_from(range(network.n))
    for v, nb in enumerate(network.neighbors):
        G.add_edges_from((u, v) for u in nb if u != v)
    if network.n == 1:
        return True
    cliques = list(nx.find_cliques(G))
    B = nx.Graph()
    B.add_nodes_from(("a", v) for v in range(network.n))
    for c, members in enumerate(cliques):
        B.add_edges_from((("c", c), ("a", v)) for v in members)
    return nx.is_tree(B)


# --------------------------------------------------------------------------
# verification

@dataclass(frozen=True)
class Exhaustive:
    def __str__(self):
        return "exhaustive"


@dataclass(frozen=True)
class Sampled:
    count: int
    seed: int

    def __str__(self):
        return f"sample:{self.count}:{self.seed}"


def parse_mode(text: str) -> Exhaustive | Sampled:
    if text == "exhaustive":
        return Exhaustive()
    parts = text.split(":")
    if len(parts) == 3 and parts[0] == "sample":
        try:
            return Sampled(int(parts[1]), int(parts[2]))
        except ValueError:
            pass
    raise ValueError(f"mode must be 'exhaustive' or 'sample:<count>:<seed>', got {text!r}")


@dataclass
class VerificationReport:
    network_id: str
    property: str
    mode: str
    passed: bool
    configs_checked: int
    max_transient_observed: int
    counterexample: Configuration | None = None
    detail: str | None = None

    def to_text(self, k: int) -> str:
        """JSON with a fixed field order, for golden-file comparisons."""
        fields = {
            "network_id": self.network_id,
            "property": self.property,
            "mode": self.mode,
            "configs_checked": self.configs_checked,
            "max_transient_observed": self.max_transient_observed,
            "pass": self.passed,
            "counterexample": (None if self.counterexample is None
                               else format_configuration(self.counterexample, k)),
            "detail": self.detail,
        }
        return json.dumps(fields, indent=2) + "\n"


def network_id(network: NetworkSpec) -> str:
    from .netfile import network_digest
    return network_digest(network)


def _sample_configurations(n: int, k: int, sampled: Sampled) -> np.ndarray:
    draws = SeededDraws(sampled.seed)
    flat = draws.many_below(k, sampled.count * n)
    return np.array(flat, dtype=np.uint8 if k <= 256 else np.int64).reshape(sampled.count, n)


def _first_hits(network: NetworkSpec, X: np.ndarray, bound: int, target) -> np.ndarray:
    """Steps until each row satisfies ``target(states) -> bool mask``; -1 if never within ``bound``."""
    hits = np.full(X.shape[0], -1, dtype=np.int64)
    cur = X
    for t in range(bound + 1):
        mask = (hits < 0) & target(cur)
        hits[mask] = t
        if (hits >= 0).all() or t == bound:
            break
        cur = network.step_many(cur)
    return hits


def _parity_target(X: np.ndarray, k: int):
    expected = (X.astype(np.int64).sum(axis=1) % k)[:, None]
    return lambda cur: (cur == expected).all(axis=1)


def _uniform_target(cur: np.ndarray) -> np.ndarray:
    return (cur == cur[:, :1]).all(axis=1)


def _chunk_result(network: NetworkSpec, prop: str, bound: int, X: np.ndarray):
    if prop == "decides_k_parity":
        hits = _first_hits(network, X, bound, _parity_target(X, network.k))
    else:
        hits = _first_hits(network, X, bound, _uniform_target)
    failing = np.flatnonzero(hits < 0)
    first_bad = tuple(X[failing[0]].tolist()) if failing.size else None
    max_t = int(hits[hits >= 0].max()) if (hits >= 0).any() else 0
    return X.shape[0], max_t, first_bad


def _exhaustive_chunk(args):
    network, prop, bound, start, stop = args
    return _chunk_result(network, prop, bound, all_configurations(network.n, network.k, start, stop))


def parity_failure(network, x: Sequence[int], bound: int) -> bool:
    """True unless ``x`` reaches the uniform fixed point of its k-parity within ``bound`` steps."""
    try:
        res = find_limit(network, x, bound + network.k)
    except UndeterminedError:
        return True
    s = reference_k_parity(x, network.k)
    return not (res.classification.kind == "uniform_fixed_point"
                and res.classification.symbol == s and res.transient_length <= bound)


def sync_failure(network, x: Sequence[int], bound: int) -> bool:
    """True unless ``x`` enters the increasing uniform cycle within ``bound`` steps."""
    try:
        res = find_limit(network, x, bound + network.k)
    except UndeterminedError:
        return True
    return not (res.classification.kind == "uniform_cycle" and res.transient_length <= bound)


def minimise_counterexample(x: Sequence[int], fails: Callable[[Configuration], bool]) -> Configuration:
    """Greedily lower symbols while the configuration keeps failing."""
    x = list(x)
    improved = True
    while improved:
        improved = False
        for i in range(len(x)):
            while x[i] > 0:
                x[i] -= 1
                if fails(tuple(x)):
                    improved = True
                else:
                    x[i] += 1
                    break
    return tuple(x)


def _verify_convergence(network: NetworkSpec, prop: str, mode, budget, workers) -> VerificationReport:
    n, k = network.n, network.k
    bound = diameter(semantic_digraph(network))
    fails = (parity_failure if prop == "decides_k_parity" else sync_failure)
    nid = network_id(network)

    # the attractor itself must be right before first-hit times mean anything
    for s in range(k):
        nxt = network.step(uniform(s, n))
        want = uniform(s, n) if prop == "decides_k_parity" else uniform((s + 1) % k, n)
        if nxt != want:
            return VerificationReport(
                nid, prop, str(mode), False, 0, 0, uniform(s, n),
                f"uniform configuration {s}^n maps to {format_configuration(nxt, k)}")

    if isinstance(mode, Sampled):
        results = [_chunk_result(network, prop, bound, _sample_configurations(n, k, mode))]
    else:
        budget = default_budget() if budget is None else budget
        total = k**n
        if total > budget:
            raise BudgetExceeded(f"k^n = {total} exceeds exhaustive budget {budget}; use sampling")
        chunk = 1 << 16
        tasks = [(network, prop, bound, a, min(a + chunk, total)) for a in range(0, total, chunk)]
        workers = workers or 1
        if workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
                results = list(pool.map(_exhaustive_chunk, tasks))
        else:
            results = [_exhaustive_chunk(t) for t in tasks]

    checked = sum(r[0] for r in results)
    max_t = max(r[1] for r in results)
    bad = next((r[2] for r in results if r[2] is not None), None)
    if bad is None:
        return VerificationReport(nid, prop, str(mode), True, checked, max_t)
    check = lambda x: fails(network, x, bound)  # noqa: E731
    if not check(bad):
        raise AssertionError(f"batched and single-configuration checks disagree on {bad}")
    cex = minimise_counterexample(bad, check)
    return VerificationReport(nid, prop, str(mode), False, checked, max_t, cex,
                              f"does not converge as required within diameter {bound}")


def verify_decides_k_parity(network: NetworkSpec, mode=Exhaustive(), budget: int | None = None,
                            workers: int | None = None) -> VerificationReport:
    """Every checked configuration must reach (sum mod k)^n within the diameter."""
    return _verify_convergence(network, "decides_k_parity", mode, budget, workers)


def verify_synchronises(network: NetworkSpec, mode=Exhaustive(), budget: int | None = None,
                        workers: int | None = None) -> VerificationReport:
    """Every checked configuration must enter the cycle 0^n -> 1^n -> ... -> (k-1)^n -> 0^n."""
    return _verify_convergence(network, "synchronises", mode, budget, workers)


def verify_radius_claim(network: NetworkSpec, samples: int, seed: int) -> VerificationReport:
    """After ``r`` steps each automaton holds the sum mod k of its radius-``r`` ball."""
    n, k = network.n, network.k
    dist = distance_matrix(semantic_digraph(network))
    D = int(dist.max())
    draws = SeededDraws(seed)
    nid = network_id(network)
    for done in range(samples):
        x = np.array(draws.many_below(k, n), dtype=np.int64)
        r = draws.below(D + 1)
        cur = x[None, :]
        for _ in range(r):
            cur = network.step_many(cur)
        ball = (dist >= 0) & (dist <= r)
        expected = (ball.astype(np.int64) @ x) % k
        wrong = np.flatnonzero(cur[0] != expected)
        if wrong.size:
            i = int(wrong[0])
            return VerificationReport(
                nid, "radius_claim", f"sample:{samples}:{seed}", False, done + 1, 0,
                tuple(x.tolist()),
                f"r={r} automaton {i}: got {int(cur[0, i])}, ball sum {int(expected[i])}")
    return VerificationReport(nid, "radius_claim", f"sample:{samples}:{seed}", True, samples, 0)


def verify_plus_one_invariance(network: NetworkSpec, samples: int, seed: int) -> VerificationReport:
    """``F(x + 1) == F(x) + 1`` on sampled configurations."""
    n, k = network.n, network.k
    X = _sample_configurations(n, k, Sampled(samples, seed))
    lhs = network.step_many(((X.astype(np.int64) + 1) % k).astype(X.dtype))
    rhs = ((network.step_many(X).astype(np.int64) + 1) % k).astype(X.dtype)
    bad = np.flatnonzero((lhs != rhs).any(axis=1))
    nid = network_id(network)
    if bad.size:
        x = tuple(X[bad[0]].tolist())
        cex = minimise_counterexample(x, lambda y: network.step(add_one(y, k)) != add_one(network.step(y), k))
        return VerificationReport(nid, "plus_one_invariance", f"sample:{samples}:{seed}", False,
                                  samples, 0, cex)
    return VerificationReport(nid, "plus_one_invariance", f"sample:{samples}:{seed}", True, samples, 0)
