"""Network, configuration and rule representations plus the parallel update.

Automata are indexed from 0. Every local function built by this package is a
sum modulo ``k`` over a neighbour set plus a constant offset::

    f_i(x) = (sum(x[j] for j in neighbors(i)) + offset_i) mod k

Configurations are plain tuples of ints so they hash and compare cheaply.
Batched evaluation over many configurations at once works on 2-D numpy
arrays (one configuration per row).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

import numpy as np

Configuration = tuple[int, ...]

# largest network stepped in batches through a dense influence matrix
DENSE_LIMIT = 2048


@dataclass(frozen=True)
class LocalRule:
    neighbors: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        nbrs = tuple(int(j) for j in self.neighbors)
        if list(nbrs) != sorted(set(nbrs)):
            raise ValueError(f"neighbour list must be sorted and distinct: {nbrs}")
        object.__setattr__(self, "neighbors", nbrs)
        object.__setattr__(self, "offset", int(self.offset))


@dataclass(frozen=True)
class NetworkSpec:
    """A sum-mod-k automata network.

    ``plan`` is optional provenance (a ``CliqueTreePlan``) recording how the
    topology was built; it does not take part in evaluation.
    """

    k: int
    rules: tuple[LocalRule, ...]
    plan: Any = field(default=None, compare=False)

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.k}")
        rules = tuple(self.rules)
        if not rules:
            raise ValueError("a network needs at least one automaton")
        object.__setattr__(self, "rules", rules)
        n = len(rules)
        for i, rule in enumerate(rules):
            if rule.neighbors and not 0 <= rule.neighbors[-1] < n:
                raise ValueError(f"rule {i} references automaton outside 0..{n - 1}")
            if rule.neighbors and rule.neighbors[0] < 0:
                raise ValueError(f"rule {i} has a negative neighbour index")
            if not 0 <= rule.offset < self.k:
                raise ValueError(f"rule {i} offset {rule.offset} not in alphabet")

    @classmethod
    def from_lists(cls, k: int, neighbors: Sequence[Iterable[int]],
                   offsets: Sequence[int] | None = None, plan=None) -> "NetworkSpec":
        if offsets is None:
            offsets = [0] * len(neighbors)
        if len(offsets) != len(neighbors):
            raise ValueError("offsets and neighbors differ in length")
        rules = tuple(LocalRule(tuple(sorted(nb)), off) for nb, off in zip(neighbors, offsets))
        return cls(k, rules, plan)

    @property
    def n(self) -> int:
        return len(self.rules)

    @property
    def neighbors(self) -> list[tuple[int, ...]]:
        return [r.neighbors for r in self.rules]

    @property
    def offsets(self) -> list[int]:
        return [r.offset for r in self.rules]

    def with_offsets(self, offsets: Sequence[int]) -> "NetworkSpec":
        return NetworkSpec.from_lists(self.k, self.neighbors, offsets, self.plan)

    def eval_local(self, i: int, x: Sequence[int]) -> int:
        rule = self.rules[i]
        return (sum(x[j] for j in rule.neighbors) + rule.offset) % self.k

    def step(self, x: Sequence[int]) -> Configuration:
        k = self.k
        return tuple((sum(x[j] for j in r.neighbors) + r.offset) % k for r in self.rules)

    @cached_property
    def _gather(self):
        flat = np.fromiter((j for r in self.rules for j in r.neighbors), dtype=np.intp)
        degrees = np.array([len(r.neighbors) for r in self.rules], dtype=np.intp)
        starts = np.concatenate(([0], np.cumsum(degrees)[:-1])).astype(np.intp)
        offsets = np.array(self.offsets, dtype=np.int64)
        return flat, starts, degrees, offsets

    @cached_property
    def _influence_matrix(self) -> np.ndarray:
        # A[j, i] = 1 when j is a neighbour of i; float so the product runs on BLAS
        A = np.zeros((self.n, self.n), dtype=np.float64)
        for i, r in enumerate(self.rules):
            A[list(r.neighbors), i] = 1.0
        return A

    def step_many(self, X: np.ndarray) -> np.ndarray:
        """Apply one parallel step to every row of ``X`` (shape ``(b, n)``)."""
        X = np.asarray(X)
        if X.ndim != 2 or X.shape[1] != self.n:
            raise ValueError(f"expected array of shape (b, {self.n}), got {X.shape}")
        flat, starts, degrees, offsets = self._gather
        if self.n <= DENSE_LIMIT:
            # neighbour sums are far below 2**53, so the float product is exact
            sums = (X.astype(np.float64) @ self._influence_matrix).astype(np.int64)
        else:
            # trailing zero column keeps every start index valid; reduceat returns
            # a single element for empty segments, so those are masked afterwards
            gathered = np.zeros((X.shape[0], flat.size + 1), dtype=np.int64)
            gathered[:, :-1] = X[:, flat]
            sums = np.add.reduceat(gathered, starts, axis=1)
            sums[:, degrees == 0] = 0
        return ((sums + offsets) % self.k).astype(X.dtype)


@dataclass(frozen=True)
class TableNetwork:
    """Arbitrary local functions given as truth tables over each neighbourhood.

    ``tables[i]`` lists the output of automaton ``i`` for every assignment of
    its neighbours, enumerated in base ``k`` with the first neighbour as the
    most significant digit. Only used for non-linear test fixtures.
    """

    k: int
    neighbor_lists: tuple[tuple[int, ...], ...]
    tables: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for i, (nb, tab) in enumerate(zip(self.neighbor_lists, self.tables)):
            if len(tab) != self.k ** len(nb):
                raise ValueError(f"table {i} has {len(tab)} entries, expected {self.k ** len(nb)}")

    @property
    def n(self) -> int:
        return len(self.neighbor_lists)

    def eval_local(self, i: int, x: Sequence[int]) -> int:
        idx = 0
        for j in self.neighbor_lists[i]:
            idx = idx * self.k + x[j]
        return self.tables[i][idx]

    def step(self, x: Sequence[int]) -> Configuration:
        return tuple(self.eval_local(i, x) for i in range(self.n))

    def step_many(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.step(tuple(row)) for row in np.asarray(X).tolist()], dtype=X.dtype)


def three_node_example() -> TableNetwork:
    """Boolean network with f0 = (not x1) or x2, f1 = x0, f2 = x1."""
    return TableNetwork(
        k=2,
        neighbor_lists=((1, 2), (0,), (1,)),
        # (x1, x2) = 00, 01, 10, 11
        tables=((1, 1, 0, 1), (0, 1), (0, 1)),
    )


def check_configuration(network, x: Sequence[int]) -> None:
    if len(x) != network.n:
        raise ValueError(f"configuration has length {len(x)}, network has {network.n} automata")
    for s in x:
        if not 0 <= s < network.k:
            raise ValueError(f"symbol {s} out of range for k={network.k}")


def eval_local(network, rule_index: int, x: Sequence[int]) -> int:
    if not 0 <= rule_index < network.n:
        raise IndexError(f"automaton {rule_index} out of range 0..{network.n - 1}")
    check_configuration(network, x)
    return network.eval_local(rule_index, x)


def step(network, x: Sequence[int]) -> Configuration:
    check_configuration(network, x)
    return network.step(x)


def uniform(s: int, n: int) -> Configuration:
    return (s,) * n


def add_one(x: Sequence[int], k: int) -> Configuration:
    return tuple((s + 1) % k for s in x)


def parse_configuration(text: str, k: int) -> Configuration:
    """Parse ``"0110"`` (k <= 10) or ``"2,0,11"`` (any k) into a configuration."""
    text = text.strip()
    if not text:
        raise ValueError("empty configuration")
    if "," in text or k > 10:
        parts = [p.strip() for p in text.split(",")]
        try:
            x = tuple(int(p) for p in parts)
        except ValueError:
            raise ValueError(f"not a comma-separated integer list: {text!r}") from None
    else:
        if not text.isdigit():
            raise ValueError(f"not a digit string: {text!r}")
        x = tuple(int(c) for c in text)
    for s in x:
        if not 0 <= s < k:
            raise ValueError(f"symbol {s} out of range for k={k}")
    return x


def format_configuration(x: Iterable[int], k: int) -> str:
    if k <= 10:
        return "".join(str(int(s)) for s in x)
    return ",".join(str(int(s)) for s in x)


def ct_invariant_violations(network: NetworkSpec) -> list[str]:
    """Return human-readable violations of the clique-tree structural invariants.

    Checked: self-loops, symmetric influence, degree = 1 (mod k) and
    n = 1 (mod k). An empty list means the network passes.
    """
    k, n = network.k, network.n
    nbr_sets = [set(nb) for nb in network.neighbors]
    problems = []
    for i, nb in enumerate(nbr_sets):
        if i not in nb:
            problems.append(f"automaton {i} is not auto-regulated")
        if len(nb) % k != 1 % k:
            problems.append(f"automaton {i} has in-degree {len(nb)} != 1 mod {k}")
        for j in sorted(nb):
            if i not in nbr_sets[j]:
                problems.append(f"asymmetric influence: {j} -> {i} but not {i} -> {j}")
    if n % k != 1 % k:
        problems.append(f"n={n} is not 1 mod {k}")
    return problems
