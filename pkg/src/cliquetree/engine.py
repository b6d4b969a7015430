"""Iterating the parallel dynamics and locating limit cycles."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import Configuration, check_configuration, format_configuration, parse_configuration

# cells (states * n) a single trajectory may hold before it is truncated
DEFAULT_MEMORY_BUDGET = 10**8


class UndeterminedError(RuntimeError):
    """No configuration repeated within the allowed number of steps."""


class NotConvergedError(RuntimeError):
    pass


def _dtype_for(k: int):
    if k <= 256:
        return np.uint8
    if k <= 65536:
        return np.uint16
    return np.int64


@dataclass
class Trajectory:
    k: int
    states: np.ndarray  # shape (steps + 1, n)
    truncated: bool = False
    network_id: str | None = None

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @property
    def steps(self) -> int:
        return self.states.shape[0] - 1

    def configurations(self) -> list[Configuration]:
        return [tuple(row) for row in self.states.tolist()]

    def __len__(self) -> int:
        return self.states.shape[0]


@dataclass(frozen=True)
class Classification:
    kind: str  # "uniform_fixed_point" | "uniform_cycle" | "other"
    symbol: int | None = None

    def __str__(self):
        if self.kind == "uniform_fixed_point":
            return f"UniformFixedPoint({self.symbol})"
        return {"uniform_cycle": "UniformCycle", "other": "Other"}[self.kind]


@dataclass
class ConvergenceResult:
    transient_length: int
    cycle: list[Configuration] = field(repr=False)
    classification: Classification

    @property
    def cycle_length(self) -> int:
        return len(self.cycle)


def simulate(network, x0: Sequence[int], steps: int,
             memory_budget: int = DEFAULT_MEMORY_BUDGET) -> Trajectory:
    """Record ``x0, F(x0), ..., F^steps(x0)``.

    If ``(steps + 1) * n`` exceeds ``memory_budget`` the trajectory stops
    early and is flagged ``truncated``.
    """
    check_configuration(network, x0)
    if steps < 0:
        raise ValueError("steps must be non-negative")
    rows = steps + 1
    truncated = False
    if rows * network.n > memory_budget:
        rows = max(1, memory_budget // network.n)
        truncated = True
    states = np.empty((rows, network.n), dtype=_dtype_for(network.k))
    states[0] = x0
    x = states[:1]
    for t in range(1, rows):
        x = network.step_many(x)
        states[t] = x[0]
    return Trajectory(network.k, states, truncated)


def classify_cycle(cycle: Sequence[Configuration], k: int) -> Classification:
    if all(len(set(c)) == 1 for c in cycle):
        if len(cycle) == 1:
            return Classification("uniform_fixed_point", cycle[0][0])
        symbols = [c[0] for c in cycle]
        if len(cycle) == k and all((symbols[i] + 1) % k == symbols[(i + 1) % k] for i in range(k)):
            return Classification("uniform_cycle")
    return Classification("other")


def find_limit(network, x0: Sequence[int], max_steps: int) -> ConvergenceResult:
    """Iterate until a configuration repeats and report the transient and cycle.

    Every visited configuration is kept in a dict keyed by its exact value,
    so the first revisit identifies the cycle entry point directly. The
    returned cycle starts at the first cycle state reached from ``x0``.
    """
    check_configuration(network, x0)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    x = tuple(int(s) for s in x0)
    seen: dict[Configuration, int] = {x: 0}
    history = [x]
    for t in range(1, max_steps + 1):
        x = network.step(x)
        if x in seen:
            start = seen[x]
            cycle = history[start:]
            return ConvergenceResult(start, cycle, classify_cycle(cycle, network.k))
        seen[x] = t
        history.append(x)
    raise UndeterminedError(f"no repeat within {max_steps} steps")


def reference_k_parity(x: Sequence[int], k: int) -> int:
    """Sum of the symbols modulo ``k``."""
    if len(x) == 0:
        raise ValueError("empty configuration")
    return sum(int(s) for s in x) % k


def convergence_time(network, x0: Sequence[int], bound: int) -> int:
    """Number of steps until ``x0`` enters its limit cycle, at most ``bound``.

    Cycles longer than ``k`` (impossible for clique-tree networks) are
    reported as non-convergence.
    """
    try:
        result = find_limit(network, x0, bound + network.k)
    except UndeterminedError:
        raise NotConvergedError(f"no limit cycle reached within {bound} steps") from None
    if result.transient_length > bound:
        raise NotConvergedError(
            f"transient {result.transient_length} exceeds bound {bound}")
    return result.transient_length


def write_trajectory(traj: Trajectory) -> str:
    lines = [f"{traj.k} {traj.n} {traj.steps}"]
    lines += [format_configuration(row, traj.k) for row in traj.states.tolist()]
    return "\n".join(lines) + "\n"


def read_trajectory(text: str) -> Trajectory:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty trajectory file")
    try:
        k, n, steps = (int(v) for v in lines[0].split())
    except ValueError:
        raise ValueError(f"bad trajectory header: {lines[0]!r}") from None
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != steps + 1:
        raise ValueError(f"header announces {steps + 1} states, file has {len(body)}")
    rows = [parse_configuration(ln, k) for ln in body]
    if any(len(r) != n for r in rows):
        raise ValueError("trajectory row length differs from header n")
    return Trajectory(k, np.array(rows, dtype=_dtype_for(k)).reshape(steps + 1, n))
